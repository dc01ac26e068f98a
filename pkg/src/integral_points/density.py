"""Zariski-density witnesses: no hypersurface of low degree contains the points."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

from .arith import ProjPoint, normalize
from .errors import DuplicatePoints, InputError
from .linalg import bareiss_rank


@dataclass(frozen=True)
class DegreeRecord:
    k: int
    monomial_count: int
    rank: int

    @property
    def full(self) -> bool:
        return self.rank == self.monomial_count


@dataclass(frozen=True)
class DensityReport:
    n_points: int
    ambient_dim: int
    records: tuple[DegreeRecord, ...] = field(default_factory=tuple)

    @property
    def max_full_degree(self) -> int:
        best = 0
        for r in self.records:
            if not r.full:
                break
            best = r.k
        return best

    def full_at(self, k: int) -> bool:
        return any(r.k == k and r.full for r in self.records)

    def to_json(self) -> dict:
        return {
            "n_points": self.n_points,
            "ambient_dim": self.ambient_dim,
            "degrees": [{"k": r.k, "monomial_count": r.monomial_count, "rank": r.rank,
                         "full": r.full} for r in self.records],
            "max_full_degree": self.max_full_degree,
        }


def monomials(nvars: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def evaluation_matrix(points, k: int) -> list[list[int]]:
    n = len(points[0])
    monos = monomials(n, k)
    rows = []
    for P in points:
        row = []
        for e in monos:
            v = 1
            for x, m in zip(P, e):
                if m:
                    v *= x ** m
            row.append(v)
        rows.append(row)
    return rows


def _rank_at(args) -> int:
    coords, k = args
    return bareiss_rank(evaluation_matrix(coords, k))


def density_witness(points, kmax: int = 4, workers: int = 1) -> DensityReport:
    """Rank of the degree-k evaluation matrix for k = 1..kmax; degrees run in
    separate processes when ``workers`` > 1."""
    if kmax < 1:
        raise InputError("kmax must be at least 1")
    pts = [P if isinstance(P, ProjPoint) else normalize(P) for P in points]
    if not pts:
        raise InputError("no points given")
    if len(set(pts)) != len(pts):
        raise DuplicatePoints("points must be pairwise distinct")
    n = pts[0].ambient_dim
    if any(P.ambient_dim != n for P in pts):
        raise InputError("points live in different spaces")
    coords = [P.coords for P in pts]
    jobs = [(coords, k) for k in range(1, kmax + 1)]
    if workers > 1 and kmax > 1:
        with ProcessPoolExecutor(max_workers=min(workers, kmax)) as pool:
            ranks = list(pool.map(_rank_at, jobs))
    else:
        ranks = [_rank_at(j) for j in jobs]
    records = tuple(DegreeRecord(k, comb(k + n, n), r) for (_, k), r in zip(jobs, ranks))
    return DensityReport(len(pts), n, records)
