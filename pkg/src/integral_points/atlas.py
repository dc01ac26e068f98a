"""Rank-one Fano threefolds of index 1 and 2: Hilbert schemes of lines and conics."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import InputError, NotClassified

ATLAS_SCHEMA = "integral-points/atlas@1"
VERDICTS = ("Degenerate", "Dense", "Unknown", "OutOfScope")
# Hilbert schemes whose rational points may be dense
DENSE_SHAPES = ("P^2", "P^4", "abelian surface")


@dataclass(frozen=True)
class HilbertScheme:
    description: str
    invariants: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FanoRecord:
    rho: int
    iota: int
    invariant: tuple[str, int]      # ("d", 3) or ("g", 7)
    description: str
    hilbert_lines: HilbertScheme
    hilbert_conics: HilbertScheme
    lines_verdict: str
    conics_verdict: str
    notes: str = ""
    open_flags: tuple[str, ...] = ()

    def __post_init__(self):
        for v in (self.lines_verdict, self.conics_verdict):
            if v not in VERDICTS:
                raise InputError(f"unknown verdict {v!r}")

    @property
    def key(self) -> tuple[int, int, str, int]:
        return (self.rho, self.iota) + self.invariant

    def to_json(self) -> dict:
        out = asdict(self)
        out["invariant"] = {self.invariant[0]: self.invariant[1]}
        out["open_flags"] = list(self.open_flags)
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "FanoRecord":
        (name, value), = doc["invariant"].items()
        return cls(doc["rho"], doc["iota"], (name, int(value)), doc["description"],
                   HilbertScheme(**doc["hilbert_lines"]), HilbertScheme(**doc["hilbert_conics"]),
                   doc["lines_verdict"], doc["conics_verdict"], doc.get("notes", ""),
                   tuple(doc.get("open_flags", ())))


@lru_cache(maxsize=1)
def records() -> tuple[FanoRecord, ...]:
    doc = json.loads(resources.files("integral_points").joinpath("data/atlas.json").read_text())
    if doc.get("schema") != ATLAS_SCHEMA:
        raise InputError("atlas data has the wrong schema")
    return tuple(FanoRecord.from_json(r) for r in doc["records"])


def _parse_invariant(invariant) -> tuple[str, int]:
    if isinstance(invariant, tuple):
        return invariant
    if isinstance(invariant, str) and "=" in invariant:
        name, value = invariant.split("=", 1)
        return name.strip(), int(value)
    raise InputError(f"invariant must look like d=3 or g=7, got {invariant!r}")


def lookup(rho: int, iota: int, invariant) -> FanoRecord:
    """The record for (rho, iota, d=.. or g=..)."""
    name, value = _parse_invariant(invariant)
    expected = {2: "d", 1: "g"}.get(iota)
    if rho != 1 or expected is None or name != expected:
        raise NotClassified(f"no classified family for rho={rho}, iota={iota}, {name}={value}")
    for r in records():
        if r.key == (rho, iota, name, value):
            return r
    raise NotClassified(f"no family with rho={rho}, iota={iota}, {name}={value}")
