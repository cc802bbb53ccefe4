"""Hull-kernel, dual hull-kernel, and patch topologies on families of prime filters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import fintop, rlcore
from .report import fmt_set

Subset = frozenset[str]

FLAVORS = ("hull", "dual", "patch")


@dataclass
class SpectrumConfig:
    parent: rlcore.ResiduatedLattice
    pi: tuple[Subset, ...]
    flavor: str

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        flags = rlcore.classify_filters(self.parent, rlcore.all_filters(self.parent).filters)
        for p in self.pi:
            if p not in flags or not flags[p].prime:
                raise ValueError(f"{fmt_set(p)} is not a prime filter")
        self.pi = tuple(sorted(set(self.pi), key=lambda f: (len(f), sorted(f))))


def hull(cfg: SpectrumConfig, xs: Iterable[str]) -> tuple[Subset, ...]:
    """h(X) = members of pi containing X."""
    x = frozenset(xs)
    return tuple(p for p in cfg.pi if x <= p)


def dual(cfg: SpectrumConfig, xs: Iterable[str]) -> tuple[Subset, ...]:
    h = set(hull(cfg, xs))
    return tuple(p for p in cfg.pi if p not in h)


def kernel(cfg: SpectrumConfig, members: Iterable[Subset]) -> Subset:
    """Intersection of the chosen filters; the empty family meets to the whole carrier."""
    members = list(members)
    out = set(cfg.parent.carrier)
    for m in members:
        out &= m
    return frozenset(out)


def default_names(pi: Iterable[Subset]) -> dict[Subset, str]:
    ordered = sorted(set(pi), key=lambda f: (len(f), sorted(f)))
    return {f: fmt_set(f) for f in ordered}


def spectral_space(cfg: SpectrumConfig, names: Mapping[Subset, str] | None = None) -> fintop.FiniteSpace:
    """The chosen topology on pi, with filters rendered through `names`."""
    nm = dict(names) if names else default_names(cfg.pi)
    points = [nm[p] for p in cfg.pi]

    def named(fam: Iterable[tuple[Subset, ...]]) -> list[frozenset[str]]:
        return [frozenset(nm[p] for p in f) for f in fam]

    hulls = [hull(cfg, [x]) for x in cfg.parent.carrier]
    if cfg.flavor == "hull":
        closed = _close_family(points, named(hulls))
        opens = [frozenset(points) - c for c in closed]
        return fintop.space_from_opens(points, opens)
    if cfg.flavor == "dual":
        return fintop.topology_from_subbasis(points, named(hulls))
    hull_opens = spectral_space(SpectrumConfig(cfg.parent, cfg.pi, "hull"), names).opens
    dual_opens = spectral_space(SpectrumConfig(cfg.parent, cfg.pi, "dual"), names).opens
    return fintop.topology_from_subbasis(points, list(hull_opens) + list(dual_opens))


def _close_family(points: Iterable[str], fam: list[frozenset[str]]) -> set[frozenset[str]]:
    """Close a closed-basis under finite union and intersection, adding the bounds."""
    out = set(fam) | {frozenset(), frozenset(points)}
    changed = True
    while changed:
        changed = False
        items = sorted(out, key=lambda s: (len(s), sorted(s)))
        for a in items:
            for b in items:
                for c in (a | b, a & b):
                    if c not in out:
                        out.add(c)
                        changed = True
    return out
