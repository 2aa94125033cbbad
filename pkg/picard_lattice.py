# picard_lattice.py
"""
Picard lattice, intersection form, canonical class and Riemann–Roch arithmetic
for the Hirzebruch surfaces F_n (n >= 0) and the projective plane P².

- F_n classes are written in the basis (σ, f): D = aσ + bf with
    σ² = -n,  σ·f = 1,  f² = 0
- P² classes are written as multiples of the hyperplane class H, H² = 1.
- Both surfaces are rational, so χ(O_S) = 1.

All values are immutable and all integers are Python ints (arbitrary precision).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

logger = logging.getLogger("picard_lattice")
logger.setLevel(logging.INFO)

CHI_STRUCTURE_SHEAF = 1


class SurfaceMismatch(ValueError):
    """A divisor class was used on a surface whose lattice it does not belong to."""


# --------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------


class SurfaceKind(str, Enum):
    HIRZEBRUCH = "hirzebruch"
    PROJECTIVE_PLANE = "projective_plane"


@dataclass(frozen=True)
class Surface:
    kind: SurfaceKind
    n: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Hirzebruch index must be nonnegative, got {self.n}")
        if self.kind is SurfaceKind.PROJECTIVE_PLANE and self.n != 0:
            raise ValueError("P² carries no Hirzebruch index")

    @classmethod
    def hirzebruch(cls, n: int) -> "Surface":
        return cls(SurfaceKind.HIRZEBRUCH, n)

    @classmethod
    def projective_plane(cls) -> "Surface":
        return cls(SurfaceKind.PROJECTIVE_PLANE, 0)

    @property
    def is_hirzebruch(self) -> bool:
        return self.kind is SurfaceKind.HIRZEBRUCH

    @property
    def picard_rank(self) -> int:
        return 2 if self.is_hirzebruch else 1

    @property
    def label(self) -> str:
        return f"F{self.n}" if self.is_hirzebruch else "P2"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, order=True)
class DivisorClass:
    """Element of Pic(S): (a, b) = aσ + bf on F_n, (d,) = dH on P²."""

    coords: Tuple[int, ...]

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_rank(self, other)
        return DivisorClass(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _same_rank(self, other)
        return DivisorClass(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-x for x in self.coords))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def to_list(self) -> list:
        return list(self.coords)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.coords)


@dataclass(frozen=True)
class ChernData:
    c1: DivisorClass
    c2: int

    def to_dict(self) -> dict:
        return {"c1": self.c1.to_list(), "c2": self.c2}


def _same_rank(d1: DivisorClass, d2: DivisorClass) -> None:
    if len(d1.coords) != len(d2.coords):
        raise SurfaceMismatch(f"classes {d1.coords} and {d2.coords} live in different lattices")


def check_classes(surface: Surface, *classes: DivisorClass) -> None:
    for d in classes:
        if len(d.coords) != surface.picard_rank:
            raise SurfaceMismatch(
                f"class {d.coords} does not belong to Pic({surface.label}) of rank {surface.picard_rank}"
            )


# --------------------------------------------------------------------
# Constructors / parsing
# --------------------------------------------------------------------


def zero_class(surface: Surface) -> DivisorClass:
    return DivisorClass((0,) * surface.picard_rank)


def generators(surface: Surface) -> Tuple[DivisorClass, ...]:
    if surface.is_hirzebruch:
        return (DivisorClass((1, 0)), DivisorClass((0, 1)))
    return (DivisorClass((1,)),)


def sigma(surface: Surface) -> DivisorClass:
    if not surface.is_hirzebruch:
        raise SurfaceMismatch("σ only exists on a Hirzebruch surface")
    return DivisorClass((1, 0))


def fiber(surface: Surface) -> DivisorClass:
    if not surface.is_hirzebruch:
        raise SurfaceMismatch("f only exists on a Hirzebruch surface")
    return DivisorClass((0, 1))


def hyperplane(surface: Surface) -> DivisorClass:
    if surface.is_hirzebruch:
        raise SurfaceMismatch("H only exists on P²")
    return DivisorClass((1,))


_SURFACE_RE = re.compile(r"^\s*(?:F(\d+)|P2)\s*$", re.IGNORECASE)


def parse_surface(text: str) -> Surface:
    """`F<n>` or `P2`."""
    m = _SURFACE_RE.match(text or "")
    if not m:
        raise ValueError(f"Unknown surface {text!r}; expected F<n> or P2")
    if m.group(1) is not None:
        return Surface.hirzebruch(int(m.group(1)))
    return Surface.projective_plane()


def parse_divisor(surface: Surface, text: str) -> DivisorClass:
    """Comma-separated coordinates in the (σ, f) basis, or a single degree on P²."""
    parts = [p.strip() for p in (text or "").split(",") if p.strip()]
    try:
        coords = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"Divisor {text!r} is not a comma list of integers")
    d = DivisorClass(coords)
    check_classes(surface, d)
    return d


# --------------------------------------------------------------------
# Intersection theory
# --------------------------------------------------------------------


def intersect(surface: Surface, d1: DivisorClass, d2: DivisorClass) -> int:
    check_classes(surface, d1, d2)
    if surface.is_hirzebruch:
        a1, b1 = d1.coords
        a2, b2 = d2.coords
        return -surface.n * a1 * a2 + a1 * b2 + b1 * a2
    return d1.coords[0] * d2.coords[0]


def canonical_class(surface: Surface) -> DivisorClass:
    if surface.is_hirzebruch:
        return DivisorClass((-2, -(surface.n + 2)))
    return DivisorClass((-3,))


def degree(surface: Surface, d: DivisorClass) -> int:
    """Degree against a fixed ample class: H on P², σ + (n+1)f on F_n."""
    if surface.is_hirzebruch:
        return intersect(surface, d, DivisorClass((1, surface.n + 1)))
    return intersect(surface, d, DivisorClass((1,)))


def chi_line(surface: Surface, d: DivisorClass) -> int:
    """Riemann–Roch: χ(O(D)) = χ(O_S) + D·(D − K)/2."""
    k = canonical_class(surface)
    twice = intersect(surface, d, d - k)
    assert twice % 2 == 0, f"D·(D−K) odd for {d} on {surface}"
    return CHI_STRUCTURE_SHEAF + twice // 2


def chi_rank2(surface: Surface, ch: ChernData) -> int:
    """χ(E) = 2χ(O_S) + c1·(c1 − K)/2 − c2 for a rank-2 bundle."""
    check_classes(surface, ch.c1)
    k = canonical_class(surface)
    twice = intersect(surface, ch.c1, ch.c1 - k)
    assert twice % 2 == 0, f"c1·(c1−K) odd for {ch} on {surface}"
    return 2 * CHI_STRUCTURE_SHEAF + twice // 2 - ch.c2


def twist_chern(surface: Surface, ch: ChernData, m: DivisorClass) -> ChernData:
    """Chern data of E ⊗ O(M): (c1 + 2M, c2 + c1·M + M²)."""
    return ChernData(
        c1=ch.c1 + m * 2,
        c2=ch.c2 + intersect(surface, ch.c1, m) + intersect(surface, m, m),
    )


def split_chern(surface: Surface, l1: DivisorClass, l2: DivisorClass) -> ChernData:
    return ChernData(c1=l1 + l2, c2=intersect(surface, l1, l2))
