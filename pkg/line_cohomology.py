# line_cohomology.py
"""
Closed-form h⁰, h¹, h² of every line bundle on F_n and P².

- F_n: π_*O(aσ + bf) = ⊕_{k=0..a} O_{P¹}(b − kn) for a >= 0, so
    h⁰(aσ + bf) = Σ_{k=0..a} max(0, b − kn + 1)
  (calibrated by h⁰(O(σ)) = 1: the negative section is rigid).
- P²: h⁰(dH) = C(d+2, 2) for d >= 0.
- h² comes from Serre duality h²(D) = h⁰(K − D); h¹ from Riemann–Roch.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from math import comb
from typing import NamedTuple

from picard_lattice import DivisorClass, Surface, canonical_class, chi_line

logger = logging.getLogger("line_cohomology")
logger.setLevel(logging.INFO)


class CohomologyTriple(NamedTuple):
    h0: int
    h1: int
    h2: int

    def to_list(self) -> list:
        return [self.h0, self.h1, self.h2]


def add_triples(t1: CohomologyTriple, t2: CohomologyTriple) -> CohomologyTriple:
    return CohomologyTriple(t1.h0 + t2.h0, t1.h1 + t2.h1, t1.h2 + t2.h2)


def euler(t: CohomologyTriple) -> int:
    return t.h0 - t.h1 + t.h2


def _h0(surface: Surface, d: DivisorClass) -> int:
    if surface.is_hirzebruch:
        a, b = d.coords
        if a < 0:
            return 0
        return sum(max(0, b - k * surface.n + 1) for k in range(a + 1))
    (deg,) = d.coords
    return comb(deg + 2, 2) if deg >= 0 else 0


def serre_dual(surface: Surface, d: DivisorClass) -> DivisorClass:
    return canonical_class(surface) - d


@lru_cache(maxsize=None)
def line_h(surface: Surface, d: DivisorClass) -> CohomologyTriple:
    h0 = _h0(surface, d)
    h2 = _h0(surface, serre_dual(surface, d))
    h1 = h0 + h2 - chi_line(surface, d)
    assert h1 >= 0, f"negative h¹ for {d} on {surface}: conventions are off"
    if not surface.is_hirzebruch:
        assert h1 == 0, f"P² line bundles have no h¹, got {h1} for {d}"
    return CohomologyTriple(h0, h1, h2)
