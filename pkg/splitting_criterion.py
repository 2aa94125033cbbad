# splitting_criterion.py
"""
Decide whether a rank-2 bundle splits, from its cohomology dimensions alone.

Pipeline:
1. recover_chern    read c1, c2 off Euler characteristics at a few twists
2. normalize        twist by M so that c2 = 0 and c1 lands in a split-test shape
3. lemma2_decide    four h⁰ conditions that force E ≅ O ⊕ O(c1)
4. theorem1_decide  compare against a given split bundle F on a finite
                    certificate set of twists, then run the split test
   theorem5_decide  the same on P² (Pic ≅ Z)

Split-test shapes for c1 (after normalization):
- F_n: c1 = -aσ - bf with a, b >= 0, or c1 = aσ - bf with a, b > 0
- P²:  c1 = dH with d <= 0
In both cases c2 must be 0.

Every verdict is either Split, NotSplitWithin (with a certificate of twists
that a caller can re-check against the oracle) or Inconclusive.
"""

from __future__ import annotations

import logging
import os
import threading
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from dotenv import load_dotenv

from bundles import Bundle2, CohomologyTable, SplitBundle, Window, bundle_h, bundle_label, chern
from line_cohomology import CohomologyTriple, euler, line_h
from logging_utils import log_event
from picard_lattice import (
    ChernData,
    DivisorClass,
    Surface,
    canonical_class,
    check_classes,
    chi_rank2,
    degree,
    generators,
    intersect,
    twist_chern,
    zero_class,
)

load_dotenv()

logger = logging.getLogger("splitting_criterion")
logger.setLevel(logging.INFO)

NORMALIZE_BOX_PADDING = int(os.environ.get("NORMALIZE_BOX_PADDING", "4"))

# Moduli used to prove that c2 + c1·M + M² = 0 has no integer solution at all.
OBSTRUCTION_MODULI = (2, 3, 4, 5, 8)

UNBOUNDED_NORMALIZATIONS = "unbounded_normalizations"


class InconsistentOracle(ValueError):
    """Euler characteristics reported by an oracle do not come from any Chern data."""


class PreconditionViolated(ValueError):
    """An operation was called on data outside its domain."""


class NotNormalizable(ValueError):
    """No twist brings the Chern data to a split-test shape with c2 = 0."""

    PROVABLY_NONE = "provably_none"
    BOX_EXHAUSTED = "box_exhausted"

    def __init__(self, ch: ChernData, reason: str, box: int) -> None:
        super().__init__(f"Chern data {ch.to_dict()} not normalizable ({reason}, box {box})")
        self.chern = ch
        self.reason = reason
        self.box = box


# --------------------------------------------------------------------
# Verdicts
# --------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateEntry:
    """h^i(E ⊗ O(twist)) was expected to be (== or >=) `expected`; the oracle said `observed`."""

    twist: DivisorClass
    i: int
    relation: str
    expected: int
    observed: int

    def holds(self) -> bool:
        if self.relation == "==":
            return self.observed == self.expected
        return self.observed >= self.expected

    def shifted(self, m: DivisorClass) -> "CertificateEntry":
        return CertificateEntry(self.twist + m, self.i, self.relation, self.expected, self.observed)

    def to_dict(self) -> dict:
        return {
            "twist": self.twist.to_list(),
            "i": self.i,
            "relation": self.relation,
            "expected": self.expected,
            "observed": self.observed,
        }


@dataclass(frozen=True)
class Split:
    l1: DivisorClass
    l2: DivisorClass
    normalization_twist: Optional[DivisorClass] = None


@dataclass(frozen=True)
class NotSplitWithin:
    certificate: Tuple[CertificateEntry, ...]
    normalization_twist: Optional[DivisorClass] = None


@dataclass(frozen=True)
class Inconclusive:
    reason: str


SplitVerdict = Union[Split, NotSplitWithin, Inconclusive]


def verdict_to_json(verdict: SplitVerdict) -> dict:
    if isinstance(verdict, Split):
        payload = {"verdict": "split", "summands": [verdict.l1.to_list(), verdict.l2.to_list()]}
        if verdict.normalization_twist is not None:
            payload["normalization_twist"] = verdict.normalization_twist.to_list()
        return payload
    if isinstance(verdict, NotSplitWithin):
        payload = {"verdict": "not_split", "certificate": [c.to_dict() for c in verdict.certificate]}
        if verdict.normalization_twist is not None:
            payload["normalization_twist"] = verdict.normalization_twist.to_list()
        return payload
    return {"verdict": "inconclusive", "reason": verdict.reason}


# --------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------


class CohomologyOracle:
    """
    Memoized twist -> (h⁰, h¹, h²) query. Backed by a live engine or a table;
    the criterion never looks at anything else.
    """

    def __init__(self, surface: Surface, query: Callable[[DivisorClass], CohomologyTriple], label: str = "") -> None:
        self.surface = surface
        self.label = label
        self._query = query
        self._cache: Dict[DivisorClass, CohomologyTriple] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_bundle(cls, e: Bundle2, oracle: str = "closed") -> "CohomologyOracle":
        return cls(e.surface, lambda t: bundle_h(e, t, oracle), bundle_label(e))

    @classmethod
    def from_table(cls, table: CohomologyTable) -> "CohomologyOracle":
        def query(t: DivisorClass) -> CohomologyTriple:
            if t not in table:
                raise PreconditionViolated(f"table {table.bundle or '<anonymous>'} has no entry at twist {t}")
            return table[t]

        return cls(table.surface, query, table.bundle)

    def __call__(self, twist: DivisorClass) -> CohomologyTriple:
        check_classes(self.surface, twist)
        with self._lock:
            cached = self._cache.get(twist)
        if cached is not None:
            return cached
        h = CohomologyTriple(*self._query(twist))
        with self._lock:
            self._cache.setdefault(twist, h)
        return h

    def h0(self, twist: DivisorClass) -> int:
        return self(twist).h0

    def chi(self, twist: DivisorClass) -> int:
        return euler(self(twist))

    def twisted(self, m: DivisorClass) -> "CohomologyOracle":
        """Oracle of E ⊗ O(m)."""
        return CohomologyOracle(self.surface, lambda t: self(t + m), f"{self.label}⊗O({m})")


# --------------------------------------------------------------------
# Chern data from Euler characteristics
# --------------------------------------------------------------------


def recovery_twists(surface: Surface) -> List[DivisorClass]:
    """Twists consulted by recover_chern, the consistency check twist last."""
    zero = zero_class(surface)
    gens = list(generators(surface))
    return [zero] + gens + [sum(gens, zero) if surface.is_hirzebruch else gens[0] * 2]


def recover_chern(surface: Surface, q: CohomologyOracle) -> ChernData:
    """
    χ(E ⊗ M) − χ(E) = c1·M + M·(M − K), so every generator g gives c1·g.
    F_n: x = c1·f and y = c1·σ + n·x for c1 = xσ + yf. P²: c1 = c1·H.
    c2 then follows from rank-2 Riemann–Roch at M = 0.
    """
    k = canonical_class(surface)
    twists = recovery_twists(surface)
    chi0 = q.chi(twists[0])
    pairings = []
    for g in generators(surface):
        delta = q.chi(g) - chi0
        pairings.append(delta - intersect(surface, g, g - k))

    if surface.is_hirzebruch:
        c1_sigma, c1_f = pairings
        c1 = DivisorClass((c1_f, c1_sigma + surface.n * c1_f))
    else:
        c1 = DivisorClass((pairings[0],))

    twice = intersect(surface, c1, c1 - k)
    if twice % 2:
        raise InconsistentOracle(f"c1 = {c1} gives a half-integral c2 on {surface.label}")
    ch = ChernData(c1=c1, c2=2 + twice // 2 - chi0)

    check = twists[-1]
    predicted = chi_rank2(surface, twist_chern(surface, ch, check))
    observed = q.chi(check)
    if predicted != observed:
        raise InconsistentOracle(
            f"χ(E ⊗ O({check})) is {observed}, Chern data {ch.to_dict()} predict {predicted}"
        )
    return ch


# --------------------------------------------------------------------
# Normalization
# --------------------------------------------------------------------


def in_split_shape(surface: Surface, c1: DivisorClass) -> bool:
    if surface.is_hirzebruch:
        a, b = c1.coords
        return (a <= 0 and b <= 0) or (a > 0 and b < 0)
    return degree(surface, c1) <= 0


def _shape_key(c1: DivisorClass, m: DivisorClass) -> tuple:
    return (sum(abs(x) for x in c1.coords), c1.coords, m.coords)


def _normalization_box(ch: ChernData) -> int:
    return max(abs(x) for x in ch.c1.coords) + abs(ch.c2) + NORMALIZE_BOX_PADDING


def _has_residue_solution(surface: Surface, ch: ChernData, modulus: int) -> bool:
    for coords in _residues(surface.picard_rank, modulus):
        m = DivisorClass(coords)
        if (ch.c2 + intersect(surface, ch.c1, m) + intersect(surface, m, m)) % modulus == 0:
            return True
    return False


def _residues(rank: int, modulus: int) -> Iterable[Tuple[int, ...]]:
    if rank == 1:
        return ((x,) for x in range(modulus))
    return ((x, y) for x in range(modulus) for y in range(modulus))


def discriminant(surface: Surface, ch: ChernData) -> int:
    """c1² − 4·c2, unchanged by twisting."""
    return intersect(surface, ch.c1, ch.c1) - 4 * ch.c2


def normalization_is_complete(surface: Surface, ch: ChernData) -> bool:
    """
    True when c2 + c1·M + M² = 0 has finitely many solutions M and
    normalization_candidates lists all of them: always on P², and on F_n
    exactly when the discriminant is nonzero.
    """
    return not surface.is_hirzebruch or discriminant(surface, ch) != 0


def _divisors(r: int) -> Iterable[int]:
    for d in range(1, abs(r) + 1):
        if r % d == 0:
            yield d
            yield -d


def _twists_killing_c2(surface: Surface, ch: ChernData, box: int) -> Iterable[DivisorClass]:
    """
    Solutions M of c2 + c1·M + M² = 0. Exhaustive when
    normalization_is_complete, otherwise those inside the box.
    """
    if not surface.is_hirzebruch:
        # (2x + d)² = d² − 4c2
        d = ch.c1.coords[0]
        disc = discriminant(surface, ch)
        if disc < 0 or isqrt(disc) ** 2 != disc:
            return
        for root in sorted({isqrt(disc), -isqrt(disc)}):
            if (root - d) % 2 == 0:
                yield DivisorClass(((root - d) // 2,))
        return

    # y·u = −c2 + npx − qx + nx² with u = p + 2x, and 4·rhs = u·(nu − 2q) + disc
    n = surface.n
    p, q = ch.c1.coords
    disc = discriminant(surface, ch)
    if disc != 0:
        xs = [(u - p) // 2 for u in _divisors(disc) if (u - p) % 2 == 0]
    else:
        xs = list(range(-box, box + 1))
    for x in sorted(xs):
        coeff = p + 2 * x
        rhs = -ch.c2 + n * p * x - q * x + n * x * x
        if coeff == 0:
            if rhs == 0:
                for y in range(-box, box + 1):
                    yield DivisorClass((x, y))
        elif rhs % coeff == 0 and (disc != 0 or abs(rhs // coeff) <= box):
            yield DivisorClass((x, rhs // coeff))


def normalization_candidates(surface: Surface, ch: ChernData) -> List[Tuple[DivisorClass, ChernData]]:
    """
    Every twist M with c2(E ⊗ M) = 0 and c1(E ⊗ M) in a split-test shape,
    smallest |c1(E ⊗ M)|₁ first. With a zero discriminant on F_n the
    solutions form infinite families and only the search box is scanned.
    """
    check_classes(surface, ch.c1)
    box = _normalization_box(ch)
    found = []
    for m in _twists_killing_c2(surface, ch, box):
        normal = twist_chern(surface, ch, m)
        assert normal.c2 == 0
        if in_split_shape(surface, normal.c1):
            found.append((m, normal))
    found.sort(key=lambda pair: _shape_key(pair[1].c1, pair[0]))
    if found:
        return found

    if normalization_is_complete(surface, ch):
        reason = NotNormalizable.PROVABLY_NONE
    elif any(not _has_residue_solution(surface, ch, modulus) for modulus in OBSTRUCTION_MODULI):
        reason = NotNormalizable.PROVABLY_NONE
    else:
        reason = NotNormalizable.BOX_EXHAUSTED
    raise NotNormalizable(ch, reason, box)


def normalize(surface: Surface, ch: ChernData) -> Tuple[DivisorClass, ChernData]:
    """
    First normalization candidate. Ties are broken by |c1'|₁, then c1'
    lexicographically, then M, so the normal form closest to O ⊕ O wins
    regardless of the box size.
    """
    return normalization_candidates(surface, ch)[0]


# --------------------------------------------------------------------
# Split test
# --------------------------------------------------------------------


def _lemma2_entries(surface: Surface, q: CohomologyOracle, ch: ChernData) -> List[CertificateEntry]:
    zero = zero_class(surface)
    bound = 1 + line_h(surface, -ch.c1).h0
    vanishing = [-g for g in generators(surface)]
    # P²: only −H; F_n: −σ then −f
    entries = [CertificateEntry(t, 0, "==", 0, q.h0(t)) for t in vanishing]
    entries.append(CertificateEntry(zero, 0, ">=", 1, q.h0(zero)))
    entries.append(CertificateEntry(-ch.c1, 0, ">=", bound, q.h0(-ch.c1)))
    return entries


def lemma2_decide(surface: Surface, q: CohomologyOracle, ch: ChernData) -> SplitVerdict:
    """
    E (already normalized, c2 = 0) is O ⊕ O(c1) when
        h⁰(E(−σ)) = h⁰(E(−f)) = 0      (h⁰(E(−H)) = 0 on P²)
        h⁰(E) >= 1
        h⁰(E(−c1)) >= 1 + h⁰(O(−c1))
    Otherwise every failed condition goes into the certificate.
    """
    check_classes(surface, ch.c1)
    if ch.c2 != 0 or not in_split_shape(surface, ch.c1):
        raise PreconditionViolated(f"Chern data {ch.to_dict()} are not in a split-test shape on {surface.label}")
    failed = tuple(entry for entry in _lemma2_entries(surface, q, ch) if not entry.holds())
    if failed:
        return NotSplitWithin(failed)
    return Split(zero_class(surface), ch.c1)


def decide(surface: Surface, q: CohomologyOracle) -> SplitVerdict:
    """
    Reference-free decision: recover Chern data, then run the split test on
    every normalization candidate. Summands are reported untwisted.

    A split E = O(L1) ⊕ O(L2) is normalized by −L1 or −L2, so when every
    candidate fails and the candidate list is complete, E does not split.
    With an incomplete list (zero discriminant on F_n) the answer is
    Inconclusive.
    """
    ch = recover_chern(surface, q)
    try:
        candidates = normalization_candidates(surface, ch)
    except NotNormalizable as e:
        log_event("splitting_criterion", "not_normalizable", surface=surface.label, reason=e.reason, chern=ch.to_dict())
        return Inconclusive(f"not_normalizable:{e.reason}")

    first_failure: Optional[NotSplitWithin] = None
    for m, normal in candidates:
        verdict = lemma2_decide(surface, q.twisted(m), normal)
        if isinstance(verdict, Split):
            result: SplitVerdict = Split(verdict.l1 - m, verdict.l2 - m, normalization_twist=m)
            break
        if first_failure is None:
            first_failure = NotSplitWithin(tuple(c.shifted(m) for c in verdict.certificate), normalization_twist=m)
    else:
        if normalization_is_complete(surface, ch):
            result = first_failure
        else:
            result = Inconclusive(UNBOUNDED_NORMALIZATIONS)

    log_event("splitting_criterion", "decided", surface=surface.label, oracle=q.label, verdict=verdict_to_json(result))
    return result


# --------------------------------------------------------------------
# Comparison with a given split bundle
# --------------------------------------------------------------------


def _split_normalization(surface: Surface, f: SplitBundle) -> DivisorClass:
    """The twist turning F into O ⊕ O(c1') with c1' in a split-test shape."""
    options = [(-f.l1, f.l2 - f.l1), (-f.l2, f.l1 - f.l2)]
    shaped = [(m, c1) for m, c1 in options if in_split_shape(surface, c1)]
    assert shaped, f"{bundle_label(f)} admits no split-test normalization"
    return min(shaped, key=lambda pair: _shape_key(pair[1], pair[0]))[0]


def certificate_twists(surface: Surface, f: SplitBundle, m: Optional[DivisorClass] = None) -> List[DivisorClass]:
    """
    Recovery twists, then the normalization twist M and the split-test twists
    M − σ, M − f, M, M − c1(E ⊗ M) (M − H, M, M − c1 on P²).
    """
    if m is None:
        m = _split_normalization(surface, f)
    normal = twist_chern(surface, chern(f), m)
    twists = recovery_twists(surface) + [m] + [m - g for g in generators(surface)] + [m - normal.c1]
    ordered: List[DivisorClass] = []
    for t in twists:
        if t not in ordered:
            ordered.append(t)
    return ordered


def _decide_against(surface: Surface, q: CohomologyOracle, f: SplitBundle) -> SplitVerdict:
    if f.surface != surface or q.surface != surface:
        raise PreconditionViolated(f"reference {bundle_label(f)} lives on {f.surface.label}, oracle on {q.surface.label}")
    qf = CohomologyOracle.from_bundle(f)

    def first_mismatch(twists: Sequence[DivisorClass]) -> Optional[CertificateEntry]:
        for t in twists:
            expected, observed = qf(t), q(t)
            for i in range(3):
                if expected[i] != observed[i]:
                    return CertificateEntry(t, i, "==", expected[i], observed[i])
        return None

    witness = first_mismatch(recovery_twists(surface))
    if witness is not None:
        return NotSplitWithin((witness,))

    ch = recover_chern(surface, q)
    assert ch == chern(f), f"recovery twists agree but Chern data {ch.to_dict()} differ from {bundle_label(f)}"
    m = _split_normalization(surface, f)
    normal = twist_chern(surface, ch, m)

    witness = first_mismatch(certificate_twists(surface, f, m))
    if witness is not None:
        return NotSplitWithin((witness,), normalization_twist=m)

    verdict = lemma2_decide(surface, q.twisted(m), normal)
    if isinstance(verdict, NotSplitWithin):
        return NotSplitWithin(tuple(c.shifted(m) for c in verdict.certificate), normalization_twist=m)
    return Split(f.l1, f.l2, normalization_twist=m)


def theorem1_decide(surface: Surface, q: CohomologyOracle, f: SplitBundle) -> SplitVerdict:
    """E ≅ F on a Hirzebruch surface when their cohomology agrees on the certificate twists."""
    if not surface.is_hirzebruch:
        raise PreconditionViolated("theorem1_decide runs on Hirzebruch surfaces; use theorem5_decide on P²")
    return _decide_against(surface, q, f)


def theorem5_decide(q: CohomologyOracle, f: SplitBundle) -> SplitVerdict:
    """The Pic ≅ Z version, on P²."""
    if q.surface.is_hirzebruch:
        raise PreconditionViolated("theorem5_decide runs on P²")
    return _decide_against(q.surface, q, f)


def table_mismatches(q: CohomologyOracle, f: Bundle2, window: Window) -> List[CertificateEntry]:
    """Every (twist, i) in the window where q disagrees with F."""
    qf = CohomologyOracle.from_bundle(f)
    out = []
    for t in window:
        expected, observed = qf(t), q(t)
        out.extend(
            CertificateEntry(t, i, "==", expected[i], observed[i]) for i in range(3) if expected[i] != observed[i]
        )
    return out
