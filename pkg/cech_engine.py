# cech_engine.py
"""
Brute-force Čech cohomology over the standard toric affine cover, with exact
rational linear algebra. This is the independent oracle for every dimension
the splitting criterion consumes.

Toric data (M = Z², torus-invariant divisors D_j, one per ray u_j):

- F_n: rays u0 = (1,0), u1 = (0,1), u2 = (-1,n), u3 = (0,-1)
       charts (maximal cones) {u0,u1}, {u1,u2}, {u2,u3}, {u3,u0}
       D_0 ~ D_2 = f, D_1 = σ (self-intersection -n), D_3 = σ + nf
       aσ + bf is represented by b·D_0 + a·D_1
- P²:  rays u0 = (1,0), u1 = (0,1), u2 = (-1,-1)
       charts {u0,u1}, {u1,u2}, {u2,u0};  dH is represented by d·D_2

A Laurent monomial χ^m is a section of O(Σ d_j D_j) over the chart
intersection U_I iff <m, u_j> + d_j >= 0 for every ray u_j of the cone of I.
All restriction maps send χ^m to χ^m, so the Čech complex splits into one
small complex per degree m. Its shape only depends on which rays are
"allowed" at m, and those shapes are cached.

Calibration: h⁰(O(σ)) = 1 on F_n for n >= 1 (only m = (0,0) survives);
on F_0 the degree m = (0,-1) survives too and h⁰ = 2.

Rank-2 bundles are extensions 0 -> O(sub) -> E -> O(quot) -> 0 glued by
g_ij = [[1, e_ij], [0, 1]] where e is a Čech 1-cocycle of O(sub - quot).
Two routes compute H^i(E ⊗ O(t)):
    les   : long exact sequence, connecting maps = cup product with e (default)
    total : ranks of the total Čech complex d_E = [[d_sub, e ∪ -], [0, d_quot]]

Debug dumps (CECH_DUMP_DIR) use a sparse triple text format: a header line
`# <rows> <cols>` and one `row col value` line per nonzero entry, values as
exact rationals `p` or `p/q`.
"""

from __future__ import annotations

import itertools
import logging
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

from dotenv import load_dotenv
from sympy import Matrix, QQ
from sympy.polys.matrices import DomainMatrix

from line_cohomology import CohomologyTriple
from logging_utils import log_event
from picard_lattice import DivisorClass, Surface

load_dotenv()

logger = logging.getLogger("cech_engine")
logger.setLevel(logging.INFO)

CECH_BOX_PADDING = int(os.environ.get("CECH_BOX_PADDING", "0"))
CECH_STABILITY_CHECK = os.environ.get("CECH_STABILITY_CHECK", "1") != "0"
CECH_DUMP_DIR = os.environ.get("CECH_DUMP_DIR", "")

Degree = Tuple[int, int]
Simplex = Tuple[int, ...]
CellKey = Tuple[Simplex, Degree]
Cochain = Dict[CellKey, Fraction]
FrozenCochain = Tuple[Tuple[CellKey, Fraction], ...]

ROUTES = ("les", "total")


class TruncationUnstable(RuntimeError):
    """Enlarging the exponent box changed a computed dimension."""

    def __init__(
        self,
        surface: Surface,
        target: str,
        bound: int,
        small: CohomologyTriple,
        large: CohomologyTriple,
        measure: str = "box",
    ) -> None:
        super().__init__(
            f"{surface.label} {target}: {measure} {bound} gives {tuple(small)}, {measure} {bound + 1} gives {tuple(large)}"
        )
        self.surface = surface
        self.target = target
        self.bound = bound
        self.small = small
        self.large = large


class InvalidCocycle(ValueError):
    """An extension cochain is not a regular Čech 1-cocycle of O(sub - quot)."""


# --------------------------------------------------------------------
# Toric data
# --------------------------------------------------------------------


@dataclass(frozen=True)
class ToricFan:
    rays: Tuple[Tuple[int, int], ...]
    charts: Tuple[FrozenSet[int], ...]

    @property
    def n_charts(self) -> int:
        return len(self.charts)

    def simplex_rays(self, simplex: Simplex) -> FrozenSet[int]:
        return frozenset.intersection(*(self.charts[i] for i in simplex))


@lru_cache(maxsize=None)
def toric_fan(surface: Surface) -> ToricFan:
    if surface.is_hirzebruch:
        rays = ((1, 0), (0, 1), (-1, surface.n), (0, -1))
        charts = (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}), frozenset({3, 0}))
    else:
        rays = ((1, 0), (0, 1), (-1, -1))
        charts = (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 0}))
    return ToricFan(rays=rays, charts=charts)


def divisor_vector(surface: Surface, d: DivisorClass) -> Tuple[int, ...]:
    """Torus-invariant representative of d, one coefficient per ray (linear in d)."""
    if surface.is_hirzebruch:
        a, b = d.coords
        return (b, a, 0, 0)
    (deg,) = d.coords
    return (0, 0, deg)


def truncation_bound(surface: Surface, d: DivisorClass) -> int:
    if surface.is_hirzebruch:
        a, b = d.coords
        return abs(a) + abs(b) + surface.n * (abs(a) + 1) + 2
    return abs(d.coords[0]) + 2


def _box(bound: int) -> Iterator[Degree]:
    for m1 in range(-bound, bound + 1):
        for m2 in range(-bound, bound + 1):
            yield (m1, m2)


def _allowed(fan: ToricFan, vec: Tuple[int, ...], m: Degree) -> FrozenSet[int]:
    return frozenset(
        j for j, (u1, u2) in enumerate(fan.rays) if u1 * m[0] + u2 * m[1] + vec[j] >= 0
    )


def _present(fan: ToricFan, vec: Tuple[int, ...], simplex: Simplex, m: Degree) -> bool:
    return fan.simplex_rays(simplex) <= _allowed(fan, vec, m)


# --------------------------------------------------------------------
# Exact sparse linear algebra
# --------------------------------------------------------------------


def _to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def sparse_rank(vectors: Sequence[Mapping[Hashable, Fraction]]) -> int:
    """
    Rank over QQ of the span of sparse vectors (coordinate -> value).
    Vectors are first split into blocks with disjoint supports; each block is
    reduced by DomainMatrix elimination over QQ.
    """
    parent: Dict[Hashable, Hashable] = {}

    def find(x: Hashable) -> Hashable:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    live = [{k: c for k, c in v.items() if c != 0} for v in vectors]
    live = [v for v in live if v]
    for v in live:
        keys = list(v)
        for k in keys:
            parent.setdefault(k, k)
        root = find(keys[0])
        for k in keys[1:]:
            other = find(k)
            if other != root:
                parent[other] = root

    blocks: Dict[Hashable, List[Mapping[Hashable, Fraction]]] = defaultdict(list)
    for v in live:
        blocks[find(next(iter(v)))].append(v)

    rank = 0
    for vecs in blocks.values():
        if len(vecs) == 1:
            rank += 1
            continue
        coords = {k: i for i, k in enumerate({k for v in vecs for k in v})}
        rows = {i: {coords[k]: _to_qq(c) for k, c in v.items()} for i, v in enumerate(vecs)}
        rank += DomainMatrix(rows, (len(vecs), len(coords)), QQ).rank()
    return rank


@dataclass(frozen=True)
class SparseMatrix:
    """Row-major sparse matrix with exact rational entries."""

    shape: Tuple[int, int]
    entries: Mapping[int, Mapping[int, Fraction]]

    def rank(self) -> int:
        return sparse_rank(list(self.entries.values()))

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self ∘ other."""
        assert self.shape[1] == other.shape[0]
        out: Dict[int, Dict[int, Fraction]] = {}
        for i, row in self.entries.items():
            acc: Dict[int, Fraction] = defaultdict(Fraction)
            for k, a in row.items():
                for j, b in other.entries.get(k, {}).items():
                    acc[j] += a * b
            acc = {j: c for j, c in acc.items() if c != 0}
            if acc:
                out[i] = acc
        return SparseMatrix((self.shape[0], other.shape[1]), out)

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.entries.values() for c in row.values())

    def dump(self, path: Path) -> None:
        lines = [f"# {self.shape[0]} {self.shape[1]}"]
        for i in sorted(self.entries):
            for j in sorted(self.entries[i]):
                c = self.entries[i][j]
                if c != 0:
                    lines.append(f"{i} {j} {c}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def dump_matrix(matrix: SparseMatrix, path: Path) -> None:
    matrix.dump(Path(path))


# --------------------------------------------------------------------
# One degree at a time
# --------------------------------------------------------------------


@dataclass(frozen=True)
class GradedPiece:
    """The Čech complex of a line bundle restricted to one degree m."""

    cells: Tuple[Tuple[Simplex, ...], ...]
    ranks: Tuple[int, ...]
    dims: Tuple[int, ...]
    representatives: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


def _cell_coboundary(simplex: Simplex, n_charts: int) -> Dict[Simplex, int]:
    out: Dict[Simplex, int] = {}
    for j in range(n_charts):
        if j in simplex:
            continue
        coface = tuple(sorted(simplex + (j,)))
        out[coface] = -1 if coface.index(j) % 2 else 1
    return out


def _piece_matrix(lower: Tuple[Simplex, ...], upper: Tuple[Simplex, ...], n_charts: int) -> Matrix:
    index = {s: i for i, s in enumerate(upper)}
    mat = Matrix.zeros(len(upper), len(lower))
    for col, s in enumerate(lower):
        for coface, sign in _cell_coboundary(s, n_charts).items():
            # cofaces of a present cell are always present
            mat[index[coface], col] = sign
    return mat


def _representatives(d_prev: Optional[Matrix], d_next: Optional[Matrix], size: int) -> List[Tuple[Fraction, ...]]:
    if size == 0:
        return []
    if d_next is None or d_next.rows == 0:
        kernel = [Matrix.eye(size).col(j) for j in range(size)]
    else:
        kernel = d_next.nullspace()
    image = [] if d_prev is None or d_prev.cols == 0 else [d_prev.col(j) for j in range(d_prev.cols)]
    base = Matrix.hstack(*image).rank() if image else 0
    chosen: List[Matrix] = []
    for v in kernel:
        if Matrix.hstack(*image, *chosen, v).rank() > base + len(chosen):
            chosen.append(v)
    return [tuple(Fraction(int(x.p), int(x.q)) for x in v) for v in chosen]


@lru_cache(maxsize=None)
def _graded_piece(fan: ToricFan, allowed: FrozenSet[int]) -> GradedPiece:
    levels = fan.n_charts
    cells = tuple(
        tuple(s for s in itertools.combinations(range(levels), p + 1) if fan.simplex_rays(s) <= allowed)
        for p in range(levels)
    )
    mats: List[Optional[Matrix]] = [
        _piece_matrix(cells[p], cells[p + 1], levels) if p + 1 < levels else None for p in range(levels)
    ]
    for p in range(levels - 2):
        assert (mats[p + 1] * mats[p]).is_zero_matrix, "d∘d != 0 in a graded piece"
    ranks = tuple(
        (mats[p].rank() if mats[p] is not None and mats[p].rows and mats[p].cols else 0) for p in range(levels)
    )
    dims = tuple(len(cells[p]) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(levels))
    reps = tuple(
        tuple(_representatives(mats[p - 1] if p else None, mats[p], len(cells[p]))) for p in range(levels)
    )
    for p in range(levels):
        assert dims[p] >= 0 and len(reps[p]) == dims[p]
    return GradedPiece(cells=cells, ranks=ranks, dims=dims, representatives=reps)


def _piece_at(surface: Surface, vec: Tuple[int, ...], m: Degree) -> GradedPiece:
    fan = toric_fan(surface)
    return _graded_piece(fan, _allowed(fan, vec, m))


# --------------------------------------------------------------------
# Line bundles
# --------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialBasis:
    """Cochain bases of a truncated Čech complex: per level, (simplex, degree) cells."""

    charts: Tuple[int, ...]
    bound: int
    cells: Tuple[Tuple[CellKey, ...], ...]


@dataclass(frozen=True)
class CechComplex:
    target: DivisorClass
    basis: MonomialBasis
    differentials: Tuple[SparseMatrix, ...]

    def ranks(self) -> Tuple[int, ...]:
        return tuple(d.rank() for d in self.differentials)

    def squares_to_zero(self) -> bool:
        return all(
            self.differentials[p + 1].compose(self.differentials[p]).is_zero()
            for p in range(len(self.differentials) - 1)
        )

    def cohomology(self) -> CohomologyTriple:
        ranks = self.ranks() + (0,)
        dims = [
            len(self.basis.cells[p]) - ranks[p] - (ranks[p - 1] if p else 0)
            for p in range(len(self.basis.cells))
        ]
        assert all(h == 0 for h in dims[3:]), "H³ must vanish on a surface"
        return CohomologyTriple(*dims[:3])


def line_complex(surface: Surface, d: DivisorClass, bound: Optional[int] = None) -> CechComplex:
    """The assembled (block diagonal) Čech complex of O(d) over the exponent box."""
    fan = toric_fan(surface)
    vec = divisor_vector(surface, d)
    if bound is None:
        bound = truncation_bound(surface, d) + CECH_BOX_PADDING
    levels = fan.n_charts
    cells: List[List[CellKey]] = [[] for _ in range(levels)]
    for m in _box(bound):
        piece = _piece_at(surface, vec, m)
        for p in range(levels):
            cells[p].extend((s, m) for s in piece.cells[p])
    index = [{key: i for i, key in enumerate(level)} for level in cells]
    diffs = []
    for p in range(levels - 1):
        entries: Dict[int, Dict[int, Fraction]] = defaultdict(dict)
        for col, (s, m) in enumerate(cells[p]):
            for coface, sign in _cell_coboundary(s, levels).items():
                entries[index[p + 1][(coface, m)]][col] = Fraction(sign)
        diffs.append(SparseMatrix((len(cells[p + 1]), len(cells[p])), dict(entries)))
    basis = MonomialBasis(
        charts=tuple(range(levels)),
        bound=bound,
        cells=tuple(tuple(level) for level in cells),
    )
    return CechComplex(target=d, basis=basis, differentials=tuple(diffs))


def dump_line_complex(surface: Surface, d: DivisorClass, directory: str) -> List[Path]:
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    complex_ = line_complex(surface, d)
    paths = []
    for p, mat in enumerate(complex_.differentials):
        path = out_dir / f"{surface.label}_{'_'.join(map(str, d.coords))}_d{p}.txt"
        mat.dump(path)
        paths.append(path)
    logger.info("Dumped %d Čech differentials for %s on %s to %s", len(paths), d, surface, out_dir)
    return paths


def _graded_h(surface: Surface, d: DivisorClass, bound: int) -> CohomologyTriple:
    vec = divisor_vector(surface, d)
    totals = [0] * toric_fan(surface).n_charts
    for m in _box(bound):
        for p, h in enumerate(_piece_at(surface, vec, m).dims):
            totals[p] += h
    assert all(h == 0 for h in totals[3:]), "H³ must vanish on a surface"
    return CohomologyTriple(*totals[:3])


@lru_cache(maxsize=None)
def cech_line_h(surface: Surface, d: DivisorClass, bound: Optional[int] = None) -> CohomologyTriple:
    if bound is None:
        bound = truncation_bound(surface, d) + CECH_BOX_PADDING
    h = _graded_h(surface, d, bound)
    if CECH_STABILITY_CHECK:
        larger = _graded_h(surface, d, bound + 1)
        if larger != h:
            log_event("cech_engine", "truncation_unstable", surface=surface.label, target=str(d), bound=bound)
            raise TruncationUnstable(surface, f"O({d})", bound, h, larger)
    if CECH_DUMP_DIR:
        dump_line_complex(surface, d, CECH_DUMP_DIR)
    return h


@lru_cache(maxsize=None)
def cohomology_basis(
    surface: Surface, d: DivisorClass, level: int, bound: Optional[int] = None
) -> Tuple[FrozenCochain, ...]:
    """
    Degree-homogeneous Čech cocycles whose classes form a basis of H^level(O(d)),
    ordered by degree (lexicographic) and then by position inside the degree.
    """
    if bound is None:
        bound = truncation_bound(surface, d) + CECH_BOX_PADDING
    vec = divisor_vector(surface, d)
    basis: List[FrozenCochain] = []
    for m in sorted(_box(bound)):
        piece = _piece_at(surface, vec, m)
        if level >= len(piece.cells):
            continue
        for rep in piece.representatives[level]:
            basis.append(
                tuple(((s, m), c) for s, c in zip(piece.cells[level], rep) if c != 0)
            )
    return tuple(basis)


# --------------------------------------------------------------------
# Cochain operations
# --------------------------------------------------------------------


def coboundary(surface: Surface, cochain: Mapping[CellKey, Fraction]) -> Cochain:
    """Čech differential of a cochain (all cells of one level)."""
    n_charts = toric_fan(surface).n_charts
    out: Cochain = defaultdict(Fraction)
    for (s, m), c in cochain.items():
        for coface, sign in _cell_coboundary(s, n_charts).items():
            out[(coface, m)] += sign * c
    return {k: c for k, c in out.items() if c != 0}


def cup(e: Mapping[CellKey, Fraction], z: Mapping[CellKey, Fraction]) -> Cochain:
    """(e ∪ z)_{i0 i1 ... } = e_{i0 i1} · z_{i1 ...}; monomial degrees add."""
    by_end: Dict[int, List[Tuple[int, Degree, Fraction]]] = defaultdict(list)
    for ((i0, i1), me), c in e.items():
        by_end[i1].append((i0, me, c))
    out: Cochain = defaultdict(Fraction)
    for (s, mz), cz in z.items():
        for i0, me, ce in by_end.get(s[0], ()):
            out[((i0,) + s, (me[0] + mz[0], me[1] + mz[1]))] += ce * cz
    return {k: c for k, c in out.items() if c != 0}


@dataclass(frozen=True)
class ExtClass:
    """
    An extension 0 -> O(sub) -> E -> O(quot) -> 0, with its class given as a
    Čech 1-cocycle of O(sub - quot) in the monomial basis.
    """

    sub: DivisorClass
    quot: DivisorClass
    cocycle: FrozenCochain = ()

    @classmethod
    def from_cochain(cls, sub: DivisorClass, quot: DivisorClass, cochain: Mapping[CellKey, Fraction]) -> "ExtClass":
        items = tuple(sorted((k, Fraction(c)) for k, c in cochain.items() if c != 0))
        return cls(sub=sub, quot=quot, cocycle=items)

    def as_dict(self) -> Cochain:
        return dict(self.cocycle)

    def is_zero(self) -> bool:
        return not self.cocycle

    def shifted(self, m: DivisorClass) -> "ExtClass":
        return ExtClass(sub=self.sub + m, quot=self.quot + m, cocycle=self.cocycle)


def is_cocycle(surface: Surface, e: ExtClass) -> bool:
    fan = toric_fan(surface)
    vec = divisor_vector(surface, e.sub - e.quot)
    for (s, m), _ in e.cocycle:
        if len(s) != 2 or not _present(fan, vec, s, m):
            return False
    return not coboundary(surface, e.as_dict())


def ext_dim(surface: Surface, quot: DivisorClass, sub: DivisorClass) -> int:
    """dim Ext¹(O(quot), O(sub)) = h¹(sub - quot)."""
    return cech_line_h(surface, sub - quot).h1


def ext_basis(surface: Surface, quot: DivisorClass, sub: DivisorClass) -> List[ExtClass]:
    return [
        ExtClass.from_cochain(sub, quot, dict(rep))
        for rep in cohomology_basis(surface, sub - quot, 1)
    ]


def cocycle_is_coboundary(surface: Surface, e: ExtClass) -> bool:
    """True iff the cocycle lies in the image of d⁰, solved degree by degree."""
    vec = divisor_vector(surface, e.sub - e.quot)
    by_degree: Dict[Degree, Dict[Simplex, Fraction]] = defaultdict(dict)
    for (s, m), c in e.cocycle:
        by_degree[m][s] = c
    for m, values in by_degree.items():
        piece = _piece_at(surface, vec, m)
        boundaries = [
            {(coface, m): Fraction(sign) for coface, sign in _cell_coboundary(s, len(piece.cells)).items()}
            for s in piece.cells[0]
        ]
        target = {(s, m): c for s, c in values.items()}
        if sparse_rank(boundaries + [target]) > sparse_rank(boundaries):
            return False
    return True


# --------------------------------------------------------------------
# Rank-2 bundles
# --------------------------------------------------------------------


def _connecting_rank(
    surface: Surface,
    cocycle: Mapping[CellKey, Fraction],
    source: DivisorClass,
    target: DivisorClass,
    level: int,
    padding: int,
) -> int:
    """Rank of H^level(O(source)) -> H^level+1(O(target)), z -> e ∪ z."""
    n_charts = toric_fan(surface).n_charts
    if not cocycle or level + 1 >= n_charts:
        return 0
    bound = truncation_bound(surface, source) + padding
    classes = cohomology_basis(surface, source, level, bound)
    if not classes:
        return 0
    images = [cup(cocycle, dict(z)) for z in classes]
    degrees = sorted({m for img in images for (_, m) in img})

    vec = divisor_vector(surface, target)
    boundaries: List[Dict[CellKey, Fraction]] = []
    boundary_rank = 0
    for m in degrees:
        piece = _piece_at(surface, vec, m)
        boundary_rank += piece.ranks[level]
        for s in piece.cells[level]:
            boundaries.append({(coface, m): Fraction(sign) for coface, sign in _cell_coboundary(s, n_charts).items()})
        present = set(piece.cells[level + 1])
        for img in images:
            for (s, m2) in img:
                if m2 == m and s not in present:
                    raise InvalidCocycle(f"cup product leaves O({target}) at cell {s} degree {m}")
    assert sparse_rank(boundaries) == boundary_rank
    return sparse_rank(boundaries + images) - boundary_rank


def _rank2_les(surface: Surface, e: ExtClass, twist: DivisorClass, padding: int) -> CohomologyTriple:
    sub = e.sub + twist
    quot = e.quot + twist
    hs = cech_line_h(surface, sub)
    hq = cech_line_h(surface, quot)
    cocycle = e.as_dict()
    r0 = _connecting_rank(surface, cocycle, quot, sub, 0, padding)
    r1 = _connecting_rank(surface, cocycle, quot, sub, 1, padding)
    return CohomologyTriple(
        hs.h0 + hq.h0 - r0,
        hs.h1 - r0 + hq.h1 - r1,
        hs.h2 - r1 + hq.h2,
    )


def _rank2_total(surface: Surface, e: ExtClass, twist: DivisorClass, padding: int) -> CohomologyTriple:
    """
    Truncated total complex C(sub)|_S ⊕ C(quot)|_Q. Q covers the support of
    H(quot + t); S covers H(sub + t) and Q shifted by every cocycle degree, so
    the truncation is a subcomplex with acyclic quotient.
    """
    sub = e.sub + twist
    quot = e.quot + twist
    fan = toric_fan(surface)
    vs = divisor_vector(surface, sub)
    vq = divisor_vector(surface, quot)
    cocycle = e.as_dict()
    bq = truncation_bound(surface, quot) + padding
    reach = max((max(abs(m[0]), abs(m[1])) for (_, m) in cocycle), default=0)
    bs = max(truncation_bound(surface, sub) + padding, bq + reach)

    levels = fan.n_charts
    dims = [0] * levels
    ranks = [0] * levels
    for p in range(levels):
        columns: List[Dict[Hashable, Fraction]] = []
        for m in _box(bs):
            for s in _piece_at(surface, vs, m).cells[p]:
                dims[p] += 1
                columns.append(
                    {("sub", c, m): Fraction(sign) for c, sign in _cell_coboundary(s, levels).items()}
                )
        for m in _box(bq):
            for s in _piece_at(surface, vq, m).cells[p]:
                dims[p] += 1
                col: Dict[Hashable, Fraction] = {
                    ("quot", c, m): Fraction(sign) for c, sign in _cell_coboundary(s, levels).items()
                }
                for (c, m2), value in cup(cocycle, {(s, m): Fraction(1)}).items():
                    col[("sub", c, m2)] = value
                columns.append(col)
        ranks[p] = sparse_rank(columns)
    h = [dims[p] - ranks[p] - (ranks[p - 1] if p else 0) for p in range(levels)]
    assert all(x == 0 for x in h[3:]), "H³ must vanish on a surface"
    return CohomologyTriple(*h[:3])


@lru_cache(maxsize=None)
def rank2_cech_h(surface: Surface, e: ExtClass, twist: DivisorClass, route: str = "les") -> CohomologyTriple:
    """
    h^i(E ⊗ O(twist)) for the extension e. The default route is the long
    exact sequence; route="total" ranks the whole complex instead.
    """
    if route not in ROUTES:
        raise ValueError(f"Unknown route {route!r}; expected one of {ROUTES}")
    if not is_cocycle(surface, e):
        raise InvalidCocycle(f"cochain is not a 1-cocycle of O({e.sub - e.quot}) on {surface.label}")
    compute = _rank2_les if route == "les" else _rank2_total
    h = compute(surface, e, twist, CECH_BOX_PADDING)
    if CECH_STABILITY_CHECK:
        larger = compute(surface, e, twist, CECH_BOX_PADDING + 1)
        if larger != h:
            log_event("cech_engine", "truncation_unstable", surface=surface.label, route=route, twist=str(twist))
            raise TruncationUnstable(
                surface, f"ext({e.sub}|{e.quot}) ⊗ O({twist})", CECH_BOX_PADDING, h, larger, measure="box padding"
            )
    return h
