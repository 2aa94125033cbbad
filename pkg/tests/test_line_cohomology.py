import itertools
from math import comb

from line_cohomology import CohomologyTriple, add_triples, euler, line_h, serre_dual
from picard_lattice import DivisorClass, Surface, canonical_class, chi_line

P2 = Surface.projective_plane()


def D(*coords):
    return DivisorClass(tuple(coords))


def test_line_h_examples():
    for n in range(4):
        s = Surface.hirzebruch(n)
        assert line_h(s, D(0, 0)) == (1, 0, 0)
        assert line_h(s, D(0, -2)) == (0, 1, 0)
    assert line_h(Surface.hirzebruch(1), D(1, 0)) == (1, 0, 0)


def test_negative_section_is_rigid():
    for n in range(1, 5):
        assert line_h(Surface.hirzebruch(n), D(1, 0)).h0 == 1


def test_serre_dual_examples():
    assert serre_dual(Surface.hirzebruch(1), D(0, 0)) == D(-2, -3)
    assert serre_dual(Surface.hirzebruch(0), D(-2, -2)) == D(0, 0)
    assert serre_dual(P2, D(-3)) == D(0)


def test_serre_duality_and_euler_window():
    for n in range(4):
        s = Surface.hirzebruch(n)
        k = canonical_class(s)
        for a, b in itertools.product(range(-6, 7), repeat=2):
            h = line_h(s, D(a, b))
            dual = line_h(s, k - D(a, b))
            assert (h.h0, h.h1, h.h2) == (dual.h2, dual.h1, dual.h0)
            assert euler(h) == chi_line(s, D(a, b))
            assert min(h) >= 0


def test_monotone_under_effective_additions():
    for n in range(4):
        s = Surface.hirzebruch(n)
        for a, b in itertools.product(range(-4, 5), repeat=2):
            h0 = line_h(s, D(a, b)).h0
            assert h0 <= line_h(s, D(a, b + 1)).h0
            assert h0 <= line_h(s, D(a + 1, b + n)).h0


def test_projective_plane():
    for d in range(0, 6):
        monomials = sum(1 for i, j in itertools.product(range(d + 1), repeat=2) if i + j <= d)
        assert line_h(P2, D(d)).h0 == comb(d + 2, 2) == monomials
    for d in range(-8, 6):
        h = line_h(P2, D(d))
        assert h.h1 == 0
        assert euler(h) == chi_line(P2, D(d))
    assert line_h(P2, D(-3)) == (0, 0, 1)


def test_triple_helpers():
    t = add_triples(CohomologyTriple(1, 2, 3), CohomologyTriple(0, 1, 0))
    assert t == (1, 3, 3)
    assert euler(t) == 1
    assert t.to_list() == [1, 3, 3]
