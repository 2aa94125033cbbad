import json
from pathlib import Path
from random import Random

import pytest
from jsonschema import Draft202012Validator

import splitting_criterion
from bundles import SplitBundle, Window, chern, h_table, make_extension, twist
from cech_engine import cocycle_is_coboundary
from line_cohomology import CohomologyTriple
from picard_lattice import ChernData, DivisorClass, Surface, chi_rank2, twist_chern
from splitting_criterion import (
    CertificateEntry,
    CohomologyOracle,
    Inconclusive,
    InconsistentOracle,
    NotNormalizable,
    NotSplitWithin,
    PreconditionViolated,
    UNBOUNDED_NORMALIZATIONS,
    Split,
    certificate_twists,
    decide,
    discriminant,
    lemma2_decide,
    normalization_candidates,
    normalization_is_complete,
    normalize,
    recover_chern,
    table_mismatches,
    theorem1_decide,
    theorem5_decide,
    verdict_to_json,
)

F0, F1, F2 = (Surface.hirzebruch(n) for n in range(3))
P2 = Surface.projective_plane()

VERDICT_SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "schemas" / "verdict.schema.json").read_text())


def D(*coords):
    return DivisorClass(tuple(coords))


def oracle(e):
    return CohomologyOracle.from_bundle(e)


def summands(verdict):
    assert isinstance(verdict, Split), verdict
    return sorted([verdict.l1, verdict.l2])


def test_oracle_is_memoized_and_twistable():
    calls = []

    def query(t):
        calls.append(t)
        return CohomologyTriple(1, 0, 0)

    q = CohomologyOracle(F1, query)
    assert q(D(0, 0)) == q(D(0, 0))
    assert calls == [D(0, 0)]
    assert q.twisted(D(1, 1))(D(-1, -1)) == (1, 0, 0)
    assert calls == [D(0, 0)]


def test_recover_chern_examples():
    assert recover_chern(F1, oracle(SplitBundle(F1, D(0, 0), D(0, 0)))) == ChernData(D(0, 0), 0)
    assert recover_chern(F2, oracle(SplitBundle(F2, D(0, 0), D(-2, -3)))) == ChernData(D(-2, -3), 0)
    e = make_extension(F2, D(1, 0), D(-1, 0), 0)
    assert recover_chern(F2, oracle(e)) == ChernData(D(0, 0), 2)
    assert recover_chern(P2, oracle(SplitBundle(P2, D(1), D(-3)))) == ChernData(D(-2), -3)


def test_recover_chern_from_tables():
    rng = Random(17)
    w = Window(((0, 1), (0, 1)))
    for _ in range(40):
        s = Surface.hirzebruch(rng.randint(0, 2))
        l1 = D(rng.randint(-3, 3), rng.randint(-3, 3))
        l2 = D(rng.randint(-3, 3), rng.randint(-3, 3))
        e = SplitBundle(s, l1, l2)
        assert recover_chern(s, CohomologyOracle.from_table(h_table(e, w))) == chern(e)
    e = make_extension(F1, D(-1, 0), D(1, 0), 0)
    assert recover_chern(F1, CohomologyOracle.from_table(h_table(e, w))) == chern(e)


def test_inconsistent_oracle():
    with pytest.raises(InconsistentOracle):
        recover_chern(F0, CohomologyOracle(F0, lambda t: CohomologyTriple(1, 0, 0)))


def test_table_oracle_outside_window():
    q = CohomologyOracle.from_table(h_table(SplitBundle(F1, D(0, 0), D(0, 0)), Window.square(F1, 1)))
    with pytest.raises(PreconditionViolated):
        q(D(5, 5))


def test_normalize_examples():
    for s in (F0, F1, F2):
        m, normal = normalize(s, ChernData(D(0, -2), 0))
        assert m == D(0, 1)
        assert normal == ChernData(D(0, 0), 0)


def test_normalization_contains_summand_gap():
    rng = Random(23)
    for _ in range(100):
        s = Surface.hirzebruch(rng.randint(0, 3))
        l1 = D(rng.randint(-3, 3), rng.randint(-3, 3))
        l2 = D(rng.randint(-3, 3), rng.randint(-3, 3))
        candidates = normalization_candidates(s, chern(SplitBundle(s, l1, l2)))
        for m, normal in candidates:
            assert normal.c2 == 0
        assert any(
            (m, normal.c1) in {(-l1, l2 - l1), (-l2, l1 - l2)} for m, normal in candidates
        )


def test_not_normalizable():
    with pytest.raises(NotNormalizable) as info:
        normalize(F0, ChernData(D(0, 0), 1))
    assert info.value.reason == NotNormalizable.PROVABLY_NONE


def test_not_normalizable_box_exhausted(monkeypatch):
    monkeypatch.setattr(splitting_criterion, "NORMALIZE_BOX_PADDING", -10)
    with pytest.raises(NotNormalizable) as info:
        normalize(F1, ChernData(D(0, 0), 0))
    assert info.value.reason == NotNormalizable.BOX_EXHAUSTED


def test_p2_normalization():
    m, normal = normalize(P2, ChernData(D(0), -1))
    assert m == D(-1)
    assert normal == ChernData(D(-2), 0)
    with pytest.raises(NotNormalizable) as info:
        normalize(P2, ChernData(D(0), 1))
    assert info.value.reason == NotNormalizable.PROVABLY_NONE


def test_lemma2_split_shapes():
    for s in (F0, F1, F2):
        for c1 in (D(0, 0), D(-1, 0), D(0, -3), D(-2, -1), D(2, -1), D(1, -3)):
            e = SplitBundle(s, D(0, 0), c1)
            assert lemma2_decide(s, oracle(e), ChernData(c1, 0)) == Split(D(0, 0), c1)


def test_lemma2_preconditions():
    q = oracle(SplitBundle(F1, D(0, 0), D(1, 1)))
    with pytest.raises(PreconditionViolated):
        lemma2_decide(F1, q, ChernData(D(1, 1), 0))
    with pytest.raises(PreconditionViolated):
        lemma2_decide(F1, q, ChernData(D(0, 0), 1))


def test_lemma2_reports_every_failure():
    # O(f) ⊕ O(-f) has c2 = 0 and c1 = 0, but it is not O ⊕ O
    q = oracle(SplitBundle(F1, D(0, 1), D(0, -1)))
    verdict = lemma2_decide(F1, q, ChernData(D(0, 0), 0))
    assert isinstance(verdict, NotSplitWithin)
    assert CertificateEntry(D(0, -1), 0, "==", 0, 1) in verdict.certificate
    for entry in verdict.certificate:
        assert q(entry.twist)[entry.i] == entry.observed
        assert not entry.holds()


def test_nonsplit_extension_certificate():
    e = make_extension(F0, D(0, 0), D(2, -1), 0)
    assert not cocycle_is_coboundary(F0, e.ext)
    q = oracle(e)
    ch = recover_chern(F0, q)
    assert ch == ChernData(D(2, -1), 0)
    assert [m for m, _ in normalization_candidates(F0, ch)] == [D(0, 0)]

    verdict = lemma2_decide(F0, q, ch)
    assert verdict == NotSplitWithin((CertificateEntry(D(-2, 1), 0, ">=", 1, 0),))

    verdict = decide(F0, q)
    assert isinstance(verdict, NotSplitWithin)
    assert verdict.normalization_twist == D(0, 0)
    for entry in verdict.certificate:
        assert q(entry.twist)[entry.i] == entry.observed
        assert not entry.holds()


def test_decide_pullback():
    for s in (F0, F1, F2):
        e = make_extension(s, D(0, -2), D(0, 0), 0)
        assert not cocycle_is_coboundary(s, e.ext)
        verdict = decide(s, oracle(e))
        assert summands(verdict) == [D(0, -1), D(0, -1)]
        assert verdict.normalization_twist == D(0, 1)


def test_decide_sums():
    assert summands(decide(F2, oracle(SplitBundle(F2, D(1, 0), D(-1, 0))))) == [D(-1, 0), D(1, 0)]
    # same Chern data as O(f) ⊕ O(-f), the first normalization candidate is spurious
    assert summands(decide(F1, oracle(SplitBundle(F1, D(0, 0), D(0, -2))))) == [D(0, -2), D(0, 0)]
    assert summands(decide(F1, oracle(SplitBundle(F1, D(0, 1), D(0, -1))))) == [D(0, -1), D(0, 1)]


def test_decide_inconclusive_on_impossible_chern_data():
    ch = ChernData(D(0, 0), 1)

    def query(t):
        chi = chi_rank2(F0, twist_chern(F0, ch, t))
        return CohomologyTriple(max(chi, 0), max(-chi, 0), 0)

    verdict = decide(F0, CohomologyOracle(F0, query))
    assert verdict == Inconclusive("not_normalizable:provably_none")


def test_unbounded_normalizations_are_inconclusive():
    e = SplitBundle(F0, D(5, 0), D(-5, 0))
    ch = chern(e)
    assert discriminant(F0, ch) == 0
    assert not normalization_is_complete(F0, ch)
    assert decide(F0, oracle(e)) == Inconclusive(UNBOUNDED_NORMALIZATIONS)


def test_normalization_completeness():
    assert normalization_is_complete(F0, ChernData(D(2, -1), 0))
    assert not normalization_is_complete(F1, ChernData(D(0, -2), 0))
    assert normalization_is_complete(P2, ChernData(D(0), 0))
    # disc = -8 on F2, so every solution M comes from a divisor of 8
    ch = chern(SplitBundle(F2, D(1, 0), D(-1, 0)))
    assert discriminant(F2, ch) == -8
    assert [m for m, _ in normalization_candidates(F2, ch)] == [D(-1, 0)]
    assert [m for m, _ in normalization_candidates(P2, ChernData(D(0), -9))] == [D(-3)]


def test_decision_commutes_with_twist():
    for s, e in (
        (F1, SplitBundle(F1, D(1, -1), D(-2, 0))),
        (F2, make_extension(F2, D(0, -2), D(0, 0), 0)),
    ):
        base = decide(s, oracle(e))
        for m in (D(1, 0), D(-1, 2)):
            moved = decide(s, oracle(twist(e, m)))
            assert summands(moved) == sorted([base.l1 + m, base.l2 + m])


def test_certificate_twists():
    f = SplitBundle(F1, D(0, -1), D(0, -1))
    assert certificate_twists(F1, f) == [D(0, 0), D(1, 0), D(0, 1), D(1, 1), D(-1, 1)]
    assert certificate_twists(P2, SplitBundle(P2, D(0), D(-2))) == [D(0), D(1), D(2), D(-1)]


def test_theorem1_examples():
    f = SplitBundle(F1, D(1, 0), D(0, -2))
    assert theorem1_decide(F1, oracle(f), f) == Split(D(1, 0), D(0, -2), normalization_twist=D(-1, 0))

    ref = SplitBundle(F2, D(0, -1), D(0, -1))
    pullback = make_extension(F2, D(0, -2), D(0, 0), 0)
    verdict = theorem1_decide(F2, oracle(pullback), ref)
    assert summands(verdict) == [D(0, -1), D(0, -1)]

    verdict = theorem1_decide(F1, oracle(SplitBundle(F1, D(0, 0), D(0, -1))), SplitBundle(F1, D(0, 0), D(0, -2)))
    assert verdict == NotSplitWithin((CertificateEntry(D(0, 0), 1, "==", 1, 0),))


def test_theorem1_uses_the_reference_normalization():
    # c1 = 0 and c2 = 0 for every k, so no box built from the Chern data reaches M = -5σ
    f = SplitBundle(F0, D(5, 0), D(-5, 0))
    assert theorem1_decide(F0, oracle(f), f) == Split(D(5, 0), D(-5, 0), normalization_twist=D(-5, 0))


def test_theorem1_rejects_nonsplit_extension():
    e = make_extension(F0, D(0, 0), D(2, -1), 0)
    verdict = theorem1_decide(F0, oracle(e), SplitBundle(F0, D(0, 0), D(2, -1)))
    assert isinstance(verdict, NotSplitWithin)
    assert verdict.certificate[0].twist == D(-2, 1)


def test_theorem5_examples():
    f = SplitBundle(P2, D(0), D(0))
    assert summands(theorem5_decide(oracle(f), f)) == [D(0), D(0)]
    f = SplitBundle(P2, D(0), D(-2))
    assert summands(theorem5_decide(oracle(f), f)) == [D(-2), D(0)]

    # H¹(O(-2)) = 0 on P², so the only extension of O(1) by O(-1) is the split one
    e = make_extension(P2, D(-1), D(1))
    ref = SplitBundle(P2, D(-1), D(1))
    assert summands(theorem5_decide(oracle(e), ref)) == [D(-1), D(1)]
    assert table_mismatches(oracle(e), ref, Window.square(P2, 3)) == []

    with pytest.raises(PreconditionViolated):
        theorem5_decide(oracle(SplitBundle(F1, D(0, 0), D(0, 0))), SplitBundle(F1, D(0, 0), D(0, 0)))
    with pytest.raises(PreconditionViolated):
        theorem1_decide(P2, oracle(f), f)


def test_table_mismatches():
    pullback = make_extension(F1, D(0, -2), D(0, 0), 0)
    assert table_mismatches(oracle(pullback), SplitBundle(F1, D(0, -1), D(0, -1)), Window.square(F1, 1)) == []
    diffs = table_mismatches(oracle(pullback), SplitBundle(F1, D(0, 0), D(0, -2)), Window.square(F1, 1))
    assert diffs and all(not d.holds() for d in diffs)


def test_verdict_json():
    validator = Draft202012Validator(VERDICT_SCHEMA)
    split = verdict_to_json(Split(D(0, -1), D(0, -1), D(0, 1)))
    assert split == {"verdict": "split", "summands": [[0, -1], [0, -1]], "normalization_twist": [0, 1]}
    not_split = verdict_to_json(NotSplitWithin((CertificateEntry(D(-2, 1), 0, ">=", 1, 0),), D(0, 0)))
    assert not_split["certificate"] == [{"twist": [-2, 1], "i": 0, "relation": ">=", "expected": 1, "observed": 0}]
    inconclusive = verdict_to_json(Inconclusive("not_normalizable:provably_none"))
    for payload in (split, not_split, inconclusive):
        validator.validate(payload)
