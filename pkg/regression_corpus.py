# regression_corpus.py
"""
Pinned bundle instances with known verdicts.

For each instance:
- slug: short id (used in reports)
- surface: "F<n>" or "P2"
- bundle: textual bundle descriptor (see bundles.parse_bundle), or
- chern: {"c1": [...], "c2": int} for a table that only carries the Euler
  characteristics of those Chern data (no bundle presentation behind it)
- against: optional split bundle to compare with (theorem1/theorem5 route)
- expected: "split" | "not_split" | "inconclusive"
- summands: expected unordered summand pair for "split"
- certificate_twist: a twist that must appear in the certificate for "not_split"
"""

REGRESSION_BUNDLES = [
    {
        "slug": "pullback_f0",
        "surface": "F0",
        "bundle": "ext:0,-2/0,0#0",
        "expected": "split",
        "summands": [[0, -1], [0, -1]],
        "note": "Nonzero class in H¹(O(-2f)); pulled back from O(-1)⊕O(-1) on P¹",
    },
    {
        "slug": "pullback_f1",
        "surface": "F1",
        "bundle": "ext:0,-2/0,0#0",
        "expected": "split",
        "summands": [[0, -1], [0, -1]],
        "note": "Same pullback on F1",
    },
    {
        "slug": "pullback_against_f2",
        "surface": "F2",
        "bundle": "ext:0,-2/0,0#0",
        "against": "sum:0,-1/0,-1",
        "expected": "split",
        "summands": [[0, -1], [0, -1]],
        "note": "Pullback compared with its split model on the certificate twists",
    },
    {
        "slug": "nonsplit_f0",
        "surface": "F0",
        "bundle": "ext:0,0/2,-1#0",
        "expected": "not_split",
        "certificate_twist": [-2, 1],
        "note": "Only split candidate is O ⊕ O(2σ-f); h⁰(E(-2σ+f)) = 0 rules it out",
    },
    {
        "slug": "sum_f2",
        "surface": "F2",
        "bundle": "sum:1,0/-1,0",
        "expected": "split",
        "summands": [[1, 0], [-1, 0]],
        "note": "O(σ) ⊕ O(-σ), c2 = n",
    },
    {
        "slug": "sum_case2_f1",
        "surface": "F1",
        "bundle": "sum:0,0/2,-1",
        "expected": "split",
        "summands": [[0, 0], [2, -1]],
        "note": "Already in the aσ - bf shape",
    },
    {
        "slug": "zero_ext_f1",
        "surface": "F1",
        "bundle": "ext:1,1/0,-1",
        "expected": "split",
        "summands": [[1, 1], [0, -1]],
        "note": "Zero class: the extension splits as presented",
    },
    {
        "slug": "wrong_reference_f1",
        "surface": "F1",
        "bundle": "sum:0,0/0,-1",
        "against": "sum:0,0/0,-2",
        "expected": "not_split",
        "certificate_twist": [0, 0],
        "note": "Reference bundle has different c1; recovery twists already disagree",
    },
    {
        "slug": "sum_p2",
        "surface": "P2",
        "bundle": "sum:0/-2",
        "expected": "split",
        "summands": [[0], [-2]],
        "note": "O ⊕ O(-2) on P²",
    },
    {
        "slug": "zero_ext_p2",
        "surface": "P2",
        "bundle": "ext:-1/1",
        "expected": "split",
        "summands": [[-1], [1]],
        "note": "Ext¹(O(1), O(-1)) = H¹(O(-2)) = 0 on P², so only the zero class exists",
    },
    {
        "slug": "no_normal_form_f0",
        "surface": "F0",
        "chern": {"c1": [0, 0], "c2": 1},
        "expected": "inconclusive",
        "note": "2xy = -1 has no integer solution: no split bundle has these Chern data",
    },
    {
        "slug": "large_gap_f0",
        "surface": "F0",
        "bundle": "sum:5,0/-5,0",
        "expected": "inconclusive",
        "note": "c1 = 0 and c2 = 0: the normalizations kσ form an infinite family and -5σ lies outside the box",
    },
    {
        "slug": "large_gap_against_f0",
        "surface": "F0",
        "bundle": "sum:5,0/-5,0",
        "against": "sum:5,0/-5,0",
        "expected": "split",
        "summands": [[5, 0], [-5, 0]],
        "note": "The reference fixes the normalization -5σ, so no search is needed",
    },
]
