import itertools

import pytest

from oracles import _signed_orbit, integer_determinant, root_count, weyl_order_by_orbit
from reprings.rootdata import (DiagramAutomorphism, RootDataError, build_root_datum,
                               check_automorphism, diagram_automorphisms, fixed_subalgebra_dimension,
                               fold_diagram, minuscule_lift, minuscule_weights, named_automorphism,
                               orbit_epsilon_product, parse_type, type_dimension, weyl_orbit,
                               act_on_fundamental_group, two_rho_check_sign)

TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "E6", "F4", "G2"]


@pytest.mark.parametrize("t", TYPES)
def test_root_counts_and_weyl_order(t):
    d = build_root_datum(t)
    c = parse_type(t)
    assert 2 * len(d.positive_roots) == root_count(c)
    assert d.weyl_order == weyl_order_by_orbit(c)


@pytest.mark.parametrize("t", TYPES + ["A3xA1", "B2xG2"])
def test_fundamental_group_order_is_determinant(t):
    d = build_root_datum(t)
    assert d.fundamental_group.order == abs(integer_determinant(parse_type(t)))


def test_fundamental_group_shapes():
    assert build_root_datum("D4").fundamental_group.factors == (2, 2)
    assert build_root_datum("D5").fundamental_group.factors == (4,)
    assert build_root_datum("E8").fundamental_group.factors == ()


def test_type_string_roundtrip():
    for t in TYPES + ["A3xA1", "B2xG2"]:
        assert build_root_datum(t).diagram.type_string() == t
    assert build_root_datum("").rank == 0


def test_b_c_distinguished_by_orientation():
    b2, c2 = build_root_datum("B2"), build_root_datum("C2")
    assert b2.diagram.type_string() == "B2"
    assert c2.diagram.type_string() == "C2"
    assert b2.cartan != c2.cartan


def test_non_finite_type_names_the_minor():
    with pytest.raises(RootDataError, match="minor of order 2"):
        build_root_datum([[2, -2], [-2, 2]])
    with pytest.raises(RootDataError, match="order 3"):
        build_root_datum([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    with pytest.raises(RootDataError):
        build_root_datum([[2, 1], [1, 2]])


def test_weyl_orbit_and_dominant_representative():
    d = build_root_datum("A2")
    orbit, dom = weyl_orbit(d, (-1, 0))
    assert dom == (0, 1)
    assert orbit == frozenset(_signed_orbit(d.cartan, (0, 1)))
    orbit, dom = weyl_orbit(d, (1, 1))
    assert len(orbit) == 6 and dom == (1, 1)
    with pytest.raises(RootDataError):
        weyl_orbit(d, (1, 0, 0))


def test_longest_word_lengths():
    for t in ["A1", "A2", "A3", "C2", "G2"]:
        d = build_root_datum(t)
        for pref in ("low", "high"):
            assert len(d.longest_word(pref)) == len(d.positive_roots)


def test_automorphism_counts():
    counts = {t: len(diagram_automorphisms(build_root_datum(t)))
              for t in ["A1", "A2", "A3", "D4", "D5", "E6", "B3", "G2", "A1xA1"]}
    assert counts == {"A1": 1, "A2": 2, "A3": 2, "D4": 6, "D5": 2, "E6": 2, "B3": 1, "G2": 1,
                      "A1xA1": 2}


def test_invalid_automorphism_rejected():
    d = build_root_datum("A3")
    with pytest.raises(RootDataError):
        check_automorphism(d, DiagramAutomorphism((1, 0, 2)))


FOLDS = [("A2", "flip", "A1", "A1"), ("A3", "flip", "C2", "B2"), ("A4", "flip", "B2", "C2"),
         ("A5", "flip", "C3", "B3"), ("D4", "swap", "B3", "C3"), ("D5", "swap", "B4", "C4"),
         ("D4", "triality", "G2", "G2"), ("E6", "flip", "F4", "F4")]


@pytest.mark.parametrize("t,s,fixed,dual", FOLDS)
def test_folding_types_match_derived_cartan(t, s, fixed, dual):
    d = build_root_datum(t)
    f = fold_diagram(d, named_automorphism(d, s))
    assert (f.fixed_type, f.dual_type) == (fixed, dual)
    target = parse_type(dual)
    n = len(f.orbits)
    assert all(target[f.vertex_map[i]][f.vertex_map[j]] == f.folded_cartan[i][j]
               for i in range(n) for j in range(n))


@pytest.mark.parametrize("t,s,fixed,dual", FOLDS)
def test_fixed_subalgebra_dimension(t, s, fixed, dual):
    d = build_root_datum(t)
    assert fixed_subalgebra_dimension(d, named_automorphism(d, s)) == type_dimension(fixed)


def test_fold_rejects_identity():
    d = build_root_datum("A3")
    with pytest.raises(RootDataError):
        fold_diagram(d, DiagramAutomorphism((0, 1, 2)))


def _rank_le_4_types():
    out = []
    for kind, lo in [("A", 1), ("B", 2), ("C", 3), ("D", 4), ("F", 4), ("G", 2)]:
        for n in range(lo, 5):
            if kind in "FG" and n != (4 if kind == "F" else 2):
                continue
            out.append(f"{kind}{n}")
    return out


@pytest.mark.parametrize("t", _rank_le_4_types())
def test_minuscule_lift_every_class(t):
    d = build_root_datum(t)
    fg = d.fundamental_group
    for cls in fg.elements():
        w = minuscule_lift(d, cls)
        assert all(d.pairing(w, c) in (0, 1) for c in d.positive_coroots)
        assert fg.coords(w) == cls
        for s in diagram_automorphisms(d):
            if act_on_fundamental_group(d, s, cls) == cls:
                assert s.act(w) == w
                assert minuscule_lift(d, cls, [s]) == w


def test_minuscule_weights_count_matches_center():
    for t in _rank_le_4_types():
        d = build_root_datum(t)
        assert len(minuscule_weights(d)) == d.fundamental_group.order


def test_minuscule_rejects_unstable_class():
    d = build_root_datum("A2")
    with pytest.raises(RootDataError):
        minuscule_lift(d, (1,), [named_automorphism(d, "flip")])


def test_orbit_epsilon_product():
    d = build_root_datum("A2")
    e = orbit_epsilon_product(d, named_automorphism(d, "flip"), 0)
    assert e.bits == (1, 1) and not e.is_trivial()
    d4 = build_root_datum("A4")
    with pytest.raises(RootDataError):
        orbit_epsilon_product(d4, named_automorphism(d4, "flip"), 0)
    e = orbit_epsilon_product(d4, named_automorphism(d4, "flip"), 1)
    assert e.bits == (0, 1, 1, 0)


def test_two_rho_check_sign_type_a():
    # in SL(2) the sum of positive coroots is the simple coroot
    assert two_rho_check_sign(build_root_datum("A1")).bits == (1,)
    assert two_rho_check_sign(build_root_datum("A2")).bits == (0, 0)


def test_inner_product_normalisation():
    d = build_root_datum("B2")
    for r in d.positive_roots:
        assert d.root_norm_half(r) in (1, 2)
    short = [r for r in d.positive_roots if d.root_norm_half(r) == 1]
    assert len(short) == 2
    for w in itertools.product(range(-2, 3), repeat=2):
        for i in range(2):
            v = d.reflect(w, i)
            assert d.inner(v, v) == d.inner(w, w)
