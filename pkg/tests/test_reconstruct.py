import json

import pytest

from reprings.reconstruct import (ComponentData, Entry, LambdaSemiringPresentation,
                                  ReconstructError, build_functor_data, build_presentation,
                                  commutes_with_adams, find_isomorphisms, functor_isomorphisms,
                                  normal_subsemirings, phi_bijection, roundtrip_check)
from reprings.rootdata import DiagramAutomorphism, build_root_datum, named_automorphism
from reprings.twisted import DisconnectedGroup, phi_group


@pytest.fixture(scope="module")
def sl3_flip():
    return phi_group(1)


def test_sl2_presentation_and_escapes():
    p = build_presentation(build_root_datum("A1"), 2)
    assert p.labels == ["V(0)", "V(1)", "V(2)"]
    assert p.product("V(1)", "V(1)") == Entry((("V(0)", 1), ("V(2)", 1)), False)
    # V(3) and V(4) lie beyond the bound
    assert p.product("V(2)", "V(1)").escaped
    assert p.product("V(2)", "V(2)") == Entry((("V(0)", 1), ("V(2)", 1)), True)


def test_sl2_subsemirings():
    p = build_presentation(build_root_datum("A1"), 2)
    subs, warnings = normal_subsemirings(p)
    assert [(s.labels, s.provisional) for s in subs] == [
        (("V(0)",), False), (("V(0)", "V(2)"), True), (("V(0)", "V(1)", "V(2)"), True)]
    assert len(warnings) == 1 and "V(2)" in warnings[0]


def test_quotient_roundtrip():
    a1 = build_root_datum("A1")
    p = build_presentation(a1, 2)
    q = build_presentation(a1, 2, classes=[(0,)])
    assert q.labels == ["V(0)", "V(2)"]
    assert roundtrip_check(p, ("V(0)", "V(2)"), q)
    assert not roundtrip_check(p, ("V(0)", "V(1)"), q)


def test_bound_zero_is_unit_only():
    p = build_presentation(build_root_datum("A2"), 0)
    assert p.labels == ["V(0,0)"]
    subs, _ = normal_subsemirings(p)
    assert [s.labels for s in subs] == [("V(0,0)",)]
    with pytest.raises(ReconstructError):
        build_presentation(build_root_datum("A2"), -1)


def test_presentation_json_roundtrip(sl3_flip):
    for p in [build_presentation(build_root_datum("B2"), 1), build_presentation(sl3_flip, 1)]:
        text = json.dumps(p.to_json(), sort_keys=True)
        q = LambdaSemiringPresentation.from_json(json.loads(text))
        assert q.to_json() == p.to_json()
        q.validate()


def test_isomorphism_counts():
    sl3 = build_presentation(build_root_datum("A2"), 1)
    sp4 = build_presentation(build_root_datum("C2"), 1)
    assert find_isomorphisms(sl3, sp4) == []
    assert len(find_isomorphisms(sl3, sl3)) == 2
    assert len(find_isomorphisms(sl3, sl3, require_lambda=True)) == 2
    assert len(find_isomorphisms(sp4, sp4)) == 1


def test_sl3_automorphisms_are_identity_and_dual():
    sl3 = build_presentation(build_root_datum("A2"), 1)
    maps = find_isomorphisms(sl3, sl3)
    assert {m["V(1,0)"] for m in maps} == {"V(1,0)", "V(0,1)"}
    for m in maps:
        assert m["V(0,0)"] == "V(0,0)"


def test_bound_mismatch_rejected():
    a = build_presentation(build_root_datum("A2"), 1)
    b = build_presentation(build_root_datum("A2"), 2)
    with pytest.raises(ReconstructError):
        find_isomorphisms(a, b)


def test_disconnected_subsemirings(sl3_flip):
    p = build_presentation(sl3_flip, 1)
    assert p.labels == ["V(0,0)+", "V(0,0)-", "Ind(1,0|0,1)", "V(1,1)+", "V(1,1)-"]
    subs, warnings = normal_subsemirings(p)
    got = [s.labels for s in subs]
    assert ("V(0,0)+", "V(0,0)-") in got
    assert got[0] == ("V(0,0)+",) and got[-1] == tuple(p.labels)
    assert warnings


def test_phi_found_without_lambda_rejected_with_lambda(sl3_flip):
    p = build_presentation(sl3_flip, 2)
    phi = phi_bijection(p)
    plain = find_isomorphisms(p, p)
    assert len(plain) == 2 and phi in plain
    strict = find_isomorphisms(p, p, require_lambda=True)
    assert len(strict) == 1 and phi not in strict
    assert commutes_with_adams(p, p, strict[0])
    assert not commutes_with_adams(p, p, phi)


def test_functor_isomorphisms_one_class(sl3_flip):
    f = build_functor_data(sl3_flip, 1)
    classes = functor_isomorphisms(f, f, require_lambda=True)
    assert len(classes) == 1 and classes[0].size == 2
    json.dumps(f.to_json())


def test_functor_isomorphisms_control(sl3_flip):
    f = build_functor_data(sl3_flip, 1)
    trivial = DisconnectedGroup(sl3_flip.datum, DiagramAutomorphism((0, 1)), order=2)
    assert functor_isomorphisms(f, build_functor_data(trivial, 1), require_lambda=True) == []


def test_functor_connected_shape():
    f = build_functor_data(build_root_datum("A2"), 1)
    assert f.gamma_order == 1
    assert len(functor_isomorphisms(f, f)) == 2


def test_component_preflight():
    a2 = build_root_datum("A2")
    info = ComponentData(a2, named_automorphism(a2, "flip"), 2).preflight()
    assert info == {"center": [3], "H2": [], "class_trivial": True}
    a3 = build_root_datum("A3")
    info = ComponentData(a3, named_automorphism(a3, "flip"), 2, (1,)).preflight()
    assert info["center"] == [4] and info["H2"] == [2] and not info["class_trivial"]
    with pytest.raises(ReconstructError):
        ComponentData(a3, named_automorphism(a3, "flip"), 2, (1, 0)).preflight()
