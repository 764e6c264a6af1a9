import itertools

import pytest

from oracles import type_a_character, weyl_formula_character
from reprings.characters import (BudgetExceeded, CharacterError, FormalCharacter, compose,
                                 decompose, dominant_enough, irreducible_character,
                                 kostant_partition, prv_multiplicity_check, tensor_multiplicity,
                                 weyl_dimension)
from reprings.rootdata import build_root_datum, parse_type


@pytest.mark.parametrize("t", ["A1", "A2", "A3", "B2", "C3", "G2", "A1xA1"])
def test_freudenthal_matches_weyl_formula(t):
    d = build_root_datum(t)
    c = parse_type(t)
    top = 3 if d.rank <= 2 else 1
    for w in itertools.product(range(top + 1), repeat=d.rank):
        chi = irreducible_character(d, w)
        assert chi.terms == weyl_formula_character(c, w)
        assert chi.dimension() == weyl_dimension(d, w)


def test_type_a_matrix_model_characters():
    for n, w in [(2, (1, 1)), (2, (2, 1)), (3, (0, 1, 0)), (3, (1, 0, 1))]:
        d = build_root_datum(f"A{n}")
        assert irreducible_character(d, w).terms == type_a_character(n, w)


def test_adjoint_sl3():
    chi = irreducible_character(build_root_datum("A2"), (1, 1))
    assert chi.dimension() == 8
    assert chi.mult((0, 0)) == 2


def test_unit_character():
    d = build_root_datum("A2")
    assert irreducible_character(d, (0, 0)) == FormalCharacter.unit(d)


def test_decompose_roundtrip_and_order():
    d = build_root_datum("A2")
    x = irreducible_character(d, (1, 0)) * irreducible_character(d, (0, 1))
    dec = decompose(x)
    assert dec == [((1, 1), 1), ((0, 0), 1)]
    assert compose(d, dec) == x


def test_decompose_rejects_non_invariant():
    d = build_root_datum("A1")
    with pytest.raises(CharacterError):
        decompose(FormalCharacter(d, {(1,): 1}))


def test_non_dominant_weight_rejected():
    with pytest.raises(CharacterError):
        irreducible_character(build_root_datum("A2"), (-1, 0))


def test_tensor_multiplicity_matches_decomposition():
    for t in ["A2", "B2", "G2"]:
        d = build_root_datum(t)
        for a, b in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
            dec = dict(decompose(irreducible_character(d, a) * irreducible_character(d, b)))
            for nu in dec:
                assert tensor_multiplicity(d, a, b, nu) == dec[nu]


def test_g2_seven_squared():
    d = build_root_datum("G2")
    seven = [w for w in [(1, 0), (0, 1)] if weyl_dimension(d, w) == 7][0]
    x = irreducible_character(d, seven) * irreducible_character(d, seven)
    dims = sorted(weyl_dimension(d, w) * m for w, m in decompose(x))
    assert dims == [1, 7, 14, 27]


def test_kostant_partition_small():
    d = build_root_datum("A2")
    # alpha1 + alpha2 = (alpha1) + (alpha2) or the highest root
    assert kostant_partition(d, (1, 1)) == 2
    assert kostant_partition(d, (2, 2)) == 3
    with pytest.raises(BudgetExceeded):
        kostant_partition(build_root_datum("A3"), (20, 20, 20), limit=50)


def test_prv_examples():
    d = build_root_datum("A2")
    assert prv_multiplicity_check(d, (3, 3), (3, 3), (-1, -1)) == (2, 2, True)
    assert prv_multiplicity_check(d, (3, 3), (3, 3), (0, 0)) == (1, 1, True)
    # not dominant enough: the bound fails and so may the equality
    tens, pbw, _ = prv_multiplicity_check(d, (1, 0), (0, 1), (-1, -1))
    assert pbw == 2 and tens == 1
    assert dominant_enough(d, (3, 3), (3, 3), (-1, -1))
    assert not dominant_enough(d, (1, 0), (0, 1), (-1, -1))


def test_prv_dominant_enough_sweep():
    d = build_root_datum("B2")
    for eta_root in [(1, 0), (0, 1), (1, 1), (1, 2)]:
        eta = tuple(-x for x in d.root_to_weight(eta_root))
        lam = mu = (6, 6)
        assert dominant_enough(d, lam, mu, eta)
        assert prv_multiplicity_check(d, lam, mu, eta)[2]


def test_prv_rejects_non_root_lattice():
    with pytest.raises(CharacterError):
        prv_multiplicity_check(build_root_datum("A2"), (1, 0), (1, 0), (-1, 0))
