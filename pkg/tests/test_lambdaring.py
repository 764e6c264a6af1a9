import random

import pytest

from corpora import random_character
from oracles import lambda_by_subsets
from reprings.characters import (CharacterError, FormalCharacter, decompose, irreducible_character)
from reprings.lambdaring import (adams, adams_from_lambdas, exterior_power, exterior_powers,
                                 lambda_table, lambda_table_json)
from reprings.rootdata import build_root_datum


def test_exterior_square_of_standard_sl4():
    d = build_root_datum("A3")
    x = exterior_power(irreducible_character(d, (1, 0, 0)), 2)
    assert decompose(x) == [((0, 1, 0), 1)]


def test_exterior_square_of_sl2_adjoint():
    d = build_root_datum("A1")
    assert decompose(exterior_power(irreducible_character(d, (2,)), 2)) == [((2,), 1)]


def test_adams_square_sl3():
    d = build_root_datum("A2")
    assert decompose(adams(irreducible_character(d, (1, 0)), 2)) == [((2, 0), 1), ((0, 1), -1)]


def test_top_exterior_power_is_determinant():
    d = build_root_datum("A2")
    x = irreducible_character(d, (1, 1))
    lams = exterior_powers(x, 9)
    assert lams[8] == FormalCharacter.unit(d)
    assert lams[9].is_zero()


def test_adams_from_lambdas_roundtrip():
    d = build_root_datum("B2")
    x = irreducible_character(d, (1, 0))
    lams = exterior_powers(x, 4)
    for n in range(1, 5):
        assert adams_from_lambdas(lams, n) == adams(x, n)


def test_adams_rejects_nonpositive():
    d = build_root_datum("A1")
    with pytest.raises(CharacterError):
        adams(FormalCharacter.unit(d), 0)
    with pytest.raises(CharacterError):
        exterior_power(FormalCharacter.unit(d), -1)


def test_random_lambda_laws():
    rng = random.Random(20261016)
    data = [build_root_datum(t) for t in ["A1", "A2", "B2", "A3", "C3"]]
    small = 0
    for trial in range(200):
        d = data[trial % len(data)]
        x = random_character(rng, d)
        y = random_character(rng, d, 10)
        for n in (1, 2, 3):
            for m in (1, 2, 3):
                assert adams(adams(x, n), m) == adams(x, n * m)
            assert adams(x * y, n) == adams(x, n) * adams(y, n)
        if x.dimension() <= 10:
            small += 1
            lams = exterior_powers(x, x.dimension())
            for k, lam in enumerate(lams):
                assert lam.terms == lambda_by_subsets(x.terms, k)
        else:
            lams = exterior_powers(x, 3)
    assert small >= 10


def test_lambda_table_keys_and_budget(monkeypatch):
    d = build_root_datum("A1")
    entries = lambda_table(d, 2, k_max=2, n_max=2)
    table = lambda_table_json(entries)
    assert table["lambda:2:1"] == [{"weight": [0], "mult": 1}]
    assert table["psi:2:1"] == [{"weight": [2], "mult": 1}, {"weight": [0], "mult": -1}]
    assert table["lambda:1:2"] == [{"weight": [2], "mult": 1}]
    monkeypatch.setenv("REPRINGS_BUDGET", "5")
    with pytest.raises(CharacterError, match="weight"):
        lambda_table(build_root_datum("A2"), 3, k_max=3)
