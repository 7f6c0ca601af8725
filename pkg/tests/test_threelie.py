import itertools
import random
from fractions import Fraction

import pytest

from trilie import LieDerPair, QArray, ThreeLieAlgebra, check_derivation, check_fundamental_identity
from trilie.threelie import (
    bracket,
    check_leibniz_and_fun,
    check_pair_morphism,
    derivation_space,
    fundamental_bracket,
    transport,
    wedge,
    wedge_derivation_action,
)

import oracles as O
from helpers import rmatrix, skew3, valid_algebras


def e(n, i):
    return QArray.of([int(k == i) for k in range(n)])


def test_example_brackets(example):
    e1, e2, e3, e4 = (e(4, i) for i in range(4))
    assert bracket(example, e1, e2, e3) == e4
    assert bracket(example, e2, e1, e3) == -e4
    x, y = QArray.of([1, 2, 0, -1]), QArray.of([0, 1, 3, 1])
    assert bracket(example, x, x, y).is_zero()


def test_bracket_matches_oracle(example, rng):
    C = O.fr(example.structure)
    for _ in range(10):
        x, y, z = (QArray.of([rng.randint(-3, 3) for _ in range(4)]) for _ in range(3))
        assert O.fr(bracket(example, x, y, z)) == O.br(C, O.fr(x), O.fr(y), O.fr(z))


def test_fi_on_known_algebras(rng):
    for L in valid_algebras(rng):
        assert check_fundamental_identity(L).ok
        assert O.fi_holds(O.fr(L.structure))
    L = ThreeLieAlgebra(3, {(0, 1, 2): [1, 0, 0]})
    assert check_fundamental_identity(L).ok == O.fi_holds(O.fr(L.structure))


def test_fi_agrees_with_oracle_on_random_brackets(rng):
    fails = 0
    for _ in range(15):
        n = rng.choice([3, 4])
        c = skew3(rng, n, n, density=0.4)
        L = ThreeLieAlgebra.from_tensor(c, check=False)
        rep = check_fundamental_identity(L)
        assert rep.ok == O.fi_holds(O.fr(c))
        if not rep.ok:
            fails += 1
            assert rep.witness is not None
            lein = check_leibniz_and_fun(L)
            assert not lein.ok
    assert fails > 0
    with pytest.raises(ValueError):
        ThreeLieAlgebra(4, {(0, 1, 2): [1, 0, 0, 0], (0, 1, 3): [0, 0, 1, 1]})


def test_fundamental_bracket_examples(example):
    e1, e2, e3, e4 = (e(4, i) for i in range(4))
    assert fundamental_bracket(example, wedge(e1, e2), wedge(e3, e4)).is_zero()
    assert fundamental_bracket(example, wedge(e1, e2), wedge(e1, e3)) == wedge(e1, e4)
    ab = ThreeLieAlgebra.abelian(4)
    assert fundamental_bracket(ab, wedge(e1, e2), wedge(e3, e4)).is_zero()
    assert check_leibniz_and_fun(example).ok
    assert check_leibniz_and_fun(ab).ok


def test_derivation_space_printed_shape(example, der_basis):
    assert len(der_basis) == 6
    for D in der_basis:
        d = O.fr(D)
        assert all(d[i][i] == 0 for i in range(4))
        assert d[1][0] == d[0][1] and d[2][0] == -d[0][2] and d[3][0] == d[0][3]
        assert d[2][1] == d[1][2] and d[3][1] == -d[1][3] and d[3][2] == d[2][3]
        assert O.is_derivation(O.fr(example.structure), d)
    # the six free parameters (1,2),(1,3),(1,4),(2,3),(2,4),(3,4) are independent
    coords = [[O.fr(D)[i][j] for i, j in itertools.combinations(range(4), 2)] for D in der_basis]
    assert O.rank(coords) == 6


def test_derivation_space_dims(rng):
    assert len(derivation_space(ThreeLieAlgebra.abelian(3))) == 9
    assert len(derivation_space(ThreeLieAlgebra.abelian(1))) == 1
    assert len(derivation_space(ThreeLieAlgebra.abelian(0))) == 0
    for L in valid_algebras(rng):
        assert len(derivation_space(L)) == O.derivation_dim(O.fr(L.structure))


def test_check_derivation_against_oracle(example, rng):
    C = O.fr(example.structure)
    hits = 0
    for _ in range(20):
        D = rmatrix(rng, 4, 4, span=1)
        rep = check_derivation(example, D)
        assert rep.ok == O.is_derivation(C, O.fr(D))
        hits += rep.ok
        if not rep.ok:
            assert rep.witness is not None
    with pytest.raises(ValueError):
        LieDerPair(example, QArray.identity(4))


def test_pair_morphisms(example):
    p = LieDerPair(example)
    assert check_pair_morphism(p, p, QArray.identity(4)).ok
    zero = LieDerPair(ThreeLieAlgebra.abelian(0))
    assert check_pair_morphism(p, zero, QArray.zeros((0, 4))).ok
    swap = QArray.of([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    # oracle: [s e_i, s e_j, s e_k] == s [e_i, e_j, e_k] on all basis triples
    C = O.fr(example.structure)
    S = O.fr(swap)
    want = all(
        O.br(C, O.apply(S, O.basis(4, i)), O.apply(S, O.basis(4, j)), O.apply(S, O.basis(4, k)))
        == O.apply(S, O.br(C, O.basis(4, i), O.basis(4, j), O.basis(4, k)))
        for i, j, k in itertools.combinations(range(4), 3)
    )
    rep = check_pair_morphism(p, p, swap)
    assert rep.ok == want
    assert not rep.ok and rep.witness is not None


def test_wedge_derivation_action(example, der_basis):
    p0 = LieDerPair(example)
    X = wedge(e(4, 0), e(4, 2))
    assert wedge_derivation_action(p0, X).is_zero()
    ab = LieDerPair(ThreeLieAlgebra.abelian(3), QArray.identity(3))
    Y = wedge(e(3, 0), e(3, 1))
    assert wedge_derivation_action(ab, Y) == Y.scale(2)
    for D in der_basis:
        p = LieDerPair(example, D)
        for (i, j), (k, l) in itertools.product(itertools.combinations(range(4), 2), repeat=2):
            A, B = wedge(e(4, i), e(4, j)), wedge(e(4, k), e(4, l))
            lhs = wedge_derivation_action(p, fundamental_bracket(example, A, B))
            rhs = fundamental_bracket(example, wedge_derivation_action(p, A), B) + \
                fundamental_bracket(example, A, wedge_derivation_action(p, B))
            assert lhs == rhs


def test_transport_preserves_fi_and_derivation_count():
    r = random.Random(5)
    from helpers import unimodular
    from trilie import example_algebra
    for _ in range(3):
        g = unimodular(r, 4)
        L = transport(example_algebra(), g)
        assert check_fundamental_identity(L).ok
        assert len(derivation_space(L)) == 6
        assert check_pair_morphism(LieDerPair(example_algebra()), LieDerPair(L), g).ok


def test_rational_brackets_stay_exact():
    L = ThreeLieAlgebra(3, {(0, 1, 2): [Fraction(1, 3), Fraction(-2, 7), 0]})
    assert check_fundamental_identity(L).ok
    v = bracket(L, e(3, 0), e(3, 1), e(3, 2))
    assert O.fr(v) == [Fraction(1, 3), Fraction(-2, 7), 0]
