import itertools

from trilie import LieDerPair, QArray, ThreeLieAlgebra, adjoint, semidirect_pair, trivial_representation
from trilie.representations import (
    PairRepresentation,
    Representation,
    check_pair_representation,
    check_representation,
    semidirect,
    semidirect_derivation_report,
)
from trilie.threelie import check_derivation, check_fundamental_identity

import oracles as O
from helpers import rmatrix


def _oracle_pair_ok(pair, prep):
    return O.is_pair_representation(O.fr(pair.algebra.structure), O.fr(pair.theta),
                                     O.fr(prep.rep.full), O.fr(prep.theta_V))


def test_zero_rho_on_abelian():
    ab = ThreeLieAlgebra.abelian(3)
    assert check_representation(ab, Representation(3, 2)).ok
    p = LieDerPair(ab, QArray.of([[1, 2, 0], [0, 1, 0], [3, 0, 0]]))
    a = adjoint(p)
    assert a.rho.is_zero() and a.theta_V == p.theta
    assert check_pair_representation(p, trivial_representation(3, 2, QArray.of([[1, 1], [0, 2]]))).ok


def test_adjoint_is_a_pair_representation(example_pairs):
    for p in example_pairs:
        a = adjoint(p)
        assert check_representation(p.algebra, a.rep).ok
        assert check_pair_representation(p, a).ok
        assert _oracle_pair_ok(p, a)


def test_identity_rho_fails_first_identity(example):
    rep = Representation(4, 2, {P: QArray.identity(2) for P in itertools.combinations(range(4), 2)})
    r = check_representation(example, rep)
    assert not r.ok
    assert not r.parts[0].ok
    assert not O.fi_holds(O.semidirect(O.fr(example.structure), O.fr(rep.full)))


def test_broken_theta_compatibility(example_pairs, der_basis):
    p = example_pairs[1]
    bad = PairRepresentation(adjoint(p).rep, der_basis[1])
    r = check_pair_representation(p, bad)
    assert not r.ok and r.witness is not None
    assert not _oracle_pair_ok(p, bad)
    assert not semidirect_derivation_report(p, bad).ok


def test_random_reps_against_oracle(example, rng):
    """Sparse random rho on the example; validity is decided by the semidirect oracle."""
    seen = set()
    for _ in range(8):
        blocks = {}
        for P in itertools.combinations(range(4), 2):
            if rng.random() < 0.3:
                blocks[P] = rmatrix(rng, 1, 1, span=1)
        rep = Representation(4, 1, blocks)
        ok = check_representation(example, rep).ok
        seen.add(ok)
        assert ok == O.fi_holds(O.semidirect(O.fr(example.structure), O.fr(rep.full)))
    assert True in seen


def test_semidirect(example, example_pairs):
    zero = semidirect(example, Representation(4, 2))
    c = O.fr(zero.structure)
    assert all(c[i][j][k][l] == 0 for i, j, k, l in itertools.product(range(6), repeat=4)
               if max(i, j, k, l) >= 4)
    big = semidirect(example, adjoint(example_pairs[0]).rep)
    assert big.dim == 8 and check_fundamental_identity(big).ok
    assert O.fi_holds(O.fr(big.structure))
    bad = Representation(4, 2, {(0, 1): QArray.identity(2), (2, 3): QArray.identity(2)})
    if not check_representation(example, bad).ok:
        assert not check_fundamental_identity(semidirect(example, bad)).ok
    for p in example_pairs:
        sp = semidirect_pair(p, adjoint(p))
        assert check_derivation(sp.algebra, sp.theta).ok
    zp = semidirect_pair(example_pairs[0], trivial_representation(4, 1))
    assert zp.theta.is_zero()
