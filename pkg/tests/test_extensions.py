import pytest

from trilie import (
    CochainComplex,
    ExtensionCocycle,
    LieDerPair,
    PairCochain,
    PlainCochain,
    QArray,
    ThreeLieAlgebra,
    build_extension,
    extensions_equivalent,
    extract_cocycle,
    semidirect_pair,
    trivial_representation,
)
from trilie.extensions import Section, check_extension, cocycle_report, extension_cocycles
from trilie.linalg import solve

import oracles as O
from helpers import rmatrix, skew3


def _combo(rng, basis):
    psi = QArray.zeros(basis[0].psi.shape)
    lam = QArray.zeros(basis[0].lam.shape)
    for c in basis:
        k = rng.randint(-2, 2)
        psi, lam = psi + c.psi.scale(k), lam + c.lam.scale(k)
    return ExtensionCocycle(psi, lam)


def _coboundary(B, prep, lam0):
    cx = CochainComplex(B, prep, max_degree=2)
    return ExtensionCocycle.from_pair_cochain(cx.partial(PairCochain(PlainCochain.from_map(lam0))))


def _oracle_total_ok(ext):
    C, th = O.fr(ext.total.algebra.structure), O.fr(ext.total.theta)
    return O.fi_holds(C) and O.is_derivation(C, th)


def _other_section(rng, ext):
    nB, nA = ext.base.dim, ext.theta_A.shape[0]
    h = rmatrix(rng, nA, nB, span=2)
    return Section(ext.canonical_section().s + ext.incl @ h)


@pytest.fixture(scope="module")
def setups(example_pairs):
    out = []
    for p in example_pairs[:3]:
        for ta in (0, 1):
            prep = trivial_representation(4, 1, QArray.of([[ta]]))
            out.append((p, prep, extension_cocycles(p, prep)))
    return out


def test_zero_cocycle_gives_semidirect(setups):
    for p, prep, _ in setups:
        ext = build_extension(p, prep, ExtensionCocycle.zero(4, 1))
        assert ext.total == semidirect_pair(p, prep)
        got_prep, coc = extract_cocycle(ext)
        assert coc == ExtensionCocycle.zero(4, 1) and got_prep == prep


def test_build_extract_roundtrip(setups, rng):
    for p, prep, basis in setups:
        assert len(basis) == 4
        for _ in range(2):
            coc = _combo(rng, basis)
            assert cocycle_report(p, prep, coc).ok
            ext = build_extension(p, prep, coc)
            assert check_extension(ext).ok
            assert _oracle_total_ok(ext)
            got_prep, got = extract_cocycle(ext)
            assert got == coc and got_prep == prep


def test_non_cocycle_breaks_the_total_space(example_pairs, rng):
    p = example_pairs[1]
    prep = trivial_representation(4, 1, QArray.of([[1]]))
    for _ in range(3):
        coc = ExtensionCocycle(skew3(rng, 4, 1, density=0.7), rmatrix(rng, 1, 4))
        ok = cocycle_report(p, prep, coc).ok
        ext = build_extension(p, prep, coc)
        assert check_extension(ext).ok == ok == _oracle_total_ok(ext)
        assert not ok


def test_sections_change_cocycle_by_a_coboundary(setups, rng):
    p, prep, basis = setups[3]
    coc = _combo(rng, basis)
    ext = build_extension(p, prep, coc)
    s2 = _other_section(rng, ext)
    _, c2 = extract_cocycle(ext, s2)
    cx = CochainComplex(p, prep, max_degree=2)
    diff = (coc.as_pair_cochain() - c2.as_pair_cochain()).vector()
    assert solve(cx.partial_matrix(1), diff) is not None
    with pytest.raises(ValueError):
        extract_cocycle(ext, Section(QArray.zeros((5, 4))))


def test_equivalence_of_cohomologous_cocycles(setups, rng):
    p, prep, basis = setups[1]
    coc = _combo(rng, basis)
    e1 = build_extension(p, prep, coc)
    same = extensions_equivalent(e1, e1)
    assert same.ok and same.details["lam"].is_zero()
    lam0 = rmatrix(rng, 1, 4, span=2)
    b = _coboundary(p, prep, lam0)
    coc2 = ExtensionCocycle(coc.psi + b.psi, coc.lam + b.lam)
    e2 = build_extension(p, prep, coc2)
    rep = extensions_equivalent(e1, e2)
    assert rep.ok
    lam = rep.details["lam"]
    # the witness is a primitive of the difference of the cocycles
    got = _coboundary(p, prep, lam)
    assert got == ExtensionCocycle(coc.psi - coc2.psi, coc.lam - coc2.lam)
    eta = rep.details["eta"]
    from trilie.threelie import check_pair_morphism
    assert check_pair_morphism(e1.total, e2.total, eta).ok
    assert eta @ e1.incl == e2.incl and e2.proj @ eta == e1.proj


def test_inequivalent_classes_on_a_three_dimensional_base(rng):
    B = LieDerPair(ThreeLieAlgebra(3, {(0, 1, 2): [1, 0, 0]}))
    prep = trivial_representation(3, 1)
    cx = CochainComplex(B, prep, max_degree=2)
    basis = extension_cocycles(B, prep) + [ExtensionCocycle.zero(3, 1)]
    h2 = cx.cohomology(2)["cohomology"]
    assert h2 > 0
    exts = [build_extension(B, prep, c) for c in basis]
    M1 = cx.partial_matrix(1)
    inequivalent = 0
    for i, ci in enumerate(basis):
        for j, cj in enumerate(basis):
            diff = (ci.as_pair_cochain() - cj.as_pair_cochain()).vector()
            cohomologous = solve(M1, diff) is not None
            rep = extensions_equivalent(exts[i], exts[j])
            assert rep.ok == cohomologous
            if not rep.ok:
                inequivalent += 1
                y = rep.details["certificate"]
                assert not (y @ diff).is_zero()
    assert inequivalent > 0
