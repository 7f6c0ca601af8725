"""Random sampling of valid and invalid test data."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from trilie import LieDerPair, QArray, ThreeLieAlgebra, derivation_space, example_algebra
from trilie.cochains import PairCochain, PlainCochain, plain_dim
from trilie.threelie import transport


def rat(rng: random.Random, span: int = 3, dens=(1, 1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(dens))


def rmatrix(rng, r, c, span=3, dens=(1,)) -> QArray:
    return QArray.of([[rat(rng, span, dens) for _ in range(c)] for _ in range(r)])


def rvector(rng, k, span=3, dens=(1,)) -> QArray:
    return QArray.of([rat(rng, span, dens) for _ in range(k)])


def skew3(rng, n, out, span=2, density=0.5) -> QArray:
    """Random totally skew trilinear tensor t[x, y, z, o]."""
    t = np.zeros((n, n, n, out), dtype=object)
    t[...] = Fraction(0)
    for i, j, k in itertools.combinations(range(n), 3):
        for o in range(out):
            if rng.random() < density:
                v = rat(rng, span)
                for perm in itertools.permutations(range(3)):
                    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
                    idx = tuple((i, j, k)[p] for p in perm)
                    t[idx + (o,)] = -v if inv % 2 else v
    return QArray.of(t) if t.size else QArray.zeros(t.shape)


def unimodular(rng, n) -> QArray:
    """Random integer matrix of determinant +-1 (product of elementary matrices)."""
    g = np.eye(n, dtype=np.int64)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            g[i] += rng.choice([-1, 1]) * g[j]
    return QArray(g)


def valid_algebras(rng) -> list[ThreeLieAlgebra]:
    """A mix of known 3-Lie algebras in dimensions 3 and 4 (FI holds by construction)."""
    out = [example_algebra(), ThreeLieAlgebra.abelian(3), ThreeLieAlgebra.abelian(4)]
    out.append(ThreeLieAlgebra(3, {(0, 1, 2): [1, 0, 0]}))
    out.append(ThreeLieAlgebra(3, {(0, 1, 2): [rat(rng), rat(rng), rat(rng)]}))
    out.append(ThreeLieAlgebra(4, {(0, 1, 2): [0, 0, 0, 1]}))
    out.append(ThreeLieAlgebra(4, {(1, 2, 3): [1, 0, 0, 0]}))
    out.append(transport(example_algebra(), unimodular(rng, 4)))
    return out


def random_derivation(rng, L: ThreeLieAlgebra, basis=None) -> QArray:
    basis = basis if basis is not None else derivation_space(L)
    n = L.dim
    D = QArray.zeros((n, n))
    for B in basis:
        D = D + B.scale(rat(rng, 2))
    return D


def random_pair(rng, L=None) -> LieDerPair:
    L = L or rng.choice(valid_algebras(rng))
    return LieDerPair(L, random_derivation(rng, L))


def random_plain(rng, p, n, v, span=2) -> PlainCochain:
    return PlainCochain.from_vector(p, n, v, rvector(rng, plain_dim(p, n, v), span))


def random_pair_cochain(rng, p, n, v, span=2) -> PairCochain:
    k = plain_dim(p, n, v) + (plain_dim(p - 1, n, v) if p > 1 else 0)
    return PairCochain.from_vector(p, n, v, rvector(rng, k, span))


def random_combination(rng, vectors, span=2):
    """A random rational combination of a nonempty list of cochains or arrays."""
    acc = None
    for v in vectors:
        c = rat(rng, span)
        term = v.scale(c)
        acc = term if acc is None else acc + term
    return acc
