"""Shuffles, the composition P o Q, the graded bracket and Maurer-Cartan elements.

A cochain in C^{p+1}(L; L) has p pair slots; p is its shifted degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .cochains import PairCochain, PlainCochain
from .qarray import QArray, einsum
from .report import Report
from .threelie import (
    ThreeLieAlgebra,
    check_derivation,
    check_fundamental_identity,
    derivation_defect,
    pair_arrays,
    skew_defect_3,
    wedge_tensor,
)

_LABELS = "abcdefghijklmn"


@dataclass(frozen=True)
class Shuffle:
    """An (i, j)-shuffle as the 1-based image sequence sigma(1), ..., sigma(i+j)."""

    i: int
    j: int
    images: tuple[int, ...]
    sign: int


def _inversion_sign(seq) -> int:
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def shuffles(i: int, j: int) -> tuple[Shuffle, ...]:
    """All (i, j)-shuffles in lexicographic order of their image sequences."""
    if i < 0 or j < 0:
        raise ValueError("shuffle block sizes must be non-negative")
    n = i + j
    out = []
    for first in itertools.combinations(range(1, n + 1), i):
        rest = tuple(k for k in range(1, n + 1) if k not in first)
        images = tuple(first) + rest
        out.append(Shuffle(i, j, images, _inversion_sign(images)))
    return tuple(out)


HomCochain = PlainCochain


def _dim_of(L: Union[ThreeLieAlgebra, int]) -> int:
    return L.dim if isinstance(L, ThreeLieAlgebra) else int(L)


def _check_hom(L, P: PlainCochain) -> int:
    n = _dim_of(L)
    if P.algebra_dim != n or P.module_dim != n:
        raise ValueError(f"expected a cochain with values in the {n}-dimensional algebra itself")
    return n


def _insertion_tensor(Q: PlainCochain) -> QArray:
    """T[Q-slots, S, R]: Q(.., x) ^ y + x ^ Q(.., y) for the pair S = x ^ y, in pair coordinates R."""
    n = Q.algebra_dim
    a, b = pair_arrays(n)
    W = wedge_tensor(n)
    Wb = QArray(np.moveaxis(W.num[:, b, :], 1, 0), W.den)  # [S, i, R] = W[i, b(S), R]
    Wa = QArray(W.num[a, :, :], W.den)  # [S, j, R] = W[a(S), j, R]
    qa = Q.tensor.take(a, axis=Q.degree - 1)  # [..., S, i]
    qb = Q.tensor.take(b, axis=Q.degree - 1)
    lead = _LABELS[: Q.degree - 1]
    return einsum(f"{lead}Si,SiR->{lead}SR", qa, Wb) + einsum(f"{lead}Sj,SjR->{lead}SR", qb, Wa)


def circ(L, P: PlainCochain, Q: PlainCochain) -> PlainCochain:
    """P o Q for P in C^{p+1}(L;L), Q in C^{q+1}(L;L); the result lies in C^{p+q+1}."""
    n = _check_hom(L, P)
    _check_hom(L, Q)
    p, q = P.degree - 1, Q.degree - 1
    X = _LABELS[: p + q]
    out_sub = X + "zo"
    acc = QArray.zeros((n * (n - 1) // 2,) * (p + q) + (n, n))
    if p >= 1 and (P.is_zero() or Q.is_zero()):
        return PlainCochain(p + q + 1, n, n, acc)
    if p >= 1:
        T = _insertion_tensor(Q)
        for k in range(1, p + 1):
            outer = -1 if ((k - 1) * q) % 2 else 1
            for sh in shuffles(k - 1, q):
                lab = [X[s - 1] for s in sh.images]
                p_slots = lab[: k - 1] + ["R"] + [X[t] for t in range(k + q, p + q)]
                q_slots = lab[k - 1:] + [X[k + q - 1]]
                sub = f"{''.join(p_slots)}zo,{''.join(q_slots)}R->{out_sub}"
                term = einsum(sub, P.tensor, T)
                acc = acc + term if outer * sh.sign > 0 else acc - term
    outer = -1 if (p * q) % 2 else 1
    for sh in shuffles(p, q):
        lab = [X[s - 1] for s in sh.images]
        sub = f"{''.join(lab[:p])}wo,{''.join(lab[p:])}zw->{out_sub}"
        term = einsum(sub, P.tensor, Q.tensor)
        acc = acc + term if outer * sh.sign > 0 else acc - term
    return PlainCochain(p + q + 1, n, n, acc)


def bracket3lie(L, P: PlainCochain, Q: PlainCochain) -> PlainCochain:
    """[P, Q] = P o Q - (-1)^{pq} Q o P."""
    p, q = P.degree - 1, Q.degree - 1
    pq = circ(L, P, Q)
    qp = circ(L, Q, P)
    return pq + qp if (p * q) % 2 else pq - qp


def _zero_like(n: int, degree: int) -> PlainCochain:
    return PlainCochain(degree, n, n)


def bracket_pair(L, a: PairCochain, b: PairCochain) -> PairCochain:
    """[(a_p, b_{p-1}), (a_q, b_{q-1})] = ([a_p, a_q], (-1)^{p+1}[a_p, b_{q-1}] + [b_{p-1}, a_q])."""
    n = _dim_of(L)
    p, q = a.degree, b.degree
    top = bracket3lie(L, a.alpha, b.alpha)
    if p + q - 1 == 1:
        return PairCochain(top)
    low = _zero_like(n, p + q - 2)
    if b.beta is not None:
        t = bracket3lie(L, a.alpha, b.beta)
        low = low + t if (p + 1) % 2 == 0 else low - t
    if a.beta is not None:
        low = low + bracket3lie(L, a.beta, b.alpha)
    return PairCochain(top, low)


def structure_cochain(L: ThreeLieAlgebra) -> PlainCochain:
    """The bracket of L as an element of C^2(L; L)."""
    return PlainCochain.from_trilinear(L.structure)


def is_maurer_cartan(n: int, omega, phi) -> Report:
    """(omega, phi) is Maurer-Cartan iff [omega, omega] = 0 and [omega, phi] = 0."""
    omega = QArray.of(omega)
    phi = QArray.of(phi)
    if omega.shape != (n, n, n, n) or phi.shape != (n, n):
        raise ValueError(f"omega must be {(n,) * 4} and phi {(n, n)}")
    bad = skew_defect_3(omega)
    if bad is not None:
        raise ValueError(f"omega is not totally skew-symmetric at {bad}")
    w = PlainCochain.from_trilinear(omega)
    f = PlainCochain.from_map(phi)
    ww = bracket3lie(n, w, w)
    wf = bracket3lie(n, w, f)
    parts = [
        Report.passed("[omega,omega]") if ww.is_zero() else Report.failed("[omega,omega]", ww.tensor.first_nonzero()),
        Report.passed("[omega,phi]") if wf.is_zero() else Report.failed("[omega,phi]", wf.tensor.first_nonzero()),
    ]
    # [omega, phi](x, y, z) = omega(phi x, y, z) + omega(x, phi y, z) + omega(x, y, phi z) - phi(omega(x, y, z))
    pointwise = PlainCochain.from_trilinear(-derivation_defect(omega, phi))
    agree = pointwise == wf
    report = Report.combine("Maurer-Cartan", parts, pointwise_agrees=agree)
    if not agree:
        return Report("Maurer-Cartan", False, ("pointwise disagreement", None), {"pointwise_agrees": False}, report.parts)
    return report


def structure_report(n: int, omega, phi) -> Report:
    """Fundamental Identity plus derivation check for (omega, phi), for comparison with MC."""
    L = ThreeLieAlgebra.from_tensor(QArray.of(omega), check=False)
    if L.dim != n:
        raise ValueError("dimension mismatch")
    return Report.combine("3-LieDer pair", [check_fundamental_identity(L), check_derivation(L, phi)])
