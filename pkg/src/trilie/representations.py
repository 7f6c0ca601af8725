"""Representations of 3-Lie algebras and of 3-LieDer pairs, semidirect products."""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from .qarray import QArray, einsum
from .report import Report
from .threelie import (
    LieDerPair,
    ThreeLieAlgebra,
    _first_violation,
    check_derivation,
    pair_arrays,
    pair_count,
    pair_index,
    wedge_derivation_matrix,
)


def _full_from_pairs(R: QArray, n: int) -> QArray:
    """Skew extension ``Rf[a, b, w, v]`` of a pair-indexed tensor ``R[P, w, v]``."""
    tail = R.shape[1:]
    num = np.zeros((n, n) + tail, dtype=R.num.dtype)
    a, b = pair_arrays(n)
    if len(a):
        num[a, b] = R.num
        num[b, a] = -R.num
    return QArray(num, R.den)


class Representation:
    """``rho(e_i ^ e_j)`` as ``module_dim x module_dim`` matrices, i < j."""

    __slots__ = ("algebra_dim", "module_dim", "rho", "_full")

    def __init__(self, algebra_dim: int, module_dim: int, rho=None):
        n, m = int(algebra_dim), int(module_dim)
        self.algebra_dim, self.module_dim = n, m
        mp = pair_count(n)
        if rho is None:
            R = QArray.zeros((mp, m, m))
        elif isinstance(rho, Mapping):
            R = _pairs_dict_to_tensor(rho, n, m)
        else:
            R = QArray.of(rho)
        if R.shape != (mp, m, m):
            raise ValueError(f"rho must have shape {(mp, m, m)}, got {R.shape}")
        self.rho = R
        self._full = None

    @property
    def full(self) -> QArray:
        if self._full is None:
            self._full = _full_from_pairs(self.rho, self.algebra_dim)
        return self._full

    def matrix(self, i: int, j: int) -> QArray:
        """rho(e_i, e_j) for any i, j (skew extension)."""
        return self.full[i, j]

    def act(self, x, y) -> QArray:
        """rho(x, y) for vectors x, y."""
        return einsum("a,b,abwv->wv", QArray.of(x), QArray.of(y), self.full)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Representation)
            and self.algebra_dim == other.algebra_dim
            and self.module_dim == other.module_dim
            and self.rho == other.rho
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Representation(algebra_dim={self.algebra_dim}, module_dim={self.module_dim})"


def _pairs_dict_to_tensor(rho: Mapping, n: int, m: int) -> QArray:
    mp = pair_count(n)
    blocks = [QArray.zeros((m, m))] * mp
    for (i, j), mat in rho.items():
        mat = QArray.of(mat)
        if mat.shape != (m, m):
            raise ValueError(f"rho({i},{j}) must be {m}x{m}")
        if i < j:
            blocks[pair_index(i, j, n)] = mat
        elif j < i:
            blocks[pair_index(j, i, n)] = -mat
        elif not mat.is_zero():
            raise ValueError("rho(x, x) must vanish")
    if not blocks:
        return QArray.zeros((0, m, m))
    return QArray.stack(blocks)


class PairRepresentation:
    """A representation ``rho`` together with ``theta_V``."""

    __slots__ = ("rep", "theta_V")

    def __init__(self, rep: Representation, theta_V=None):
        self.rep = rep
        m = rep.module_dim
        self.theta_V = QArray.zeros((m, m)) if theta_V is None else QArray.of(theta_V)
        if self.theta_V.shape != (m, m):
            raise ValueError(f"theta_V must be {m}x{m}")

    @property
    def module_dim(self) -> int:
        return self.rep.module_dim

    @property
    def algebra_dim(self) -> int:
        return self.rep.algebra_dim

    @property
    def rho(self) -> QArray:
        return self.rep.rho

    def __eq__(self, other) -> bool:
        return isinstance(other, PairRepresentation) and self.rep == other.rep and self.theta_V == other.theta_V

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PairRepresentation(algebra_dim={self.algebra_dim}, module_dim={self.module_dim})"


def _check_dims(L: ThreeLieAlgebra, rep: Representation):
    if rep.algebra_dim != L.dim:
        raise ValueError(f"representation is over a {rep.algebra_dim}-dimensional algebra, not {L.dim}")


def check_representation(L: ThreeLieAlgebra, rep: Representation) -> Report:
    _check_dims(L, rep)
    c, rf = L.structure, rep.full
    first = (
        einsum("ijwu,kluv->ijklwv", rf, rf)
        - einsum("klwu,ijuv->ijklwv", rf, rf)
        - einsum("ijks,slwv->ijklwv", c, rf)
        - einsum("ijls,kswv->ijklwv", c, rf)
    )
    bad = _first_violation(first, lambda t: t[0] < t[1] and t[2] < t[3])
    r1 = Report.passed("first identity") if bad is None else Report.failed("first identity", bad[:4])
    second = (
        einsum("jkls,iswv->ijklwv", c, rf)
        - einsum("klwu,ijuv->ijklwv", rf, rf)
        + einsum("jlwu,ikuv->ijklwv", rf, rf)
        - einsum("jkwu,iluv->ijklwv", rf, rf)
    )
    bad = _first_violation(second, lambda t: t[1] < t[2] < t[3])
    r2 = Report.passed("second identity") if bad is None else Report.failed("second identity", bad[:4])
    return Report.combine("representation", [r1, r2])


def pair_rep_defect(pair: LieDerPair, prep: PairRepresentation) -> QArray:
    R = prep.rho
    tv = prep.theta_V
    t2 = wedge_derivation_matrix(pair.theta)
    return (
        einsum("wu,Puv->Pwv", tv, R)
        - einsum("Pwu,uv->Pwv", R, tv)
        - einsum("QP,Qwv->Pwv", t2, R)
    )


def check_pair_representation(pair: LieDerPair, prep: PairRepresentation) -> Report:
    _check_dims(pair.algebra, prep.rep)
    parts = [check_representation(pair.algebra, prep.rep)]
    if pair_count(pair.dim) == 0:
        parts.append(Report.passed("theta compatibility"))
    else:
        hit = pair_rep_defect(pair, prep).first_nonzero()
        if hit is None:
            parts.append(Report.passed("theta compatibility"))
        else:
            a, b = pair_arrays(pair.dim)
            parts.append(Report.failed("theta compatibility", (int(a[hit[0]]), int(b[hit[0]]))))
    return Report.combine("pair representation", parts)


def adjoint_representation(L: ThreeLieAlgebra) -> Representation:
    # rho(e_a, e_b)[w, v] = coefficient of e_w in [e_a, e_b, e_v]
    return Representation(L.dim, L.dim, L.pair_action.transpose(0, 2, 1))


def adjoint(pair: LieDerPair) -> PairRepresentation:
    return PairRepresentation(adjoint_representation(pair.algebra), pair.theta)


def trivial_representation(n: int, m: int, theta_V=None) -> PairRepresentation:
    return PairRepresentation(Representation(n, m), theta_V)


def semidirect_tensor(L: ThreeLieAlgebra, rep: Representation) -> QArray:
    n, m = L.dim, rep.module_dim
    N = n + m
    c, rf = L.structure, rep.full
    den = c.den * rf.den
    cn = c.num * rf.den
    rn = rf.num * c.den
    dtype = object if (cn.dtype == object or rn.dtype == object) else np.int64
    num = np.zeros((N, N, N, N), dtype=dtype)
    num[:n, :n, :n, :n] = cn
    # [x, y, v] = rho(x, y) v and its skew images
    block = np.transpose(rn, (0, 1, 3, 2))  # [a, b, v, w]
    num[:n, :n, n:, n:] = block
    num[:n, n:, :n, n:] = -np.transpose(block, (0, 2, 1, 3))
    num[n:, :n, :n, n:] = np.transpose(block, (2, 0, 1, 3))
    return QArray(num, den)


def semidirect(L: ThreeLieAlgebra, rep: Representation, *, check: bool = False) -> ThreeLieAlgebra:
    """L + V with [x1+v1, x2+v2, x3+v3] = [x1,x2,x3] + rho(x1,x2)v3 + rho(x3,x1)v2 + rho(x2,x3)v1."""
    _check_dims(L, rep)
    return ThreeLieAlgebra.from_tensor(semidirect_tensor(L, rep), check=check)


def block_diag(a: QArray, b: QArray) -> QArray:
    a, b = QArray.of(a), QArray.of(b)
    top = QArray.concatenate([a, QArray.zeros((a.shape[0], b.shape[1]))], axis=1)
    bottom = QArray.concatenate([QArray.zeros((b.shape[0], a.shape[1])), b], axis=1)
    return QArray.concatenate([top, bottom], axis=0)


def semidirect_pair(pair: LieDerPair, prep: PairRepresentation, *, check: bool = True) -> LieDerPair:
    total = semidirect(pair.algebra, prep.rep)
    return LieDerPair(total, block_diag(pair.theta, prep.theta_V), check=check)


def semidirect_derivation_report(pair: LieDerPair, prep: PairRepresentation) -> Report:
    """Whether theta_L + theta_V is a derivation of the semidirect product."""
    total = semidirect_pair(pair, prep, check=False)
    return check_derivation(total.algebra, total.theta)


def rep_from_matrices(n: int, m: int, mats: Optional[Mapping] = None) -> Representation:
    return Representation(n, m, dict(mats or {}))
