"""Exact linear algebra over the rationals.

Elimination runs on integer numerators (fraction-free, each touched row
divided by its content after every pivot), so no rounding ever happens and
entries stay small on the structured matrices produced by cochain
operators.  Pivots are chosen as the first nonzero entry of each column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .qarray import QArray, _LIMIT, _as_object, _maxabs, as_vector

Matrix = QArray


def matrix(rows) -> QArray:
    """Build a matrix from nested rows of exact scalars."""
    m = QArray.of(rows)
    if m.ndim != 2:
        raise ValueError("a matrix needs two axes")
    return m


def _row_content(block: np.ndarray) -> np.ndarray:
    if block.dtype == object:
        return np.array([math.gcd(*[int(v) for v in row]) for row in block], dtype=object)
    return np.gcd.reduce(block, axis=1)


@dataclass(frozen=True)
class Echelon:
    """Integer row-reduced form: ``rows[i] / rows[i, pivots[i]]`` is row i of the RREF."""

    rows: np.ndarray
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.rows[i, j]), int(self.rows[i, self.pivots[i]]))


def echelon(m: QArray) -> Echelon:
    m = QArray.of(m)
    if m.ndim != 2:
        raise ValueError("echelon needs a matrix")
    a = np.array(m.num, copy=True)
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        below = np.flatnonzero(a[row:, col])
        if below.size == 0:
            continue
        p = row + int(below[0])
        if p != row:
            a[[row, p]] = a[[p, row]]
        prow = a[row]
        pv = prow[col]
        others = np.flatnonzero(a[:, col])
        others = others[others != row]
        if others.size:
            f = a[others, col]
            if a.dtype == object:
                g = np.array([math.gcd(int(pv), int(x)) for x in f], dtype=object)
            else:
                g = np.gcd(f, pv)
            mul_rows = pv // g
            mul_piv = f // g
            block = a[others]
            if a.dtype != object:
                bound = _maxabs(block) * _maxabs(mul_rows) + _maxabs(mul_piv) * _maxabs(prow)
                if bound >= _LIMIT:
                    a = _as_object(a)
                    prow = a[row]
                    block = a[others]
                    mul_rows = _as_object(np.asarray(mul_rows))
                    mul_piv = _as_object(np.asarray(mul_piv))
            block = block * mul_rows[:, None] - mul_piv[:, None] * prow[None, :]
            content = _row_content(block)
            content[content == 0] = 1
            a[others] = block // content[:, None]
        pivots.append(col)
        row += 1
    return Echelon(a[: len(pivots)].copy(), tuple(pivots))


def rref(m: QArray) -> tuple[QArray, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    m = QArray.of(m)
    e = echelon(m)
    out = np.empty(m.shape, dtype=object)
    out[:] = 0
    for i, pc in enumerate(e.pivots):
        pv = int(e.rows[i, pc])
        out[i] = [Fraction(int(v), pv) for v in e.rows[i]]
    return QArray.of(out), list(e.pivots)


def rank(m: QArray) -> int:
    m = QArray.of(m)
    if m.size == 0:
        return 0
    return echelon(m).rank


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim given by independent basis rows."""

    ambient_dim: int
    basis: QArray

    def __post_init__(self):
        if self.basis.ndim != 2 or self.basis.shape[1] != self.ambient_dim:
            raise ValueError("basis rows must have length ambient_dim")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[QArray]:
        return [self.basis[i] for i in range(self.dim)]

    def contains(self, v) -> bool:
        v = as_vector(v)
        if self.dim == 0:
            return v.is_zero()
        return solve(self.basis.T, v) is not None

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QArray.zeros((0, ambient_dim)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QArray.identity(ambient_dim))

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: Optional[int] = None) -> "Subspace":
        """Subspace spanned by (possibly dependent) vectors; keeps an independent subset."""
        vecs = [as_vector(v) for v in vectors]
        if not vecs:
            if ambient_dim is None:
                raise ValueError("ambient_dim needed for an empty span")
            return cls.zero(ambient_dim)
        stacked = QArray.stack(vecs)
        piv = echelon(stacked.T).pivots
        return cls(stacked.shape[1], stacked.take(list(piv), axis=0))


def _kernel_vector(e: Echelon, ncols: int, free: int) -> list[Fraction]:
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i, pc in enumerate(e.pivots):
        v = int(e.rows[i, free])
        if v:
            x[pc] = -Fraction(v, int(e.rows[i, pc]))
    return x


def kernel(m: QArray) -> Subspace:
    """Null space basis, one vector per free column (free variable set to 1)."""
    m = QArray.of(m)
    ncols = m.shape[1]
    if m.shape[0] == 0 or m.is_zero():
        return Subspace.full(ncols)
    e = echelon(m)
    pivset = set(e.pivots)
    free = [c for c in range(ncols) if c not in pivset]
    if not free:
        return Subspace.zero(ncols)
    return Subspace(ncols, QArray.of([_kernel_vector(e, ncols, f) for f in free]))


def image(m: QArray) -> Subspace:
    """Column space, spanned by the pivot columns of m."""
    m = QArray.of(m)
    if m.shape[1] == 0 or m.is_zero():
        return Subspace.zero(m.shape[0])
    piv = echelon(m).pivots
    return Subspace(m.shape[0], m.take(list(piv), axis=1).T)


def solve(m: QArray, b) -> Optional[QArray]:
    """A particular solution of ``m @ x == b`` (free variables zero), or None."""
    m = QArray.of(m)
    b = as_vector(b)
    if m.ndim != 2:
        raise ValueError("solve needs a matrix")
    if b.shape[0] != m.shape[0]:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {m.shape[0]}")
    ncols = m.shape[1]
    if b.is_zero():
        return QArray.zeros((ncols,))
    aug = QArray.concatenate([m, b.reshape(-1, 1)], axis=1)
    e = echelon(aug)
    if e.pivots and e.pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(e.pivots):
        x[pc] = e.entry(i, ncols)
    return QArray.of(x)


def infeasibility_certificate(m: QArray, b) -> Optional[QArray]:
    """A vector y with ``y @ m == 0`` and ``y @ b != 0``; None when m x = b is solvable."""
    m = QArray.of(m)
    b = as_vector(b)
    mt = m.T
    nrows = mt.shape[1]
    if mt.shape[0] == 0 or mt.is_zero():
        free = [i for i in range(nrows) if b[i] != 0]
        if not free:
            return None
        y = [Fraction(0)] * nrows
        y[free[0]] = Fraction(1)
        return QArray.of(y)
    e = echelon(mt)
    pivset = set(e.pivots)
    for f in range(nrows):
        if f in pivset:
            continue
        y = QArray.of(_kernel_vector(e, nrows, f))
        if (y @ b)[()] != 0:
            return y
    return None


def quotient_dim(z: Subspace, b: Subspace) -> int:
    """dim z - dim b, after checking that b lies inside z."""
    if z.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    for v in b.vectors():
        if not z.contains(v):
            raise ValueError("b is not contained in z")
    return z.dim - b.dim


def inverse(m: QArray) -> QArray:
    m = QArray.of(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("only square matrices are invertible")
    aug = QArray.concatenate([m, QArray.identity(n)], axis=1)
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:]


def is_invertible(m: QArray) -> bool:
    m = QArray.of(m)
    return m.shape[0] == m.shape[1] and rank(m) == m.shape[0]


def complement_basis(sub: Subspace, within: Subspace) -> list[QArray]:
    """Vectors of ``within``'s basis that extend a basis of ``sub`` to one of ``within``."""
    picked: list[QArray] = []
    current = sub.vectors()
    r = len(current)
    for v in within.vectors():
        trial = current + [v]
        if rank(QArray.stack(trial)) > r:
            current = trial
            picked.append(v)
            r += 1
    return picked


def stack_columns(columns: Sequence[QArray], nrows: int) -> QArray:
    if not columns:
        return QArray.zeros((nrows, 0))
    return QArray.stack(list(columns), axis=1)
