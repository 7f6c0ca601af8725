"""Exact rational n-dimensional arrays.

A :class:`QArray` stores an integer numerator array together with a single
positive common denominator.  Numerators live in ``int64`` whenever every
intermediate value provably fits, and fall back to numpy ``object`` arrays of
Python integers otherwise, so results are always exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

_LIMIT = 1 << 62
# integers below this bound are represented exactly by float64, so products
# whose every partial sum stays below it can use BLAS
_FLOAT_EXACT = 1 << 53


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction, or ``"p/q"`` string exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact scalar: {value!r}")


def _maxabs(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num.flat)
    return max(int(num.max()), -int(num.min()))


def _as_object(num: np.ndarray) -> np.ndarray:
    if num.dtype == object:
        return num
    out = np.empty(num.shape, dtype=object)
    out.flat[:] = [int(v) for v in num.flat]
    return out


def _shrink(num: np.ndarray) -> np.ndarray:
    if num.dtype == object:
        if _maxabs(num) < _LIMIT:
            return num.astype(np.int64)
        return num
    return num


def _gcd_all(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return math.gcd(*[int(v) for v in num.flat])
    return int(np.gcd.reduce(num.ravel()))


class QArray:
    """Immutable exact rational array ``num / den``."""

    __slots__ = ("num", "den")
    __array_priority__ = 1000

    def __init__(self, num: np.ndarray, den: int = 1, *, _normalized: bool = False):
        if not _normalized:
            num = np.asarray(num)
            if num.dtype != object and num.dtype != np.int64:
                num = num.astype(np.int64)
            num = _shrink(num)
            den = int(den)
            if den <= 0:
                if den == 0:
                    raise ZeroDivisionError("zero denominator")
                num, den = -num, -den
            if den != 1:
                g = math.gcd(_gcd_all(num), den)
                if g > 1:
                    num = num // g
                    den //= g
                if not num.any():
                    den = 1
            num = np.asarray(num)
        num.flags.writeable = False
        self.num = num
        self.den = den

    # construction ---------------------------------------------------------

    @classmethod
    def of(cls, data) -> "QArray":
        """Build from nested sequences of ints/Fractions/strings or arrays."""
        if isinstance(data, QArray):
            return data
        if isinstance(data, np.ndarray) and data.dtype != object:
            if data.dtype.kind in "iu":
                return cls(data.astype(np.int64) if data.dtype != np.int64 else data.copy())
            raise TypeError("floating arrays are not exact")
        arr = np.array(data, dtype=object)
        fracs = [to_fraction(v) for v in arr.flat]
        den = reduce(math.lcm, (f.denominator for f in fracs), 1)
        num = np.empty(arr.shape, dtype=object)
        num.flat[:] = [f.numerator * (den // f.denominator) for f in fracs]
        return cls(num, den)

    @classmethod
    def zeros(cls, shape) -> "QArray":
        return cls(np.zeros(shape, dtype=np.int64), 1, _normalized=True)

    @classmethod
    def identity(cls, n: int) -> "QArray":
        return cls(np.eye(n, dtype=np.int64), 1, _normalized=True)

    @classmethod
    def concatenate(cls, arrays: Sequence["QArray"], axis: int = 0) -> "QArray":
        arrays = [QArray.of(a) for a in arrays]
        den = reduce(math.lcm, (a.den for a in arrays), 1)
        parts = [_scaled(a.num, den // a.den) for a in arrays]
        if any(p.dtype == object for p in parts):
            parts = [_as_object(p) for p in parts]
        return cls(np.concatenate(parts, axis=axis), den)

    @classmethod
    def stack(cls, arrays: Sequence["QArray"], axis: int = 0) -> "QArray":
        arrays = [QArray.of(a) for a in arrays]
        return cls.concatenate([a.expand_dims(axis) for a in arrays], axis=axis)

    # basic properties -----------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.num.shape

    @property
    def ndim(self) -> int:
        return self.num.ndim

    @property
    def size(self) -> int:
        return self.num.size

    @property
    def rows(self) -> int:
        return self.num.shape[0]

    @property
    def cols(self) -> int:
        return self.num.shape[1]

    @property
    def T(self) -> "QArray":
        return self.transpose()

    def __len__(self) -> int:
        return len(self.num)

    def __repr__(self) -> str:
        if self.size <= 64:
            return f"QArray({_fmt_nested(self.tolist())})"
        return f"QArray(shape={self.shape}, den={self.den})"

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        d = self.den
        out.flat[:] = [Fraction(int(v), d) for v in self.num.flat]
        return out

    def tolist(self):
        return self.to_fractions().tolist()

    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return not self.num.any()

    def nonzero_indices(self) -> list[tuple]:
        return [tuple(int(i) for i in idx) for idx in zip(*np.nonzero(self.num))]

    def first_nonzero(self):
        """Lexicographically first index holding a nonzero entry, or None."""
        flat = np.flatnonzero(self.num)
        if flat.size == 0:
            return None
        return tuple(int(i) for i in np.unravel_index(int(flat[0]), self.shape))

    def __getitem__(self, idx):
        sub = self.num[idx]
        if isinstance(sub, np.ndarray):
            return QArray(sub, self.den)
        return Fraction(int(sub), self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QArray):
            try:
                other = QArray.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.shape != other.shape:
            return False
        if self.den != other.den:
            return False
        return bool(np.array_equal(self.num, other.num))

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None  # type: ignore[assignment]

    # shape manipulation ---------------------------------------------------

    def transpose(self, *axes) -> "QArray":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        return QArray(self.num.transpose(*axes) if axes else self.num.T, self.den, _normalized=True)

    def reshape(self, *shape) -> "QArray":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return QArray(self.num.reshape(shape), self.den, _normalized=True)

    def ravel(self) -> "QArray":
        return self.reshape(-1)

    def moveaxis(self, source, destination) -> "QArray":
        return QArray(np.moveaxis(self.num, source, destination), self.den, _normalized=True)

    def expand_dims(self, axis: int) -> "QArray":
        return QArray(np.expand_dims(self.num, axis), self.den, _normalized=True)

    def take(self, indices, axis: int) -> "QArray":
        return QArray(np.take(self.num, indices, axis=axis), self.den)

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "QArray":
        return QArray(-self.num, self.den, _normalized=True)

    def __pos__(self) -> "QArray":
        return self

    def _combine(self, other: "QArray", sign: int) -> "QArray":
        other = QArray.of(other)
        den = math.lcm(self.den, other.den)
        sa, sb = den // self.den, den // other.den
        a, b = self.num, other.num
        bound = _maxabs(a) * sa + _maxabs(b) * sb
        if bound >= _LIMIT or a.dtype == object or b.dtype == object:
            a, b = _as_object(a), _as_object(b)
        num = a * sa + b * (sign * sb) if (sa != 1 or sb != 1) else (a + b if sign > 0 else a - b)
        return QArray(num, den)

    def __add__(self, other) -> "QArray":
        return self._combine(other, 1)

    def __radd__(self, other) -> "QArray":
        if isinstance(other, int) and other == 0:
            return self
        return QArray.of(other)._combine(self, 1)

    def __sub__(self, other) -> "QArray":
        return self._combine(other, -1)

    def __rsub__(self, other) -> "QArray":
        return QArray.of(other)._combine(self, -1)

    def scale(self, c) -> "QArray":
        c = to_fraction(c)
        if c == 0:
            return QArray.zeros(self.shape)
        num = self.num
        if num.dtype != object and _maxabs(num) * abs(c.numerator) >= _LIMIT:
            num = _as_object(num)
        return QArray(num * c.numerator, self.den * c.denominator)

    def __mul__(self, other) -> "QArray":
        if isinstance(other, QArray):
            return _elementwise_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "QArray":
        return self.scale(other)

    def __truediv__(self, other) -> "QArray":
        c = to_fraction(other)
        return self.scale(1 / c)

    def __matmul__(self, other) -> "QArray":
        other = QArray.of(other)
        return tensordot(self, other, axes=([self.ndim - 1], [0]))

    def __rmatmul__(self, other) -> "QArray":
        return QArray.of(other) @ self


def _scaled(num: np.ndarray, s: int) -> np.ndarray:
    if s == 1:
        return num
    if num.dtype != object and _maxabs(num) * s >= _LIMIT:
        num = _as_object(num)
    return num * s


def _elementwise_mul(a: QArray, b: QArray) -> QArray:
    x, y = a.num, b.num
    if x.dtype == object or y.dtype == object or _maxabs(x) * _maxabs(y) >= _LIMIT:
        x, y = _as_object(x), _as_object(y)
    return QArray(x * y, a.den * b.den)


def tensordot(a: QArray, b: QArray, axes) -> QArray:
    """Exact ``numpy.tensordot``."""
    a, b = QArray.of(a), QArray.of(b)
    if isinstance(axes, int):
        ax_a = list(range(a.ndim - axes, a.ndim))
        ax_b = list(range(axes))
    else:
        ax_a, ax_b = axes
        ax_a = [ax_a] if isinstance(ax_a, int) else list(ax_a)
        ax_b = [ax_b] if isinstance(ax_b, int) else list(ax_b)
    k = 1
    for ax in ax_a:
        k *= a.shape[ax]
    x, y = a.num, b.num
    if x.dtype == object or y.dtype == object:
        bound = _LIMIT
    else:
        bound = _maxabs(x) * _maxabs(y) * max(k, 1)
    if bound >= _LIMIT:
        x, y = _as_object(x), _as_object(y)
        out = np.tensordot(x, y, axes=(ax_a, ax_b))
    elif bound < _FLOAT_EXACT:
        out = np.tensordot(x.astype(np.float64), y.astype(np.float64), axes=(ax_a, ax_b)).astype(np.int64)
    else:
        out = np.tensordot(x, y, axes=(ax_a, ax_b))
    return QArray(out, a.den * b.den)


def einsum(subscripts: str, *operands, optimize=None) -> QArray:
    """Exact ``numpy.einsum`` for explicit-output subscripts."""
    ops = [QArray.of(o) for o in operands]
    lhs, out = subscripts.replace(" ", "").split("->")
    terms = lhs.split(",")
    sizes: dict[str, int] = {}
    for term, op in zip(terms, ops):
        for ch, dim in zip(term, op.shape):
            sizes[ch] = dim
    k = 1
    for ch, dim in sizes.items():
        if ch not in out:
            k *= dim
    bound = max(k, 1)
    any_obj = False
    for op in ops:
        bound *= _maxabs(op.num)
        any_obj |= op.num.dtype == object
    nums = [op.num for op in ops]
    den = 1
    for op in ops:
        den *= op.den
    if optimize is None:
        optimize = len(ops) > 2
    if any_obj or bound >= _LIMIT:
        nums = [_as_object(n) for n in nums]
    elif bound < _FLOAT_EXACT:
        flt = [n.astype(np.float64) for n in nums]
        return QArray(np.einsum(subscripts, *flt, optimize=optimize).astype(np.int64), den)
    return QArray(np.einsum(subscripts, *nums, optimize=optimize), den)


def _fmt_nested(obj) -> str:
    if isinstance(obj, list):
        return "[" + ", ".join(_fmt_nested(o) for o in obj) + "]"
    return format_scalar(obj)


def format_scalar(value) -> str:
    """Canonical text form of a rational: ``"p"`` or ``"p/q"``."""
    f = to_fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def as_vector(values: Iterable) -> QArray:
    v = QArray.of(list(values) if not isinstance(values, (QArray, np.ndarray)) else values)
    if v.ndim != 1:
        raise ValueError("expected a vector")
    return v
