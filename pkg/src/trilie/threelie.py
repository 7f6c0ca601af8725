"""3-Lie algebras, fundamental objects, derivations and 3-LieDer pairs.

Conventions used throughout the package:

* bases are 0-based;
* ``C[i, j, k, l]`` is the coefficient of ``e_l`` in ``[e_i, e_j, e_k]``;
* a pair ``e_i ^ e_j`` with ``i < j`` has a flat index in lexicographic order;
* a linear map ``f`` is a matrix acting on column vectors, ``f[i, j]`` being the
  coefficient of ``e_i`` in ``f(e_j)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from .linalg import Subspace, kernel
from .qarray import QArray, as_vector, einsum
from .report import Report


# fundamental objects ---------------------------------------------------------


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Lexicographic list of pairs ``(i, j)``, ``i < j``."""
    return tuple(itertools.combinations(range(n), 2))


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Flat index of ``e_i ^ e_j`` for ``i < j``."""
    if not 0 <= i < j < n:
        raise ValueError(f"({i}, {j}) is not an increasing pair below {n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    ps = pairs(n)
    a = np.array([p[0] for p in ps], dtype=np.intp)
    b = np.array([p[1] for p in ps], dtype=np.intp)
    return a, b


@lru_cache(maxsize=None)
def wedge_tensor(n: int) -> QArray:
    """``W[i, j, P]``: coordinates of ``e_i ^ e_j`` in the pair basis."""
    w = np.zeros((n, n, pair_count(n)), dtype=np.int64)
    for idx, (i, j) in enumerate(pairs(n)):
        w[i, j, idx] = 1
        w[j, i, idx] = -1
    return QArray(w)


def wedge(x, y) -> QArray:
    x, y = as_vector(x), as_vector(y)
    if x.shape != y.shape:
        raise ValueError("wedge factors must have equal length")
    return einsum("a,b,abP->P", x, y, wedge_tensor(x.shape[0]))


def wedge_power(f: QArray, n_src: Optional[int] = None) -> QArray:
    """The induced map ``e_a ^ e_b -> f e_a ^ f e_b`` as an (m_out x m_in) matrix."""
    f = QArray.of(f)
    n_out, n_in = f.shape
    a, b = pair_arrays(n_in)
    fa = f.take(a, axis=1)
    fb = f.take(b, axis=1)
    return einsum("uP,vP,uvR->RP", fa, fb, wedge_tensor(n_out))


def wedge_derivation_matrix(theta: QArray) -> QArray:
    """Matrix of ``x ^ y -> theta x ^ y + x ^ theta y`` on the pair basis."""
    theta = QArray.of(theta)
    n = theta.shape[0]
    a, b = pair_arrays(n)
    eye = QArray.identity(n)
    w = wedge_tensor(n)
    first = einsum("uP,vP,uvR->RP", theta.take(a, axis=1), eye.take(b, axis=1), w)
    second = einsum("uP,vP,uvR->RP", eye.take(a, axis=1), theta.take(b, axis=1), w)
    return first + second


def _skew_from_canonical(n: int, dim_out: int, entries: Mapping) -> QArray:
    num = np.zeros((n, n, n, dim_out), dtype=object)
    num[:] = 0
    for key, value in entries.items():
        i, j, k = key
        if not 0 <= i < j < k < n:
            raise ValueError(f"bracket arguments {key} must be strictly increasing indices below {n}")
        vec = as_vector(value)
        if vec.shape != (dim_out,):
            raise ValueError(f"bracket value for {key} has length {vec.shape[0]}, expected {dim_out}")
        fr = vec.to_fractions()
        for perm, sign in _PERMS3:
            idx = tuple((i, j, k)[p] for p in perm)
            num[idx] = fr * sign
    return QArray.of(num)


_PERMS3 = (
    ((0, 1, 2), 1),
    ((1, 2, 0), 1),
    ((2, 0, 1), 1),
    ((1, 0, 2), -1),
    ((0, 2, 1), -1),
    ((2, 1, 0), -1),
)


def skew_defect_3(t: QArray) -> Optional[tuple]:
    """First index where a (n,n,n,...) tensor fails total skew-symmetry, else None."""
    for perm, sign in _PERMS3[1:]:
        axes = list(perm) + list(range(3, t.ndim))
        diff = t.transpose(axes) - t.scale(sign)
        hit = diff.first_nonzero()
        if hit is not None:
            return hit
    return None


def skewize(t: QArray) -> QArray:
    """Keep the i<j<k entries of a trilinear tensor and extend them skew-symmetrically."""
    n = t.shape[0]
    mask = np.zeros((n, n, n), dtype=np.int64)
    for i, j, k in itertools.combinations(range(n), 3):
        mask[i, j, k] = 1
    mask_shape = mask.reshape(mask.shape + (1,) * (t.ndim - 3))
    base = QArray(t.num * mask_shape, t.den)
    out = QArray.zeros(t.shape)
    for perm, sign in _PERMS3:
        inv = list(np.argsort(perm)) + list(range(3, t.ndim))
        out = out + base.transpose(inv).scale(sign)
    return out


def triples(n: int):
    return itertools.combinations(range(n), 3)


def _first_violation(defect: QArray, keep) -> Optional[tuple]:
    for idx in defect.nonzero_indices():
        if keep(idx):
            return idx
    return None


# 3-Lie algebras ---------------------------------------------------------------


class ThreeLieAlgebra:
    """A finite-dimensional 3-Lie algebra over the rationals.

    ``brackets`` maps increasing index triples ``(i, j, k)`` to the coordinate
    vector of ``[e_i, e_j, e_k]``; the full skew tensor is derived from it.
    """

    __slots__ = ("dim", "structure", "_cache")

    def __init__(self, dim: int, brackets: Mapping = (), *, check: bool = True):
        if isinstance(brackets, (list, tuple)):
            brackets = dict(brackets)
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = int(dim)
        self.structure = _skew_from_canonical(self.dim, self.dim, brackets)
        self._cache: dict = {}
        if check:
            rep = check_fundamental_identity(self)
            if not rep.ok:
                raise ValueError(f"bracket violates the Fundamental Identity at {rep.witness}")

    @classmethod
    def unchecked(cls, dim: int, brackets: Mapping = ()) -> "ThreeLieAlgebra":
        return cls(dim, brackets, check=False)

    @classmethod
    def from_tensor(cls, c: QArray, *, check: bool = True) -> "ThreeLieAlgebra":
        c = QArray.of(c)
        n = c.shape[0]
        if c.shape != (n, n, n, n):
            raise ValueError("structure tensor must have shape (n, n, n, n)")
        bad = skew_defect_3(c)
        if bad is not None:
            raise ValueError(f"structure tensor is not skew-symmetric at {bad}")
        self = cls.__new__(cls)
        self.dim = n
        self.structure = c
        self._cache = {}
        if check:
            rep = check_fundamental_identity(self)
            if not rep.ok:
                raise ValueError(f"bracket violates the Fundamental Identity at {rep.witness}")
        return self

    @classmethod
    def abelian(cls, dim: int) -> "ThreeLieAlgebra":
        return cls(dim, {}, check=False)

    def canonical(self) -> dict[tuple[int, int, int], QArray]:
        out = {}
        for t in triples(self.dim):
            v = self.structure[t]
            if not v.is_zero():
                out[t] = v
        return out

    def is_abelian(self) -> bool:
        return self.structure.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, ThreeLieAlgebra) and self.dim == other.dim and self.structure == other.structure

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ThreeLieAlgebra(dim={self.dim}, nonzero={len(self.canonical())})"

    # cached derived tensors

    @property
    def pair_action(self) -> QArray:
        """``A[P, k, l]``: coefficient of e_l in [e_a, e_b, e_k] for pair P = (a, b)."""
        if "ad" not in self._cache:
            a, b = pair_arrays(self.dim)
            self._cache["ad"] = QArray(self.structure.num[a, b], self.structure.den)
        return self._cache["ad"]

    @property
    def fundamental(self) -> QArray:
        """``F[P, Q, R]``: coordinate R of [e_P, e_Q]_F."""
        if "F" not in self._cache:
            self._cache["F"] = _fundamental_tensor(self)
        return self._cache["F"]

    def bracket(self, x, y, z) -> QArray:
        return bracket(self, x, y, z)


def bracket(L: ThreeLieAlgebra, x, y, z) -> QArray:
    x, y, z = (as_vector(v) for v in (x, y, z))
    for v in (x, y, z):
        if v.shape != (L.dim,):
            raise ValueError(f"vector of length {v.shape[0]} given to a {L.dim}-dimensional algebra")
    return einsum("i,j,k,ijkl->l", x, y, z, L.structure)


def fi_defect(c: QArray) -> QArray:
    """LHS - RHS of the Fundamental Identity as a tensor [x1, x2, x3, x4, x5, out]."""
    lhs = einsum("cdew,abwo->abcdeo", c, c)
    r1 = einsum("abcw,wdeo->abcdeo", c, c)
    r2 = einsum("abdw,cweo->abcdeo", c, c)
    r3 = einsum("abew,cdwo->abcdeo", c, c)
    return lhs - r1 - r2 - r3


def check_fundamental_identity(L: ThreeLieAlgebra) -> Report:
    if L.dim < 3 or L.is_abelian():
        return Report.passed("fundamental identity")
    bad = _first_violation(
        fi_defect(L.structure), lambda t: t[0] < t[1] and t[2] < t[3] < t[4]
    )
    if bad is None:
        return Report.passed("fundamental identity")
    return Report.failed("fundamental identity", bad[:5], output=bad[5])


def _fundamental_tensor(L: ThreeLieAlgebra) -> QArray:
    n = L.dim
    m = pair_count(n)
    if m == 0:
        return QArray.zeros((0, 0, 0))
    ad = L.pair_action
    w = wedge_tensor(n)
    first = einsum("Pcw,wdR->PcdR", ad, w)
    second = einsum("cwR,Pdw->PcdR", w, ad)
    full = first + second
    a, b = pair_arrays(n)
    return QArray(full.num[:, a, b, :], full.den)


def fundamental_bracket(L: ThreeLieAlgebra, X, Y) -> QArray:
    """[X, Y]_F for X, Y given in pair coordinates."""
    X, Y = as_vector(X), as_vector(Y)
    m = pair_count(L.dim)
    if X.shape != (m,) or Y.shape != (m,):
        raise ValueError(f"fundamental objects need {m} pair coordinates")
    if m == 0:
        return QArray.zeros((0,))
    return einsum("P,Q,PQR->R", X, Y, L.fundamental)


def check_leibniz_and_fun(L: ThreeLieAlgebra) -> Report:
    """Leibniz rule for [.,.]_F and the identity [X,[Y,z]] - [Y,[X,z]] = [[X,Y]_F, z]."""
    if pair_count(L.dim) == 0:
        return Report.combine("leibniz and fun", [Report.passed("leibniz"), Report.passed("fun")])
    F = L.fundamental
    ad = L.pair_action
    leib = (
        einsum("YZR,XRo->XYZo", F, F)
        - einsum("XYR,RZo->XYZo", F, F)
        - einsum("XZR,YRo->XYZo", F, F)
    )
    hit = leib.first_nonzero()
    leib_rep = Report.passed("leibniz") if hit is None else Report.failed("leibniz", hit)
    fun = (
        einsum("Yzw,Xwo->XYzo", ad, ad)
        - einsum("Xzw,Ywo->XYzo", ad, ad)
        - einsum("XYR,Rzo->XYzo", F, ad)
    )
    hit = fun.first_nonzero()
    fun_rep = Report.passed("fun") if hit is None else Report.failed("fun", hit)
    return Report.combine("leibniz and fun", [leib_rep, fun_rep])


# derivations -------------------------------------------------------------------


def derivation_defect(c: QArray, theta: QArray) -> QArray:
    """theta[x,y,z] - [theta x,y,z] - [x,theta y,z] - [x,y,theta z] as a tensor."""
    return (
        einsum("ijkw,lw->ijkl", c, theta)
        - einsum("wi,wjkl->ijkl", theta, c)
        - einsum("wj,iwkl->ijkl", theta, c)
        - einsum("wk,ijwl->ijkl", theta, c)
    )


def check_derivation(L: ThreeLieAlgebra, theta) -> Report:
    theta = QArray.of(theta)
    if theta.shape != (L.dim, L.dim):
        raise ValueError(f"derivation must be {L.dim}x{L.dim}")
    bad = _first_violation(derivation_defect(L.structure, theta), lambda t: t[0] < t[1] < t[2])
    if bad is None:
        return Report.passed("derivation")
    return Report.failed("derivation", bad[:3], output=bad[3])


def derivation_space(L: ThreeLieAlgebra) -> list[QArray]:
    """A basis of der(L) as n x n matrices (free-parameter normalization)."""
    n = L.dim
    if n == 0:
        return []
    sub = derivation_subspace(L)
    return [v.reshape(n, n) for v in sub.vectors()]


def derivation_subspace(L: ThreeLieAlgebra) -> Subspace:
    """der(L) as a subspace of Q^(n*n), matrices flattened row-major."""
    n = L.dim
    c = L.structure
    eye = QArray.identity(n)
    lin = (
        einsum("ijkb,la->ijklab", c, eye)
        - einsum("ajkl,bi->ijklab", c, eye)
        - einsum("iakl,bj->ijklab", c, eye)
        - einsum("ijal,bk->ijklab", c, eye)
    )
    return kernel(lin.reshape(n**4, n * n))


class LieDerPair:
    """A 3-Lie algebra with a distinguished derivation."""

    __slots__ = ("algebra", "theta")

    def __init__(self, algebra: ThreeLieAlgebra, theta=None, *, check: bool = True):
        self.algebra = algebra
        n = algebra.dim
        self.theta = QArray.zeros((n, n)) if theta is None else QArray.of(theta)
        if self.theta.shape != (n, n):
            raise ValueError(f"derivation must be {n}x{n}")
        if check:
            rep = check_derivation(algebra, self.theta)
            if not rep.ok:
                raise ValueError(f"theta is not a derivation: fails at {rep.witness}")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __eq__(self, other) -> bool:
        return isinstance(other, LieDerPair) and self.algebra == other.algebra and self.theta == other.theta

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LieDerPair(dim={self.dim})"

    def wedge_theta(self) -> QArray:
        return wedge_derivation_matrix(self.theta)


def check_pair(pair: LieDerPair) -> Report:
    return Report.combine(
        "3-LieDer pair",
        [check_fundamental_identity(pair.algebra), check_derivation(pair.algebra, pair.theta)],
    )


def wedge_derivation_action(pair: LieDerPair, X) -> QArray:
    X = as_vector(X)
    return pair.wedge_theta() @ X


def morphism_defect(src: ThreeLieAlgebra, dst: ThreeLieAlgebra, eta: QArray) -> QArray:
    return einsum("ijkw,ow->ijko", src.structure, eta) - einsum(
        "ai,bj,ck,abco->ijko", eta, eta, eta, dst.structure
    )


def check_algebra_morphism(src: ThreeLieAlgebra, dst: ThreeLieAlgebra, eta) -> Report:
    eta = QArray.of(eta)
    if eta.shape != (dst.dim, src.dim):
        raise ValueError(f"morphism must be {dst.dim}x{src.dim}")
    bad = _first_violation(morphism_defect(src, dst, eta), lambda t: t[0] < t[1] < t[2])
    if bad is None:
        return Report.passed("bracket morphism")
    return Report.failed("bracket morphism", bad[:3], output=bad[3])


def check_pair_morphism(src: LieDerPair, dst: LieDerPair, eta) -> Report:
    eta = QArray.of(eta)
    if eta.shape != (dst.dim, src.dim):
        raise ValueError(f"morphism must be {dst.dim}x{src.dim}")
    parts = [check_algebra_morphism(src.algebra, dst.algebra, eta)]
    comm = eta @ src.theta - dst.theta @ eta
    hit = comm.first_nonzero()
    parts.append(Report.passed("commutes with derivations") if hit is None
                 else Report.failed("commutes with derivations", hit))
    return Report.combine("pair morphism", parts)


def transport(L: ThreeLieAlgebra, g) -> ThreeLieAlgebra:
    """The algebra structure g[g^-1 x, g^-1 y, g^-1 z] (g invertible)."""
    from .linalg import inverse

    g = QArray.of(g)
    gi = inverse(g)
    c = einsum("ai,bj,ck,abcw,ow->ijko", gi, gi, gi, L.structure, g)
    return ThreeLieAlgebra.from_tensor(c, check=False)


# named examples ----------------------------------------------------------------


def example_algebra() -> ThreeLieAlgebra:
    """The 4-dimensional algebra [e1,e2,e3]=e4, [e1,e2,e4]=e3, [e1,e3,e4]=e2, [e2,e3,e4]=e1."""
    e = np.eye(4, dtype=np.int64)
    return ThreeLieAlgebra(
        4,
        {(0, 1, 2): e[3], (0, 1, 3): e[2], (0, 2, 3): e[1], (1, 2, 3): e[0]},
    )


def basis_vector(n: int, i: int) -> QArray:
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return QArray(v)


def structure_from_rows(dim: int, rows: Sequence) -> ThreeLieAlgebra:
    """Build from a list of ``((i, j, k), vector)`` items without checking."""
    return ThreeLieAlgebra.unchecked(dim, dict(rows))
