"""3-Lie 2-algebras, 2-derivations, skeletal triples and crossed modules.

Tensors are stored in full (every argument slot explicit, output last):

* ``d[o, v]``: coordinate o in V0 of d(v), v in V1;
* ``l3_000[x, y, z, o]``: totally skew, values in V0;
* ``l3_001[x, y, v, w]``: coordinate w of l3(x, y, v), skew in (x, y);
* ``l5[x1, x2, x3, x4, x5, w]``: skew in (x1, x2) and in (x3, x4, x5).

l3 on the other argument orders follows from total skew-symmetry:
l3(v, x, y) = l3(x, y, v) and l3(x, v, y) = -l3(x, y, v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cochains import CochainComplex, PairCochain, PlainCochain, plain_dim
from .linalg import inverse, is_invertible, kernel
from .qarray import QArray, einsum
from .report import Report
from .representations import PairRepresentation, Representation, check_pair_representation
from .threelie import (
    LieDerPair,
    ThreeLieAlgebra,
    _first_violation,
    check_pair,
    check_pair_morphism,
    pair_arrays,
    skew_defect_3,
)

_PERMS3 = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1), ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]


def _skew_pair_defect(t: QArray, i: int = 0) -> Optional[tuple]:
    """First index where t is not skew in axes (i, i+1)."""
    axes = list(range(t.ndim))
    axes[i], axes[i + 1] = axes[i + 1], axes[i]
    return (t + t.transpose(*axes)).first_nonzero()


def _skew_triple_defect(t: QArray, i: int) -> Optional[tuple]:
    """First index where t is not totally skew in axes (i, i+1, i+2)."""
    for perm, sign in _PERMS3[1:]:
        axes = list(range(t.ndim))
        axes[i:i + 3] = [i + p for p in perm]
        other = t.transpose(*axes)
        hit = (t - other).first_nonzero() if sign > 0 else (t + other).first_nonzero()
        if hit is not None:
            return hit
    return None


def _shape_error(name: str, want: tuple, got: tuple):
    if want != got:
        raise ValueError(f"{name} must have shape {want}, got {got}")


class ThreeLie2Algebra:
    """(V1 -d-> V0, l3, l5); components of l3 with two or more V1 arguments are zero."""

    __slots__ = ("V1_dim", "V0_dim", "d", "l3_000", "l3_001", "l5")

    def __init__(self, V1_dim: int, V0_dim: int, d=None, l3_000=None, l3_001=None, l5=None):
        n1, n0 = int(V1_dim), int(V0_dim)
        self.V1_dim, self.V0_dim = n1, n0
        self.d = QArray.zeros((n0, n1)) if d is None else QArray.of(d)
        self.l3_000 = QArray.zeros((n0,) * 4) if l3_000 is None else QArray.of(l3_000)
        self.l3_001 = QArray.zeros((n0, n0, n1, n1)) if l3_001 is None else QArray.of(l3_001)
        self.l5 = QArray.zeros((n0,) * 5 + (n1,)) if l5 is None else QArray.of(l5)
        _shape_error("d", (n0, n1), self.d.shape)
        _shape_error("l3_000", (n0,) * 4, self.l3_000.shape)
        _shape_error("l3_001", (n0, n0, n1, n1), self.l3_001.shape)
        _shape_error("l5", (n0,) * 5 + (n1,), self.l5.shape)
        bad = skew_defect_3(self.l3_000)
        if bad is not None:
            raise ValueError(f"l3_000 is not totally skew-symmetric at {bad}")
        bad = _skew_pair_defect(self.l3_001)
        if bad is not None:
            raise ValueError(f"l3_001 is not skew in its V0 arguments at {bad}")
        bad = _skew_pair_defect(self.l5) or _skew_triple_defect(self.l5, 2)
        if bad is not None:
            raise ValueError(f"l5 is not skew in (x1, x2) and (x3, x4, x5) at {bad}")

    @property
    def is_skeletal(self) -> bool:
        return self.d.is_zero()

    @property
    def is_strict(self) -> bool:
        return self.l5.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ThreeLie2Algebra)
            and (self.V1_dim, self.V0_dim) == (other.V1_dim, other.V0_dim)
            and self.d == other.d
            and self.l3_000 == other.l3_000
            and self.l3_001 == other.l3_001
            and self.l5 == other.l5
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ThreeLie2Algebra(V1_dim={self.V1_dim}, V0_dim={self.V0_dim})"


class TwoDerivation:
    """(X0, X1, lX) with ``lX[x, y, z, w]`` totally skew, values in V1."""

    __slots__ = ("X0", "X1", "lX")

    def __init__(self, X0, X1, lX=None):
        self.X0 = QArray.of(X0)
        self.X1 = QArray.of(X1)
        n0, n1 = self.X0.shape[0], self.X1.shape[0]
        _shape_error("X0", (n0, n0), self.X0.shape)
        _shape_error("X1", (n1, n1), self.X1.shape)
        self.lX = QArray.zeros((n0,) * 3 + (n1,)) if lX is None else QArray.of(lX)
        _shape_error("lX", (n0,) * 3 + (n1,), self.lX.shape)
        bad = skew_defect_3(self.lX)
        if bad is not None:
            raise ValueError(f"lX is not totally skew-symmetric at {bad}")

    @classmethod
    def zero(cls, a: ThreeLie2Algebra) -> "TwoDerivation":
        return cls(QArray.zeros((a.V0_dim,) * 2), QArray.zeros((a.V1_dim,) * 2))

    @property
    def is_strict(self) -> bool:
        return self.lX.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, TwoDerivation) and self.X0 == other.X0 and self.X1 == other.X1 and self.lX == other.lX

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Lie2DerPair:
    algebra: ThreeLie2Algebra
    der: TwoDerivation

    def __post_init__(self):
        a, x = self.algebra, self.der
        if x.X0.shape[0] != a.V0_dim or x.X1.shape[0] != a.V1_dim:
            raise ValueError("2-derivation dimensions do not match the algebra")

    def __eq__(self, other) -> bool:
        return isinstance(other, Lie2DerPair) and self.algebra == other.algebra and self.der == other.der

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class CrossedModule:
    A_pair: LieDerPair
    B_pair: LieDerPair
    rho: PairRepresentation
    eta: QArray

    def __post_init__(self):
        object.__setattr__(self, "eta", QArray.of(self.eta))
        if self.rho.algebra_dim != self.B_pair.dim or self.rho.module_dim != self.A_pair.dim:
            raise ValueError("rho must be a representation of B on A")
        if self.rho.theta_V != self.A_pair.theta:
            raise ValueError("the representation must carry theta_A")
        _shape_error("eta", (self.B_pair.dim, self.A_pair.dim), self.eta.shape)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CrossedModule)
            and self.A_pair == other.A_pair
            and self.B_pair == other.B_pair
            and self.rho == other.rho
            and self.eta == other.eta
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class SkeletalTriple:
    pair: LieDerPair
    prep: PairRepresentation
    cocycle: PairCochain

    def __post_init__(self):
        n, v = self.pair.dim, self.prep.module_dim
        c = self.cocycle
        if c.degree != 3 or c.algebra_dim != n or c.module_dim != v:
            raise ValueError("the cocycle must be a degree-3 cochain of the pair with values in the module")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SkeletalTriple)
            and self.pair == other.pair
            and self.prep == other.prep
            and self.cocycle == other.cocycle
        )

    __hash__ = None  # type: ignore[assignment]


# checks ------------------------------------------------------------------------


def _report(name: str, defect: QArray, keep=None, arity: Optional[int] = None) -> Report:
    bad = _first_violation(defect, keep or (lambda t: True))
    if bad is None:
        return Report.passed(name)
    return Report.failed(name, bad if arity is None else bad[:arity])


def _inc(*groups):
    """Index filter: strictly increasing inside each group of slot positions."""
    def keep(t):
        return all(all(t[g[k]] < t[g[k + 1]] for k in range(len(g) - 1)) for g in groups)
    return keep


def check_lie2(a: ThreeLie2Algebra) -> Report:
    """Conditions (a)-(g) of a 3-Lie 2-algebra on all basis tuples."""
    D, c, r, l5 = a.d, a.l3_000, a.l3_001, a.l5
    parts = []
    # (a) d l3(x, y, u) = l3(x, y, du)
    parts.append(_report("(a)", einsum("ow,xyuw->xyuo", D, r) - einsum("xyzo,zu->xyuo", c, D), _inc((0, 1)), 3))
    parts.append(Report.passed("(b)", structural=True))
    # (c) l3(du, v, x) = l3(u, dv, x), i.e. l3(x, du, v) = l3(dv, x, u)
    parts.append(_report("(c)", einsum("su,xsvw->uvxw", D, r) - einsum("sv,sxuw->uvxw", D, r), None, 3))
    # (d) d l5 = l3(l3(x1,x2,x3),x4,x5) + l3(x3,l3(x1,x2,x4),x5) + l3(x3,x4,l3(x1,x2,x5)) - l3(x1,x2,l3(x3,x4,x5))
    rhs = _fi_expression(c)
    parts.append(_report("(d)", einsum("ow,abcdew->abcdeo", D, l5) - rhs, _inc((0, 1), (2, 3, 4)), 5))
    # (e) l5(du, x2, x3, x4, x5) = l3(l3(u,x2,x3),x4,x5) + l3(x3,l3(u,x2,x4),x5)
    #                              + l3(x3,x4,l3(u,x2,x5)) - l3(u,x2,l3(x3,x4,x5))
    lhs = einsum("su,sbcdew->ubcdew", D, l5)
    rhs = (
        einsum("bcut,detw->ubcdew", r, r)
        - einsum("bdut,cetw->ubcdew", r, r)
        + einsum("beut,cdtw->ubcdew", r, r)
        - einsum("cdes,bsuw->ubcdew", c, r)
    )
    parts.append(_report("(e)", lhs - rhs, _inc((2, 3, 4)), 5))
    # (f) l5(x1, x2, du, x4, x5) = l3(l3(x1,x2,u),x4,x5) + l3(u,l3(x1,x2,x4),x5)
    #                              + l3(u,x4,l3(x1,x2,x5)) - l3(x1,x2,l3(u,x4,x5))
    lhs = einsum("su,absdew->abudew", D, l5)
    rhs = (
        einsum("abut,detw->abudew", r, r)
        + einsum("abds,seuw->abudew", c, r)
        + einsum("abes,dsuw->abudew", c, r)
        - einsum("deut,abtw->abudew", r, r)
    )
    parts.append(_report("(f)", lhs - rhs, _inc((0, 1), (3, 4)), 5))
    parts.append(_report("(g)", _condition_g(c, r, l5), _inc((0, 1), (2, 3), (4, 5, 6)), 7))
    return Report.combine("3-Lie 2-algebra", parts)


def _fi_expression(c: QArray) -> QArray:
    """[[x1,x2,x3],x4,x5] + [x3,[x1,x2,x4],x5] + [x3,x4,[x1,x2,x5]] - [x1,x2,[x3,x4,x5]]."""
    return (
        einsum("abcs,sdeo->abcdeo", c, c)
        + einsum("abds,cseo->abcdeo", c, c)
        + einsum("abes,cdso->abcdeo", c, c)
        - einsum("cdes,abso->abcdeo", c, c)
    )


def _condition_g(c: QArray, r: QArray, l5: QArray) -> QArray:
    lhs = (
        einsum("abcdet,fgtw->abcdefgw", l5, r)
        - einsum("abcdft,egtw->abcdefgw", l5, r)
        + einsum("cdefgt,abtw->abcdefgw", l5, r)
        + einsum("abcdgt,eftw->abcdefgw", l5, r)
        + einsum("cdes,absfgw->abcdefgw", c, l5)
        + einsum("cdfs,abesgw->abcdefgw", c, l5)
        + einsum("cdgs,abefsw->abcdefgw", c, l5)
    )
    rhs = (
        einsum("abefgt,cdtw->abcdefgw", l5, r)
        + einsum("abcs,sdefgw->abcdefgw", c, l5)
        + einsum("abds,csefgw->abcdefgw", c, l5)
        + einsum("abes,cdsfgw->abcdefgw", c, l5)
        + einsum("abfs,cdesgw->abcdefgw", c, l5)
        + einsum("efgs,abcdsw->abcdefgw", c, l5)
        + einsum("abgs,cdefsw->abcdefgw", c, l5)
    )
    return lhs - rhs


def _lx_expression(c: QArray, r: QArray, lX: QArray) -> QArray:
    """lX and l3 terms of condition (d) of a 2-derivation."""
    return (
        einsum("abcs,sdew->abcdew", c, lX)
        + einsum("abds,csew->abcdew", c, lX)
        + einsum("abes,cdsw->abcdew", c, lX)
        - einsum("cdes,absw->abcdew", c, lX)
        + einsum("abct,detw->abcdew", lX, r)
        - einsum("abdt,cetw->abcdew", lX, r)
        + einsum("abet,cdtw->abcdew", lX, r)
        - einsum("cdet,abtw->abcdew", lX, r)
    )


def _l5_derivation(l5: QArray, X0: QArray) -> QArray:
    """sum_i l5(x1, ..., X0 x_i, ..., x5)."""
    return (
        einsum("sa,sbcdew->abcdew", X0, l5)
        + einsum("sb,ascdew->abcdew", X0, l5)
        + einsum("sc,absdew->abcdew", X0, l5)
        + einsum("sd,abcsew->abcdew", X0, l5)
        + einsum("se,abcdsw->abcdew", X0, l5)
    )


def check_2derivation(a: ThreeLie2Algebra, x: TwoDerivation) -> Report:
    """Conditions (a)-(d) of a 2-derivation on all basis tuples."""
    if x.X0.shape[0] != a.V0_dim or x.X1.shape[0] != a.V1_dim:
        raise ValueError("2-derivation dimensions do not match the algebra")
    D, c, r, l5 = a.d, a.l3_000, a.l3_001, a.l5
    X0, X1, lX = x.X0, x.X1, x.lX
    parts = [_report("(a)", X0 @ D - D @ X1, None, 2)]
    # (b) d lX = X0 l3 - l3(X0 x, y, z) - l3(x, X0 y, z) - l3(x, y, X0 z)
    rhs = (
        einsum("os,xyzs->xyzo", X0, c)
        - einsum("sx,syzo->xyzo", X0, c)
        - einsum("sy,xszo->xyzo", X0, c)
        - einsum("sz,xyso->xyzo", X0, c)
    )
    parts.append(_report("(b)", einsum("ow,xyzw->xyzo", D, lX) - rhs, _inc((0, 1, 2)), 3))
    # (c) lX(x, y, dv) = X1 l3(x,y,v) - l3(X0 x, y, v) - l3(x, X0 y, v) - l3(x, y, X1 v)
    rhs = (
        einsum("wt,xyvt->xyvw", X1, r)
        - einsum("sx,syvw->xyvw", X0, r)
        - einsum("sy,xsvw->xyvw", X0, r)
        - einsum("tv,xytw->xyvw", X1, r)
    )
    parts.append(_report("(c)", einsum("xysw,sv->xyvw", lX, D) - rhs, _inc((0, 1)), 3))
    # (d) X1 l5 = lX/l3 terms + sum_i l5(.., X0 x_i, ..)
    lhs = einsum("wt,abcdet->abcdew", X1, l5)
    rhs = _lx_expression(c, r, lX) + _l5_derivation(l5, X0)
    parts.append(_report("(d)", lhs - rhs, _inc((0, 1), (2, 3, 4)), 5))
    return Report.combine("2-derivation", parts)


def check_lie2der(p: Lie2DerPair) -> Report:
    return Report.combine("3-Lie2Der pair", [check_lie2(p.algebra), check_2derivation(p.algebra, p.der)])


def adjoint_2derivation(a: ThreeLie2Algebra, i: int, j: int) -> TwoDerivation:
    """X = ad_{e_i ^ e_j} on V0 + V1 and lX = -l5(e_i, e_j, ., ., .)."""
    X0 = a.l3_000[i, j].T
    X1 = a.l3_001[i, j].T
    return TwoDerivation(X0, X1, -a.l5[i, j])


# converters --------------------------------------------------------------------


def _rho_tensor(r: QArray) -> QArray:
    """Pair-indexed rho[P, w, v] from l3_001[x, y, v, w]."""
    n0 = r.shape[0]
    a, b = pair_arrays(n0)
    return QArray(np.transpose(r.num[a, b], (0, 2, 1)), r.den)


def _l3_001_from_rep(rep: Representation) -> QArray:
    return rep.full.transpose(0, 1, 3, 2)


def _full_l5(alpha3: PlainCochain) -> QArray:
    """Full l5 tensor from a degree-3 cochain; requires skewness in (x3, x4, x5)."""
    n, v = alpha3.algebra_dim, alpha3.module_dim
    a, b = pair_arrays(n)
    t = alpha3.tensor
    num = np.zeros((n,) * 5 + (v,), dtype=t.num.dtype)
    if len(a):
        half = np.zeros((len(a), n, n, n, v), dtype=t.num.dtype)
        half[:, a, b] = t.num
        half[:, b, a] = -t.num
        num[a, b] = half
        num[b, a] = -half
    out = QArray(num, t.den)
    bad = _skew_triple_defect(out, 2)
    if bad is not None:
        raise ValueError(f"alpha_3 is not skew-symmetric in its last three arguments at {bad}")
    return out


def _full_trilinear(alpha2: PlainCochain) -> QArray:
    t = alpha2.as_trilinear()
    bad = skew_defect_3(t)
    if bad is not None:
        raise ValueError(f"alpha_2 is not totally skew-symmetric at {bad}")
    return t


def _l5_cochain(l5: QArray) -> PlainCochain:
    n, v = l5.shape[0], l5.shape[5]
    a, b = pair_arrays(n)
    m = len(a)
    num = l5.num[a, b][:, a, b] if m else np.zeros((0, 0, n, v), dtype=l5.num.dtype)
    return PlainCochain(3, n, v, QArray(num, l5.den))


def skeletal_parametrization(n: int, v: int) -> QArray:
    """Matrix from coordinates of (alpha_3, alpha_2) with the skewness a triple needs
    to degree-3 pair-cochain coordinates.

    alpha_3 coordinates are ``alpha_3(e_a ^ e_b, e_i, e_j, e_k)[o]`` for a<b, i<j<k,
    ordered by (pair, triple, o); alpha_2 coordinates follow by (triple, o).
    """
    prs = list(itertools.combinations(range(n), 2))
    trip = list(itertools.combinations(range(n), 3))
    m = len(prs)
    pidx = {p: i for i, p in enumerate(prs)}
    na = plain_dim(3, n, v)
    num = np.zeros((na + plain_dim(2, n, v), (m + 1) * len(trip) * v), dtype=np.int64)
    for t, (i, j, k) in enumerate(trip):
        terms = (((i, j), k, 1), ((i, k), j, -1), ((j, k), i, 1))
        for o in range(v):
            for P in range(m):
                col = (P * len(trip) + t) * v + o
                for q, z, s in terms:
                    num[((P * m + pidx[q]) * n + z) * v + o, col] = s
            col = (m * len(trip) + t) * v + o
            for q, z, s in terms:
                num[na + (pidx[q] * n + z) * v + o, col] = s
    return QArray(num)


def skeletal_cocycles(pair: LieDerPair, prep: PairRepresentation) -> list[PairCochain]:
    """Basis of the 3-cocycles that can form a skeletal triple with (pair, prep)."""
    n, v = pair.dim, prep.module_dim
    S = skeletal_parametrization(n, v)
    cx = CochainComplex(pair, prep, max_degree=3)
    K = kernel(cx.partial_matrix(3) @ S)
    return [PairCochain.from_vector(3, n, v, S @ k) for k in K.vectors()]


def skeletal_to_triple(p: Lie2DerPair) -> SkeletalTriple:
    """(V0, X0), (V1; rho = l3(x, y, .), X1), (l5, lX)."""
    a, x = p.algebra, p.der
    if not a.is_skeletal:
        raise ValueError("the 3-Lie 2-algebra is not skeletal (d != 0)")
    L = ThreeLieAlgebra.from_tensor(a.l3_000, check=False)
    pair = LieDerPair(L, x.X0, check=False)
    prep = PairRepresentation(Representation(a.V0_dim, a.V1_dim, _rho_tensor(a.l3_001)), x.X1)
    cocycle = PairCochain(_l5_cochain(a.l5), PlainCochain.from_trilinear(x.lX))
    return SkeletalTriple(pair, prep, cocycle)


def triple_to_skeletal(t: SkeletalTriple) -> Lie2DerPair:
    """d = 0, l3 from the bracket and rho, l5 = alpha_3, lX = alpha_2, X0 = theta_L, X1 = theta_V."""
    n, v = t.pair.dim, t.prep.module_dim
    l5 = _full_l5(t.cocycle.alpha)
    lX = _full_trilinear(t.cocycle.beta)
    alg = ThreeLie2Algebra(v, n, None, t.pair.algebra.structure, _l3_001_from_rep(t.prep.rep), l5)
    return Lie2DerPair(alg, TwoDerivation(t.pair.theta, t.prep.theta_V, lX))


def check_triple(t: SkeletalTriple, max_degree: int = 4) -> Report:
    """Pair, representation and the cocycle condition."""
    cx = CochainComplex(t.pair, t.prep, max_degree=max(max_degree, 3))
    img = cx.partial(t.cocycle)
    cocycle = Report.passed("cocycle") if img.is_zero() else Report.failed("cocycle", img.alpha.tensor.first_nonzero())
    return Report.combine("skeletal triple", [check_pair(t.pair), check_pair_representation(t.pair, t.prep), cocycle])


def strict_to_crossed(p: Lie2DerPair) -> CrossedModule:
    """A = V1 with [u, v, w] = l3(du, dv, w), B = V0, rho = l3(x, y, .), eta = d."""
    a, x = p.algebra, p.der
    if not a.is_strict or not x.is_strict:
        raise ValueError("the pair is not strict (l5 or lX nonzero)")
    D, r = a.d, a.l3_001
    # [u, v, w]_A = l3(du, dv, w)
    cA = einsum("su,tv,stwo->uvwo", D, D, r)
    A = ThreeLieAlgebra.from_tensor(cA, check=False)
    B = ThreeLieAlgebra.from_tensor(a.l3_000, check=False)
    A_pair = LieDerPair(A, x.X1, check=False)
    B_pair = LieDerPair(B, x.X0, check=False)
    rho = PairRepresentation(Representation(a.V0_dim, a.V1_dim, _rho_tensor(r)), x.X1)
    return CrossedModule(A_pair, B_pair, rho, D)


def crossed_to_strict(c: CrossedModule) -> Lie2DerPair:
    """V1 = A, V0 = B, d = eta, l3 = ([,,]_B, rho), l5 = 0, lX = 0."""
    alg = ThreeLie2Algebra(c.A_pair.dim, c.B_pair.dim, c.eta, c.B_pair.algebra.structure,
                           _l3_001_from_rep(c.rho.rep))
    return Lie2DerPair(alg, TwoDerivation(c.B_pair.theta, c.A_pair.theta))


def check_crossed_module(c: CrossedModule) -> Report:
    """Both pairs, the representation, eta a pair morphism, and the four compatibility equations."""
    cA, cB = c.A_pair.algebra.structure, c.B_pair.algebra.structure
    rf = c.rho.rep.full  # [x, y, w, v]: coordinate w of rho(x, y) v
    eta = c.eta
    parts = [
        check_pair(c.A_pair).renamed("A pair"),
        check_pair(c.B_pair).renamed("B pair"),
        check_pair_representation(c.B_pair, c.rho),
        check_pair_morphism(c.A_pair, c.B_pair, eta).renamed("eta morphism"),
    ]
    # (5.1) eta(rho(x, y) u) = [x, y, eta u]_B
    e1 = einsum("ow,xywu->xyuo", eta, rf) - einsum("zu,xyzo->xyuo", eta, cB)
    parts.append(_report("eta equivariance", e1, _inc((0, 1)), 3))
    # (5.2) rho(eta u, eta v) w = [u, v, w]_A
    e2 = einsum("xu,yv,xyow->uvwo", eta, eta, rf) - cA
    parts.append(_report("rho through eta", e2, _inc((0, 1)), 3))
    # (5.3) rho(x, eta u) v = -rho(x, eta v) u
    e3 = einsum("yu,xyov->xuvo", eta, rf) + einsum("yv,xyou->xuvo", eta, rf)
    parts.append(_report("Peiffer skewness", e3, _inc((1, 2)), 3))
    # (5.4) rho(x, y) is a derivation of [, ,]_A
    e4 = (
        einsum("uvws,xyos->xyuvwo", cA, rf)
        - einsum("xysu,svwo->xyuvwo", rf, cA)
        - einsum("xysv,uswo->xyuvwo", rf, cA)
        - einsum("xysw,uvso->xyuvwo", rf, cA)
    )
    parts.append(_report("rho acts by derivations", e4, _inc((0, 1), (2, 3, 4)), 5))
    return Report.combine("crossed module", parts)


# isomorphisms and equivalences ---------------------------------------------------


def check_iso_lie2der(p: Lie2DerPair, q: Lie2DerPair, f0, f1, f2=None, g=None) -> Report:
    """(f0, f1, f2) an isomorphism of 3-Lie 2-algebras plus the three conditions on (X, X')."""
    A, B = p.algebra, q.algebra
    f0, f1 = QArray.of(f0), QArray.of(f1)
    _shape_error("f0", (B.V0_dim, A.V0_dim), f0.shape)
    _shape_error("f1", (B.V1_dim, A.V1_dim), f1.shape)
    if not is_invertible(f0) or not is_invertible(f1):
        raise ValueError("f0 and f1 must be invertible")
    f2 = QArray.zeros((A.V0_dim,) * 3 + (B.V1_dim,)) if f2 is None else QArray.of(f2)
    g = QArray.zeros((B.V1_dim, A.V0_dim)) if g is None else QArray.of(g)
    _shape_error("f2", (A.V0_dim,) * 3 + (B.V1_dim,), f2.shape)
    _shape_error("g", (B.V1_dim, A.V0_dim), g.shape)
    bad = skew_defect_3(f2)
    if bad is not None:
        raise ValueError(f"f2 is not totally skew-symmetric at {bad}")
    c, r, l5 = A.l3_000, A.l3_001, A.l5
    c2, r2, l52 = B.l3_000, B.l3_001, B.l5
    # images under f0 of the target brackets: c2f[x, y, z, o] = l3'(f0 x, f0 y, f0 z)
    c2f = einsum("ax,by,cz,abco->xyzo", f0, f0, f0, c2)
    r2f = einsum("ax,by,abtw->xytw", f0, f0, r2)  # l3'(f0 x, f0 y, t) for t in V1'
    parts = [_report("chain map", f0 @ A.d - B.d @ f1, None, 2)]
    # (a) d' f2 = f0 l3 - l3'(f0, f0, f0)
    parts.append(_report("morphism (a)", einsum("ow,xyzw->xyzo", B.d, f2) - einsum("os,xyzs->xyzo", f0, c) + c2f,
                         _inc((0, 1, 2)), 3))
    # (b) f2(x1, x2, dv) = f1 l3(x1, x2, v) - l3'(f0 x1, f0 x2, f1 v)
    rhs = einsum("wt,xyvt->xyvw", f1, r) - einsum("tv,xytw->xyvw", f1, r2f)
    parts.append(_report("morphism (b)", einsum("xysw,sv->xyvw", f2, A.d) - rhs, _inc((0, 1)), 3))
    # (c)
    lhs = (
        einsum("abtw,cdet->abcdew", r2f, f2)
        - einsum("abct,detw->abcdew", f2, r2f)
        + einsum("abdt,cetw->abcdew", f2, r2f)
        - einsum("abet,cdtw->abcdew", f2, r2f)
        - einsum("pa,qb,rc,sd,ue,pqrsuw->abcdew", f0, f0, f0, f0, f0, l52)
    )
    rhs = (
        einsum("abcs,sdew->abcdew", c, f2)
        + einsum("abds,csew->abcdew", c, f2)
        + einsum("abes,cdsw->abcdew", c, f2)
        - einsum("cdes,absw->abcdew", c, f2)
        - einsum("wt,abcdet->abcdew", f1, l5)
    )
    parts.append(_report("morphism (c)", lhs - rhs, _inc((0, 1), (2, 3, 4)), 5))
    X, Y = p.der, q.der
    # (a) X0' f0 - f0 X0 = d' g
    parts.append(_report("pair (a)", Y.X0 @ f0 - f0 @ X.X0 - B.d @ g, None, 2))
    # (b) X1' f1 - f1 X1 = g d
    parts.append(_report("pair (b)", Y.X1 @ f1 - f1 @ X.X1 - g @ A.d, None, 2))
    # (c)
    lhs = (
        einsum("wt,xyzt->xyzw", f1, X.lX)
        + einsum("sx,syzw->xyzw", X.X0, f2)
        + einsum("sy,xszw->xyzw", X.X0, f2)
        + einsum("sz,xysw->xyzw", X.X0, f2)
        - einsum("wt,xyzt->xyzw", Y.X1, f2)
        - einsum("ax,by,cz,abcw->xyzw", f0, f0, f0, Y.lX)
    )
    rhs = (
        einsum("tx,yztw->xyzw", g, r2f)
        - einsum("ty,xztw->xyzw", g, r2f)
        + einsum("tz,xytw->xyzw", g, r2f)
        - einsum("wo,xyzo->xyzw", g, c)
    )
    parts.append(_report("pair (c)", lhs - rhs, _inc((0, 1, 2)), 3))
    return Report.combine("3-Lie2Der isomorphism", parts)


def check_triple_equivalence(t1: SkeletalTriple, t2: SkeletalTriple, sigma, tau, lam=None, mu=None) -> Report:
    """Conditions (a)-(d) of equivalent triples, cross-checked against the skeletal isomorphism."""
    sigma, tau = QArray.of(sigma), QArray.of(tau)
    n, v = t1.pair.dim, t1.prep.module_dim
    n2, v2 = t2.pair.dim, t2.prep.module_dim
    _shape_error("sigma", (n2, n), sigma.shape)
    _shape_error("tau", (v2, v), tau.shape)
    if not is_invertible(sigma) or not is_invertible(tau):
        raise ValueError("sigma and tau must be invertible")
    lam = QArray.zeros((n, n, n, v2)) if lam is None else QArray.of(lam)
    mu = QArray.zeros((v2, n)) if mu is None else QArray.of(mu)
    _shape_error("lambda", (n, n, n, v2), lam.shape)
    _shape_error("mu", (v2, n), mu.shape)
    bad = skew_defect_3(lam)
    if bad is not None:
        raise ValueError(f"lambda is not totally skew-symmetric at {bad}")
    c = t1.pair.algebra.structure
    th = t1.pair.theta
    tv, tv2 = t1.prep.theta_V, t2.prep.theta_V
    rf, rf2 = t1.prep.rep.full, t2.prep.rep.full
    a3, a3p = _full_l5(t1.cocycle.alpha), _full_l5(t2.cocycle.alpha)
    a2, a2p = _full_trilinear(t1.cocycle.beta), _full_trilinear(t2.cocycle.beta)
    rs = einsum("ax,by,abwv->xywv", sigma, sigma, rf2)  # rho'(sigma x, sigma y)
    parts = [check_pair_morphism(t1.pair, t2.pair, sigma).renamed("sigma pair isomorphism")]
    parts.append(_report("(a)", tv2 @ tau - tau @ tv, None, 2))
    # (b) tau rho(x, y) = rho'(sigma x, sigma y) tau
    parts.append(_report("(b)", einsum("ws,xysv->xywv", tau, rf) - einsum("xyws,sv->xywv", rs, tau), _inc((0, 1)), 2))
    # (c)
    lhs = (
        einsum("abcs,sdew->abcdew", c, lam)
        + einsum("abds,csew->abcdew", c, lam)
        + einsum("abes,cdsw->abcdew", c, lam)
        - einsum("cdes,absw->abcdew", c, lam)
        - einsum("wt,abcdet->abcdew", tau, a3)
    )
    rhs = (
        einsum("abwt,cdet->abcdew", rs, lam)
        - einsum("cdwt,abet->abcdew", rs, lam)
        - einsum("dewt,abct->abcdew", rs, lam)
        - einsum("ecwt,abdt->abcdew", rs, lam)
        - einsum("pa,qb,rc,sd,ue,pqrsuw->abcdew", sigma, sigma, sigma, sigma, sigma, a3p)
    )
    parts.append(_report("(c)", lhs - rhs, _inc((0, 1), (2, 3, 4)), 5))
    # (d)
    lhs = (
        einsum("wt,xyzt->xyzw", tau, a2)
        + einsum("sx,syzw->xyzw", th, lam)
        + einsum("sy,xszw->xyzw", th, lam)
        + einsum("sz,xysw->xyzw", th, lam)
        - einsum("wt,xyzt->xyzw", tv2, lam)
        - einsum("ax,by,cz,abcw->xyzw", sigma, sigma, sigma, a2p)
    )
    rhs = (
        einsum("xywt,tz->xyzw", rs, mu)
        + einsum("yzwt,tx->xyzw", rs, mu)
        + einsum("zxwt,ty->xyzw", rs, mu)
        - einsum("wo,xyzo->xyzw", mu, c)
    )
    parts.append(_report("(d)", lhs - rhs, _inc((0, 1, 2)), 3))
    direct = Report.combine("triple equivalence", parts)
    iso = check_iso_lie2der(triple_to_skeletal(t1), triple_to_skeletal(t2), sigma, tau, lam, mu)
    if direct.ok != iso.ok:
        return Report("triple equivalence", False, ("disagrees with the skeletal isomorphism", iso.witness),
                      {"isomorphism_agrees": False}, direct.parts)
    return Report.combine("triple equivalence", parts, isomorphism_agrees=True)


def check_crossed_equivalence(c1: CrossedModule, c2: CrossedModule, sigma, tau) -> Report:
    """sigma: B -> B' and tau: A -> A' pair isomorphisms with sigma eta = eta' tau and
    tau rho(x, y) tau^-1 = rho'(sigma x, sigma y)."""
    sigma, tau = QArray.of(sigma), QArray.of(tau)
    _shape_error("sigma", (c2.B_pair.dim, c1.B_pair.dim), sigma.shape)
    _shape_error("tau", (c2.A_pair.dim, c1.A_pair.dim), tau.shape)
    if not is_invertible(sigma) or not is_invertible(tau):
        raise ValueError("sigma and tau must be invertible")
    parts = [
        check_pair_morphism(c1.B_pair, c2.B_pair, sigma).renamed("sigma pair isomorphism"),
        check_pair_morphism(c1.A_pair, c2.A_pair, tau).renamed("tau pair isomorphism"),
        _report("(a)", sigma @ c1.eta - c2.eta @ tau, None, 2),
    ]
    rf, rf2 = c1.rho.rep.full, c2.rho.rep.full
    rs = einsum("ax,by,abwv->xywv", sigma, sigma, rf2)
    ti = inverse(tau)
    conj = einsum("ws,xyst,tv->xywv", tau, rf, ti)
    parts.append(_report("(b)", conj - rs, _inc((0, 1)), 2))
    return Report.combine("crossed module equivalence", parts)


def transport_crossed(c: CrossedModule, sigma, tau) -> CrossedModule:
    """The crossed module carried along sigma: B -> B' and tau: A -> A'."""
    from .threelie import transport

    sigma, tau = QArray.of(sigma), QArray.of(tau)
    si, ti = inverse(sigma), inverse(tau)
    B = LieDerPair(transport(c.B_pair.algebra, sigma), sigma @ c.B_pair.theta @ si, check=False)
    A = LieDerPair(transport(c.A_pair.algebra, tau), tau @ c.A_pair.theta @ ti, check=False)
    full = einsum("xa,yb,ws,xyst,tv->abwv", si, si, tau, c.rho.rep.full, ti)
    a, b = pair_arrays(B.dim)
    rho = PairRepresentation(Representation(B.dim, A.dim, QArray(full.num[a, b], full.den)), A.theta)
    return CrossedModule(A, B, rho, sigma @ c.eta @ ti)
