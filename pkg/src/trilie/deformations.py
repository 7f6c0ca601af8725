"""Truncated formal deformations of 3-LieDer pairs, obstructions and extensions.

A deformation of order N is stored as two lists ``f[0..N]`` (full skew tensors
``f[x, y, z, out]``) and ``g[0..N]`` (matrices), with ``f[0]`` the bracket and
``g[0]`` the derivation of the base pair.  All cohomology is taken in the
adjoint complex of the base pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence


from .cochains import CochainComplex, PairCochain, PlainCochain, skew_parametrization, unpack_skew
from .linalg import Subspace, infeasibility_certificate, kernel, solve
from .qarray import QArray, einsum
from .report import Report
from .representations import adjoint
from .threelie import LieDerPair, pair_arrays, pair_count, skew_defect_3


def _as_list(items) -> list[QArray]:
    return [QArray.of(x) for x in items]


class TruncatedDeformation:
    """``f_t = sum f_i t^i`` and ``g_t = sum g_i t^i`` modulo t^(N+1)."""

    __slots__ = ("base", "f", "g")

    def __init__(self, base: LieDerPair, f: Sequence, g: Sequence):
        self.base = base
        f, g = _as_list(f), _as_list(g)
        n = base.dim
        if len(f) != len(g) or not f:
            raise ValueError("f and g need the same positive number of terms")
        for i, fi in enumerate(f):
            if fi.shape != (n, n, n, n):
                raise ValueError(f"f_{i} must have shape {(n,) * 4}")
            bad = skew_defect_3(fi)
            if bad is not None:
                raise ValueError(f"f_{i} is not totally skew-symmetric at {bad}")
        for i, gi in enumerate(g):
            if gi.shape != (n, n):
                raise ValueError(f"g_{i} must be {n}x{n}")
        if f[0] != base.algebra.structure:
            raise ValueError("f_0 must be the bracket of the base pair")
        if g[0] != base.theta:
            raise ValueError("g_0 must be the derivation of the base pair")
        self.f = tuple(f)
        self.g = tuple(g)

    @property
    def order(self) -> int:
        return len(self.f) - 1

    @property
    def dim(self) -> int:
        return self.base.dim

    @classmethod
    def trivial(cls, base: LieDerPair, order: int) -> "TruncatedDeformation":
        n = base.dim
        zf = QArray.zeros((n, n, n, n))
        zg = QArray.zeros((n, n))
        return cls(base, [base.algebra.structure] + [zf] * order, [base.theta] + [zg] * order)

    @classmethod
    def first_order(cls, base: LieDerPair, f1, g1) -> "TruncatedDeformation":
        return cls(base, [base.algebra.structure, f1], [base.theta, g1])

    def truncate(self, order: int) -> "TruncatedDeformation":
        return TruncatedDeformation(self.base, self.f[: order + 1], self.g[: order + 1])

    def term(self, i: int) -> PairCochain:
        """``(f_i, g_i)`` as a degree-2 pair cochain."""
        return PairCochain(PlainCochain.from_trilinear(self.f[i]), PlainCochain.from_map(self.g[i]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedDeformation)
            and self.base == other.base
            and self.f == other.f
            and self.g == other.g
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TruncatedDeformation(dim={self.dim}, order={self.order})"


@dataclass(frozen=True)
class DeformationEquivalence:
    """``Phi_t = sum phi_i t^i`` with ``phi_0 = id``."""

    phi: tuple

    def __post_init__(self):
        phi = tuple(QArray.of(p) for p in self.phi)
        object.__setattr__(self, "phi", phi)
        if not phi:
            raise ValueError("phi needs at least phi_0")
        n = phi[0].shape[0]
        if phi[0] != QArray.identity(n):
            raise ValueError("phi_0 must be the identity")

    @classmethod
    def from_terms(cls, n: int, terms: Sequence) -> "DeformationEquivalence":
        return cls((QArray.identity(n),) + tuple(terms))

    def coefficient(self, i: int) -> QArray:
        if i < len(self.phi):
            return self.phi[i]
        return QArray.zeros(self.phi[0].shape)


# the quadratic expressions of the deformation equations ----------------------------


def e_term(fi: QArray, fj: QArray) -> QArray:
    """fi(fj(x1,x2,x3),x4,x5) + fi(x3,fj(x1,x2,x4),x5) + fi(x3,x4,fj(x1,x2,x5)) - fi(x1,x2,fj(x3,x4,x5))."""
    return (
        einsum("abcw,wdeo->abcdeo", fj, fi)
        + einsum("abdw,cweo->abcdeo", fj, fi)
        + einsum("abew,cdwo->abcdeo", fj, fi)
        - einsum("cdew,abwo->abcdeo", fj, fi)
    )


def g_term(gi: QArray, fj: QArray) -> QArray:
    """gi(fj(x1,x2,x3)) - fj(gi x1,x2,x3) - fj(x1,gi x2,x3) - fj(x1,x2,gi x3)."""
    return (
        einsum("abcw,ow->abco", fj, gi)
        - einsum("wa,wbco->abco", gi, fj)
        - einsum("wb,awco->abco", gi, fj)
        - einsum("wc,abwo->abco", gi, fj)
    )


def _order_sums(d: TruncatedDeformation, k: int, positive_only: bool):
    n = d.dim
    E = QArray.zeros((n,) * 6)
    G = QArray.zeros((n,) * 4)
    lo = 1 if positive_only else 0
    for i in range(lo, k + 1 - lo):
        j = k - i
        if j > d.order or i > d.order:
            continue
        E = E + e_term(d.f[i], d.f[j])
        G = G + g_term(d.g[i], d.f[j])
    return E, G


def check_deformation(d: TruncatedDeformation) -> Report:
    """Both deformation equations at every order 0..N; the witness is (order, tuple)."""
    parts = []
    for k in range(d.order + 1):
        E, G = _order_sums(d, k, positive_only=False)
        hit = next((t for t in E.nonzero_indices() if t[0] < t[1] and t[2] < t[3] < t[4]), None)
        if hit is not None:
            parts.append(Report.failed(f"order {k} bracket equation", (k, hit[:5])))
        else:
            parts.append(Report.passed(f"order {k} bracket equation"))
        hit = next((t for t in G.nonzero_indices() if t[0] < t[1] < t[2]), None)
        if hit is not None:
            parts.append(Report.failed(f"order {k} derivation equation", (k, hit[:3])))
        else:
            parts.append(Report.passed(f"order {k} derivation equation"))
    return Report.combine("deformation", parts, order=d.order)


def n_infinitesimal(d: TruncatedDeformation) -> Optional[tuple[int, PairCochain]]:
    """The least n >= 1 with (f_n, g_n) != 0 and that term; None when trivial at every order."""
    for k in range(1, d.order + 1):
        if not (d.f[k].is_zero() and d.g[k].is_zero()):
            return k, d.term(k)
    return None


def _series_inverse(phi: DeformationEquivalence, order: int) -> list[QArray]:
    psi = [phi.phi[0]]
    for k in range(1, order + 1):
        acc = QArray.zeros(psi[0].shape)
        for i in range(1, k + 1):
            acc = acc - phi.coefficient(i) @ psi[k - i]
        psi.append(acc)
    return psi


def apply_equivalence(d: TruncatedDeformation, e: DeformationEquivalence) -> TruncatedDeformation:
    """(Phi^-1 o f_t o (Phi x Phi x Phi), Phi^-1 o g_t o Phi) truncated at the order of d."""
    N = d.order
    n = d.dim
    psi = _series_inverse(e, N)
    phi = [e.coefficient(i) for i in range(N + 1)]
    # inner_k = sum_{l+b+c+e=k} f_l(phi_b x, phi_c y, phi_e z)
    inner = []
    for k in range(N + 1):
        acc = QArray.zeros((n,) * 4)
        for l in range(k + 1):
            for b, c in itertools.product(range(k - l + 1), repeat=2):
                e_ = k - l - b - c
                if e_ < 0:
                    continue
                acc = acc + einsum("ai,bj,ck,abco->ijko", phi[b], phi[c], phi[e_], d.f[l])
        inner.append(acc)
    ginner = []
    for k in range(N + 1):
        acc = QArray.zeros((n, n))
        for l in range(k + 1):
            acc = acc + d.g[l] @ phi[k - l]
        ginner.append(acc)
    f_new, g_new = [], []
    for k in range(N + 1):
        fa = QArray.zeros((n,) * 4)
        ga = QArray.zeros((n, n))
        for a in range(k + 1):
            fa = fa + einsum("ijkw,ow->ijko", inner[k - a], psi[a])
            ga = ga + psi[a] @ ginner[k - a]
        f_new.append(fa)
        g_new.append(ga)
    return TruncatedDeformation(d.base, f_new, g_new)


# obstructions and extensions ----------------------------------------------------------


def obstruction(d: TruncatedDeformation) -> PairCochain:
    """The degree-3 cochain (Omega^3_{N+1}, Omega^2_{N+1}) of an order-N deformation."""
    n = d.dim
    E, G = _order_sums(d, d.order + 1, positive_only=True)
    a, b = pair_arrays(n)
    m = pair_count(n)
    # alpha[P1, P2, z, out] = E[a1, b1, a2, b2, z, out]
    e_num = E.num[a, b]  # [P1, c, d, e, o]
    alpha = QArray(e_num[:, a, b], E.den).reshape(m, m, n, n)
    beta = QArray(G.num[a, b], G.den)
    return PairCochain(PlainCochain(3, n, n, alpha), PlainCochain(2, n, n, beta))


def skew_pair_cochain(f: QArray, g: QArray) -> PairCochain:
    return PairCochain(PlainCochain.from_trilinear(f), PlainCochain.from_map(g))


@dataclass(frozen=True)
class ExtensionResult:
    """Outcome of ``extend``: a witness (f_{N+1}, g_{N+1}) or certificates of failure."""

    obstruction: PairCochain
    witness: Optional[tuple]
    in_image: bool
    certificate: Optional[QArray] = None

    @property
    def extensible(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.extensible


def _complex(d: TruncatedDeformation) -> CochainComplex:
    return CochainComplex(d.base, adjoint(d.base))


def extend(d: TruncatedDeformation, *, complex_: Optional[CochainComplex] = None) -> ExtensionResult:
    """Solve partial(f_{N+1}, g_{N+1}) = obstruction with f_{N+1} totally skew.

    ``in_image`` records membership of the obstruction in the full image of
    partial_2; when it fails, ``certificate`` is a vector y with
    y . partial_2 = 0 and y . obstruction != 0.
    """
    cx = complex_ or _complex(d)
    n = d.dim
    om = obstruction(d)
    target = om.vector()
    M = cx.partial_matrix(2)
    S = skew_parametrization(n, n)
    x = solve(M @ S, target)
    if x is not None:
        f, g = unpack_skew(n, n, x)
        return ExtensionResult(om, (f, g), True)
    full = solve(M, target)
    if full is not None:
        return ExtensionResult(om, None, True)
    return ExtensionResult(om, None, False, infeasibility_certificate(M, target))


def extended(d: TruncatedDeformation, f_next, g_next) -> TruncatedDeformation:
    return TruncatedDeformation(d.base, list(d.f) + [QArray.of(f_next)], list(d.g) + [QArray.of(g_next)])


def skew_cocycles(cx: CochainComplex) -> list[tuple[QArray, QArray]]:
    """Basis of the totally skew 2-cocycles as (f, g) pairs."""
    n = cx.n
    S = skew_parametrization(n, n)
    ker = kernel(cx.partial_matrix(2) @ S)
    return [unpack_skew(n, n, v) for v in ker.vectors()]


def rigidity_probe(pair: LieDerPair, N: int = 2) -> Report:
    """Report dim H^2; when it vanishes the pair is rigid.

    Otherwise list representatives of nontrivial infinitesimals (totally skew
    cocycles outside the coboundaries) and how far each extends order by
    order, up to N.  A nonzero H^2 is never reported as non-rigidity.
    """
    cx = CochainComplex(pair, adjoint(pair))
    h = cx.cohomology(2)
    if h["cohomology"] == 0:
        return Report("rigidity", True, None, {"h2": 0, "verdict": "rigid (H^2 = 0)"})
    bound = cx.coboundaries(2)
    reps = []
    current = bound
    for f, g in skew_cocycles(cx):
        v = skew_pair_cochain(f, g).vector()
        if not current.contains(v):
            reps.append((f, g))
            current = Subspace.span(current.vectors() + [v], cx.dim(2))
    reach = []
    for f, g in reps:
        d = TruncatedDeformation.first_order(pair, f, g)
        while d.order < N:
            res = extend(d, complex_=cx)
            if not res.extensible:
                break
            d = extended(d, *res.witness)
        reach.append(d.order)
    return Report(
        "rigidity",
        False,
        None,
        {
            "h2": h["cohomology"],
            "skew_h2": len(reps),
            "representatives": reps,
            "extends_to_order": reach,
            "verdict": "inconclusive (H^2 != 0 does not disprove rigidity)",
        },
    )
