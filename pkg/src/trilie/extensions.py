"""Abelian extensions of 3-LieDer pairs and their classifying 2-cocycles.

The total space of a built extension is B + A with the B basis first, so the
canonical section is ``[I; 0]`` and the inclusion of A is ``[0; I]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cochains import CochainComplex, PairCochain, PlainCochain, skew_parametrization, unpack_skew
from .linalg import infeasibility_certificate, inverse, kernel, rank, solve
from .qarray import QArray, einsum
from .report import Report
from .representations import PairRepresentation, Representation, block_diag, semidirect_tensor
from .threelie import (
    LieDerPair,
    ThreeLieAlgebra,
    _first_violation,
    check_pair,
    check_pair_morphism,
    pair_arrays,
    skew_defect_3,
)


@dataclass(frozen=True)
class ExtensionCocycle:
    """``psi[x, y, z, a]`` totally skew B^3 -> A and ``lam[a, x]`` : B -> A."""

    psi: QArray
    lam: QArray

    def __post_init__(self):
        psi, lam = QArray.of(self.psi), QArray.of(self.lam)
        if psi.ndim != 4 or len(set(psi.shape[:3])) != 1:
            raise ValueError("psi must have shape (n_B, n_B, n_B, n_A)")
        if lam.shape != (psi.shape[3], psi.shape[0]):
            raise ValueError(f"lam must be {psi.shape[3]}x{psi.shape[0]}")
        bad = skew_defect_3(psi)
        if bad is not None:
            raise ValueError(f"psi is not totally skew-symmetric at {bad}")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lam", lam)

    @classmethod
    def zero(cls, nB: int, nA: int) -> "ExtensionCocycle":
        return cls(QArray.zeros((nB, nB, nB, nA)), QArray.zeros((nA, nB)))

    @classmethod
    def from_pair_cochain(cls, c: PairCochain) -> "ExtensionCocycle":
        if c.degree != 2:
            raise ValueError("an extension cocycle has degree 2")
        return cls(c.alpha.as_trilinear(), c.beta.as_map())

    @property
    def base_dim(self) -> int:
        return self.psi.shape[0]

    @property
    def module_dim(self) -> int:
        return self.psi.shape[3]

    def as_pair_cochain(self) -> PairCochain:
        return PairCochain(PlainCochain.from_trilinear(self.psi), PlainCochain.from_map(self.lam))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtensionCocycle) and self.psi == other.psi and self.lam == other.lam

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Section:
    """A linear map s: B -> L, stored as an ``(dim L) x (dim B)`` matrix."""

    s: QArray

    def __post_init__(self):
        object.__setattr__(self, "s", QArray.of(self.s))


@dataclass(frozen=True)
class ExtensionData:
    """0 -> (A, theta_A) -incl-> total -proj-> (B, theta_B) -> 0."""

    total: LieDerPair
    incl: QArray
    proj: QArray
    base: LieDerPair
    theta_A: QArray

    def __post_init__(self):
        N = self.total.dim
        object.__setattr__(self, "incl", QArray.of(self.incl))
        object.__setattr__(self, "proj", QArray.of(self.proj))
        object.__setattr__(self, "theta_A", QArray.of(self.theta_A))
        nA = self.theta_A.shape[0]
        if self.incl.shape != (N, nA):
            raise ValueError(f"incl must be {N}x{nA}")
        if self.proj.shape != (self.base.dim, N):
            raise ValueError(f"proj must be {self.base.dim}x{N}")

    @property
    def kernel_pair(self) -> LieDerPair:
        """(A, theta_A) with the zero bracket."""
        return LieDerPair(ThreeLieAlgebra.abelian(self.theta_A.shape[0]), self.theta_A, check=False)

    def canonical_section(self) -> Section:
        """A right inverse of proj; equal to ``[I; 0]`` for built extensions."""
        p = self.proj
        return Section(p.T @ inverse(p @ p.T))

    def retraction(self) -> QArray:
        """A left inverse r of incl, used to read A-coordinates of elements of incl(A)."""
        i = self.incl
        return inverse(i.T @ i) @ i.T


def _split(nB: int, nA: int) -> tuple[QArray, QArray]:
    eye_B = np.eye(nB, dtype=np.int64)
    eye_A = np.eye(nA, dtype=np.int64)
    incl = QArray(np.vstack([np.zeros((nB, nA), dtype=np.int64), eye_A]))
    proj = QArray(np.hstack([eye_B, np.zeros((nB, nA), dtype=np.int64)]))
    return incl, proj


def build_extension(B_pair: LieDerPair, A_prep: PairRepresentation, coc: Optional[ExtensionCocycle] = None) -> ExtensionData:
    """B + A with the bracket twisted by psi and theta_lam(x + a) = theta_B x + lam x + theta_A a.

    Nothing is validated here; run ``check_extension`` on the result.
    """
    nB, nA = B_pair.dim, A_prep.module_dim
    if A_prep.algebra_dim != nB:
        raise ValueError("representation is over an algebra of the wrong dimension")
    coc = coc if coc is not None else ExtensionCocycle.zero(nB, nA)
    if coc.base_dim != nB or coc.module_dim != nA:
        raise ValueError("cocycle dimensions do not match B and A")
    c = semidirect_tensor(B_pair.algebra, A_prep.rep)
    num = c.num.copy()
    psi = coc.psi
    den = c.den * psi.den
    dtype = object if (num.dtype == object or psi.num.dtype == object) else np.int64
    num = num.astype(dtype) * psi.den
    num[:nB, :nB, :nB, nB:] += psi.num * c.den
    total_alg = ThreeLieAlgebra.from_tensor(QArray(num, den), check=False)
    theta = block_diag(B_pair.theta, A_prep.theta_V)
    low = QArray.concatenate([coc.lam, QArray.zeros((nA, nA))], axis=1)
    top = QArray.zeros((nB, nB + nA))
    theta = theta + QArray.concatenate([top, low], axis=0)
    incl, proj = _split(nB, nA)
    total = LieDerPair(total_alg, theta, check=False)
    return ExtensionData(total, incl, proj, B_pair, A_prep.theta_V)


def check_extension(ext: ExtensionData) -> Report:
    """Exactness, abelian ideal, and that incl and proj are pair morphisms."""
    N = ext.total.dim
    nA = ext.incl.shape[1]
    nB = ext.base.dim
    parts = [check_pair(ext.total)]
    comp = ext.proj @ ext.incl
    hit = comp.first_nonzero()
    exact = hit is None and rank(ext.incl) == nA and rank(ext.proj) == nB and nA + nB == N
    parts.append(Report.passed("exactness") if exact else Report.failed("exactness", hit))
    c = ext.total.algebra.structure
    i = ext.incl
    # [i u, i v, w] = 0
    uvw = einsum("xu,yv,xyzo->uvzo", i, i, c)
    bad = _first_violation(uvw, lambda t: t[0] < t[1])
    parts.append(Report.passed("abelian ideal") if bad is None else Report.failed("abelian ideal", bad[:3]))
    # [x, y, i a] stays in incl(A): proj of it vanishes
    xya = einsum("za,xyzo,bo->xyab", i, c, ext.proj)
    bad = _first_violation(xya, lambda t: t[0] < t[1])
    parts.append(Report.passed("ideal") if bad is None else Report.failed("ideal", bad[:3]))
    parts.append(check_pair_morphism(ext.kernel_pair, ext.total, ext.incl).renamed("incl morphism"))
    parts.append(check_pair_morphism(ext.total, ext.base, ext.proj).renamed("proj morphism"))
    return Report.combine("abelian extension", parts)


def extract_cocycle(ext: ExtensionData, s: Optional[Section] = None) -> tuple[PairRepresentation, ExtensionCocycle]:
    """rho(x, y)a = [sx, sy, a], omega = [sx, sy, sz] - s[x, y, z], mu = theta s - s theta_B."""
    s = s if s is not None else ext.canonical_section()
    S = s.s
    nB = ext.base.dim
    if S.shape != (ext.total.dim, nB) or ext.proj @ S != QArray.identity(nB):
        raise ValueError("s is not a section of the projection")
    r = ext.retraction()
    c = ext.total.algebra.structure
    i = ext.incl
    # rho[P, w, v]: coordinate w of rho(e_a, e_b) e_v in A
    full = einsum("xa,yb,zv,xyzo,wo->abwv", S, S, i, c, r)
    a, b = pair_arrays(nB)
    rho = QArray(full.num[a, b], full.den)
    prep = PairRepresentation(Representation(nB, i.shape[1], rho), ext.theta_A)
    lifted = einsum("xa,yb,zc,xyzo->abco", S, S, S, c) - einsum("abcw,ow->abco", ext.base.algebra.structure, S)
    omega = einsum("abco,wo->abcw", lifted, r)
    mu = r @ (ext.total.theta @ S - S @ ext.base.theta)
    return prep, ExtensionCocycle(omega, mu)


def cocycle_report(B_pair: LieDerPair, A_prep: PairRepresentation, coc: ExtensionCocycle) -> Report:
    """Whether partial(psi, lam) = (d psi, d lam + delta psi) vanishes."""
    cx = CochainComplex(B_pair, A_prep, max_degree=3)
    img = cx.partial(coc.as_pair_cochain())
    parts = [
        Report.passed("d psi") if img.alpha.is_zero() else Report.failed("d psi", img.alpha.tensor.first_nonzero()),
        Report.passed("d lam + delta psi") if img.beta.is_zero()
        else Report.failed("d lam + delta psi", img.beta.tensor.first_nonzero()),
    ]
    return Report.combine("2-cocycle", parts)


def extension_cocycles(B_pair: LieDerPair, A_prep: PairRepresentation) -> list[ExtensionCocycle]:
    """Basis of the 2-cocycles (psi, lam) with psi totally skew."""
    n, v = B_pair.dim, A_prep.module_dim
    cx = CochainComplex(B_pair, A_prep, max_degree=2)
    S = skew_parametrization(n, v)
    K = kernel(cx.partial_matrix(2) @ S)
    return [ExtensionCocycle(*unpack_skew(n, v, k)) for k in K.vectors()]


def equivalence_map(e1: ExtensionData, e2: ExtensionData, lam, s1: Optional[Section] = None,
                    s2: Optional[Section] = None) -> QArray:
    """eta(s1 x + i1 a) = s2 x + i2(lam x + a), as a matrix L1 -> L2."""
    S1 = (s1 or e1.canonical_section()).s
    S2 = (s2 or e2.canonical_section()).s
    lam = QArray.of(lam)
    N1 = e1.total.dim
    # decompose v in L1 as s1(pi1 v) + i1(r1(v - s1 pi1 v))
    a_part = e1.retraction() @ (QArray.identity(N1) - S1 @ e1.proj)
    return S2 @ e1.proj + e2.incl @ (lam @ e1.proj + a_part)


def extensions_equivalent(e1: ExtensionData, e2: ExtensionData, s1: Optional[Section] = None,
                          s2: Optional[Section] = None) -> Report:
    """Decide equivalence through the classes of the extracted cocycles.

    On success the witness lambda solves (d lam, -delta lam) = (omega_1 - omega_2, mu_1 - mu_2)
    and the details carry the verified map eta.  Otherwise ``certificate`` is a
    vector y with y . partial_1 = 0 and y . (difference) != 0.
    """
    if e1.base != e2.base:
        raise ValueError("extensions of different pairs (B, theta_B)")
    if e1.theta_A != e2.theta_A:
        raise ValueError("extensions by different pairs (A, theta_A)")
    s1 = s1 or e1.canonical_section()
    s2 = s2 or e2.canonical_section()
    p1, c1 = extract_cocycle(e1, s1)
    p2, c2 = extract_cocycle(e2, s2)
    if p1 != p2:
        raise ValueError("the extensions induce different representations")
    cx = CochainComplex(e1.base, p1, max_degree=2)
    diff = c1.as_pair_cochain() - c2.as_pair_cochain()
    M = cx.partial_matrix(1)
    x = solve(M, diff.vector())
    if x is None:
        cert = infeasibility_certificate(M, diff.vector())
        return Report("abelian extension equivalence", False, None, {"certificate": cert})
    lam = PlainCochain.from_vector(1, cx.n, cx.v, x).as_map()
    eta = equivalence_map(e1, e2, lam, s1, s2)
    parts = [
        check_pair_morphism(e1.total, e2.total, eta).renamed("eta morphism"),
        _equal_report("eta on A", eta @ e1.incl, e2.incl),
        _equal_report("projections", e2.proj @ eta, e1.proj),
    ]
    rep = Report.combine("abelian extension equivalence", parts, lam=lam, eta=eta)
    return rep


def _equal_report(name: str, lhs: QArray, rhs: QArray) -> Report:
    hit = (lhs - rhs).first_nonzero()
    return Report.passed(name) if hit is None else Report.failed(name, hit)
