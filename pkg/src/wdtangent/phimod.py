"""Semilinear (phi, N, Gal)-modules, Fontaine's functor to Weil–Deligne points,
p-adic Hodge types and the dimension evaluators.

Conventions.  ``E ⊗ L0`` is modelled by ``fL`` labelled copies ``D_0, ...,
D_{fL-1}`` of the scalar field, with Frobenius shifting the label by one.  In
coordinates a module consists of

* ``Phi_i : D_{i+1} -> D_i`` for ``i`` modulo ``fL``;
* ``N_i`` with ``N_i = p Ad(Phi_i) N_{i+1}``;
* for every element ``g = (h, k)`` of ``Gal_{L/K}`` (``h`` in inertia, ``k``
  the Frobenius exponent modulo ``d``) maps ``tau(g)_i : D_{i + k fK} -> D_i``
  satisfying the cocycle rule ``tau(g1 g2)_i = tau(g1)_i tau(g2)_{i + k1 fK}``,
  the Frobenius compatibility ``tau(g)_i Phi_{i + k fK} = Phi_i tau(g)_{i+1}``
  and ``Ad(tau(g)_i) N_{i + k fK} = N_i``.

Fontaine's recipe ``r(g) = tau(g) Phi^{-v(g) fK}`` read on ``D_0`` gives the
Weil–Deligne Frobenius ``r(g0) = tau(g0)_0 (Phi_0 ... Phi_{fK-1})^{-1}``.  The
module relation ``Ad(Phi) N = p^-1 N`` then turns into ``Ad(r(g0)) N = q N``,
which is the relation used for Weil–Deligne points; this sign flip is the only
translation between the two conventions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groups import (
    Cocharacter,
    GroupElement,
    GroupModel,
    _vec,
    dynamic_decomposition,
)
from .linalg import Mat, Subspace, hstack, rank, vstack
from .nilpotent import is_nilpotent
from .scalars import Scalar
from .wdrep import FiniteGroup, InertialData, WDPoint, require_valid

__all__ = [
    "ModuleError",
    "GaloisGroup",
    "PhiModule",
    "Collapse",
    "validate_module",
    "collapse",
    "fontaine_to_wd",
    "wd_to_phi_module",
    "act_module",
    "wl_centralizes_wk",
    "HodgeType",
    "hodge_dim",
    "is_regular",
    "FilteredReport",
    "filtered_cohomology",
    "local_dim",
    "GlobalLedger",
    "global_ledger",
]

Vec = tuple[Scalar, ...]


class ModuleError(ValueError):
    pass


@dataclass(frozen=True)
class GaloisGroup:
    """``Gal_{L/K}`` as pairs ``(h, k)`` standing for ``h sigma^k``.

    ``sigma`` is the image of a Frobenius lift, ``theta`` is conjugation by
    ``sigma`` on inertia and ``sigma^d = u``.
    """

    inertia: FiniteGroup
    theta: tuple[int, ...]
    d: int
    u: int

    @classmethod
    def of(cls, data: InertialData) -> "GaloisGroup":
        return cls(data.group, data.theta, data.d, data.u)

    @property
    def order(self) -> int:
        return self.inertia.order * self.d

    def elements(self) -> list[tuple[int, int]]:
        return [(h, k) for k in range(self.d) for h in range(self.inertia.order)]

    def index(self, g: tuple[int, int]) -> int:
        h, k = g
        return k * self.inertia.order + h

    def _theta_pow(self, k: int, h: int) -> int:
        for _ in range(k):
            h = self.theta[h]
        return h

    def mul(self, g1: tuple[int, int], g2: tuple[int, int]) -> tuple[int, int]:
        (h1, k1), (h2, k2) = g1, g2
        I = self.inertia
        h = I.mul(h1, self._theta_pow(k1, h2))
        k = k1 + k2
        if k >= self.d:
            h, k = I.mul(h, self.u), k - self.d
        return h, k

    @property
    def frobenius(self) -> tuple[int, int]:
        """The image of the Frobenius lift."""
        return (self.inertia.identity, 1) if self.d > 1 else (self.u, 0)


@dataclass(frozen=True)
class PhiModule:
    G: GroupModel
    p: int
    fK: int
    Phis: tuple[GroupElement, ...]
    Ns: tuple[Vec, ...]
    galois: GaloisGroup
    taus: tuple[tuple[GroupElement, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "Ns", tuple(_vec(n) for n in self.Ns))

    @property
    def fL(self) -> int:
        return len(self.Phis)

    def tau(self, g: tuple[int, int]) -> tuple[GroupElement, ...]:
        return self.taus[self.galois.index(g)]


def _prod(G: GroupModel, elements: Sequence[GroupElement]) -> GroupElement:
    out = G.identity()
    for x in elements:
        out = G.mul(out, x)
    return out


def validate_module(M: PhiModule) -> list[str]:
    """The violated module axioms (empty when ``M`` is a valid module)."""
    G, fL, fK, gal = M.G, M.fL, M.fK, M.galois
    problems = []
    if fL < 1 or len(M.Ns) != fL:
        return ["Phis and Ns must have one entry per embedding"]
    if gal.d * fK != fL:
        return [f"fL = {fL} is not d * fK = {gal.d} * {fK}"]
    if len(M.taus) != gal.order or any(len(t) != fL for t in M.taus):
        return ["tau must give fL maps for every Galois element"]
    for x in M.Phis + tuple(t for ts in M.taus for t in ts):
        if not G.is_member(x):
            return [f"module datum is not an element of {G.name}"]
    for i in range(fL):
        lhs = M.Ns[i]
        rhs = tuple(M.p * c for c in G.ad_matrix(M.Phis[i]).apply(M.Ns[(i + 1) % fL]))
        if lhs != rhs:
            problems.append(f"N_{i} != p Ad(Phi_{i}) N_{i + 1}")
            break
    if not is_nilpotent(G, M.Ns[0]):
        problems.append("N is not nilpotent")
    ident = G.identity()
    e = (gal.inertia.identity, 0)
    if any(t != ident for t in M.tau(e)):
        problems.append("tau(identity) is not the identity")
    els = gal.elements()
    for g1 in els:
        s1 = g1[1] * fK
        t1 = M.tau(g1)
        for g2 in els:
            t2, t12 = M.tau(g2), M.tau(gal.mul(g1, g2))
            if any(G.mul(t1[i], t2[(i + s1) % fL]) != t12[i] for i in range(fL)):
                problems.append("tau is not a cocycle")
                break
        else:
            continue
        break
    for g in els:
        s, t = g[1] * fK, M.tau(g)
        for i in range(fL):
            if G.mul(t[i], M.Phis[(i + s) % fL]) != G.mul(M.Phis[i], t[(i + 1) % fL]):
                problems.append("tau is not compatible with Phi")
                break
            if G.ad_matrix(t[i]).apply(M.Ns[(i + s) % fL]) != M.Ns[i]:
                problems.append("tau does not preserve N")
                break
        else:
            continue
        break
    return problems


def _require_module(M: PhiModule) -> None:
    problems = validate_module(M)
    if problems:
        raise ModuleError("; ".join(problems))


@dataclass(frozen=True)
class Collapse:
    """``Phi^fL`` on ``D_sigma`` with ``N_sigma`` and the gauge ``a``.

    ``act_module(a, M)`` has ``Phi_sigma = frobenius`` and every other
    ``Phi_i = 1``.
    """

    frobenius: GroupElement
    N: Vec
    a: tuple[GroupElement, ...]


def collapse(M: PhiModule, sigma: int = 0) -> Collapse:
    _require_module(M)
    G, fL = M.G, M.fL
    order = [(sigma + j) % fL for j in range(fL)]
    frob = _prod(G, [M.Phis[i] for i in order])
    a = [G.identity()] * fL
    for j in range(1, fL):
        a[order[j]] = G.inv(_prod(G, [M.Phis[i] for i in order[j:]]))
    return Collapse(frob, M.Ns[sigma], tuple(a))


def act_module(a: Sequence[GroupElement], M: PhiModule) -> PhiModule:
    """Change of basis by ``a = (a_0, ..., a_{fL-1})``."""
    G, fL, fK = M.G, M.fL, M.fK
    if len(a) != fL:
        raise ModuleError("gauge must have one element per embedding")
    ainv = [G.inv(x) for x in a]
    Phis = tuple(G.mul(G.mul(a[i], M.Phis[i]), ainv[(i + 1) % fL]) for i in range(fL))
    Ns = tuple(G.ad_matrix(a[i]).apply(M.Ns[i]) for i in range(fL))
    taus = []
    for g in M.galois.elements():
        s, t = g[1] * fK, M.tau(g)
        taus.append(tuple(G.mul(G.mul(a[i], t[i]), ainv[(i + s) % fL]) for i in range(fL)))
    return PhiModule(G, M.p, fK, Phis, Ns, M.galois, tuple(taus))


def fontaine_to_wd(M: PhiModule) -> WDPoint:
    """The Weil–Deligne point read off on the embedding ``D_0``."""
    _require_module(M)
    G, gal = M.G, M.galois
    frob = M.tau(gal.frobenius)[0]
    Phi = G.mul(frob, G.inv(_prod(G, M.Phis[:M.fK])))
    tau = tuple(M.tau((h, 0))[0] for h in range(gal.inertia.order))
    inertia = InertialData(gal.inertia, tau, gal.theta, gal.d,
                           None if gal.u == gal.inertia.identity else gal.u)
    x = WDPoint(G, M.p, M.fK, Phi, M.Ns[0], inertia)
    require_valid(x)
    return x


def wd_to_phi_module(x: WDPoint, fL: int | None = None) -> PhiModule:
    """The module with ``Phi = (C, 1, ..., 1)`` whose Fontaine image is ``x``.

    ``C = Phi_WD^-d tau(u)`` is the value of ``Phi^fL`` on ``D_0``.  The
    remaining ``N_i`` and ``tau(g)_i`` are transported from ``D_0`` with the
    module relations.
    """
    require_valid(x)
    G, inert = x.G, x.inertia
    d, fK = inert.d, x.fK
    if fL is not None and fL != d * fK:
        raise ModuleError(f"fL must equal d * fK = {d * fK}")
    fL = d * fK
    gal = GaloisGroup.of(inert)
    ident = G.identity()
    C = G.mul(G.power(G.inv(x.Phi), d), inert.tau[inert.u])
    Phis = (C,) + (ident,) * (fL - 1)
    Ns = [x.N]
    pinv = Scalar(1) / x.p
    for i in range(fL - 1):
        Ns.append(tuple(pinv * c for c in G.ad_matrix(G.inv(Phis[i])).apply(Ns[i])))
    taus = []
    for h, k in gal.elements():
        t0 = inert.tau[h]
        if k:
            t0 = G.mul(G.mul(t0, G.power(x.Phi, k)), C)
        t = [t0]
        s = k * fK
        for i in range(fL - 1):
            t.append(G.mul(G.mul(G.inv(Phis[i]), t[i]), Phis[(i + s) % fL]))
        taus.append(tuple(t))
    M = PhiModule(G, x.p, fK, Phis, tuple(Ns), gal, tuple(taus))
    _require_module(M)
    return M


def wl_centralizes_wk(x: WDPoint, k: int = 1) -> bool:
    """Whether ``r(w)^k`` commutes with ``r(g0)`` and all ``tau(g)``.

    ``w = u^-1 g0^d`` lies in ``W_L``, and ``r(w) = tau(u)^-1 Phi^d``.
    """
    require_valid(x)
    G, inert = x.G, x.inertia
    rw = G.power(G.mul(G.inv(inert.tau[inert.u]), G.power(x.Phi, inert.d)), k)
    return all(G.mul(rw, y) == G.mul(y, rw) for y in (x.Phi,) + inert.tau)


# ---------------------------------------------------------------------------
# Hodge types and filtered cohomology


@dataclass(frozen=True)
class HodgeType:
    """One cocharacter per embedding ``K -> E``."""

    cochars: tuple[Cocharacter, ...]

    @property
    def degree(self) -> int:
        return len(self.cochars)


def hodge_dim(G: GroupModel, v: HodgeType) -> int:
    """``dim Res G / P_v``: the total dimension of the negative weight spaces."""
    return sum(dynamic_decomposition(G, lam).negative.dim for lam in v.cochars)


def is_regular(G: GroupModel, v: HodgeType) -> bool:
    return all(dynamic_decomposition(G, lam).zero.dim == G.rank for lam in v.cochars)


@dataclass(frozen=True)
class FilteredReport:
    hfil0: int
    hfil1: int
    hfil2: int
    quotient_dim: int
    group_dim: int

    @property
    def tangent_dim_framed(self) -> int:
        return self.group_dim - self.hfil0 + self.hfil1

    def as_dict(self) -> dict:
        return {"hfil0": self.hfil0, "hfil1": self.hfil1, "hfil2": self.hfil2,
                "quotient_dim": self.quotient_dim, "tangent_dim_framed": self.tangent_dim_framed}


def _quotient_projection(P: Subspace) -> Mat:
    """A surjection ``g -> g / P`` read off the non-pivot coordinates."""
    n = P.ambient_dim
    comp = P.complement_indices()
    cols = []
    for j in range(n):
        e = [Scalar(1) if t == j else Scalar(0) for t in range(n)]
        r = P.reduce(e)
        cols.append([r[c] for c in comp])
    return Mat.from_columns(cols, len(comp)) if comp else Mat(0, n, [])


def filtered_cohomology(x: WDPoint, lam_fil: Cocharacter) -> FilteredReport:
    """Cohomology of the filtered complex in the split case ``fL = 1``.

    With the module Frobenius ``Phi = Phi_WD^-1`` the complex is

        C^0 = g  ->  g + g + g/g_{>=0}  ->  g
        d0(j)       = ((1 - Ad Phi) j, ad_N j, j mod g_{>=0})
        d1(f, g, c) = ad_N f + (p Ad Phi - 1) g.
    """
    require_valid(x)
    if x.fK != 1 or not x.inertia.is_trivial() or x.inertia.d != 1:
        raise ModuleError("the filtered complex is implemented for fL = 1 and trivial inertia only")
    G = x.G
    n = G.group_dim
    A = G.ad_matrix(G.inv(x.Phi))
    adN = G.adN_matrix(x.N)
    I = Mat.identity(n)
    proj = _quotient_projection(dynamic_decomposition(G, lam_fil).nonnegative)
    qd = proj.rows
    d0 = vstack(I - A, adN, proj)
    d1 = hstack(adN, A.scale(x.p) - I, Mat.zeros(n, qd))
    if not (d1 @ d0).is_zero():
        raise AssertionError("filtered complex: d1 d0 != 0")
    r0, r1 = rank(d0), rank(d1)
    h0 = n - r0
    h1 = (2 * n + qd - r1) - r0
    h2 = n - r1
    if h0 - h1 + h2 != -qd:
        raise AssertionError("filtered complex: Euler characteristic is not -dim g/g_{>=0}")
    return FilteredReport(h0, h1, h2, qd, n)


# ---------------------------------------------------------------------------
# dimension formulas


def local_dim(G: GroupModel, hodge: HodgeType | None = None, fixed_det: bool = False,
              l_equals_p: bool = False) -> int:
    """``1 + dim G + dim Res G/P_v`` (``G^der`` in place of ``G`` for fixed determinant)."""
    if l_equals_p and hodge is None:
        raise ValueError("a Hodge type is required when l = p")
    base = G.derived_dim if fixed_det else G.group_dim
    return 1 + base + (hodge_dim(G, hodge) if l_equals_p else 0)


@dataclass(frozen=True)
class GlobalLedger:
    s: int
    r_min: int
    krull_lower_bound: int
    odd: bool

    def as_dict(self) -> dict:
        return {"s": self.s, "r_min": self.r_min, "krull_lower_bound": self.krull_lower_bound,
                "odd": self.odd}


def global_ledger(Sinf_size: int, archimedean_h0s: Sequence[int], g0_dim: int,
                  places_over_p: Sequence[int], dim_G_mod_B: int | Sequence[int]) -> GlobalLedger:
    """Relation count and Krull dimension bound for a global deformation ring.

    ``Sinf_size`` is the number of finite places in ``S`` (all of which are
    used for the local factors), ``places_over_p`` lists ``[F_v : Q_p]`` and
    ``dim_G_mod_B`` is ``dim G - dim B``, either once or per place over ``p``.
    The bound is computed from the local dimensions of the fixed-determinant
    rings and cross-checked against its simplified form.
    """
    places = list(places_over_p)
    if len(places) > Sinf_size:
        raise ValueError("more places over p than finite places in S")
    if isinstance(dim_G_mod_B, int):
        gb = [dim_G_mod_B] * len(places)
    else:
        gb = list(dim_G_mod_B)
        if len(gb) != len(places):
            raise ValueError("dim G/B must be given once or per place over p")
    h0s = list(archimedean_h0s)
    s = (Sinf_size - 1) * g0_dim + sum(h0s)
    # local rings of relative dimension g0 (+ [F_v:Q_p] dim G/B over p)
    local = [g0_dim + f * b for f, b in zip(places, gb)] + [g0_dim] * (Sinf_size - len(places))
    raw = 1 + sum(local) - Sinf_size * g0_dim - sum(h0s)
    simple = 1 + sum(f * b for f, b in zip(places, gb)) - sum(h0s)
    if raw != simple:
        raise AssertionError("global ledger: the two forms of the bound disagree")
    target = set(gb)
    odd = bool(h0s) and len(target) == 1 and all(h in target for h in h0s)
    return GlobalLedger(s, g0_dim, simple, odd)
