"""Explicit smooth points from associated cocharacters, twists and pushforwards.

Given a nilpotent ``N`` fixed by an inertial type ``tau``, choose a cocharacter
``λ`` of ``Z_G(tau)`` associated to ``N`` and put ``Phi = λ(s) c`` with
``s^2 = p^fK`` and ``c`` a finite-order element centralizing ``λ`` and ``N``
and realizing the Frobenius action on inertia.  Such a point has ``H^2 = 0``,
also after every unramified restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .cohomology import CohomologyReport, cohomology_dims
from .groups import (
    Cocharacter,
    GroupElement,
    GroupError,
    GroupModel,
    Morphism,
    _vec,
    SpecialLinear,
    catalog,
    compose,
    finite_order,
    incl_sl_morphism,
    fixed_lie,
)
from .nilpotent import associated_cocharacter
from .scalars import ONE, ZERO, sqrt_power
from .wdrep import (
    InertialData,
    InvalidPointError,
    WDPoint,
    _find_twist,
    require_valid,
    trivial_inertia,
    validate,
)
from .linalg import Mat

__all__ = [
    "InconsistencyError",
    "SmoothPointCertificate",
    "standard_sl2_point",
    "smooth_point",
    "twist_by",
    "pushforward",
]


class InconsistencyError(AssertionError):
    """A constructed point failed a property that the theory guarantees."""


@dataclass(frozen=True)
class SmoothPointCertificate:
    point: WDPoint
    lam: Cocharacter
    c: GroupElement
    report: CohomologyReport
    c_order: int = 1

    @property
    def field_d(self) -> int:
        """The ``d`` of the scalar field ``Q(sqrt d)`` used for ``Phi``."""
        for x in self.point.Phi.matrix.entries:
            if x.d != 1:
                return x.d
        return 1

    @property
    def component(self) -> int:
        return self.point.Phi.component


def standard_sl2_point(p: int, fK: int) -> WDPoint:
    """``Phi = diag(q^1/2, q^-1/2)`` and ``N = e`` on ``SL(2)`` with trivial inertia."""
    G = catalog({"type": "SL", "n": 2})
    s = sqrt_power(p, fK)
    Phi = G.element(Mat.diag([s, s.inverse()]))
    x = WDPoint(G, p, fK, Phi, (ONE, ZERO, ZERO), trivial_inertia(G))
    require_valid(x)
    return x


def _certify(x: WDPoint, lam: Cocharacter, c: GroupElement, order: int) -> SmoothPointCertificate:
    require_valid(x)
    report = cohomology_dims(x)
    if report.h2 != 0:
        raise InconsistencyError(f"constructed point has h2 = {report.h2}")
    if not report.very_smooth:
        raise InconsistencyError("constructed point is not very smooth")
    if report.tangent_dim_framed != x.G.group_dim:
        raise InconsistencyError("framed tangent dimension differs from dim G")
    return SmoothPointCertificate(x, lam, c, report, order)


def _check_twist(G: GroupModel, c: GroupElement, lam: Cocharacter, N: Sequence, tau: Sequence[GroupElement]) -> int:
    """Validate the twist conditions and return the order of ``c``."""
    G.check_member(c)
    A = G.ad_matrix(c)
    if A.apply(lam.H) != lam.H:
        raise GroupError("twist does not centralize the cocharacter")
    if A.apply(_vec(N)) != _vec(N):
        raise GroupError("twist does not fix N")
    cinv = G.inv(c)
    image = set(tau)
    if any(G.mul(G.mul(c, t), cinv) not in image for t in tau):
        raise GroupError("twist does not normalize the image of tau")
    return finite_order(G, c)


def smooth_point(G: GroupModel, inertia: InertialData, N: Sequence, p: int = 2, fK: int = 1,
                 twist: GroupElement | None = None) -> SmoothPointCertificate:
    """The point ``(λ(s) c, N, tau)`` with its certificate.

    ``c`` is ``twist`` when given, otherwise the identity for a trivial
    Frobenius action on inertia and a catalog element realizing it otherwise.
    """
    N = _vec(N)
    problems = inertia.check(G)
    if problems:
        raise InvalidPointError("; ".join(problems))
    z = fixed_lie(G, list(inertia.tau))
    if not z.contains(N):
        raise InvalidPointError("N does not lie in the Lie algebra of Z_G(tau)")
    lam = associated_cocharacter(G, N, z)
    c = twist if twist is not None else _find_twist(G, inertia, N, lam.H)
    order = _check_twist(G, c, lam, N, inertia.tau)
    Phi = G.mul(lam.evaluate(G, sqrt_power(p, fK)), c)
    return _certify(WDPoint(G, p, fK, Phi, N, inertia), lam, c, order)


def twist_by(cert: SmoothPointCertificate, c: GroupElement) -> SmoothPointCertificate:
    """Replace ``Phi`` by ``Phi c`` and recertify.

    The inertial datum is kept, so ``c`` must also preserve the Frobenius
    action on inertia; otherwise the twisted point is rejected.
    """
    x = cert.point
    G = x.G
    order = _check_twist(G, c, cert.lam, x.N, x.inertia.tau)
    y = replace(x, Phi=G.mul(x.Phi, c))
    rep = validate(y)
    if not rep.ok:
        raise GroupError("twisted point is invalid: " + "; ".join(rep.violations))
    return _certify(y, cert.lam, G.mul(cert.c, c), order)


def pushforward(f: Morphism, x: WDPoint) -> WDPoint:
    """``(f(Phi), df(N), f ∘ tau)`` in the target group.

    A point of ``SL(n)`` is first included into ``GL(n)`` when ``f`` starts
    at ``GL(n)``.
    """
    if isinstance(x.G, SpecialLinear) and f.source == catalog({"type": "GL", "n": x.G.n}):
        f = compose(f, incl_sl_morphism(x.G.n))
    if x.G != f.source:
        raise GroupError(f"point lives in {x.G.name}, morphism starts at {f.source.name}")
    require_valid(x)
    T = f.target
    inert = x.inertia
    tau = tuple(f(t) for t in inert.tau)
    y = WDPoint(T, x.p, x.fK, f(x.Phi), f.map_lie(x.N), replace(inert, tau=tau))
    # the morphism must intertwine Ad at the point itself
    for g in (x.Phi,) + inert.tau:
        if f.lie_map @ x.G.ad_matrix(g) != T.ad_matrix(f(g)) @ f.lie_map:
            raise AssertionError(f"{f.name} does not intertwine Ad at the given point")
    require_valid(y)
    return y
