"""The tangent-obstruction complex of a Weil–Deligne point and its cohomology.

On the inertia invariants ``V`` of the adjoint representation the complex is

    C^0 = V  --d0-->  C^1 = V + V  --d1-->  C^2 = V
    d0(j)    = ((1 - Ad Phi) j, ad_N j)
    d1(f, g) = ad_N f + (q^-1 Ad Phi - 1) g

and ``d1 d0 = 0`` because ``q^-1 Ad(Phi) ad_N = ad_N Ad(Phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Mat, Subspace, char_poly, hstack, image, kernel, poly_at, rank, sum_spaces, vstack
from .scalars import Scalar, cyclotomic_bound, gcd_with_unity
from .wdrep import WDPoint, invariants_subspace, require_valid, trivialize_inertia

__all__ = [
    "VerySmoothInconsistency",
    "WDComplex",
    "CohomologyReport",
    "complex_of",
    "cohomology_dims",
    "dual_h0_twisted",
    "pairing_matrix",
    "is_smooth",
    "is_very_smooth",
    "very_smooth_power_test",
    "very_smooth_eigen_test",
    "cohomology_N0",
    "restricted_operators",
]


class VerySmoothInconsistency(AssertionError):
    """The power test and the eigenvalue test disagreed."""


@dataclass(frozen=True)
class WDComplex:
    V: Subspace
    d0: Mat
    d1: Mat


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    h2: int
    dual_h0: int
    smooth: bool
    tangent_dim_framed: int
    very_smooth: bool | None = None

    def as_dict(self) -> dict:
        out = {
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "dual_h0": self.dual_h0,
            "smooth": self.smooth,
            "tangent_dim_framed": self.tangent_dim_framed,
        }
        if self.very_smooth is not None:
            out["very_smooth"] = self.very_smooth
        return out


def _restrict(op: Mat, V: Subspace) -> Mat:
    """Matrix of ``op`` (stable on ``V``) in the echelon basis of ``V``."""
    cols = [V.coordinates(op.apply(v), check=False) for v in V.basis]
    return Mat.from_columns(cols, V.dim) if cols else Mat(0, 0, [])


def restricted_operators(x: WDPoint) -> tuple[Subspace, Mat, Mat]:
    """``(V, Ad(Phi)|_V, ad_N|_V)``."""
    V = invariants_subspace(x)
    A = _restrict(x.G.ad_matrix(x.Phi), V)
    adN = _restrict(x.G.adN_matrix(x.N), V)
    return V, A, adN


def complex_of(x: WDPoint) -> WDComplex:
    V, A, adN = restricted_operators(x)
    k = V.dim
    I = Mat.identity(k)
    qinv = Scalar(1) / x.q
    d0 = vstack(I - A, adN)
    d1 = hstack(adN, A.scale(qinv) - I)
    if k and not (d1 @ d0).is_zero():
        raise AssertionError("d1 d0 != 0: the point does not satisfy Ad(Phi)N = qN")
    return WDComplex(V, d0, d1)


def _dims(cx: WDComplex) -> tuple[int, int, int]:
    k = cx.V.dim
    r0 = rank(cx.d0)
    r1 = rank(cx.d1)
    return k - r0, (2 * k - r1) - r0, k - r1


def _twisted_functionals(x: WDPoint, A: Mat, adN: Mat) -> Subspace:
    """Row vectors ``phi`` on ``V`` with ``phi ad_N = 0`` and ``phi Ad(Phi) = q phi``."""
    k = A.rows
    # phi M = 0  <=>  M^T phi^T = 0
    stacked = vstack(adN.T, (A - Mat.identity(k).scale(x.q)).T)
    return kernel(stacked)


def dual_h0_twisted(x: WDPoint) -> int:
    V, A, adN = restricted_operators(x)
    return _twisted_functionals(x, A, adN).dim


def pairing_matrix(x: WDPoint) -> Mat:
    """Evaluation pairing between twisted invariant functionals and coker(d1).

    Columns are indexed by the standard basis vectors of ``V`` that complement
    the echelon pivots of ``im d1``.
    """
    cx = complex_of(x)
    V, A, adN = restricted_operators(x)
    phis = _twisted_functionals(x, A, adN).basis
    comp = image(cx.d1).complement_indices() if V.dim else []
    if len(phis) != len(comp):
        raise AssertionError("twisted H0 and H2 have different dimensions")
    return Mat(len(phis), len(comp), [phi[j] for phi in phis for j in comp])


def cohomology_dims(x: WDPoint, very_smooth: bool = True) -> CohomologyReport:
    cx = complex_of(x)
    h0, h1, h2 = _dims(cx)
    dual = dual_h0_twisted(x)
    tangent = x.G.group_dim - h0 + h1
    if h0 - h1 + h2 != 0 or tangent != x.G.group_dim + h2:
        raise AssertionError("Euler characteristic of the complex is not zero")
    vs = is_very_smooth(x) if very_smooth else None
    return CohomologyReport(h0, h1, h2, dual, h2 == 0, tangent, vs)


def is_smooth(x: WDPoint) -> bool:
    return _dims(complex_of(x))[2] == 0


def _full_operators(x: WDPoint) -> tuple[Mat, Mat]:
    """``T = q^-1 Ad(Phi)`` and ``ad_N`` on all of the Lie algebra."""
    T = x.G.ad_matrix(x.Phi).scale(Scalar(1) / x.q)
    return T, x.G.adN_matrix(x.N)


def very_smooth_power_test(x: WDPoint, literal: bool = False) -> int:
    """``h2`` of the restriction to the canonical uniform extension.

    There ``V`` is the whole Lie algebra and the operator pair is
    ``(ad_N, T^M - 1)`` with ``T = q^-1 Ad(Phi)``.  Since
    ``im(T^M - 1) = im g(T)`` for ``g = gcd(charpoly(T), X^M - 1)`` (a Bezout
    identity modulo Cayley–Hamilton), the default path evaluates ``g(T)``;
    ``literal=True`` forms ``T^M`` directly (feasible for small ``M`` only).
    """
    datum = trivialize_inertia(x)
    T, adN = _full_operators(x)
    n = T.rows
    if literal:
        op = T ** datum.M - Mat.identity(n)
    else:
        g = gcd_with_unity(char_poly(T), datum.M)
        op = poly_at(g, T)
    return n - sum_spaces(image(adN), image(op)).dim


def very_smooth_eigen_test(x: WDPoint) -> bool:
    """Whether some root-of-unity eigenvalue of ``T*`` has an eigenfunctional killed by ``ad_N*``.

    ``W = ker(ad_N^T)`` is stable under ``T^T``; the test looks for a
    common factor of the characteristic polynomial of ``T^T|_W`` with
    ``X^n0 - 1``.
    """
    require_valid(x)
    T, adN = _full_operators(x)
    W = kernel(adN.T)
    if W.dim == 0:
        return False
    TW = _restrict(T.T, W)
    P = char_poly(TW)
    n0 = cyclotomic_bound(x.G.group_dim)
    return gcd_with_unity(P, n0).degree > 0


def is_very_smooth(x: WDPoint) -> bool:
    h2_power = very_smooth_power_test(x)
    obstructed = very_smooth_eigen_test(x)
    if (h2_power != 0) != obstructed:
        raise VerySmoothInconsistency(
            f"power test gives h2 = {h2_power} but eigenvalue test gives obstructed = {obstructed}")
    return h2_power == 0


def cohomology_N0(x: WDPoint) -> tuple[int, int]:
    """``(h0, h1)`` of the two-term complex ``1 - Ad(Phi)`` on ``V`` (requires ``N = 0``)."""
    if any(not n.is_zero() for n in x.N):
        raise ValueError("cohomology_N0 requires N = 0")
    V, A, _ = restricted_operators(x)
    k = V.dim
    r = rank(Mat.identity(k) - A) if k else 0
    return k - r, k - r
