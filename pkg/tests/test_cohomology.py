from __future__ import annotations

import pytest

from wdtangent.cohomology import (
    cohomology_N0,
    cohomology_dims,
    complex_of,
    dual_h0_twisted,
    is_smooth,
    is_very_smooth,
    pairing_matrix,
    very_smooth_eigen_test,
    very_smooth_power_test,
)
from wdtangent.groups import catalog
from wdtangent.linalg import Mat
from wdtangent.scalars import sqrt_power
from wdtangent.smoothfactory import standard_sl2_point
from wdtangent.wdrep import InvalidPointError, WDPoint, restrict_unramified, trivial_inertia, trivialize_inertia

from corpus import full_corpus, unit_nilpotent, zero


def gl2(Phi: Mat, N, p: int = 2, fK: int = 1) -> WDPoint:
    G = catalog("GL(2)")
    return WDPoint(G, p, fK, G.element(Phi), N, trivial_inertia(G))


def diag_s(p: int = 2) -> Mat:
    s = sqrt_power(p, 1)
    return Mat.diag([s, s.inverse()])


def dims(x: WDPoint) -> tuple[int, int, int]:
    r = cohomology_dims(x)
    return r.h0, r.h1, r.h2


# --- complex_of ---------------------------------------------------------------


def test_standard_point_complex() -> None:
    cx = complex_of(standard_sl2_point(2, 1))
    assert cx.V.dim == 3
    assert (cx.d0.shape, cx.d1.shape) == ((6, 3), (3, 6))
    assert (cx.d1 @ cx.d0).is_zero()


def test_trivial_frobenius_complex() -> None:
    x = gl2(Mat.identity(2), zero(catalog("GL(2)")))
    cx = complex_of(x)
    assert cx.d0.is_zero()
    assert dims(x) == (4, 4, 0)


def test_complex_rejects_invalid_points() -> None:
    G = catalog("GL(2)")
    with pytest.raises(InvalidPointError):
        complex_of(gl2(Mat.identity(2), unit_nilpotent(G)))


# --- cohomology_dims ----------------------------------------------------------


def test_gl2_examples() -> None:
    G = catalog("GL(2)")
    r = cohomology_dims(gl2(diag_s(), unit_nilpotent(G)))
    assert (r.h0, r.h1, r.h2, r.smooth, r.tangent_dim_framed) == (1, 1, 0, True, 4)
    r0 = cohomology_dims(gl2(diag_s(), zero(G)))
    assert (r0.h0, r0.h1, r0.h2, r0.smooth) == (2, 3, 1, False)


def test_sl2_examples() -> None:
    x = standard_sl2_point(2, 1)
    assert dims(x) == (0, 0, 0)
    assert dims(x.with_N(zero(x.G))) == (1, 2, 1)


def test_report_flags_are_consistent_on_corpus() -> None:
    for x in full_corpus()[::7]:
        r = cohomology_dims(x)
        assert r.smooth == (r.h2 == 0)
        assert r.tangent_dim_framed == x.G.group_dim + r.h2
        assert r.very_smooth is not None
        if r.very_smooth:
            assert r.smooth


# --- twisted dual and pairing -------------------------------------------------


def test_dual_h0_examples() -> None:
    G = catalog("GL(2)")
    assert dual_h0_twisted(standard_sl2_point(2, 1)) == 0
    assert dual_h0_twisted(gl2(diag_s(), zero(G))) == 1


def test_pairing_examples() -> None:
    G = catalog("GL(2)")
    assert pairing_matrix(standard_sl2_point(2, 1)).shape == (0, 0)
    P = pairing_matrix(gl2(diag_s(), zero(G)))
    assert P.shape == (1, 1) and not P.det().is_zero()
    GG = catalog("product(GL(2),GL(2))")
    g = G.element(diag_s())
    y = WDPoint(GG, 2, 1, GG.combine([g, g]), zero(GG), trivial_inertia(GG))
    P2 = pairing_matrix(y)
    assert P2.shape == (2, 2) and not P2.det().is_zero()


# --- very smooth ----------------------------------------------------------------


def test_standard_point_is_very_smooth() -> None:
    x = standard_sl2_point(2, 1)
    assert is_very_smooth(x)
    assert very_smooth_power_test(x) == 0
    assert not very_smooth_eigen_test(x)


def test_n_zero_point_is_not_very_smooth() -> None:
    x = gl2(diag_s(), zero(catalog("GL(2)")))
    assert not is_smooth(x)
    assert not is_very_smooth(x)


def test_smooth_but_decided_by_power_test() -> None:
    # Ad(Phi) has eigenvalues 4, 1/4, 1, 1 and none equals q = 2, so h2 = 0;
    # very-smoothness is then decided by the power test, cross-checked by the eigen test
    s = sqrt_power(2, 1)
    x = gl2(Mat.diag([2 * s, s.inverse()]), zero(catalog("GL(2)")))
    assert is_smooth(x)
    h2_power = very_smooth_power_test(x)
    assert (h2_power == 0) == (not very_smooth_eigen_test(x))
    assert is_very_smooth(x) == (h2_power == 0)


def test_power_test_matches_literal_power_for_small_m() -> None:
    # SL(2): M = 12, small enough for the literal T^M
    for x in full_corpus():
        if x.G.name == "SL(2)" and x.inertia.is_trivial():
            assert very_smooth_power_test(x) == very_smooth_power_test(x, literal=True)


def test_very_smooth_is_stable_under_restriction() -> None:
    for x in full_corpus()[::30]:
        M = trivialize_inertia(x).M
        for m in (2, 3):
            if M % m == 0:
                y = restrict_unramified(x, m)
                assert is_very_smooth(y) == is_very_smooth(x)
                if is_very_smooth(x):
                    assert is_smooth(y)


# --- N = 0 two-term complex -----------------------------------------------------


def test_cohomology_n0_examples() -> None:
    G = catalog("GL(2)")
    assert cohomology_N0(gl2(Mat.identity(2), zero(G))) == (4, 4)
    assert cohomology_N0(gl2(diag_s(), zero(G))) == (2, 2)
    # an elliptic element of order 6: Ad fixes only its own one-dimensional centralizer
    SL2 = catalog("SL(2)")
    x = WDPoint(SL2, 2, 1, SL2.element([[0, -1], [1, 1]]), zero(SL2), trivial_inertia(SL2))
    assert cohomology_N0(x) == (1, 1)
    for y in full_corpus()[::11]:
        if all(c.is_zero() for c in y.N):
            h0, h1 = cohomology_N0(y)
            assert h0 == h1 == dims(y)[0]


def test_cohomology_n0_rejects_nonzero_n() -> None:
    with pytest.raises(ValueError):
        cohomology_N0(standard_sl2_point(2, 1))
