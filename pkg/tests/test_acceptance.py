"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest.
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from wdtangent.cohomology import (
    cohomology_dims,
    complex_of,
    dual_h0_twisted,
    is_very_smooth,
    pairing_matrix,
    very_smooth_eigen_test,
    very_smooth_power_test,
)
from wdtangent.groups import catalog, make_cocharacter, morphism, oddness_fixed_dim
from wdtangent.linalg import Mat, image, kernel
from wdtangent.nilpotent import associated_cocharacter, jacobson_morozov, jordan_nilpotent, partitions
from wdtangent.phimod import (
    HodgeType,
    fontaine_to_wd,
    global_ledger,
    hodge_dim,
    is_regular,
    local_dim,
    validate_module,
    wd_to_phi_module,
)
from wdtangent.smoothfactory import pushforward, smooth_point, standard_sl2_point
from wdtangent.wdrep import WDPoint, trivial_inertia, validate

sys.path.insert(0, str(Path(__file__).resolve().parent))

from corpus import calg_jordan, factory_points, full_corpus, roundtrip_points, unit_nilpotent, zero  # noqa: E402


def report(capsys, n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{n}] {title}"
    if detail:
        line += f" ({detail})"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def diag_cochar(G, weights):
    return make_cocharacter(G, G.lie_coords(Mat.diag(list(weights) + [0] * (G.std_dim - len(weights)))))


def regular_hodge(G, n: int, degree: int) -> HodgeType:
    return HodgeType(tuple(diag_cochar(G, [k * (n - j) for j in range(n)]) for k in range(1, degree + 1)))


# --- 1 ----------------------------------------------------------------------------


def test_01_standard_point(capsys) -> None:
    x = standard_sl2_point(2, 1)
    r = cohomology_dims(x)
    r0 = cohomology_dims(x.with_N(zero(x.G)))
    ok = (r.h2, r.smooth, r0.h2, r0.smooth) == (0, True, 1, False)
    report(capsys, 1, "standard point smooth, N = 0 sibling not smooth", ok,
           f"h2 = {r.h2} and {r0.h2}")


# --- 2 ----------------------------------------------------------------------------


def kernel_dims(x: WDPoint) -> tuple[int, int, int]:
    """Cohomology from kernel dimensions of the two differentials."""
    cx = complex_of(x)
    v = cx.V.dim
    k0, k1 = kernel(cx.d0).dim, kernel(cx.d1).dim
    rank0, rank1 = v - k0, 2 * v - k1
    return k0, k1 - rank0, v - rank1


def test_02_euler_characteristic(capsys) -> None:
    pts = full_corpus()
    groups = {x.G.name for x in pts}
    orders = {x.inertia.group.order for x in pts}
    bad = 0
    for x in pts:
        cx = complex_of(x)
        h = kernel_dims(x)
        r = cohomology_dims(x, very_smooth=False)
        if not (cx.d1 @ cx.d0).is_zero() or h != (r.h0, r.h1, r.h2) or h[0] - h[1] + h[2] != 0:
            bad += 1
    need = {"GL(2)", "GL(3)", "SL(2)", "product(GL(2),GL(1))", "calG(2)"}
    ok = bad == 0 and len(pts) >= 500 and need <= groups and {1, 2, 3} <= orders
    report(capsys, 2, "Euler characteristic vanishes", ok, f"{len(pts)} points, {bad} failures")


# --- 3 ----------------------------------------------------------------------------


def test_03_tate_duality(capsys) -> None:
    bad, nonzero = 0, 0
    for x in full_corpus():
        h2 = cohomology_dims(x, very_smooth=False).h2
        P = pairing_matrix(x)
        nonzero += h2 > 0
        if dual_h0_twisted(x) != h2 or P.shape != (h2, h2) or (h2 and P.det().is_zero()):
            bad += 1
    report(capsys, 3, "dual H0 equals h2 with a perfect pairing", bad == 0 and nonzero > 0,
           f"{bad} failures, {nonzero} points with h2 > 0")


# --- 4 ----------------------------------------------------------------------------


def constructed_points():
    """Smoothfactory certificates across the catalog and every GL(n) Jordan type."""
    cases = []
    for n in range(1, 5):
        G = catalog(f"GL({n})")
        cases += [(G, jordan_nilpotent(G, part)) for part in partitions(n)]
    for n in range(2, 5):
        S = catalog(f"SL({n})")
        cases += [(S, S.lie_coords(Mat.unit(n, 0, 1))), (S, zero(S))]
        C = catalog(f"calG({n})")
        cases += [(C, calg_jordan(C, part)) for part in partitions(n)]
    for spec in ("product(GL(2),GL(1))", "product(GL(2),GL(2))"):
        P = catalog(spec)
        cases += [(P, unit_nilpotent(P)), (P, zero(P))]
    certs = [smooth_point(G, trivial_inertia(G), N) for G, N in cases]
    return certs + list(factory_points())


def test_04_equidimensional(capsys) -> None:
    certs = constructed_points()
    bad = [c.point.G.name for c in certs if c.report.tangent_dim_framed != c.point.G.group_dim]
    report(capsys, 4, "tangent dimension equals dim G at constructed points", not bad,
           f"{len(certs)} points, failures {bad}")


# --- 5 ----------------------------------------------------------------------------


def test_05_dimension_formulas(capsys) -> None:
    bad = []
    for n in range(1, 5):
        G = catalog(f"GL({n})")
        for deg in (1, 2, 3):
            v = regular_hodge(G, n, deg)
            want = 1 + n * n + deg * n * (n - 1) // 2
            got = local_dim(G, v, l_equals_p=True)
            fixed = local_dim(G, v, fixed_det=True, l_equals_p=True)
            if not is_regular(G, v) or got != want or fixed != want - 1:
                bad.append((n, deg, got, fixed))
    for n in (2, 3, 4):
        C = catalog(f"calG({n})")
        if C.group_dim - C.derived_dim != 1:
            bad.append(("calG center", n))
        v = regular_hodge(C, n, 1)
        for lp, hodge in ((False, None), (True, v)):
            if local_dim(C, hodge, fixed_det=True, l_equals_p=lp) != local_dim(C, hodge, l_equals_p=lp) - 1:
                bad.append(("calG", n, lp))
    report(capsys, 5, "local dimension formulas", not bad, f"failures {bad}")


# --- 6 ----------------------------------------------------------------------------


def test_06_weight_two_lemma(capsys) -> None:
    cases, bad = 0, []
    for n in range(1, 5):
        G = catalog(f"GL({n})")
        for part in partitions(n):
            N = jordan_nilpotent(G, part)
            lam = associated_cocharacter(G, N)
            g2 = kernel(G.adN_matrix(lam.H) - Mat.identity(G.group_dim).scale(2))
            ok = image(G.adN_matrix(N)).contains_space(g2)
            cases += 1
            if not ok:
                bad.append(part)
    report(capsys, 6, "weight-2 space lies in the image of ad_N", not bad and cases == 11,
           f"{cases} Jordan types")


# --- 7 ----------------------------------------------------------------------------


def test_07_functorial_smoothness(capsys) -> None:
    h2s = []
    # tensor(2,2) on constructed points of GL(2) x GL(2)
    P = catalog("product(GL(2),GL(2))")
    e1 = P.lie_coords(Mat.unit(4, 0, 1))
    e2 = P.lie_coords(Mat.unit(4, 2, 3))
    for N in (zero(P), e1, e2, tuple(a + b for a, b in zip(e1, e2))):
        for p in (2, 3):
            x = smooth_point(P, trivial_inertia(P), N, p).point
            h2s.append(cohomology_dims(pushforward(morphism("tensor(2,2)"), x), very_smooth=False).h2)
    # det(n) on constructed points of GL(n)
    for n in range(1, 5):
        G = catalog(f"GL({n})")
        for part in partitions(n):
            x = smooth_point(G, trivial_inertia(G), jordan_nilpotent(G, part)).point
            h2s.append(cohomology_dims(pushforward(morphism(f"det({n})"), x), very_smooth=False).h2)
    # sl2_from_triple on standard points
    for n in range(2, 5):
        G = catalog(f"GL({n})")
        for part in partitions(n):
            if max(part) == 1:
                continue
            f = morphism("sl2_from_triple", G, jacobson_morozov(G, jordan_nilpotent(G, part)))
            for p, fK in ((2, 1), (3, 1), (2, 2)):
                y = pushforward(f, standard_sl2_point(p, fK))
                h2s.append(cohomology_dims(y, very_smooth=False).h2)
    report(capsys, 7, "pushforwards of smooth points are smooth", set(h2s) == {0},
           f"{len(h2s)} pushforwards")


# --- 8 ----------------------------------------------------------------------------


def test_08_very_smooth_consistency(capsys) -> None:
    disagree, very = 0, 0
    for x in full_corpus():
        power_h2 = very_smooth_power_test(x)
        if (power_h2 != 0) != very_smooth_eigen_test(x):
            disagree += 1
        very += power_h2 == 0
    certs = constructed_points()
    not_very = sum(1 for c in certs if not is_very_smooth(c.point))
    report(capsys, 8, "power and eigenvalue tests agree, constructed points very smooth",
           disagree == 0 and not_very == 0,
           f"{disagree} disagreements, {very} very smooth corpus points, {not_very} bad certificates")


# --- 9 ----------------------------------------------------------------------------


def test_09_fontaine_roundtrip(capsys) -> None:
    pts = roundtrip_points()
    fLs = sorted({x.inertia.d * x.fK for x in pts})
    bad = 0
    for x in pts:
        M = wd_to_phi_module(x)
        if validate_module(M) or fontaine_to_wd(M) != x:
            bad += 1
    report(capsys, 9, "Fontaine roundtrip is the identity", bad == 0 and len(pts) >= 100 and fLs == [1, 2, 3],
           f"{len(pts)} points, fL in {fLs}")


# --- 10 ---------------------------------------------------------------------------


def test_10_global_ledger(capsys) -> None:
    G = catalog("calG(2)")
    odd = oddness_fixed_dim(G, G.jay)
    v = regular_hodge(G, 2, 1)
    led = global_ledger(1, [odd.fixed_dim], G.derived_dim, [1], hodge_dim(G, v))
    ok = odd.odd and is_regular(G, v) and led.krull_lower_bound == 1 and led.odd
    report(capsys, 10, "global Krull dimension bound for calG(2) over Q", ok,
           f"bound {led.krull_lower_bound}")


# --- 11 ---------------------------------------------------------------------------


def symplectic_form(n: int) -> Mat:
    J = Mat.zeros(n, n)
    for i in range(0, n, 2):
        J = J + Mat.unit(n, i, i + 1) - Mat.unit(n, i + 1, i)
    return J


def test_11_oddness(capsys) -> None:
    bad = []
    for n in (2, 3, 4):
        G = catalog(f"calG({n})")
        c = G.make(Mat.identity(n), 1, 1)
        rep = oddness_fixed_dim(G, c)
        target = G.group_dim - G.borel_dim
        if c != G.jay or rep.fixed_dim != n * (n - 1) // 2 or rep.fixed_dim != target or not rep.odd:
            bad.append(("standard", n))
        if n % 2 == 0:
            s = oddness_fixed_dim(G, G.make(symplectic_form(n), -1, 1))
            if s.fixed_dim != n * (n + 1) // 2 or s.odd:
                bad.append(("symplectic", n))
    report(capsys, 11, "standard involution odd, symplectic involution not odd", not bad, f"failures {bad}")


# --- 12 ---------------------------------------------------------------------------


def f_mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def f_inv2(A):
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return [[A[1][1] / det, -A[0][1] / det], [-A[1][0] / det, A[0][0] / det]]


def units():
    out = []
    for i in range(2):
        for j in range(2):
            E = [[Fraction(0)] * 2 for _ in range(2)]
            E[i][j] = Fraction(1)
            out.append(E)
    return out


def flatten(X):
    return [X[0][0], X[0][1], X[1][0], X[1][1]]


def f_rank(rows) -> int:
    M = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                t = M[i][col] / M[rank][col]
                M[i] = [a - t * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def brute_force_dims(Phi, N, q: int) -> tuple[int, int, int]:
    """Cohomology of gl2 -> gl2 + gl2 -> gl2 in the basis E11, E12, E21, E22."""
    Pinv = f_inv2(Phi)
    basis = units()
    ad_phi = [flatten(f_mul(f_mul(Phi, E), Pinv)) for E in basis]  # columns
    ad_n = [flatten([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(f_mul(N, E), f_mul(E, N))])
            for E in basis]
    A = [[ad_phi[j][i] for j in range(4)] for i in range(4)]
    D = [[ad_n[j][i] for j in range(4)] for i in range(4)]
    one = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    d0 = [[one[i][j] - A[i][j] for j in range(4)] for i in range(4)] + D  # 8 x 4
    d1 = [D[i] + [A[i][j] / q - one[i][j] for j in range(4)] for i in range(4)]  # 4 x 8
    r0, r1 = f_rank(d0), f_rank(d1)
    return 4 - r0, 8 - r0 - r1, 4 - r1


def random_gl2_frac(rng):
    while True:
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 0:
            return g


def oracle_points(count: int = 50, p: int = 3, fK: int = 2, seed: int = 12):
    rng = random.Random(seed)
    q = p ** fK
    out = []
    for k in range(count):
        g = random_gl2_frac(rng)
        a = Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 2, 5]))
        if k % 2 == 0:
            t = Fraction(rng.randint(-2, 2))
            core = [[q * a, q * a * t], [Fraction(0), a]]
            Ncore = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        else:
            b = Fraction(rng.choice([1, 3, 9, 27, -1, 4]), rng.choice([1, 3]))
            core = [[a, Fraction(0)], [Fraction(0), a * b]]
            Ncore = [[Fraction(0)] * 2 for _ in range(2)]
        gi = f_inv2(g)
        out.append((f_mul(f_mul(g, core), gi), f_mul(f_mul(g, Ncore), gi)))
    return out


def test_12_brute_force_oracle(capsys) -> None:
    p, fK = 3, 2
    G = catalog("GL(2)")
    bad, h2pos, checked = 0, 0, 0
    for Phi, N in oracle_points(p=p, fK=fK):
        x = WDPoint(G, p, fK, G.element(Phi), G.lie_coords(Mat.from_rows(N)), trivial_inertia(G))
        assert validate(x).ok
        r = cohomology_dims(x, very_smooth=False)
        want = brute_force_dims(Phi, N, p ** fK)
        checked += 1
        h2pos += want[2] > 0
        if want != (r.h0, r.h1, r.h2):
            bad += 1
    report(capsys, 12, "brute-force gl2 oracle matches", bad == 0 and checked == 50 and h2pos > 0,
           f"{checked} points, {bad} mismatches, {h2pos} with h2 > 0")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
