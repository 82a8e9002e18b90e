from __future__ import annotations

import pytest

from wdtangent.groups import catalog, dynamic_decomposition, fixed_lie, make_cocharacter, morphism
from wdtangent.linalg import Mat, image, intersect, kernel, sum_spaces
from wdtangent.nilpotent import (
    JacobsonMorozovError,
    NilpotencyError,
    associated_cocharacter,
    is_nilpotent,
    jacobson_morozov,
    jordan_nilpotent,
    partitions,
    weight2_in_image,
)
from wdtangent.scalars import Scalar, sqrt_power

from corpus import calg_jordan


def coords(G, M):
    return G.lie_coords(M)


def all_jordan_cases():
    for n in range(1, 5):
        for part in partitions(n):
            yield f"GL({n})", part


def test_partitions_counts() -> None:
    assert [len(list(partitions(n))) for n in range(1, 7)] == [1, 2, 3, 5, 7, 11]


# --- jacobson_morozov -----------------------------------------------------------


def test_jm_gl2_standard() -> None:
    G = catalog("GL(2)")
    t = jacobson_morozov(G, coords(G, Mat.unit(2, 0, 1)))
    assert t.H == coords(G, Mat.diag([1, -1]))
    assert t.Y == coords(G, Mat.unit(2, 1, 0))


def test_jm_gl3_e12() -> None:
    G = catalog("GL(3)")
    t = jacobson_morozov(G, coords(G, Mat.unit(3, 0, 1)))
    assert t.H == coords(G, Mat.diag([1, -1, 0]))
    assert t.Y == coords(G, Mat.unit(3, 1, 0))


def test_jm_zero_triple() -> None:
    G = catalog("GL(3)")
    t = jacobson_morozov(G, [0] * 9)
    assert t.is_zero()


def test_jm_rejects_non_nilpotent() -> None:
    G = catalog("GL(2)")
    with pytest.raises(NilpotencyError):
        jacobson_morozov(G, coords(G, Mat.diag([1, 0])))


def test_jm_rejects_centralizer_without_n() -> None:
    G = catalog("GL(2)")
    z = fixed_lie(G, [G.element([[1, 0], [0, -1]])])
    with pytest.raises(JacobsonMorozovError):
        jacobson_morozov(G, coords(G, Mat.unit(2, 0, 1)), restrict_to=z)


@pytest.mark.parametrize("spec,part", list(all_jordan_cases()))
def test_triples_satisfy_sl2_relations(spec: str, part: tuple[int, ...]) -> None:
    G = catalog(spec)
    N = jordan_nilpotent(G, part)
    t = jacobson_morozov(G, N)
    if all(p == 1 for p in part):
        assert t.is_zero()
        return
    assert G.bracket(t.H, t.N) == tuple(2 * x for x in t.N)
    assert G.bracket(t.H, t.Y) == tuple(-2 * x for x in t.Y)
    assert G.bracket(t.N, t.Y) == t.H
    assert image(G.adN_matrix(N)).contains(t.H)


def test_triple_inside_a_centralizer() -> None:
    G = catalog("GL(3)")
    tau = G.element([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    z = fixed_lie(G, [tau])
    N = coords(G, Mat.unit(3, 0, 1))
    t = jacobson_morozov(G, N, restrict_to=z)
    assert z.contains(t.H) and z.contains(t.Y)


# --- associated cocharacters ------------------------------------------------


def test_associated_cocharacter_examples() -> None:
    GL2, GL3 = catalog("GL(2)"), catalog("GL(3)")
    lam = associated_cocharacter(GL2, coords(GL2, Mat.unit(2, 0, 1)))
    assert lam.weights == (2, 0, 0, -2)
    assert associated_cocharacter(GL2, [0] * 4).weights == (0, 0, 0, 0)
    lam3 = associated_cocharacter(GL3, coords(GL3, Mat.unit(3, 0, 1)))
    assert lam3.weights == (2, 1, 1, 0, 0, 0, -1, -1, -2)


@pytest.mark.parametrize("spec,part", list(all_jordan_cases()))
@pytest.mark.parametrize("p", [2, 3])
def test_associated_cocharacter_scales_n_by_p(spec: str, part: tuple[int, ...], p: int) -> None:
    G = catalog(spec)
    N = jordan_nilpotent(G, part)
    lam = associated_cocharacter(G, N)
    s = sqrt_power(p, 1)
    A = G.ad_matrix(lam.evaluate(G, s))
    assert A.apply(N) == tuple(p * x for x in N)


@pytest.mark.parametrize("spec,part", list(all_jordan_cases()))
def test_centralizer_of_n_sits_in_the_parabolic(spec: str, part: tuple[int, ...]) -> None:
    G = catalog(spec)
    N = jordan_nilpotent(G, part)
    D = dynamic_decomposition(G, associated_cocharacter(G, N))
    K = kernel(G.adN_matrix(N))
    assert D.nonnegative.contains_space(K)
    pos, zero = intersect(K, D.positive), intersect(K, D.zero)
    assert sum_spaces(pos, zero) == K and pos.dim + zero.dim == K.dim


# --- weight-2 lemma -----------------------------------------------------------


def test_weight2_examples() -> None:
    GL2, GL3 = catalog("GL(2)"), catalog("GL(3)")
    N = coords(GL2, Mat.unit(2, 0, 1))
    assert weight2_in_image(GL2, N, associated_cocharacter(GL2, N))
    Z = [Scalar(0)] * 4
    assert weight2_in_image(GL2, Z, associated_cocharacter(GL2, Z))
    N3 = coords(GL3, Mat.unit(3, 0, 1))
    assert weight2_in_image(GL3, N3, associated_cocharacter(GL3, N3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_weight2_for_calg(n: int) -> None:
    G = catalog(f"calG({n})")
    for part in partitions(n):
        N = calg_jordan(G, part)
        assert weight2_in_image(G, N, associated_cocharacter(G, N))


def test_weight2_fails_for_a_non_associated_cocharacter() -> None:
    G = catalog("GL(3)")
    N = coords(G, Mat.unit(3, 0, 1))
    # N still has weight 2, but so does e23, which is not in im ad_N
    lam = make_cocharacter(G, coords(G, Mat.diag([1, -1, -3])))
    assert not weight2_in_image(G, N, lam)


# --- functoriality --------------------------------------------------------------


@pytest.mark.parametrize("spec", ["tensor(2,2)", "det(2)", "incl_block(2,1)", "incl_sl(2)"])
def test_associated_cocharacters_push_forward(spec: str) -> None:
    f = morphism(spec)
    S = f.source
    N = S.lie_coords(Mat.unit(S.std_dim, 0, 1))
    t = jacobson_morozov(S, N)
    fN, fH = f.map_lie(t.N), f.map_lie(t.H)
    T = f.target
    assert T.bracket(fH, fN) == tuple(2 * x for x in fN)
    assert image(T.adN_matrix(fN)).contains(fH)


def test_is_nilpotent() -> None:
    G = catalog("GL(3)")
    assert is_nilpotent(G, jordan_nilpotent(G, (3,)))
    assert not is_nilpotent(G, coords(G, Mat.diag([0, 0, 1])))
