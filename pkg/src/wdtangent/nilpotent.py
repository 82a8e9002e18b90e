"""Jacobson–Morozov triples, associated cocharacters and the weight-2 lemma."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .groups import (
    Cocharacter,
    GroupError,
    GroupModel,
    _vec,
    dynamic_decomposition,
    make_cocharacter,
)
from .linalg import Mat, Subspace, image, rref
from .scalars import ONE, ZERO, Scalar

__all__ = [
    "NilpotencyError",
    "JacobsonMorozovError",
    "SL2Triple",
    "is_nilpotent",
    "jacobson_morozov",
    "associated_cocharacter",
    "weight2_in_image",
    "partitions",
    "jordan_nilpotent",
]

Vec = tuple[Scalar, ...]


class NilpotencyError(GroupError):
    pass


class JacobsonMorozovError(GroupError):
    pass


@dataclass(frozen=True)
class SL2Triple:
    N: Vec
    H: Vec
    Y: Vec

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.N + self.H + self.Y)


def is_nilpotent(G: GroupModel, N: Sequence) -> bool:
    N = _vec(N)
    adN = G.adN_matrix(N)
    if not (adN ** G.group_dim).is_zero():
        return False
    return (G.lie_element(N) ** G.std_dim).is_zero()


def _solve_affine(A: Mat, b: Sequence[Scalar]) -> Vec | None:
    """Echelon particular solution of ``A x = b`` (free variables set to 0)."""
    rows = [list(A.row(i)) + [b[i]] for i in range(A.rows)]
    red, piv = rref(rows)
    n = A.cols
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def _combo(vectors: Sequence[Vec], coeffs: Sequence[Scalar], dim: int) -> Vec:
    out = [ZERO] * dim
    for c, v in zip(coeffs, vectors):
        if c.is_zero():
            continue
        out = [o + c * x for o, x in zip(out, v)]
    return tuple(out)


def jacobson_morozov(G: GroupModel, N: Sequence, restrict_to: Subspace | None = None) -> SL2Triple:
    """Complete a nilpotent ``N`` to an sl2-triple inside ``restrict_to``.

    ``H`` is the echelon-minimal solution of ``[H, N] = 2N`` with
    ``H in [N, z]``; ``Y`` then solves ``[N, Y] = H`` and ``[H, Y] = -2Y``
    inside ``z``.
    """
    N = _vec(N)
    k = G.group_dim
    if len(N) != k:
        raise JacobsonMorozovError(f"N must have {k} coordinates")
    if not is_nilpotent(G, N):
        raise NilpotencyError("N is not nilpotent")
    zero = tuple([ZERO] * k)
    if all(x.is_zero() for x in N):
        return SL2Triple(zero, zero, zero)
    z = restrict_to if restrict_to is not None else Subspace.full(k)
    if not z.contains(N):
        raise JacobsonMorozovError("N does not lie in the given subalgebra")
    for i, a in enumerate(z.basis):
        for b in z.basis[i:]:
            if not z.contains(G.bracket(a, b)):
                raise JacobsonMorozovError("restricting subspace is not bracket closed")
    adN = G.adN_matrix(N)
    img = Subspace(k, [adN.apply(v) for v in z.basis])
    hs = list(img.basis)
    if not hs:
        raise JacobsonMorozovError("[N, z] = 0; no sl2-triple through N")
    # ad_H(N) = -ad_N(H) = 2N  with  H = sum c_i h_i
    A = Mat.from_columns([tuple(-x for x in adN.apply(h)) for h in hs], k)
    c = _solve_affine(A, [2 * x for x in N])
    if c is None:
        raise JacobsonMorozovError("no H in [N, z] with [H, N] = 2N")
    H = _combo(hs, c, k)
    adH = G.adN_matrix(H)
    zs = list(z.basis)
    # Y = sum d_j z_j with ad_N Y = H and (ad_H + 2) Y = 0
    cols = []
    for v in zs:
        cols.append(adN.apply(v) + tuple(a + 2 * b for a, b in zip(adH.apply(v), v)))
    B = Mat.from_columns(cols, 2 * k)
    d = _solve_affine(B, list(H) + [ZERO] * k)
    if d is None:
        raise JacobsonMorozovError("no Y completing the triple")
    Y = _combo(zs, d, k)
    trip = SL2Triple(N, H, Y)
    _verify_triple(G, trip)
    return trip


def _verify_triple(G: GroupModel, t: SL2Triple) -> None:
    if G.bracket(t.H, t.N) != tuple(2 * x for x in t.N):
        raise JacobsonMorozovError("[H, N] != 2N")
    if G.bracket(t.H, t.Y) != tuple(-2 * x for x in t.Y):
        raise JacobsonMorozovError("[H, Y] != -2Y")
    if G.bracket(t.N, t.Y) != t.H:
        raise JacobsonMorozovError("[N, Y] != H")


def associated_cocharacter(G: GroupModel, N: Sequence, tau_centralizer: Subspace | None = None) -> Cocharacter:
    """The cocharacter with derivative ``H`` of the Jacobson–Morozov triple."""
    trip = jacobson_morozov(G, N, tau_centralizer)
    lam = make_cocharacter(G, trip.H)
    if G.bracket(lam.H, trip.N) != tuple(2 * x for x in trip.N):
        raise AssertionError("associated cocharacter does not give N weight 2")
    return lam


def weight2_in_image(G: GroupModel, N: Sequence, lam: Cocharacter) -> bool:
    """Whether the weight-2 space of ``lam`` lies in the image of ``ad_N``."""
    g2 = dynamic_decomposition(G, lam).piece(2)
    return image(G.adN_matrix(_vec(N))).contains_space(g2)


# ---------------------------------------------------------------------------
# nilpotent orbits of gl_n


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` in decreasing lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def jordan_nilpotent(G: GroupModel, partition: Sequence[int]) -> Vec:
    """Lie coordinates of the Jordan-form nilpotent with the given block sizes."""
    n = sum(partition)
    if n != G.std_dim:
        raise GroupError(f"partition of {n} does not match the realization of {G.name}")
    ents = [ZERO] * (n * n)
    off = 0
    for size in partition:
        for i in range(size - 1):
            ents[(off + i) * n + off + i + 1] = ONE
        off += size
    return G.lie_coords(Mat(n, n, ents))
