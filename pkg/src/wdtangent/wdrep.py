"""Weil–Deligne points ``(Phi, N, tau)``: inertial data, validation, sampling.

A point lives on a group model ``G`` with residue data ``p`` and ``fK``
(so ``q = p**fK``).  Inertia is a finite group given by a multiplication
table, a homomorphism ``tau`` into ``G``, the Frobenius conjugation
``theta(g) = g0 g g0^-1`` and the order ``d`` of Frobenius modulo inertia.
``frob_power`` names the inertia element ``u = g0^d``; it defaults to the
identity (the split extension).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Sequence

from .groups import GroupElement, GroupError, GroupModel, _vec, fixed_lie
from .linalg import Mat, Subspace, kernel
from .nilpotent import associated_cocharacter, is_nilpotent
from .scalars import ONE, ZERO, Scalar, cyclotomic_bound, sqrt_power

__all__ = [
    "InvalidPointError",
    "FiniteGroup",
    "InertialData",
    "WDPoint",
    "ValidationReport",
    "TrivializedDatum",
    "cyclic_group",
    "trivial_inertia",
    "validate",
    "require_valid",
    "invariants_subspace",
    "restrict_unramified",
    "trivialize_inertia",
    "sample_fiber",
    "act",
    "commutant_basis",
]

Vec = tuple[Scalar, ...]


class InvalidPointError(ValueError):
    """Raised when an operation needs a valid point and gets an invalid one."""


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on ``range(order)`` given by its multiplication table."""

    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self) -> None:
        n = len(self.table)
        if n == 0 or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table must be square and non-empty")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("table entries out of range")
        e = self.identity
        if any(self.table[e][g] != g or self.table[g][e] != g for g in range(n)):
            raise ValueError("identity index is not a two-sided identity")
        for a in range(n):
            if e not in self.table[a]:
                raise ValueError(f"element {a} has no inverse")
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("table is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        n = self.order
        if sorted(perm) != list(range(n)):
            return False
        return all(perm[self.table[a][b]] == self.table[perm[a]][perm[b]] for a in range(n) for b in range(n))


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), 0)


@dataclass(frozen=True)
class InertialData:
    group: FiniteGroup
    tau: tuple[GroupElement, ...]
    theta: tuple[int, ...]
    d: int = 1
    frob_power: int | None = None

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def u(self) -> int:
        return self.group.identity if self.frob_power is None else self.frob_power

    def is_trivial(self) -> bool:
        return self.order == 1

    def theta_power(self, m: int) -> tuple[int, ...]:
        perm = tuple(range(self.order))
        for _ in range(m):
            perm = tuple(self.theta[x] for x in perm)
        return perm

    def check(self, G: GroupModel) -> list[str]:
        """Structural problems with this inertial datum (empty when fine)."""
        grp, problems = self.group, []
        n = grp.order
        if len(self.tau) != n or len(self.theta) != n:
            return ["tau and theta must have one entry per inertia element"]
        if self.d < 1:
            problems.append("d must be positive")
        for g in self.tau:
            try:
                G.check_member(g)
            except GroupError as exc:
                return [f"tau value is not in {G.name}: {exc}"]
        if self.tau[grp.identity] != G.identity():
            problems.append("tau(identity) is not the identity")
        for a in range(n):
            for b in range(n):
                if G.mul(self.tau[a], self.tau[b]) != self.tau[grp.mul(a, b)]:
                    problems.append("tau is not a homomorphism")
                    break
            else:
                continue
            break
        if not grp.is_automorphism(self.theta):
            problems.append("theta is not an automorphism")
        else:
            u = self.u
            if not 0 <= u < n:
                problems.append("frob_power index out of range")
            else:
                thd = self.theta_power(self.d)
                uinv = grp.inv(u)
                if any(thd[g] != grp.mul(grp.mul(u, g), uinv) for g in range(n)):
                    problems.append("theta^d is not conjugation by frob_power")
                if self.theta[u] != u:
                    problems.append("theta does not fix frob_power")
        ident = G.identity()
        for g in self.tau:
            if G.power(g, n) != ident:
                problems.append("tau value of order not dividing |I|")
                break
        return problems


def trivial_inertia(G: GroupModel, d: int = 1) -> InertialData:
    return InertialData(FiniteGroup(((0,),), 0), (G.identity(),), (0,), d)


@dataclass(frozen=True)
class WDPoint:
    G: GroupModel
    p: int
    fK: int
    Phi: GroupElement
    N: Vec
    inertia: InertialData

    def __post_init__(self) -> None:
        object.__setattr__(self, "N", _vec(self.N))

    @property
    def q(self) -> int:
        return self.p ** self.fK

    def with_N(self, N: Sequence) -> "WDPoint":
        return replace(self, N=_vec(N))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(x: WDPoint) -> ValidationReport:
    """Check the four defining constraints, reporting each violation."""
    G = x.G
    out: list[str] = []
    try:
        G.check_member(x.Phi)
    except GroupError as exc:
        return ValidationReport((f"Phi is not in {G.name}: {exc}",))
    if len(x.N) != G.group_dim:
        return ValidationReport((f"N must have {G.group_dim} coordinates",))
    problems = x.inertia.check(G)
    if problems:
        return ValidationReport(tuple(f"inertia: {p}" for p in problems))
    A = G.ad_matrix(x.Phi)
    if A.apply(x.N) != tuple(x.q * n for n in x.N):
        out.append("frobenius_monodromy: Ad(Phi)N != q N")
    inert = x.inertia
    Phi_inv = G.inv(x.Phi)
    for g in range(inert.order):
        lhs = G.mul(G.mul(x.Phi, inert.tau[g]), Phi_inv)
        if lhs != inert.tau[inert.theta[g]]:
            out.append("frobenius_inertia: Phi tau(g) Phi^-1 != tau(theta(g))")
            break
    for t in inert.tau:
        if G.ad_matrix(t).apply(x.N) != x.N:
            out.append("inertia_monodromy: Ad(tau(g))N != N")
            break
    if not is_nilpotent(G, x.N):
        out.append("nilpotent: N is not nilpotent")
    return ValidationReport(tuple(out))


def require_valid(x: WDPoint) -> None:
    rep = validate(x)
    if not rep.ok:
        raise InvalidPointError("; ".join(rep.violations))


def invariants_subspace(x: WDPoint) -> Subspace:
    require_valid(x)
    return fixed_lie(x.G, list(x.inertia.tau))


def restrict_unramified(x: WDPoint, m: int) -> WDPoint:
    """Restriction to the unramified extension of degree ``m``."""
    if m < 1:
        raise ValueError("m must be positive")
    require_valid(x)
    inert = x.inertia
    g = math.gcd(inert.d, m)
    new_d = inert.d // g
    grp = inert.group
    new_u = grp.power(inert.u, m // g)
    inertia = InertialData(grp, inert.tau, inert.theta_power(m), new_d,
                           None if new_u == grp.identity else new_u)
    y = WDPoint(x.G, x.p, x.fK * m, x.G.power(x.Phi, m), x.N, inertia)
    require_valid(y)
    return y


@dataclass(frozen=True)
class TrivializedDatum:
    """Restriction to the canonical uniform extension: ``V = g``, Frobenius ``Phi^M``."""

    point: WDPoint
    M: int

    @property
    def fK(self) -> int:
        return self.point.fK * self.M

    @property
    def V(self) -> Subspace:
        return Subspace.full(self.point.G.group_dim)

    def phi_power(self) -> GroupElement:
        """The literal ``Phi^M``; only practical for small ``M``."""
        return self.point.G.power(self.point.Phi, self.M)


def trivialize_inertia(x: WDPoint) -> TrivializedDatum:
    require_valid(x)
    M = cyclotomic_bound(x.G.group_dim) * x.inertia.d * x.inertia.order
    return TrivializedDatum(x, M)


def act(a: GroupElement, x: WDPoint) -> WDPoint:
    """Conjugate a point by ``a``: ``(a Phi a^-1, Ad(a)N, a tau a^-1)``."""
    G = x.G
    ainv = G.inv(a)
    inert = x.inertia
    tau = tuple(G.mul(G.mul(a, t), ainv) for t in inert.tau)
    return WDPoint(G, x.p, x.fK, G.mul(G.mul(a, x.Phi), ainv), G.ad_matrix(a).apply(x.N),
                   replace(inert, tau=tau))


# ---------------------------------------------------------------------------
# sampling


def commutant_basis(G: GroupModel, elements: Sequence[GroupElement], N: Sequence) -> list[Mat]:
    """Basis of the block-diagonal matrices commuting with the identity-component
    realizations of ``elements`` and with the realization of ``N``."""
    n = G.std_dim
    blocks = _block_ranges(G)
    units = [(i, j) for r in blocks for i in r for j in r]
    mats = [x.matrix for x in elements if x.component == 0] + [G.lie_element(N)]
    rows = []
    for A in mats:
        for a in range(n):
            for b in range(n):
                # (Z A - A Z)[a, b] as a linear form in the unit coordinates
                row = []
                for i, j in units:
                    v = ZERO
                    if i == a:
                        v = v + A[j, b]
                    if j == b:
                        v = v - A[a, i]
                    row.append(v)
                rows.append(row)
    if rows:
        K = kernel(Mat.from_rows(rows))
        vecs = K.basis
    else:
        vecs = tuple(tuple(ONE if t == s else ZERO for t in range(len(units))) for s in range(len(units)))
    out = []
    for v in vecs:
        ents = [ZERO] * (n * n)
        for c, (i, j) in zip(v, units):
            ents[i * n + j] = c
        out.append(Mat(n, n, ents))
    return out


def _block_ranges(G: GroupModel) -> list[range]:
    from .groups import CalG, ProductGroup

    if isinstance(G, ProductGroup):
        out, off = [], 0
        for f in G.factors:
            for r in _block_ranges(f):
                out.append(range(r.start + off, r.stop + off))
            off += f.std_dim
        return out
    if isinstance(G, CalG):
        return [range(G.n), range(G.n, G.n + 1)]
    return [range(G.std_dim)]


def _find_twist(G: GroupModel, inertia: InertialData, N: Vec, H: Vec) -> GroupElement:
    """A finite-order element realizing ``theta`` and fixing ``N`` and ``H``."""
    from .groups import finite_order

    if all(inertia.theta[g] == g for g in range(inertia.order)):
        return G.identity()
    for c in G.twist_candidates():
        if not G.is_member(c):
            continue
        cinv = G.inv(c)
        if any(G.mul(G.mul(c, inertia.tau[g]), cinv) != inertia.tau[inertia.theta[g]]
               for g in range(inertia.order)):
            continue
        A = G.ad_matrix(c)
        if A.apply(N) != N or A.apply(H) != H:
            continue
        try:
            finite_order(G, c)
        except GroupError:
            continue
        return c
    raise GroupError("no catalog twist realizes the Frobenius action on inertia")


def sample_fiber(G: GroupModel, inertia: InertialData, N: Sequence, count: int, seed: int,
                 p: int = 2, fK: int = 1, twist: GroupElement | None = None,
                 include_base: bool = True) -> list[WDPoint]:
    """Valid points ``(lambda(s) c z, N, tau)`` with ``z`` in the commutant of ``tau`` and ``N``."""
    N = _vec(N)
    problems = inertia.check(G)
    if problems:
        raise InvalidPointError("; ".join(problems))
    z_space = fixed_lie(G, list(inertia.tau))
    if not z_space.contains(N):
        raise InvalidPointError("N is not fixed by the inertial type")
    lam = associated_cocharacter(G, N, z_space)
    s = sqrt_power(p, fK)
    base = lam.evaluate(G, s)
    c = twist if twist is not None else _find_twist(G, inertia, N, lam.H)
    base = G.mul(base, c)
    comm = commutant_basis(G, inertia.tau, N)
    rng = random.Random(seed)
    out: list[WDPoint] = []
    if include_base and count > 0:
        out.append(WDPoint(G, p, fK, base, N, inertia))
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * max(count, 1):
            raise GroupError("sampling failed to find group members in the commutant")
        coeffs = [rng.randint(-2, 2) for _ in comm]
        Z = Mat.zeros(G.std_dim, G.std_dim)
        for a, B in zip(coeffs, comm):
            if a:
                Z = Z + B.scale(a)
        if Z.det().is_zero():
            continue
        z = G.from_identity_matrix(Z)
        if not G.is_member(z):
            continue
        if any(G.mul(z, t) != G.mul(t, z) for t in inertia.tau):
            continue
        if G.ad_matrix(z).apply(N) != N:
            continue
        y = WDPoint(G, p, fK, G.mul(base, z), N, inertia)
        if validate(y).ok:
            out.append(y)
    return out
