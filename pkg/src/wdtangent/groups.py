"""Matrix realizations of (possibly disconnected) reductive groups.

Every group model realizes its identity component inside ``GL(std_dim)`` by
block diagonal matrices and carries a basis of its Lie algebra inside that
realization.  Disconnected groups carry an explicit component index on each
element.  The catalog covers ``GL(n)``, ``SL(n)``, ``GL(1)``, finite products,
and the group ``calG(n) = (GL(n) x GL(1)) ⋊ {1, j}`` with
``j (g, a) j^-1 = (a g^-T, a)``.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Sequence

from .linalg import Mat, Subspace, block_diag, char_poly, intersect, kernel, rref
from .scalars import ONE, ZERO, Scalar, as_scalar, euler_phi, unity_factor

__all__ = [
    "GroupError",
    "MembershipError",
    "NotInLieAlgebraError",
    "NonIntegerWeightError",
    "GroupElement",
    "GroupModel",
    "GeneralLinear",
    "SpecialLinear",
    "CalG",
    "ProductGroup",
    "Cocharacter",
    "Decomposition",
    "Morphism",
    "OddnessReport",
    "catalog",
    "ad_matrix",
    "adN_matrix",
    "fixed_lie",
    "make_cocharacter",
    "dynamic_decomposition",
    "morphism",
    "oddness_fixed_dim",
    "finite_order",
    "compose",
    "tensor_morphism",
    "det_morphism",
    "incl_block_morphism",
    "incl_sl_morphism",
    "sl2_from_triple_morphism",
    "trivial_cocharacter",
]


class GroupError(ValueError):
    """Base class for group-level failures."""


class MembershipError(GroupError):
    pass


class NotInLieAlgebraError(GroupError):
    pass


class NonIntegerWeightError(GroupError):
    pass


@dataclass(frozen=True)
class GroupElement:
    """An element of a group model.

    ``matrix`` is the block-diagonal realization of the identity-component
    part; ``component`` indexes ``GroupModel.component_reps``.  For products,
    ``aux`` holds the factor elements.
    """

    matrix: Mat
    component: int = 0
    aux: tuple | None = None


Vec = tuple[Scalar, ...]


def _vec(v: Sequence) -> Vec:
    return tuple(as_scalar(x) for x in v)


class GroupModel:
    """Common machinery; subclasses fill in multiplication and structure."""

    name: str
    std_dim: int
    rank: int
    borel_dim: int
    num_components: int = 1

    def __init__(self) -> None:
        self._check_bracket_closure()

    # -- structure to be provided by subclasses --------------------------
    @cached_property
    def lie_basis(self) -> tuple[Mat, ...]:  # pragma: no cover - abstract
        raise NotImplementedError

    @cached_property
    def derived_idx(self) -> tuple[int, ...]:  # pragma: no cover - abstract
        raise NotImplementedError

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:  # pragma: no cover
        raise NotImplementedError

    def inv(self, g: GroupElement) -> GroupElement:  # pragma: no cover
        raise NotImplementedError

    def check_member(self, g: GroupElement) -> None:  # pragma: no cover
        raise NotImplementedError

    def ad_matrix(self, g: GroupElement) -> Mat:  # pragma: no cover
        raise NotImplementedError

    def from_identity_matrix(self, M: Mat) -> GroupElement:  # pragma: no cover
        raise NotImplementedError

    def random_element(self, rng: random.Random, component: int | None = None) -> GroupElement:  # pragma: no cover
        raise NotImplementedError

    def twist_candidates(self) -> list[GroupElement]:  # pragma: no cover
        raise NotImplementedError

    # -- derived data ----------------------------------------------------
    @property
    def group_dim(self) -> int:
        return len(self.lie_basis)

    @property
    def derived_dim(self) -> int:
        return len(self.derived_idx)

    @cached_property
    def component_reps(self) -> tuple[GroupElement, ...]:
        return (self.identity(),)

    def identity(self) -> GroupElement:
        return self.from_identity_matrix(Mat.identity(self.std_dim))

    def is_member(self, g: GroupElement) -> bool:
        try:
            self.check_member(g)
        except GroupError:
            return False
        return True

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            return self.power(self.inv(g), -k)
        result, base = self.identity(), g
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def conj(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.mul(self.mul(g, h), self.inv(g))

    @cached_property
    def _coord_solver(self) -> tuple[list[int], Mat, Mat]:
        k = self.group_dim
        B = [list(b.entries) for b in self.lie_basis]
        aug = [row + [ONE if i == j else ZERO for j in range(k)] for i, row in enumerate(B)]
        red, piv = rref(aug)
        m = self.std_dim ** 2
        if len(piv) != k or any(p >= m for p in piv):
            raise GroupError(f"{self.name}: Lie basis is not linearly independent")
        E = Mat(k, k, [x for r in red for x in r[m:]])
        basis_rows = Mat(k, m, [x for b in B for x in b])
        return piv, E, basis_rows

    def lie_coords(self, X: Mat, check: bool = True) -> Vec:
        """Coordinates of a realization matrix in ``lie_basis``."""
        piv, E, basis_rows = self._coord_solver
        flat = X.entries
        row = [flat[p] for p in piv]
        k = self.group_dim
        coords = tuple(_dot_col(row, E, j) for j in range(k))
        if check:
            back = self.lie_element(coords)
            if back != X:
                raise NotInLieAlgebraError(f"matrix is not in Lie({self.name})")
        return coords

    def lie_element(self, coords: Sequence) -> Mat:
        coords = _vec(coords)
        if len(coords) != self.group_dim:
            raise NotInLieAlgebraError(f"expected {self.group_dim} coordinates, got {len(coords)}")
        n = self.std_dim
        ents = [ZERO] * (n * n)
        for c, b in zip(coords, self.lie_basis):
            if c.is_zero():
                continue
            for t, x in enumerate(b.entries):
                if not x.is_zero():
                    ents[t] = ents[t] + c * x
        return Mat(n, n, ents)

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        X, Y = self.lie_element(x), self.lie_element(y)
        return self.lie_coords(X @ Y - Y @ X, check=False)

    def adN_matrix(self, N: Sequence) -> Mat:
        """Matrix of ``x -> [N, x]`` on Lie coordinates (columns are images)."""
        Nm = self.lie_element(N)
        cols = [self.lie_coords(Nm @ b - b @ Nm, check=False) for b in self.lie_basis]
        return Mat.from_columns(cols, self.group_dim)

    def _ad_by_conjugation(self, M: Mat, Minv: Mat) -> Mat:
        cols = [self.lie_coords(M @ b @ Minv, check=False) for b in self.lie_basis]
        return Mat.from_columns(cols, self.group_dim)

    def _check_bracket_closure(self) -> None:
        basis = self.lie_basis
        for i, a in enumerate(basis):
            for b in basis[i + 1:]:
                self.lie_coords(a @ b - b @ a)

    def derived_subspace(self) -> Subspace:
        k = self.group_dim
        return Subspace(k, [[ONE if j == i else ZERO for j in range(k)] for i in self.derived_idx])

    def element_spec(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupModel) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)


def _dot_col(row: Sequence[Scalar], E: Mat, j: int) -> Scalar:
    acc = ZERO
    for i, x in enumerate(row):
        if x.is_zero():
            continue
        e = E[i, j]
        if not e.is_zero():
            acc = acc + x * e
    return acc


def _gl_basis(n: int, with_identity: bool) -> tuple[Mat, ...]:
    """Basis e_ij (i<j), h_i = e_ii - e_(i+1)(i+1), e_ij (i>j), then I."""
    upper = [Mat.unit(n, i, j) for i in range(n) for j in range(n) if i < j]
    cartan = [Mat.unit(n, i, i) - Mat.unit(n, i + 1, i + 1) for i in range(n - 1)]
    lower = [Mat.unit(n, i, j) for i in range(n) for j in range(n) if i > j]
    out = upper + cartan + lower
    if with_identity:
        out.append(Mat.identity(n))
    return tuple(out)


def _random_invertible(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> Mat:
    while True:
        M = Mat(n, n, [rng.randint(lo, hi) for _ in range(n * n)])
        if not M.det().is_zero():
            return M


def _random_unimodular(rng: random.Random, n: int, steps: int = 4) -> Mat:
    M = Mat.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        M = M @ (Mat.identity(n) + Mat.unit(n, i, j).scale(rng.choice([-2, -1, 1, 2])))
    return M


def _signed_permutations(n: int, det_one: bool) -> list[Mat]:
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            ents = [ZERO] * (n * n)
            for i, j in enumerate(perm):
                ents[i * n + j] = Scalar(signs[i])
            M = Mat(n, n, ents)
            if det_one and M.det() != 1:
                continue
            out.append(M)
    out.sort(key=lambda M: (not M.is_identity(), [float(x) for x in M.entries]))
    return out


class GeneralLinear(GroupModel):
    def __init__(self, n: int) -> None:
        if n < 1:
            raise GroupError("GL(n) needs n >= 1")
        self.n = n
        self.name = f"GL({n})"
        self.std_dim = n
        self.rank = n
        self.borel_dim = n * (n + 1) // 2
        super().__init__()

    @cached_property
    def lie_basis(self) -> tuple[Mat, ...]:
        return _gl_basis(self.n, True)

    @cached_property
    def derived_idx(self) -> tuple[int, ...]:
        return tuple(range(self.n * self.n - 1))

    def element(self, M: Mat | Sequence[Sequence]) -> GroupElement:
        if not isinstance(M, Mat):
            M = Mat.from_rows(M)
        g = GroupElement(M)
        self.check_member(g)
        return g

    def from_identity_matrix(self, M: Mat) -> GroupElement:
        return GroupElement(M)

    def check_member(self, g: GroupElement) -> None:
        M = g.matrix
        if M.shape != (self.n, self.n):
            raise MembershipError(f"{self.name}: wrong shape {M.shape}")
        if g.component != 0 or g.aux is not None:
            raise MembershipError(f"{self.name}: connected group has a single component")
        if M.det().is_zero():
            raise MembershipError(f"{self.name}: matrix is singular")

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(g.matrix @ h.matrix)

    def inv(self, g: GroupElement) -> GroupElement:
        return GroupElement(g.matrix.inverse())

    def ad_matrix(self, g: GroupElement) -> Mat:
        self.check_member(g)
        return self._ad_by_conjugation(g.matrix, g.matrix.inverse())

    def random_element(self, rng: random.Random, component: int | None = None) -> GroupElement:
        return GroupElement(_random_invertible(rng, self.n))

    def twist_candidates(self) -> list[GroupElement]:
        return [GroupElement(M) for M in _signed_permutations(self.n, False)]

    def element_spec(self) -> dict:
        return {"type": "GL", "n": self.n}


class SpecialLinear(GeneralLinear):
    def __init__(self, n: int) -> None:
        if n < 2:
            raise GroupError("SL(n) needs n >= 2")
        self.n = n
        self.name = f"SL({n})"
        self.std_dim = n
        self.rank = n - 1
        self.borel_dim = n * (n + 1) // 2 - 1
        GroupModel.__init__(self)

    @cached_property
    def lie_basis(self) -> tuple[Mat, ...]:
        return _gl_basis(self.n, False)

    @cached_property
    def derived_idx(self) -> tuple[int, ...]:
        return tuple(range(self.n * self.n - 1))

    def check_member(self, g: GroupElement) -> None:
        super().check_member(g)
        if g.matrix.det() != 1:
            raise MembershipError(f"{self.name}: determinant is not 1")

    def random_element(self, rng: random.Random, component: int | None = None) -> GroupElement:
        M = _random_unimodular(rng, self.n)
        if rng.random() < 0.5 and self.n % 2 == 0:
            M = M.scale(-1)
        return GroupElement(M)

    def twist_candidates(self) -> list[GroupElement]:
        return [GroupElement(M) for M in _signed_permutations(self.n, True)]

    def element_spec(self) -> dict:
        return {"type": "SL", "n": self.n}


class CalG(GroupModel):
    """``(GL(n) x GL(1)) ⋊ {1, j}``.

    Elements are stored as ``blockdiag(g, a)`` plus ``component = 0`` for
    ``(g, a, 1)`` and ``component = 1`` for ``(g, a, j)``.
    """

    num_components = 2

    def __init__(self, n: int) -> None:
        if n < 1:
            raise GroupError("calG(n) needs n >= 1")
        self.n = n
        self.name = f"calG({n})"
        self.std_dim = n + 1
        self.rank = n + 1
        self.borel_dim = n * (n + 1) // 2 + 1
        super().__init__()

    @cached_property
    def lie_basis(self) -> tuple[Mat, ...]:
        gl = [block_diag(b, Mat.zeros(1, 1)) for b in _gl_basis(self.n, True)]
        return tuple(gl + [block_diag(Mat.zeros(self.n, self.n), Mat.identity(1))])

    @cached_property
    def derived_idx(self) -> tuple[int, ...]:
        return tuple(range(self.n * self.n))

    @cached_property
    def component_reps(self) -> tuple[GroupElement, ...]:
        one = Mat.identity(self.n + 1)
        return (GroupElement(one, 0), GroupElement(one, 1))

    @property
    def jay(self) -> GroupElement:
        return self.component_reps[1]

    def make(self, g: Mat | Sequence[Sequence], a, eps: int = 0) -> GroupElement:
        """The element ``(g, a, j^eps)``."""
        if not isinstance(g, Mat):
            g = Mat.from_rows(g)
        elt = GroupElement(block_diag(g, Mat.diag([a])), int(eps))
        self.check_member(elt)
        return elt

    def parts(self, x: GroupElement) -> tuple[Mat, Scalar, int]:
        n = self.n
        return x.matrix.submatrix(range(n), range(n)), x.matrix[n, n], x.component

    def from_identity_matrix(self, M: Mat) -> GroupElement:
        return GroupElement(M, 0)

    def check_member(self, x: GroupElement) -> None:
        n = self.n
        M = x.matrix
        if M.shape != (n + 1, n + 1):
            raise MembershipError(f"{self.name}: wrong shape {M.shape}")
        if x.component not in (0, 1) or x.aux is not None:
            raise MembershipError(f"{self.name}: component must be 0 or 1")
        for i in range(n):
            if not M[i, n].is_zero() or not M[n, i].is_zero():
                raise MembershipError(f"{self.name}: realization must be block diagonal")
        if M[n, n].is_zero() or M.det().is_zero():
            raise MembershipError(f"{self.name}: singular element")

    def _j_conj(self, h: Mat, b: Scalar) -> Mat:
        """The pair ``j (h, b) j^-1 = (b h^-T, b)`` as a block matrix."""
        return block_diag(h.inverse().T.scale(b), Mat.diag([b]))

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        g, a, e1 = self.parts(x)
        h, b, e2 = self.parts(y)
        if e1 == 0:
            return GroupElement(x.matrix @ y.matrix, e2)
        return GroupElement(x.matrix @ self._j_conj(h, b), (1 + e2) % 2)

    def inv(self, x: GroupElement) -> GroupElement:
        g, a, e = self.parts(x)
        if e == 0:
            return GroupElement(x.matrix.inverse(), 0)
        ainv = a.inverse()
        return GroupElement(block_diag(g.T.scale(ainv), Mat.diag([ainv])), 1)

    def ad_j_matrix(self) -> Mat:
        """``Ad(j)(X, y) = (y*1 - X^T, y)`` on Lie coordinates."""
        n = self.n
        cols = []
        for b in self.lie_basis:
            X = b.submatrix(range(n), range(n))
            y = b[n, n]
            img = block_diag(Mat.identity(n).scale(y) - X.T, Mat.diag([y]))
            cols.append(self.lie_coords(img, check=False))
        return Mat.from_columns(cols, self.group_dim)

    def ad_matrix(self, x: GroupElement) -> Mat:
        self.check_member(x)
        A = self._ad_by_conjugation(x.matrix, x.matrix.inverse())
        if x.component == 1:
            A = A @ self.ad_j_matrix()
        return A

    def random_element(self, rng: random.Random, component: int | None = None) -> GroupElement:
        g = _random_invertible(rng, self.n)
        a = rng.choice([-2, -1, 1, 2])
        eps = rng.randint(0, 1) if component is None else component
        return GroupElement(block_diag(g, Mat.diag([a])), eps)

    def twist_candidates(self) -> list[GroupElement]:
        out = []
        for eps in (0, 1):
            for P in _signed_permutations(self.n, False):
                for a in (1, -1):
                    out.append(GroupElement(block_diag(P, Mat.diag([a])), eps))
        return out

    def element_spec(self) -> dict:
        return {"type": "calG", "n": self.n}


class ProductGroup(GroupModel):
    """Direct product; components are mixed-radix indices over the factors."""

    def __init__(self, factors: Sequence[GroupModel]) -> None:
        if not factors:
            raise GroupError("product needs at least one factor")
        self.factors = tuple(factors)
        self.name = "product(" + ",".join(f.name for f in self.factors) + ")"
        self.std_dim = sum(f.std_dim for f in self.factors)
        self.rank = sum(f.rank for f in self.factors)
        self.borel_dim = sum(f.borel_dim for f in self.factors)
        self.num_components = math.prod(f.num_components for f in self.factors)
        super().__init__()

    @cached_property
    def lie_basis(self) -> tuple[Mat, ...]:
        out = []
        for i, f in enumerate(self.factors):
            for b in f.lie_basis:
                blocks = [Mat.zeros(g.std_dim, g.std_dim) for g in self.factors]
                blocks[i] = b
                out.append(block_diag(*blocks))
        return tuple(out)

    @cached_property
    def derived_idx(self) -> tuple[int, ...]:
        out, off = [], 0
        for f in self.factors:
            out.extend(off + i for i in f.derived_idx)
            off += f.group_dim
        return tuple(out)

    @cached_property
    def _lie_offsets(self) -> list[int]:
        offs, off = [], 0
        for f in self.factors:
            offs.append(off)
            off += f.group_dim
        return offs

    def _component_index(self, comps: Sequence[int]) -> int:
        idx = 0
        for f, c in zip(self.factors, comps):
            idx = idx * f.num_components + c
        return idx

    def combine(self, elements: Sequence[GroupElement]) -> GroupElement:
        elements = tuple(elements)
        if len(elements) != len(self.factors):
            raise MembershipError(f"{self.name}: expected {len(self.factors)} factor elements")
        return GroupElement(block_diag(*(e.matrix for e in elements)),
                            self._component_index([e.component for e in elements]), elements)

    @cached_property
    def component_reps(self) -> tuple[GroupElement, ...]:
        reps = itertools.product(*(f.component_reps for f in self.factors))
        return tuple(self.combine(r) for r in reps)

    def split_matrix(self, M: Mat) -> list[Mat]:
        out, off = [], 0
        for f in self.factors:
            r = range(off, off + f.std_dim)
            out.append(M.submatrix(r, r))
            off += f.std_dim
        return out

    def from_identity_matrix(self, M: Mat) -> GroupElement:
        return self.combine([f.from_identity_matrix(B) for f, B in zip(self.factors, self.split_matrix(M))])

    def check_member(self, g: GroupElement) -> None:
        if g.aux is None or len(g.aux) != len(self.factors):
            raise MembershipError(f"{self.name}: element lacks factor data")
        for f, e in zip(self.factors, g.aux):
            f.check_member(e)
        if self.combine(g.aux) != g:
            raise MembershipError(f"{self.name}: inconsistent product element")

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.combine([f.mul(a, b) for f, a, b in zip(self.factors, g.aux, h.aux)])

    def inv(self, g: GroupElement) -> GroupElement:
        return self.combine([f.inv(a) for f, a in zip(self.factors, g.aux)])

    def ad_matrix(self, g: GroupElement) -> Mat:
        self.check_member(g)
        return block_diag(*(f.ad_matrix(e) for f, e in zip(self.factors, g.aux)))

    def adN_matrix(self, N: Sequence) -> Mat:
        N = _vec(N)
        blocks = []
        for f, off in zip(self.factors, self._lie_offsets):
            blocks.append(f.adN_matrix(N[off:off + f.group_dim]))
        return block_diag(*blocks)

    def random_element(self, rng: random.Random, component: int | None = None) -> GroupElement:
        return self.combine([f.random_element(rng) for f in self.factors])

    def twist_candidates(self) -> list[GroupElement]:
        lists = [f.twist_candidates() for f in self.factors]
        out = [self.combine(c) for c in itertools.islice(itertools.product(*lists), 4096)]
        return out

    def element_spec(self) -> dict:
        return {"type": "product", "factors": [f.element_spec() for f in self.factors]}


# ---------------------------------------------------------------------------
# catalog

_CATALOG_CACHE: dict[str, GroupModel] = {}


def _parse_spec_string(text: str) -> Any:
    text = text.replace(" ", "")
    m = re.fullmatch(r"(GL|SL|calG)\(?(\d+)\)?", text)
    if m:
        return {"type": m.group(1), "n": int(m.group(2))}
    if text.startswith("product(") and text.endswith(")"):
        inner = text[len("product("):-1]
        parts, depth, cur = [], 0, ""
        for ch in inner:
            if ch == "," and depth == 0:
                parts.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        if cur:
            parts.append(cur)
        return {"type": "product", "factors": [_parse_spec_string(p) for p in parts]}
    raise GroupError(f"malformed group spec {text!r}")


def catalog(spec: Any) -> GroupModel:
    """Build (and cache) a catalog group from a string or dict spec."""
    if isinstance(spec, GroupModel):
        return spec
    if isinstance(spec, str):
        spec = _parse_spec_string(spec)
    if not isinstance(spec, dict) or "type" not in spec:
        raise GroupError(f"malformed group spec {spec!r}")
    kind = spec["type"]
    if kind == "product":
        factors = spec.get("factors")
        if not isinstance(factors, list) or not factors:
            raise GroupError("product spec needs a non-empty factor list")
        model: GroupModel = ProductGroup([catalog(f) for f in factors])
    else:
        n = spec.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise GroupError(f"group spec needs a positive integer n, got {n!r}")
        if kind == "GL":
            key = f"GL({n})"
            model = _CATALOG_CACHE.get(key) or GeneralLinear(n)
        elif kind == "SL":
            key = f"SL({n})"
            model = _CATALOG_CACHE.get(key) or SpecialLinear(n)
        elif kind == "calG":
            key = f"calG({n})"
            model = _CATALOG_CACHE.get(key) or CalG(n)
        else:
            raise GroupError(f"unknown group type {kind!r}")
    return _CATALOG_CACHE.setdefault(model.name, model)


# ---------------------------------------------------------------------------
# module-level operations


def ad_matrix(G: GroupModel, g: GroupElement) -> Mat:
    return G.ad_matrix(g)


def adN_matrix(G: GroupModel, N: Sequence) -> Mat:
    if len(N) != G.group_dim:
        raise NotInLieAlgebraError(f"expected {G.group_dim} coordinates")
    return G.adN_matrix(N)


def fixed_lie(G: GroupModel, elements: Sequence[GroupElement]) -> Subspace:
    """Intersection of the fixed spaces of ``Ad(g)``, in Lie coordinates."""
    k = G.group_dim
    space = Subspace.full(k)
    I = Mat.identity(k)
    for g in elements:
        A = G.ad_matrix(g)
        if A == I:
            continue
        space = intersect(space, kernel(A - I))
    return space


def _integer_eigen_decomposition(M: Mat) -> dict[int, Subspace]:
    n = M.rows
    if n == 0:
        return {}
    bound = max(sum(x.magnitude_bound() for x in M.row(i)) for i in range(n))
    lim = int(math.ceil(bound))
    I = Mat.identity(n)
    pieces: dict[int, Subspace] = {}
    total = 0
    for k in range(-lim, lim + 1):
        K = kernel(M - I.scale(k))
        if K.dim:
            pieces[k] = K
            total += K.dim
        if total == n:
            break
    if total != n:
        raise NonIntegerWeightError("operator is not diagonalizable with integer eigenvalues")
    return pieces


@dataclass(frozen=True)
class Cocharacter:
    """A cocharacter through its derivative ``H`` and a certified diagonalization.

    ``weights`` is the multiset of eigenvalues of ``ad_H`` (descending);
    ``std_weights`` are the eigenvalues of ``H`` in the realization, in the
    order of the columns of ``diagonalizer``.
    """

    group: str
    H: Vec
    weights: tuple[int, ...]
    std_weights: tuple[int, ...]
    diagonalizer: Mat

    def is_trivial(self) -> bool:
        return all(h.is_zero() for h in self.H)

    def value_matrix(self, s) -> Mat:
        s = as_scalar(s)
        P = self.diagonalizer
        D = Mat.diag([s ** h for h in self.std_weights])
        return P @ D @ P.inverse()

    def evaluate(self, G: GroupModel, s) -> GroupElement:
        g = G.from_identity_matrix(self.value_matrix(s))
        G.check_member(g)
        return g


def make_cocharacter(G: GroupModel, H: Sequence) -> Cocharacter:
    """Certify ``H`` as the derivative of a cocharacter of ``G``."""
    H = _vec(H)
    adH = G.adN_matrix(H)
    ad_pieces = _integer_eigen_decomposition(adH)
    weights = tuple(sorted((k for k, sp in ad_pieces.items() for _ in range(sp.dim)), reverse=True))
    Hm = G.lie_element(H)
    std_pieces = _integer_eigen_decomposition(Hm)
    cols, std_w = [], []
    for k in sorted(std_pieces, reverse=True):
        for v in std_pieces[k].basis:
            cols.append(v)
            std_w.append(k)
    P = Mat.from_columns(cols, G.std_dim)
    return Cocharacter(G.name, H, weights, tuple(std_w), P)


def trivial_cocharacter(G: GroupModel) -> Cocharacter:
    return make_cocharacter(G, [ZERO] * G.group_dim)


@dataclass(frozen=True)
class Decomposition:
    pieces: dict[int, Subspace]
    ambient_dim: int

    def piece(self, k: int) -> Subspace:
        return self.pieces.get(k, Subspace.zero(self.ambient_dim))

    def _union(self, pred: Callable[[int], bool]) -> Subspace:
        vecs = [v for k, sp in self.pieces.items() if pred(k) for v in sp.basis]
        return Subspace(self.ambient_dim, vecs)

    @property
    def nonnegative(self) -> Subspace:
        """Lie of the dynamic parabolic ``P_G(λ)``."""
        return self._union(lambda k: k >= 0)

    @property
    def positive(self) -> Subspace:
        """Lie of the unipotent radical ``U_G(λ)``."""
        return self._union(lambda k: k >= 1)

    @property
    def negative(self) -> Subspace:
        return self._union(lambda k: k < 0)

    @property
    def zero(self) -> Subspace:
        """Lie of the centralizer ``Z_G(λ)``."""
        return self.piece(0)


def dynamic_decomposition(G: GroupModel, lam: Cocharacter | Sequence) -> Decomposition:
    H = lam.H if isinstance(lam, Cocharacter) else _vec(lam)
    pieces = _integer_eigen_decomposition(G.adN_matrix(H))
    return Decomposition(dict(sorted(pieces.items())), G.group_dim)


# ---------------------------------------------------------------------------
# finite order


def finite_order(G: GroupModel, c: GroupElement) -> int:
    """Exact order of ``c``; raises if ``c`` has infinite order.

    ``c^k`` (``k`` = number of components) lies in the identity component.
    Every root of the squarefree part of its characteristic polynomial must
    be a root of unity (detected with cyclotomic gcds, allowing for a
    quadratic scalar field), and an exact power check rules out
    non-semisimple elements.
    """
    G.check_member(c)
    k = G.num_components
    R = G.power(c, k).matrix
    P = char_poly(R)
    S = P // P.gcd(P.derivative())
    deg = S.degree
    found, orders = 0, []
    for m in range(1, 2 * (2 * deg) ** 2 + 1):
        if euler_phi(m) > 2 * deg:
            continue
        g = unity_factor(S, m)
        if g.degree > 0:
            found += g.degree
            orders.append(m)
    if found != deg:
        raise GroupError("element has an eigenvalue that is not a root of unity")
    L = math.lcm(*orders) if orders else 1
    ident = G.identity()
    if G.power(c, k * L) != ident:
        raise GroupError("element is not of finite order (non-semisimple)")
    for m in _divisors(k * L):
        if G.power(c, m) == ident:
            return m
    raise AssertionError("unreachable")


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Morphism:
    name: str
    source: GroupModel
    target: GroupModel
    elt_map: Callable[[GroupElement], GroupElement] = field(compare=False)
    lie_map: Mat

    def map_lie(self, x: Sequence) -> Vec:
        return self.lie_map.apply(_vec(x))

    def __call__(self, g: GroupElement) -> GroupElement:
        return self.elt_map(g)

    def verify(self, samples: Sequence[GroupElement] = ()) -> None:
        """Check bracket and adjoint intertwining on the Lie basis."""
        S, T, L = self.source, self.target, self.lie_map
        if L.shape != (T.group_dim, S.group_dim):
            raise GroupError(f"{self.name}: lie_map has shape {L.shape}")
        k = S.group_dim
        for i in range(k):
            e = [ONE if j == i else ZERO for j in range(k)]
            lhs = L @ S.adN_matrix(e)
            rhs = T.adN_matrix(L.apply(e)) @ L
            if lhs != rhs:
                raise GroupError(f"{self.name}: bracket intertwining fails on basis vector {i}")
        for g in list(S.component_reps) + list(samples):
            h = self.elt_map(g)
            T.check_member(h)
            if L @ S.ad_matrix(g) != T.ad_matrix(h) @ L:
                raise GroupError(f"{self.name}: adjoint intertwining fails")


def _sample_elements(G: GroupModel, count: int = 3, seed: int = 11) -> list[GroupElement]:
    rng = random.Random(seed)
    return [G.random_element(rng) for _ in range(count)]


def _lie_map_from(source: GroupModel, target: GroupModel, f: Callable[[Mat], Mat]) -> Mat:
    cols = [target.lie_coords(f(b)) for b in source.lie_basis]
    return Mat.from_columns(cols, target.group_dim)


def tensor_morphism(n: int, m: int) -> Morphism:
    from .linalg import kron

    S = catalog({"type": "product", "factors": [{"type": "GL", "n": n}, {"type": "GL", "n": m}]})
    T = catalog({"type": "GL", "n": n * m})
    In, Im = Mat.identity(n), Mat.identity(m)

    def elt_map(g: GroupElement) -> GroupElement:
        a, b = g.aux
        return GroupElement(kron(a.matrix, b.matrix))

    def lie(X: Mat) -> Mat:
        A = X.submatrix(range(n), range(n))
        B = X.submatrix(range(n, n + m), range(n, n + m))
        return kron(A, Im) + kron(In, B)

    f = Morphism(f"tensor({n},{m})", S, T, elt_map, _lie_map_from(S, T, lie))
    f.verify(_sample_elements(S))
    return f


def det_morphism(n: int) -> Morphism:
    S = catalog({"type": "GL", "n": n})
    T = catalog({"type": "GL", "n": 1})

    def elt_map(g: GroupElement) -> GroupElement:
        return GroupElement(Mat.diag([g.matrix.det()]))

    f = Morphism(f"det({n})", S, T, elt_map, _lie_map_from(S, T, lambda X: Mat.diag([X.trace()])))
    f.verify(_sample_elements(S))
    return f


def incl_block_morphism(sizes: Sequence[int]) -> Morphism:
    """Block-diagonal inclusion ``GL(n1) x ... x GL(nk) -> GL(n1 + ... + nk)``."""
    sizes = list(sizes)
    S = catalog({"type": "product", "factors": [{"type": "GL", "n": n} for n in sizes]})
    T = catalog({"type": "GL", "n": sum(sizes)})
    f = Morphism(f"incl_block({','.join(map(str, sizes))})", S, T,
                 lambda g: GroupElement(g.matrix), _lie_map_from(S, T, lambda X: X))
    f.verify(_sample_elements(S))
    return f


def incl_sl_morphism(n: int) -> Morphism:
    S = catalog({"type": "SL", "n": n})
    T = catalog({"type": "GL", "n": n})
    f = Morphism(f"incl_sl({n})", S, T, lambda g: GroupElement(g.matrix), _lie_map_from(S, T, lambda X: X))
    f.verify(_sample_elements(S))
    return f


def _nilpotent_exp(X: Mat, t) -> Mat:
    """``exp(t X)`` for nilpotent ``X`` (finite sum)."""
    n = X.rows
    t = as_scalar(t)
    out = Mat.identity(n)
    term = Mat.identity(n)
    for k in range(1, n + 1):
        term = (term @ X).scale(t / k)
        if term.is_zero():
            break
        out = out + term
    return out


def sl2_from_triple_morphism(G: GroupModel, N: Sequence, H: Sequence, Y: Sequence) -> Morphism:
    """The homomorphism ``SL(2) -> G`` sending ``(e, h, f)`` to ``(N, H, Y)``.

    Elements of ``SL(2)`` are factored as unipotent-torus-unipotent products,
    and each factor is sent to ``exp(t N)``, ``λ(a)`` or ``exp(t Y)``.
    """
    S = catalog({"type": "SL", "n": 2})
    N, H, Y = _vec(N), _vec(H), _vec(Y)
    if G.bracket(H, N) != tuple(2 * x for x in N) or G.bracket(H, Y) != tuple(-2 * x for x in Y) \
            or G.bracket(N, Y) != H:
        raise GroupError("sl2_from_triple: (N, H, Y) is not an sl2-triple")
    lam = make_cocharacter(G, H)
    Nm, Ym = G.lie_element(N), G.lie_element(Y)

    def up(t) -> Mat:
        return _nilpotent_exp(Nm, t)

    def low(t) -> Mat:
        return _nilpotent_exp(Ym, t)

    def elt_map(g: GroupElement) -> GroupElement:
        al, be, ga, de = g.matrix.entries
        if not de.is_zero():
            # g = [[1, u], [0, 1]] diag(1/de, de) [[1, 0], [l, 1]]
            u, l, a = be / de, ga / de, de.inverse()
            M = up(u) @ lam.value_matrix(a) @ low(l)
        elif not al.is_zero():
            # g = [[1, 0], [l, 1]] diag(al, 1/al) [[1, u], [0, 1]]
            l, u = ga / al, be / al
            M = low(l) @ lam.value_matrix(al) @ up(u)
        else:
            # g = [[0, be], [-1/be, 0]] = u(be) l(-1/be) u(be)
            M = up(be) @ low(-be.inverse()) @ up(be)
        return G.from_identity_matrix(M)

    L = Mat.from_columns([N, H, Y], G.group_dim)
    # SL(2) basis order is (e, h, f)
    f = Morphism("sl2_from_triple", S, G, elt_map, L)
    f.verify(_sample_elements(S))
    return f


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``f ∘ g``."""
    if g.target != f.source:
        raise GroupError("cannot compose: target/source mismatch")
    return Morphism(f"{f.name}∘{g.name}", g.source, f.target,
                    lambda x: f.elt_map(g.elt_map(x)), f.lie_map @ g.lie_map)


def morphism(spec: Any, G: GroupModel | None = None, triple: Any = None) -> Morphism:
    """Build a catalog morphism from a string such as ``"tensor(2,2)"``."""
    if isinstance(spec, dict):
        kind = spec.get("type")
        args = spec.get("args", [])
    else:
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(([^)]*)\))?\s*", str(spec))
        if not m:
            raise GroupError(f"malformed morphism spec {spec!r}")
        kind = m.group(1)
        args = [int(a) for a in m.group(2).split(",")] if m.group(2) else []
    if kind == "tensor" and len(args) == 2:
        return tensor_morphism(*args)
    if kind == "det" and len(args) == 1:
        return det_morphism(args[0])
    if kind == "incl_block" and args:
        return incl_block_morphism(args)
    if kind == "incl_sl" and len(args) == 1:
        return incl_sl_morphism(args[0])
    if kind == "sl2_from_triple":
        if G is None or triple is None:
            raise GroupError("sl2_from_triple needs a target group and a triple")
        return sl2_from_triple_morphism(G, triple.N, triple.H, triple.Y)
    raise GroupError(f"unknown morphism spec {spec!r}")


# ---------------------------------------------------------------------------
# oddness


@dataclass(frozen=True)
class OddnessReport:
    fixed_dim: int
    target: int

    @property
    def odd(self) -> bool:
        return self.fixed_dim == self.target


def oddness_fixed_dim(G: GroupModel, c: GroupElement, borel_dim: int | None = None) -> OddnessReport:
    """Fixed dimension of ``Ad(c)`` on the derived subalgebra versus ``dim G - dim B``."""
    G.check_member(c)
    if G.mul(c, c) != G.identity():
        raise GroupError("oddness test needs an involution (c^2 != 1)")
    A = G.ad_matrix(c)
    idx = list(G.derived_idx)
    rest = [i for i in range(G.group_dim) if i not in set(idx)]
    if any(not A[i, j].is_zero() for i in rest for j in idx):
        raise GroupError("Ad(c) does not preserve the derived subalgebra")
    A0 = A.submatrix(idx, idx)
    fixed = kernel(A0 - Mat.identity(len(idx))).dim
    bdim = G.borel_dim if borel_dim is None else borel_dim
    return OddnessReport(fixed, G.group_dim - bdim)
