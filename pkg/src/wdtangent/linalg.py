"""Dense exact matrices and subspaces over :class:`~wdtangent.scalars.Scalar`.

Vectors are tuples of Scalars.  Matrices act on column vectors; a
:class:`Subspace` is stored through the rows of its reduced echelon basis.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Poly, Scalar, as_scalar

__all__ = [
    "Mat",
    "Subspace",
    "rref",
    "kernel",
    "image",
    "sum_spaces",
    "intersect",
    "quotient_dim",
    "kron",
    "char_poly",
    "poly_at",
    "rank",
    "block_diag",
    "hstack",
    "vstack",
]

Vector = tuple[Scalar, ...]


class Mat:
    """Row-major dense matrix with Scalar entries.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable) -> None:
        ents = [as_scalar(e) for e in entries]
        if len(ents) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ents)}")
        self.rows = rows
        self.cols = cols
        self.entries: tuple[Scalar, ...] = tuple(ents)
        self._hash: int | None = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, [])
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Mat":
        if not cols:
            return cls(nrows or 0, 0, [])
        return cls.from_rows(cols).T

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "Mat":
        return cls(r, c, [ZERO] * (r * c))

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        vals = [as_scalar(v) for v in values]
        return cls(n, n, [vals[i] if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int, m: int | None = None) -> "Mat":
        """Elementary matrix e_ij (0-based) of shape n x m."""
        m = n if m is None else m
        ents = [ZERO] * (n * m)
        ents[i * m + j] = ONE
        return cls(n, m, ents)

    # -- access ---------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def is_identity(self) -> bool:
        return self.is_square() and self == Mat.identity(self.rows)

    # -- algebra --------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(e.to_str() for e in self.row(i)) for i in range(self.rows))
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Mat":
        c = as_scalar(c)
        return Mat(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        n, m, k = self.rows, other.cols, self.cols
        A, B = self.entries, other.entries
        out = []
        for i in range(n):
            arow = A[i * k:(i + 1) * k]
            nz = [(t, a) for t, a in enumerate(arow) if not a.is_zero()]
            for j in range(m):
                acc = ZERO
                for t, a in nz:
                    b = B[t * m + j]
                    if not b.is_zero():
                        acc = acc + a * b
                out.append(acc)
        return Mat(n, m, out)

    def apply(self, v: Sequence[Scalar]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = ZERO
            for a, x in zip(self.row(i), v):
                if not a.is_zero() and not x.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, [self.entries[i * self.cols + j]
                                          for j in range(self.cols) for i in range(self.rows)])

    def trace(self) -> Scalar:
        self._require_square()
        acc = ZERO
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def det(self) -> Scalar:
        self._require_square()
        rows = self.row_list()
        n = self.rows
        result = ONE
        for c in range(n):
            piv = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
            if piv is None:
                return ZERO
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                result = -result
            pv = rows[c][c]
            result = result * pv
            inv = pv.inverse()
            for r in range(c + 1, n):
                f = rows[r][c]
                if f.is_zero():
                    continue
                f = f * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return result

    def inverse(self) -> "Mat":
        self._require_square()
        n = self.rows
        aug = [list(self.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return Mat(n, n, [x for r in red for x in r[n:]])

    def __pow__(self, k: int) -> "Mat":
        self._require_square()
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Mat.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def flat(self) -> Vector:
        return self.entries

    def _same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def _require_square(self) -> None:
        if not self.is_square():
            raise ValueError(f"square matrix required, got {self.shape}")


def block_diag(*blocks: Mat) -> Mat:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    ents = [ZERO] * (n * m)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                ents[(r0 + i) * m + c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return Mat(n, m, ents)


def hstack(*mats: Mat) -> Mat:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack row mismatch")
    return Mat.from_rows([[x for m in mats for x in m.row(i)] for i in range(rows)]) if rows else \
        Mat(0, sum(m.cols for m in mats), [])


def vstack(*mats: Mat) -> Mat:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack column mismatch")
    return Mat(sum(m.rows for m in mats), cols, [x for m in mats for x in m.entries])


def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product; entry ((i,k),(j,l)) is A[i,j]*B[k,l]."""
    n, m = A.rows * B.rows, A.cols * B.cols
    ents = []
    for i in range(A.rows):
        for k in range(B.rows):
            for j in range(A.cols):
                a = A[i, j]
                for l in range(B.cols):
                    ents.append(a * B[k, l])
    return Mat(n, m, ents)


# ---------------------------------------------------------------------------
# echelon machinery


def rref(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form with unit pivots; returns (nonzero rows, pivots)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        prow = [x * inv for x in rows[r]]
        rows[r] = prow
        nzc = [(j, x) for j, x in enumerate(prow) if not x.is_zero()]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f.is_zero():
                continue
            row_i = rows[i]
            for j, x in nzc:
                row_i[j] = row_i[j] - f * x
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class Subspace:
    """A subspace of ``k^n`` with a reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()) -> None:
        vecs = [[as_scalar(x) for x in v] for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise ValueError("vector length does not match ambient dimension")
        red, piv = rref(vecs)
        self.ambient_dim = ambient_dim
        self.basis: tuple[Vector, ...] = tuple(tuple(r) for r in red)
        self.pivots: tuple[int, ...] = tuple(piv)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n).row_list())

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.ambient_dim})"

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = w[p]
            if f.is_zero():
                continue
            w = [x - f * y for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence[Scalar]) -> bool:
        return all(x.is_zero() for x in self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence[Scalar], check: bool = True) -> Vector:
        """Coordinates of ``v`` in the echelon basis (values at the pivots)."""
        coords = tuple(v[p] for p in self.pivots)
        if check and not self.contains(v):
            raise ValueError("vector not in subspace")
        return coords

    def complement_indices(self) -> list[int]:
        pivs = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in pivs]

    def matrix(self) -> Mat:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return Mat.from_columns(self.basis, self.ambient_dim) if self.basis else Mat(self.ambient_dim, 0, [])

    def annihilator(self) -> "Subspace":
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return kernel(Mat.from_rows(self.basis))


def kernel(M: Mat) -> Subspace:
    red, piv = rref(M.row_list())
    n = M.cols
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        vecs.append(v)
    return Subspace(n, vecs)


def image(M: Mat) -> Subspace:
    return Subspace(M.rows, M.T.row_list())


def rank(M: Mat) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref(M.row_list())[1])


def sum_spaces(U: Subspace, V: Subspace) -> Subspace:
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace(U.ambient_dim, list(U.basis) + list(V.basis))


def intersect(U: Subspace, V: Subspace) -> Subspace:
    """``U ∩ V`` as the annihilator of ``ann(U) + ann(V)``."""
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    n = U.ambient_dim
    ann = list(U.annihilator().basis) + list(V.annihilator().basis)
    if not ann:
        return Subspace.full(n)
    return kernel(Mat.from_rows(ann))


def quotient_dim(U: Subspace, V: Subspace) -> int:
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not U.contains_space(V):
        raise ValueError("quotient_dim requires V ⊆ U")
    return U.dim - V.dim


# ---------------------------------------------------------------------------
# characteristic polynomials


def char_poly(M: Mat) -> Poly:
    """``det(X - M)`` via the Faddeev–LeVerrier recursion (exact, char 0)."""
    if not M.is_square():
        raise ValueError("char_poly needs a square matrix")
    n = M.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    Mk = Mat.zeros(n, n)
    I = Mat.identity(n)
    for k in range(1, n + 1):
        Mk = M @ (Mk + I.scale(coeffs[n - k + 1]))
        coeffs[n - k] = -Mk.trace() / k
    return Poly(coeffs)


def poly_at(P: Poly, M: Mat) -> Mat:
    """Evaluate ``P`` at a square matrix by Horner's rule."""
    n = M.rows
    acc = Mat.zeros(n, n)
    I = Mat.identity(n)
    for c in reversed(P.coeffs):
        acc = acc @ M + I.scale(c)
    return acc
