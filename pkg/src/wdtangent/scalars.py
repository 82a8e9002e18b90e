"""Exact scalars in Q and in a real quadratic field Q(sqrt d), plus polynomials.

A :class:`Scalar` stores ``a + b*sqrt(d)`` with ``a``, ``b`` arbitrary precision
rationals (``gmpy2.mpq``).  Plain rationals always carry the tag ``d = 1``.  Two
scalars with different non-trivial tags cannot be combined; this keeps every
computation inside a single quadratic field, which is all the Frobenius
construction needs (it only ever adjoins ``p^(f/2)``).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpq

__all__ = [
    "FieldMismatchError",
    "Scalar",
    "Poly",
    "ZERO",
    "ONE",
    "as_scalar",
    "sqrt_power",
    "euler_phi",
    "cyclotomic_bound",
    "cyclotomic_poly",
    "gcd_with_unity",
    "is_squarefree",
]

Number = Union[int, Fraction, "mpq", "Scalar"]


class FieldMismatchError(ValueError):
    """Raised when scalars from two different quadratic fields meet."""


@lru_cache(maxsize=None)
def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _rat(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Scalar:
    """The number ``a + b*sqrt(d)``.

    >>> s = Scalar(0, 1, 2)
    >>> s * s
    Scalar('2')
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Number = 0, b: Number = 0, d: int = 1) -> None:
        if isinstance(a, Scalar):
            if b != 0:
                raise TypeError("cannot combine a Scalar with an extra b part")
            a, b, d = a.a, a.b, a.d
        a, b, d = _rat(a), _rat(b), int(d)
        if not is_squarefree(d):
            raise ValueError(f"d-tag must be a squarefree positive integer, got {d}")
        if d == 1:
            a, b = a + b, mpq(0)
        if b == 0:
            d = 1
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def _raw(cls, a: mpq, b: mpq, d: int) -> "Scalar":
        obj = object.__new__(cls)
        if b == 0:
            d = 1
        obj.a = a
        obj.b = b
        obj.d = d
        return obj

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -----------------------------------------------------
    def _tag(self, other: "Scalar") -> int:
        if self.d == other.d or other.d == 1:
            return self.d
        if self.d == 1:
            return other.d
        raise FieldMismatchError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar._raw(self.a + o.a, self.b + o.b, self._tag(o))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.a, -self.b, self.d)

    def __sub__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar._raw(self.a - o.a, self.b - o.b, self._tag(o))

    def __rsub__(self, other: Number) -> "Scalar":
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        if o is NotImplemented:
            return NotImplemented
        if self.b == 0:
            return Scalar._raw(self.a * o.a, self.a * o.b, o.d)
        if o.b == 0:
            return Scalar._raw(self.a * o.a, self.b * o.a, self.d)
        d = self._tag(o)
        return Scalar._raw(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.b == 0:
            return Scalar._raw(1 / self.a, mpq(0), 1)
        norm = self.a * self.a - self.d * self.b * self.b
        return Scalar._raw(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other: Number) -> "Scalar":
        o = as_scalar(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        return self.a * self.a - self.d * self.b * self.b

    # -- comparison, hashing --------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and (self.b == 0 or self.d == other.d)
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self.b == 0 and self.a == _rat(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(int(self.a.numerator), int(self.a.denominator)))
        return hash((self.a, self.b, self.d))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def magnitude_bound(self) -> float:
        """A float upper bound for ``|self|`` (used for eigenvalue search ranges)."""
        return abs(float(self.a)) + abs(float(self.b)) * math.sqrt(self.d) + 1e-9

    def __repr__(self) -> str:
        return f"Scalar('{self.to_str()}')" if self.b == 0 else f"Scalar('{self.to_str()}', d={self.d})"

    # -- serialization --------------------------------------------------
    def to_str(self) -> str:
        """Serialize as ``"a"``, ``"a/b"`` or ``"a/b+c/e*r"`` where ``r = sqrt(d)``."""
        head = _fmt(self.a)
        if self.b == 0:
            return head
        sign = "-" if self.b < 0 else "+"
        return f"{head}{sign}{_fmt(abs(self.b))}*r"

    @classmethod
    def parse(cls, text: str, d: int = 1) -> "Scalar":
        text = str(text).strip().replace(" ", "")
        if not text:
            raise ValueError("empty scalar string")
        if text.endswith("*r"):
            body = text[:-2]
            cut = max(body.rfind("+", 1), body.rfind("-", 1))
            if cut <= 0:
                a_part, b_part = "0", body
            else:
                a_part, b_part = body[:cut], body[cut:]
            if d == 1:
                raise ValueError(f"scalar {text!r} uses r but the field header has d = 1")
            return cls(_parse_rat(a_part), _parse_rat(b_part), d)
        if "r" in text:
            raise ValueError(f"malformed scalar string {text!r}")
        return cls(_parse_rat(text))


def _fmt(x: mpq) -> str:
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _parse_rat(text: str) -> mpq:
    try:
        return _rat(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


ZERO = Scalar._raw(mpq(0), mpq(0), 1)
ONE = Scalar._raw(mpq(1), mpq(0), 1)

_MPQ_TYPE = type(mpq(0))
_MPZ_TYPE = type(gmpy2.mpz(0))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, _MPQ_TYPE, _MPZ_TYPE)):
        return Scalar._raw(_rat(x), mpq(0), 1)
    return NotImplemented


# ---------------------------------------------------------------------------
# number theory helpers


def sqrt_power(p: int, f: int) -> Scalar:
    """Return ``s`` with ``s*s == p**f``, adjoining ``sqrt(p)`` when ``f`` is odd."""
    if not isinstance(p, int) or p < 2 or not gmpy2.is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if not isinstance(f, int) or f < 1:
        raise ValueError(f"f must be a positive integer, got {f!r}")
    if f % 2 == 0:
        return Scalar(p ** (f // 2))
    return Scalar(0, p ** ((f - 1) // 2), p)


def euler_phi(n: int) -> int:
    result, m, k = n, n, 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic_bound(g_dim: int) -> int:
    """``lcm{n : phi(n) <= g_dim}``; phi(n) >= sqrt(n/2) bounds the search."""
    if g_dim < 1:
        raise ValueError("g_dim must be positive")
    result = 1
    for n in range(1, 2 * g_dim * g_dim + 1):
        if euler_phi(n) <= g_dim:
            result = result * n // math.gcd(result, n)
    return result


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Dense polynomial, coefficients low to high degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number]) -> None:
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[Scalar, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Number) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Scalar:
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(c.to_str() for c in self.coeffs)}])"

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly | Number") -> "Poly":
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = other.lead().inverse()
        dq = other.degree
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            factor = rem[-1] * inv_lead
            q[shift] = factor
            for j, c in enumerate(other.coeffs):
                rem[shift + j] = rem[shift + j] - factor * c
            rem.pop()
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.lead().inverse()
        return Poly([c * inv for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: Number) -> Scalar:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:])


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> Poly:
    """The m-th cyclotomic polynomial, by exact division of X^m - 1."""
    if m < 1:
        raise ValueError("m must be positive")
    num = Poly([-1] + [0] * (m - 1) + [1])
    for k in range(1, m):
        if m % k == 0:
            num = num // cyclotomic_poly(k)
    return num


def _may_share_root(P: Poly, m: int) -> bool:
    """Float screen: ``False`` certifies that no primitive m-th root of unity is a root of ``P``.

    Coefficients are embedded with ``sqrt(d) > 0``.  With ``|zeta| = 1`` the
    rounding error of the evaluation is far below ``1e-11 * scale`` for the
    degrees used here, so a value above that threshold is a proof of
    non-vanishing; anything smaller (or an overflow) defers to exact gcds.
    """
    try:
        cs = [complex(float(c)) for c in P.coeffs]
        scale = sum(c.magnitude_bound() for c in P.coeffs)
    except OverflowError:
        return True
    if not math.isfinite(scale) or scale > 1e250:
        return True
    thresh = 1e-11 * scale
    for j in range(1, m + 1):
        if math.gcd(j, m) != 1:
            continue
        z = cmath.exp(2j * math.pi * j / m)
        acc = 0j
        for c in reversed(cs):
            acc = acc * z + c
        if abs(acc) <= thresh:
            return True
    return False


def unity_factor(P: Poly, m: int) -> Poly:
    """``gcd(P, Phi_m)``, skipping the exact computation when the float screen rules it out."""
    if not _may_share_root(P, m):
        return Poly([1])
    return P.gcd(cyclotomic_poly(m))


def gcd_with_unity(P: Poly, n0: int) -> Poly:
    """``gcd(P, X^n0 - 1)`` over the scalar field of ``P``.

    ``X^n0 - 1`` is the product of the pairwise coprime cyclotomic factors
    ``Phi_m`` for ``m | n0``, so the gcd is the product of ``gcd(P, Phi_m)``.
    Over a field of degree at most two over Q an irreducible factor of
    ``Phi_m`` has degree at least ``phi(m)/2``; factors with
    ``phi(m) > 2*deg P`` therefore cannot contribute.  This keeps the cost
    independent of the (possibly enormous) exponent ``n0``.
    """
    if P.is_zero():
        raise ValueError("gcd_with_unity of the zero polynomial")
    if n0 < 1:
        raise ValueError("n0 must be positive")
    deg = P.degree
    result = Poly([1])
    if deg == 0:
        return result
    limit = min(n0, 2 * (2 * deg) ** 2)
    work = P
    for m in range(1, limit + 1):
        if n0 % m or euler_phi(m) > 2 * deg:
            continue
        g = unity_factor(work, m)
        if g.degree > 0:
            result = result * g
            # deflate so that known roots do not weaken the float screen later
            while True:
                quo, rem = work.divmod(g)
                if not rem.is_zero():
                    break
                work = quo
            if work.degree == 0:
                break
    return result.monic()


def gcd_with_unity_direct(P: Poly, n0: int) -> Poly:
    """Plain Euclid against ``X^n0 - 1``; only sensible for small ``n0``."""
    if P.is_zero():
        raise ValueError("gcd_with_unity of the zero polynomial")
    return P.gcd(Poly([-1] + [0] * (n0 - 1) + [1]))


def scalars_of(values: Sequence[Number]) -> list[Scalar]:
    return [as_scalar(v) for v in values]
