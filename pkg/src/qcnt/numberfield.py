"""Exact arithmetic in real quadratic fields Q(sqrt d).

Elements are stored on the integral basis {1, w} of the ring of integers,
where w = sqrt(d) when d is 2 or 3 mod 4 and w = (1 + sqrt(d))/2 when
d is 1 mod 4.  Coefficients are ``fractions.Fraction`` so every operation is
exact; floating point only appears in :meth:`FieldElement.embed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterator, Union

from .errors import InvalidInputError

Scalar = Union[int, Fraction]


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _omega_data(d: int) -> tuple[int, int]:
    """Return (t, n) with w**2 = t*w + n."""
    if d % 4 == 1:
        return 1, (d - 1) // 4
    return 0, d


def sign_of_surd(p: Fraction, q: Fraction, d: int) -> int:
    """Exact sign of p + q*sqrt(d) for rationals p, q and non-square d."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with d*q^2
    diff = p * p - d * q * q
    return sp if diff > 0 else sq


class FieldElement:
    """The number a + b*w of Q(sqrt d)."""

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a: Scalar = 0, b: Scalar = 0):
        self.d = d
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- coercion helpers -------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise InvalidInputError(
                    f"cannot mix elements of Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement(self.d, other, 0)
        return NotImplemented

    @property
    def _tn(self) -> tuple[int, int]:
        return _omega_data(self.d)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.d, -self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.d, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self._tn
        bb = self.b * o.b
        return FieldElement(self.d, self.a * o.a + n * bb,
                            self.a * o.b + self.b * o.a + t * bb)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        c = self.conj()
        return FieldElement(self.d, c.a / nm, c.b / nm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = FieldElement(self.d, 1, 0)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- Galois structure -------------------------------------------------
    def conj(self) -> "FieldElement":
        t, _ = self._tn
        return FieldElement(self.d, self.a + t * self.b, -self.b)

    def norm(self) -> Fraction:
        t, n = self._tn
        return self.a * self.a + t * self.a * self.b - n * self.b * self.b

    def trace(self) -> Fraction:
        t, _ = self._tn
        return 2 * self.a + t * self.b

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- ordering via the identity embedding ------------------------------
    def surd(self) -> tuple[Fraction, Fraction]:
        """Return (p, q) with self = p + q*sqrt(d)."""
        t, _ = self._tn
        if t:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def sign(self) -> int:
        p, q = self.surd()
        return sign_of_surd(p, q, self.d)

    def conj_sign(self) -> int:
        p, q = self.surd()
        return sign_of_surd(p, -q, self.d)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    # -- embeddings -------------------------------------------------------
    def embed(self) -> tuple[float, float]:
        """(sigma_1, sigma_2) as doubles; signs are always exact."""
        p, q = self.surd()
        return _surd_to_float(p, q, self.d), _surd_to_float(p, -q, self.d)

    def __float__(self) -> float:
        return self.embed()[0]

    def conj_float(self) -> float:
        return self.embed()[1]

    def __repr__(self) -> str:
        return f"FieldElement(d={self.d}, a={self.a}, b={self.b})"

    def __str__(self) -> str:
        sym = "sqrt(%d)" % self.d if self.d % 4 != 1 else "w"
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*{sym}"
        sgn = "+" if self.b > 0 else "-"
        return f"{self.a} {sgn} {abs(self.b)}*{sym}"


def _surd_to_float(p: Fraction, q: Fraction, d: int) -> float:
    """p + q*sqrt(d) to double precision without catastrophic cancellation."""
    if q == 0:
        return float(p)
    r = math.sqrt(d)
    if p == 0 or (p > 0) == (q > 0):
        return float(p) + float(q) * r
    # p and q*sqrt(d) nearly cancel: use (p^2 - d q^2) / (p - q sqrt(d))
    num = p * p - d * q * q
    den = float(p) - float(q) * r
    return float(num) / den


@dataclass(frozen=True)
class QuadraticField:
    d: int
    omega_kind: str
    disc: int
    fu: FieldElement
    fu_norm: int
    zt_equals_ok: bool

    def element(self, a: Scalar = 0, b: Scalar = 0) -> FieldElement:
        return FieldElement(self.d, a, b)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self.d, 1, 0)

    @property
    def omega(self) -> FieldElement:
        return FieldElement(self.d, 0, 1)

    @property
    def sqrt_d(self) -> FieldElement:
        return FieldElement(self.d, -1, 2) if self.omega_kind == "half" else self.omega

    def from_surd(self, p: Scalar, q: Scalar) -> FieldElement:
        """The element p + q*sqrt(d)."""
        p, q = Fraction(p), Fraction(q)
        if self.omega_kind == "half":
            return FieldElement(self.d, p - q, 2 * q)
        return FieldElement(self.d, p, q)

    def to_theta_basis(self, e: FieldElement) -> tuple[Fraction, Fraction]:
        """Coordinates (c0, c1) with e = c0 + c1*fu; needs Z[fu] = O_K."""
        if not self.zt_equals_ok:
            raise InvalidInputError(f"Z[theta] != O_K for d={self.d}")
        x = self.fu.a
        # w = fu - x since fu = x + w
        return e.a - e.b * x, e.b

    @property
    def log_fu(self) -> float:
        return math.log(float(self.fu))


def pell_units(d: int) -> Iterator[FieldElement]:
    """Units x + y*w > 1 in order of the coefficient y, read off the
    continued fraction of -w' (the convergents x/y satisfy x ~ -y*w')."""
    t, _ = _omega_data(d)
    # -w' = w - t = (P0 + sqrt d)/Q0
    if t:
        P, Q = -1, 2
    else:
        P, Q = 0, 1
    r = math.isqrt(d)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while True:
        a = (P + r) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        e = FieldElement(d, h, k)
        if abs(e.norm()) == 1 and e.sign() > 0:
            yield e
        P = a * Q - P
        Q = (d - P * P) // Q


@lru_cache(maxsize=None)
def make_field(d: int) -> QuadraticField:
    if not isinstance(d, int) or isinstance(d, bool):
        raise InvalidInputError(f"d must be an integer, got {d!r}")
    if d < 2 or not is_squarefree(d):
        raise InvalidInputError(f"d must be a squarefree integer >= 2, got {d}")
    fu = next(pell_units(d))
    if fu < 1:
        fu = fu.inverse()
    half = d % 4 == 1
    return QuadraticField(
        d=d,
        omega_kind="half" if half else "sqrt",
        disc=d if half else 4 * d,
        fu=fu,
        fu_norm=int(fu.norm()),
        zt_equals_ok=(abs(fu.b) == 1),
    )
