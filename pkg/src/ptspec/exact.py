"""Exact scalars of the form ``p + q*sqrt(2) + i*(r + s*sqrt(2))`` with rational p, q, r, s.

Every coefficient produced by normal-ordering powers of ``(a + a^dagger)/sqrt(2)``
lives in this field, so the ladder algebra never touches floating point.  The
module also provides correctly rounded conversion of ``sqrt(F) * (p + q*sqrt(2))``
to a double, which is how exact matrix elements in the Fock basis become floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational

__all__ = ["GaussianSurd", "SQRT2", "I", "ONE", "ZERO", "as_surd", "round_sqrt_times"]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"exact arithmetic requires rational input, got {type(value).__name__}")


class GaussianSurd:
    """Element of Q(sqrt(2), i), stored as four Fractions.

    >>> x = (ONE + SQRT2) * (ONE - SQRT2)
    >>> x == -1
    True
    >>> str(I * SQRT2 / 4)
    'i√2/4'
    """

    __slots__ = ("p", "q", "r", "s")

    def __init__(self, p=0, q=0, r=0, s=0):
        self.p = _frac(p)
        self.q = _frac(q)
        self.r = _frac(r)
        self.s = _frac(s)

    # -- structure -------------------------------------------------------
    @property
    def real(self) -> "GaussianSurd":
        return GaussianSurd(self.p, self.q)

    @property
    def imag(self) -> "GaussianSurd":
        return GaussianSurd(self.r, self.s)

    def is_zero(self) -> bool:
        return not (self.p or self.q or self.r or self.s)

    def is_real(self) -> bool:
        return not (self.r or self.s)

    def is_rational(self) -> bool:
        return not (self.q or self.r or self.s)

    def conjugate(self) -> "GaussianSurd":
        return GaussianSurd(self.p, self.q, -self.r, -self.s)

    def abs2(self) -> "GaussianSurd":
        """Squared modulus ``z * conj(z)``; always real."""
        return (self * self.conjugate()).real

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.p

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return GaussianSurd(self.p + other.p, self.q + other.q, self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __neg__(self):
        return GaussianSurd(-self.p, -self.q, -self.r, -self.s)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        # (u + iv)(u' + iv') with u, v in Q(sqrt 2)
        a1, b1 = _mul2(self.p, self.q, other.p, other.q)
        a2, b2 = _mul2(self.r, self.s, other.r, other.s)
        a3, b3 = _mul2(self.p, self.q, other.r, other.s)
        a4, b4 = _mul2(self.r, self.s, other.p, other.q)
        return GaussianSurd(a1 - a2, b1 - b2, a3 + a4, b3 + b4)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianSurd":
        if self.is_zero():
            raise ZeroDivisionError("division by exact zero")
        # 1/(u + iv) = (u - iv) / (u^2 + v^2), then rationalize the Q(sqrt 2) denominator
        m = self.abs2()
        norm = m.p * m.p - 2 * m.q * m.q
        inv_m = GaussianSurd(m.p / norm, -m.q / norm)
        return self.conjugate() * inv_m

    def __truediv__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def _key(self):
        return (self.p, self.q, self.r, self.s)

    def __eq__(self, other):
        other = as_surd(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self.is_rational():
            return hash(self.p)
        return hash(self._key())

    def __bool__(self):
        return not self.is_zero()

    # -- conversion ------------------------------------------------------
    def __complex__(self):
        return complex(round_sqrt_times(1, self.p, self.q), round_sqrt_times(1, self.r, self.s))

    def __float__(self):
        if not self.is_real():
            raise TypeError(f"{self} has a nonzero imaginary part")
        return round_sqrt_times(1, self.p, self.q)

    def __repr__(self):
        return f"GaussianSurd({self.p}, {self.q}, {self.r}, {self.s})"

    def __str__(self):
        parts = []
        for coeff, unit in ((self.p, ""), (self.q, "√2"), (self.r, "i"), (self.s, "i√2")):
            if coeff:
                parts.append(_render_term(coeff, unit))
        if not parts:
            return "0"
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text


def _mul2(a, b, c, d):
    """(a + b√2)(c + d√2) -> rational and √2 parts."""
    return a * c + 2 * b * d, a * d + b * c


def _render_term(coeff: Fraction, unit: str) -> str:
    sign = "-" if coeff < 0 else ""
    num, den = abs(coeff.numerator), coeff.denominator
    if not unit:
        body = str(num) if den == 1 else f"{num}/{den}"
    else:
        body = unit if num == 1 else f"{num}{unit}"
        if den != 1:
            body = f"{body}/{den}"
    return sign + body


def as_surd(value, strict: bool = True):
    """Coerce ints, Fractions and Gaussian-integer complex numbers to GaussianSurd."""
    if isinstance(value, GaussianSurd):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return GaussianSurd(value)
    if isinstance(value, complex) and value.real.is_integer() and value.imag.is_integer():
        return GaussianSurd(int(value.real), 0, int(value.imag))
    if strict:
        raise TypeError(f"cannot represent {value!r} exactly")
    return NotImplemented


ZERO = GaussianSurd()
ONE = GaussianSurd(1)
SQRT2 = GaussianSurd(0, 1)
I = GaussianSurd(0, 0, 1)


def _sqrt_floor_scaled(n: int, bits: int) -> int:
    """floor(sqrt(n) * 2**bits)."""
    return isqrt(n << (2 * bits))


def round_sqrt_times(radicand, p, q=0) -> float:
    """Correctly rounded double nearest to ``sqrt(radicand) * (p + q*sqrt(2))``.

    ``radicand`` must be a nonnegative rational.  The value is bracketed with
    integer square roots at increasing precision until both ends of the
    bracket round to the same double.
    """
    f = _frac(radicand)
    p, q = _frac(p), _frac(q)
    if f < 0:
        raise ValueError("radicand must be nonnegative")
    if f == 0 or (p == 0 and q == 0):
        return 0.0
    # sqrt(f) = sqrt(a*b)/b and sqrt(2f) = sqrt(2*a*b)/b
    ab = f.numerator * f.denominator
    b = f.denominator
    exact_1 = isqrt(ab) ** 2 == ab
    exact_2 = isqrt(2 * ab) ** 2 == 2 * ab
    bits = 64
    while True:
        lo = hi = Fraction(0)
        for coeff, n, exact in ((p, ab, exact_1), (q, 2 * ab, exact_2)):
            if not coeff:
                continue
            s = _sqrt_floor_scaled(n, bits)
            scale = Fraction(1, b << bits)
            t_lo = coeff * s * scale
            t_hi = t_lo if exact else coeff * (s + 1) * scale
            if t_lo > t_hi:
                t_lo, t_hi = t_hi, t_lo
            lo += t_lo
            hi += t_hi
        f_lo, f_hi = float(lo), float(hi)
        if f_lo == f_hi:
            return f_lo
        bits *= 2
