"""Scalar fields used throughout the package.

Three scalar modes are supported:

* ``f64``       -- Python floats (complex values use the builtin ``complex``)
* ``rational``  -- :class:`fractions.Fraction`
* ``quadext``   -- :class:`QuadExt`, exact elements ``p + q*sqrt(d)`` with rational p, q

:class:`ComplexOf` adds an imaginary part on top of any of the exact fields.
Every algorithm in the package is written against ordinary arithmetic
operators, so a :class:`Field` object only has to supply constants,
coercion, sign tests and the text form.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "ComplexOf",
    "ExactDivisionError",
    "F64",
    "Field",
    "QuadExt",
    "QuadField",
    "RATIONAL",
    "approx_equal",
    "field_for_mode",
    "is_squarefree",
    "to_complex",
    "to_float",
]


class ExactDivisionError(ZeroDivisionError):
    """Division by an exact zero."""


def is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class QuadExt:
    """Element ``rational + radical*sqrt(d)`` of the field Q(sqrt(d)).

    Since sqrt(d) is irrational for square-free d > 1, the pair of rational
    parts identifies the element uniquely, so equality and hashing work on
    the pair directly.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p=0, q=0, d: int = 2):
        self.p = _as_fraction(p)
        self.q = _as_fraction(q)
        self.d = d

    # -- helpers ------------------------------------------------------
    def _lift(self, other) -> QuadExt | None:
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(
                    f"mixing radicands {self.d} and {other.d} is not supported"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return None

    def conjugate(self) -> QuadExt:
        """Complex conjugate; elements are real, so this is the identity."""
        return self

    def conjugate_radical(self) -> QuadExt:
        """Galois conjugate ``p - q*sqrt(d)``."""
        return QuadExt(self.p, -self.q, self.d)

    def norm(self) -> Fraction:
        return self.p * self.p - self.d * self.q * self.q

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def sign(self) -> int:
        """Exact sign of ``p + q*sqrt(d)``."""
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare p^2 with d*q^2
        lhs = self.p * self.p
        rhs = self.d * self.q * self.q
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.p + o.p, self.q + o.q, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.p - o.p, self.q - o.q, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.p * other, self.q * other, self.d)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadExt(
            self.p * o.p + self.d * self.q * o.q,
            self.p * o.q + self.q * o.p,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ExactDivisionError("division by zero in Q(sqrt(%d))" % self.d)
            return QuadExt(self.p / other, self.q / other, self.d)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ExactDivisionError("division by zero in Q(sqrt(%d))" % self.d)
        return QuadExt(self.p / n, -self.q / n, self.d)

    def __neg__(self):
        return QuadExt(-self.p, -self.q, self.d)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.p == other.p and self.q == other.q
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def __repr__(self):
        return f"QuadExt({self.p!s}, {self.q!s}, d={self.d})"

    def __str__(self):
        return format_quadext(self)


class ComplexOf:
    """Complex number ``re + im*i`` over an arbitrary real scalar type."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re
        self.im = im

    @staticmethod
    def _lift(other):
        if isinstance(other, ComplexOf):
            return other
        if isinstance(other, (int, Fraction, QuadExt, float)):
            return ComplexOf(other, 0)
        return None

    def conjugate(self) -> ComplexOf:
        return ComplexOf(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ComplexOf(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ComplexOf(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ComplexOf(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        den = o.abs2()
        if den == 0:
            raise ExactDivisionError("division by complex zero")
        num = self * o.conjugate()
        return ComplexOf(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexOf(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ComplexOf(1, 0) / self) ** (-k)
        result = ComplexOf(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexOf({self.re!r}, {self.im!r})"


def to_float(x) -> float:
    return float(x)


def to_complex(x) -> complex:
    return complex(x)


def approx_equal(a, b, atol: float = 1e-12, rtol: float = 0.0) -> bool:
    """``|a - b| <= atol + rtol*max(|a|, |b|)`` after conversion to complex."""
    za, zb = complex(a), complex(b)
    return abs(za - zb) <= atol + rtol * max(abs(za), abs(zb))


# ---------------------------------------------------------------------------
# Field descriptors
# ---------------------------------------------------------------------------

_RAT_RE = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?:(?P<p>{_RAT_RE})(?!\s*[*/\d])\s*)?"
    rf"(?:(?P<sign>[+-])?\s*(?:(?P<q>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


class Field:
    """Scalar mode descriptor: constants, coercion, sign tests and text form."""

    name = "abstract"
    exact = True

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def is_positive(self, x) -> bool:
        return x > 0

    def is_zero(self, x) -> bool:
        return x == 0

    def sqrt(self, x):
        """Square root of a nonnegative element, when it lies in the field."""
        raise ValueError(f"no exact square root of {x!r} in {self.name}")

    def __repr__(self):
        return f"<Field {self.name}>"


class _Float64(Field):
    name = "f64"
    exact = False

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        return float(x)

    def parse(self, text):
        if isinstance(text, (int, float)):
            return float(text)
        text = text.strip()
        try:
            return float(text)
        except ValueError:
            pass
        try:
            return float(Fraction(text))
        except ValueError:
            pass
        m = _QUAD_RE.match(text)
        if m and m.group("d"):
            return float(_quad_from_match(m, None))
        raise ValueError(f"cannot parse {text!r} as f64")

    def format(self, x) -> str:
        return repr(float(x))

    def sqrt(self, x):
        return math.sqrt(x)


class _RationalField(Field):
    name = "rational"

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, QuadExt):
            if x.q != 0:
                raise ValueError(f"{x} is not rational")
            return x.p
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into exact rational mode")
        return Fraction(x)

    def parse(self, text):
        if isinstance(text, int):
            return Fraction(text)
        try:
            return Fraction(text.strip())
        except ValueError as exc:
            raise ValueError(f"cannot parse {text!r} as rational") from exc

    def format(self, x) -> str:
        return str(Fraction(x))

    def sqrt(self, x):
        x = Fraction(x)
        if x < 0:
            raise ValueError("negative argument")
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
        raise ValueError(f"{x} is not a rational square")


def _quad_from_match(m, d_expected):
    p = Fraction(m.group("p")) if m.group("p") else Fraction(0)
    q = Fraction(0)
    d = d_expected if d_expected is not None else 2
    if m.group("d"):
        d = int(m.group("d"))
        if d_expected is not None and d != d_expected:
            raise ValueError(f"radicand {d} does not match field radicand {d_expected}")
        q = Fraction(m.group("q")) if m.group("q") else Fraction(1)
        if m.group("sign") == "-":
            q = -q
        elif m.group("sign") is None and m.group("p"):
            raise ValueError("missing sign between rational and radical parts")
    return QuadExt(p, q, d)


class QuadField(Field):
    """The field Q(sqrt(d)) for a fixed square-free radicand d."""

    exact = True

    def __init__(self, d: int = 2):
        if not is_squarefree(d):
            raise ValueError(f"radicand must be a square-free integer > 1, got {d}")
        self.d = d
        self.name = "quadext"

    @property
    def root(self) -> QuadExt:
        """The generator sqrt(d)."""
        return QuadExt(0, 1, self.d)

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, QuadExt):
            if x.d != self.d:
                raise ValueError(f"element of Q(sqrt({x.d})) used in Q(sqrt({self.d}))")
            return x
        if isinstance(x, float):
            raise TypeError("refusing to coerce a float into exact quadext mode")
        return QuadExt(x, 0, self.d)

    def embed(self, q) -> QuadExt:
        """Embed a rational number (radical part zero)."""
        return QuadExt(_as_fraction(q), 0, self.d)

    def parse(self, text):
        if isinstance(text, int):
            return self.embed(text)
        m = _QUAD_RE.match(text)
        if not m or not (m.group("p") or m.group("d")):
            raise ValueError(f"cannot parse {text!r} as an element of Q(sqrt({self.d}))")
        return _quad_from_match(m, self.d)

    def format(self, x) -> str:
        return format_quadext(self.coerce(x))

    def is_positive(self, x) -> bool:
        return self.coerce(x).sign() > 0

    def sqrt(self, x):
        x = self.coerce(x)
        if x.q == 0 and x.p >= 0:
            try:
                return self.embed(RATIONAL.sqrt(x.p))
            except ValueError:
                pass
            # p = r^2 * d  ->  sqrt(p) = r*sqrt(d)
            try:
                return QuadExt(0, RATIONAL.sqrt(x.p / self.d), self.d)
            except ValueError:
                pass
        raise ValueError(f"{x} has no square root in Q(sqrt({self.d}))")

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self):
        return hash(("quadext", self.d))

    def __repr__(self):
        return f"<Field quadext d={self.d}>"


def format_quadext(x: QuadExt) -> str:
    if x.q == 0:
        return str(x.p)
    rad = f"sqrt({x.d})" if abs(x.q) == 1 else f"{abs(x.q)}*sqrt({x.d})"
    if x.p == 0:
        return rad if x.q > 0 else "-" + rad
    return f"{x.p}{'+' if x.q > 0 else '-'}{rad}"


F64 = _Float64()
RATIONAL = _RationalField()


def field_for_mode(mode: str, radicand: int | None = None) -> Field:
    """Return the field object for a scalar mode name."""
    if mode == "f64":
        return F64
    if mode == "rational":
        return RATIONAL
    if mode == "quadext":
        return QuadField(2 if radicand is None else int(radicand))
    raise ValueError(f"unknown scalar mode {mode!r}")
