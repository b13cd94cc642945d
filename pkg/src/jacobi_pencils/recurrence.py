"""Associated polynomials of a pencil via the five-term recurrence.

The recurrence, row ``n`` of ``(J5 - x J3) p(x) = 0``::

    g[n-2] p[n-2] + (be[n-1] - x a[n-1]) p[n-1] + (al[n] - x b[n]) p[n]
        + (be[n] - x a[n]) p[n+1] + g[n] p[n+2] = 0

with negative-index quantities equal to zero, ``p_0 = 1`` and
``p_1 = alpha x + beta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .numeric import Field
from .pencil import JacobiPencil

__all__ = [
    "DegreeError",
    "Polynomial",
    "PolynomialSystem",
    "generate",
    "generate_values",
    "generate_values_and_derivatives",
    "recurrence_residual",
    "three_term_oprl",
]


class DegreeError(ArithmeticError):
    """An associated polynomial lost its degree or its positive leading coefficient."""


class Polynomial:
    """Dense polynomial with coefficients in ascending degree order.

    Trailing exact zeros are dropped; the zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple = tuple(c)

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c, zero) -> Polynomial:
        return cls([zero] * k + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self) -> Polynomial:
        return Polynomial([-x for x in self.coeffs])

    def __sub__(self, other: Polynomial) -> Polynomial:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Polynomial()
            out = [a[0] * 0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
            return Polynomial(out)
        return Polynomial([x * other for x in self.coeffs])

    def __rmul__(self, other) -> Polynomial:
        return Polynomial([other * x for x in self.coeffs])

    def shift(self, k: int = 1) -> Polynomial:
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return Polynomial([self.coeffs[0] * 0] * k + list(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Horner evaluation; exact for exact scalars."""
        if not self.coeffs:
            return x * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> Polynomial:
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def map(self, fn) -> Polynomial:
        return Polynomial([fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class PolynomialSystem:
    pencil: JacobiPencil
    polys: tuple

    @property
    def N(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> Polynomial:
        return self.polys[n]

    def __len__(self):
        return len(self.polys)


def _check_degree(poly: Polynomial, n: int, fld: Field) -> None:
    # the top coefficient of p_{n+2} is a_n * lead(p_{n+1}) / gamma_n with no
    # cancellation, so an exact sign test is meaningful in float mode too
    if poly.degree != n or not fld.is_positive(poly.leading):
        raise DegreeError(
            f"p_{n} has degree {poly.degree} and leading coefficient {poly.leading!r}"
        )


def generate(p: JacobiPencil, N: int, check: bool = True) -> PolynomialSystem:
    """Return ``p_0..p_N``.

    Solving row ``n`` of the recurrence for ``p_{n+2}`` needs pencil entries
    up to index ``n = N - 2``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    p.require(N - 2, f"generating p_0..p_{N}")
    f = p.field
    one = f.one
    polys = [Polynomial([one]), Polynomial([p.beta, p.alpha])]
    empty = Polynomial()

    def at(k):
        return polys[k] if k >= 0 else empty

    for n in range(N - 1):
        # (c - x*s) q  ==  c*q - s*(x q)
        acc = p.gamma_at(n - 2) * at(n - 2)
        acc = acc + p.beta_at(n - 1) * at(n - 1) - p.a_at(n - 1) * at(n - 1).shift()
        acc = acc + p.alpha_seq[n] * at(n) - p.b[n] * at(n).shift()
        acc = acc + p.beta_seq[n] * at(n + 1) - p.a[n] * at(n + 1).shift()
        g = p.gamma_seq[n]
        polys.append(Polynomial([-c / g for c in acc.coeffs]))
    polys = polys[: N + 1]
    if check:
        for n, q in enumerate(polys):
            _check_degree(q, n, f)
    return PolynomialSystem(p, tuple(polys))


def recurrence_residual(sys: PolynomialSystem, n: int) -> Polynomial:
    """Left-hand side of recurrence row ``n`` as a polynomial (identically zero)."""
    if n < 0 or n + 2 > sys.N:
        raise IndexError(f"row {n} needs p_{n + 2}, system has p_0..p_{sys.N}")
    p = sys.pencil
    empty = Polynomial()

    def at(k):
        return sys.polys[k] if k >= 0 else empty

    terms = [
        p.gamma_at(n - 2) * at(n - 2),
        p.beta_at(n - 1) * at(n - 1),
        -(p.a_at(n - 1) * at(n - 1).shift()),
        p.alpha_seq[n] * at(n),
        -(p.b[n] * at(n).shift()),
        p.beta_seq[n] * at(n + 1),
        -(p.a[n] * at(n + 1).shift()),
        p.gamma_seq[n] * at(n + 2),
    ]
    out = empty
    for t in terms:
        out = out + t
    return out


def generate_values(p: JacobiPencil, N: int, x) -> list:
    """Values ``p_0(x)..p_N(x)`` by running the recurrence on numbers.

    For real/complex floats this is far better conditioned than evaluating
    the coefficient lists, which grow exponentially with ``n``.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    p.require(N - 2, f"evaluating p_0..p_{N}")
    one = p.field.one
    vals = [one + 0 * x, p.alpha * x + p.beta]
    zero = 0 * x

    def at(k):
        return vals[k] if k >= 0 else zero

    for n in range(N - 1):
        acc = (
            p.gamma_at(n - 2) * at(n - 2)
            + (p.beta_at(n - 1) - x * p.a_at(n - 1)) * at(n - 1)
            + (p.alpha_seq[n] - x * p.b[n]) * at(n)
            + (p.beta_seq[n] - x * p.a[n]) * at(n + 1)
        )
        vals.append(-acc / p.gamma_seq[n])
    return vals[: N + 1]


def generate_values_and_derivatives(p: JacobiPencil, N: int, x) -> list[tuple]:
    """``(p_n(x), p_n'(x))`` for ``n = 0..N`` from the differentiated recurrence.

    ``x`` may be a numpy array; all operations are elementwise.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    p.require(N - 2, f"evaluating p_0..p_{N}")
    zero = 0 * x
    vals = [p.field.one + zero, p.alpha * x + p.beta]
    ders = [zero, p.alpha + zero]

    def at(seq, k):
        return seq[k] if k >= 0 else zero

    for n in range(N - 1):
        c2, c1 = p.gamma_at(n - 2), p.beta_at(n - 1) - x * p.a_at(n - 1)
        c0, cm = p.alpha_seq[n] - x * p.b[n], p.beta_seq[n] - x * p.a[n]
        acc = c2 * at(vals, n - 2) + c1 * at(vals, n - 1) + c0 * at(vals, n) + cm * at(vals, n + 1)
        dacc = (
            c2 * at(ders, n - 2) + c1 * at(ders, n - 1) + c0 * at(ders, n) + cm * at(ders, n + 1)
            - p.a_at(n - 1) * at(vals, n - 1) - p.b[n] * at(vals, n) - p.a[n] * at(vals, n + 1)
        )
        vals.append(-acc / p.gamma_seq[n])
        ders.append(-dacc / p.gamma_seq[n])
    return list(zip(vals, ders))[: N + 1]


def three_term_oprl(a: Sequence, b: Sequence, N: int, one: Any = 1) -> list[Polynomial]:
    """Orthonormal polynomials from ``a_n p_{n+1} = (x - b_n) p_n - a_{n-1} p_{n-1}``.

    Independent of the pencil machinery; used as a reference.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if len(a) < N or len(b) < N:
        raise IndexError("not enough recurrence coefficients")
    polys = [Polynomial([one])]
    prev = Polynomial()
    for n in range(N):
        cur = polys[-1]
        nxt = cur.shift() - b[n] * cur
        if n > 0:
            nxt = nxt - a[n - 1] * prev
        nxt = Polynomial([c / a[n] for c in nxt.coeffs])
        prev = cur
        polys.append(nxt)
    return polys
