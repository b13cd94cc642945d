"""Explicit formulas for the constant-coefficient pencil ``theta1``.

The pencil has ``a_k = sqrt2, b_k = 2, alpha_n = beta_n = 0, gamma_n = 1`` and
``p_1 = sqrt2 (x + 1)``.  Its polynomials admit two closed forms which are
checked here against the recurrence:

* the Chebyshev form, in the variable ``t = (x + 1)/sqrt2``::

      p_n(sqrt2 t - 1) = T_n(t) + t U_{n-1}(t)
                         - (U_{n-1}(t) - U_{n-1}(-1/sqrt2)) / (2 (t + 1/sqrt2))

* the root form built from the characteristic quartic
  ``w^4 - sqrt2 x w^3 - 2 x w^2 - sqrt2 x w + 1``, whose roots are
  ``(sqrt2/2)(-1 -+ i)`` and ``(sqrt2/2)(x + 1 +- s)`` with ``s^2 = x^2 + 2x - 1``.

Most functions accept floats/complex numbers, or exact elements of Q(sqrt2)
(optionally wrapped in :class:`~jacobi_pencils.numeric.ComplexOf`).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numeric import F64, ComplexOf, QuadExt, QuadField
from .pencil import JacobiPencil, theta1 as theta1_pencil
from .recurrence import generate_values
from .report import CheckReport

__all__ = [
    "DomainError",
    "QuarticRoots",
    "CoefficientSystem",
    "bivariate_mul",
    "characteristic_quartic",
    "chebyshev",
    "chebyshev_trig",
    "chebyshev_closed_form",
    "crosscheck_complex",
    "crosscheck_theta1",
    "default_grid",
    "det_elimination",
    "factorization_identity",
    "quartic_roots",
    "quartic_value",
    "root_representation",
    "solve_linear",
    "coefficient_system",
]

SQRT2 = math.sqrt(2.0)
_Q2 = QuadField(2)
GUARD = 1e-8


class DomainError(ValueError):
    """Argument outside the set where a formula is stated."""


def _is_exact(x) -> bool:
    if isinstance(x, ComplexOf):
        return _is_exact(x.re) and _is_exact(x.im)
    return isinstance(x, (QuadExt, Fraction, int)) and not isinstance(x, bool)


def _exact(x):
    """Lift rationals into Q(sqrt2); leave Q(sqrt2) and ComplexOf alone."""
    if isinstance(x, ComplexOf):
        return ComplexOf(_exact(x.re), _exact(x.im))
    return _Q2.coerce(x)


def _sqrt2_for(x):
    return _Q2.root if _is_exact(x) else SQRT2


# ---------------------------------------------------------------------------
# Chebyshev polynomials
# ---------------------------------------------------------------------------

def chebyshev(kind: str, n: int, t):
    """``T_n(t)`` (kind ``"T"``) or ``U_n(t)`` (kind ``"U"``) by the three-term
    recurrence ``X_{k+1} = 2 t X_k - X_{k-1}``; ``U_{-1} = 0``."""
    if kind not in ("T", "U"):
        raise ValueError("kind must be 'T' or 'U'")
    one = t * 0 + 1
    if n < -1 or (n == -1 and kind == "T"):
        raise ValueError(f"{kind}_{n} is not defined")
    if n == -1:
        return t * 0
    prev, cur = one, (t if kind == "T" else 2 * t)
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def chebyshev_trig(kind: str, n: int, t: float) -> float:
    """Trigonometric definitions, ``|t| <= 1`` (``|t| < 1`` for ``U``)."""
    if not -1.0 <= t <= 1.0:
        raise DomainError("trigonometric Chebyshev evaluation needs |t| <= 1")
    theta = math.acos(t)
    if kind == "T":
        return math.cos(n * theta)
    if kind == "U":
        s = math.sin(theta)
        if s == 0.0:
            raise DomainError("U_n by sine quotient is singular at t = +-1")
        return math.sin((n + 1) * theta) / s
    raise ValueError("kind must be 'T' or 'U'")


# ---------------------------------------------------------------------------
# Chebyshev closed form
# ---------------------------------------------------------------------------

def chebyshev_closed_form(n: int, t):
    """``p_n(sqrt2 t - 1)`` from the Chebyshev expression.

    Valid for ``t`` in ``(-1, -1/sqrt2)`` or ``(-1/sqrt2, 1)``.  Floats must
    also stay ``1e-8`` away from ``-1/sqrt2``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if _is_exact(t):
        t = _exact(t)
        r2 = _Q2.root
        c = -1 / r2
        if not (-1 < t < 1) or t == c:
            raise DomainError(f"t = {t} is outside (-1, -1/sqrt2) U (-1/sqrt2, 1)")
    else:
        t = float(t)
        c = -1.0 / SQRT2
        if not (-1.0 < t < 1.0) or abs(t - c) <= GUARD:
            raise DomainError(f"t = {t!r} is outside the admissible set or in the guard band")
    u = chebyshev("U", n - 1, t)
    u_c = chebyshev("U", n - 1, c)
    return chebyshev("T", n, t) + t * u - (u - u_c) / (2 * (t - c))


# ---------------------------------------------------------------------------
# Root form
# ---------------------------------------------------------------------------

# sin(3 pi k / 4) for k = 0..7, as multiples of sqrt2/2 (entries 2 and 6 are -+1)
_SIN_TABLE = {0: (0, 0), 1: (0, 1), 2: (-1, 0), 3: (0, 1), 4: (0, 0), 5: (0, -1), 6: (1, 0), 7: (0, -1)}


def _sin_3pi4(n: int, exact: bool):
    p, q = _SIN_TABLE[n % 8]
    if exact:
        return QuadExt(p, Fraction(q, 2), 2)
    return p + q * SQRT2 / 2


def _excluded(lam) -> bool:
    if _is_exact(lam):
        lam = _exact(lam)
        if isinstance(lam, ComplexOf):
            if lam.im != 0:
                return False
            lam = lam.re
        return lam == -2 or (lam + 1) * (lam + 1) == 2
    lam = complex(lam)
    return min(abs(lam + 2), abs(lam + 1 - SQRT2), abs(lam + 1 + SQRT2)) <= GUARD


def _square_root_choice(lam, s, sign: int):
    disc = lam * lam + 2 * lam - 1
    if s is None:
        if _is_exact(lam):
            try:
                s = _Q2.sqrt(_exact(disc))
            except (ValueError, TypeError) as exc:
                raise DomainError(
                    "x^2 + 2x - 1 has no square root in Q(sqrt2); pass s explicitly"
                ) from exc
        else:
            s = cmath.sqrt(complex(disc))
        return s if sign >= 0 else -s
    if _is_exact(lam):
        if _exact(s) * _exact(s) != _exact(disc):
            raise ValueError("s*s != x^2 + 2x - 1")
        return _exact(s)
    if abs(complex(s) ** 2 - complex(disc)) > 1e-9 * (1 + abs(complex(disc))):
        raise ValueError("s*s != x^2 + 2x - 1")
    return complex(s)


def root_representation(n: int, lam, sign: int = 1, s=None):
    """``p_n(x)`` from the roots of the characteristic quartic.

    ``x`` must avoid ``-2`` and ``-1 +- sqrt2``.  The square root ``s`` of
    ``x^2 + 2x - 1`` is either passed in or taken as ``sign`` times the
    principal value; the result does not depend on that choice.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if _excluded(lam):
        raise DomainError(f"x = {lam!r} is an excluded point")
    exact = _is_exact(lam)
    if exact:
        lam = _exact(lam)
    else:
        lam = complex(lam)
    s = _square_root_choice(lam, s, sign)
    r2 = _sqrt2_for(lam)
    plus, minus = (lam + 1 + s) ** n, (lam + 1 - s) ** n
    scale = (r2 / 2) ** n / 2  # 2^(-n/2 - 1)
    ratio = (lam * lam + 3 * lam + 1) / ((lam + 2) * s)
    return _sin_3pi4(n, exact) / (lam + 2) + scale * (plus + minus + ratio * (plus - minus))


@dataclass(frozen=True)
class QuarticRoots:
    lam: object
    s: object
    roots: tuple

    @property
    def t(self):
        return (self.lam + 1) / _sqrt2_for(self.lam)


def quartic_value(w, lam):
    r2 = _sqrt2_for(lam) if _is_exact(lam) else SQRT2
    w2 = w * w
    return w2 * w2 - r2 * lam * w2 * w - 2 * lam * w2 - r2 * lam * w + 1


def quartic_roots(lam, s=None, sign: int = 1) -> QuarticRoots:
    """The four roots ``w_1..w_4`` for a given square-root choice."""
    exact = _is_exact(lam)
    if exact:
        lam = _exact(lam)
        if not isinstance(lam, ComplexOf):
            lam = ComplexOf(lam, _Q2.zero)
        i = ComplexOf(_Q2.zero, _Q2.one)
        r2 = _Q2.root
        if s is None:
            disc = lam * lam + 2 * lam - 1
            if disc.im != 0:
                raise DomainError("pass s explicitly for complex exact x")
            try:
                s = _Q2.sqrt(disc.re)
            except ValueError:
                try:
                    s = ComplexOf(_Q2.zero, _Q2.sqrt(-disc.re))
                except ValueError as exc:
                    raise DomainError("pass s explicitly; no square root in Q(sqrt2)") from exc
            s = s if sign >= 0 else -s
        else:
            s = _exact(s)
            if s * s != lam * lam + 2 * lam - 1:
                raise ValueError("s*s != x^2 + 2x - 1")
    else:
        lam = complex(lam)
        i = 1j
        r2 = SQRT2
        s = _square_root_choice(lam, s, sign)
    h = r2 / 2
    w1 = h * (-1 - i)
    w2 = h * (-1 + i)
    w3 = h * (lam + 1 + s)
    w4 = h * (lam + 1 - s)
    return QuarticRoots(lam, s, (w1, w2, w3, w4))


# ---------------------------------------------------------------------------
# Bivariate polynomials in (w, x): dict {(deg_w, deg_x): coeff}
# ---------------------------------------------------------------------------

def bivariate_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in f.items():
        for (i2, j2), c2 in g.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def characteristic_quartic(p: JacobiPencil | None = None) -> dict:
    """Characteristic polynomial of a pencil with constant coefficients.

    Substituting ``y_n = w^n`` in rows ``n >= 2`` of the recurrence and
    multiplying by ``w^2`` gives
    ``g w^4 + (be - x a) w^3 + (al - x b) w^2 + (be - x a) w + g``.
    """
    if p is None:
        p = theta1_pencil(4)
    a, b, al, be, g = p.a[2], p.b[2], p.alpha_seq[2], p.beta_seq[2], p.gamma_seq[2]
    terms = {
        (4, 0): g, (3, 0): be, (3, 1): -a, (2, 0): al, (2, 1): -b,
        (1, 0): be, (1, 1): -a, (0, 0): g,
    }
    return {k: v for k, v in terms.items() if v != 0}


def factorization_identity() -> tuple[dict, dict]:
    """Expand ``(w^2 + sqrt2 w + 1)(w^2 - sqrt2 (x + 1) w + 1)`` exactly and return
    it together with the characteristic quartic of the pencil."""
    r2 = _Q2.root
    one = _Q2.one
    left = {(2, 0): one, (1, 0): r2, (0, 0): one}
    right = {(2, 0): one, (1, 1): -r2, (1, 0): -r2, (0, 0): one}
    return bivariate_mul(left, right), characteristic_quartic(theta1_pencil(4))


# ---------------------------------------------------------------------------
# The 4x4 system for the coefficients of the general solution
# ---------------------------------------------------------------------------

def det_elimination(M: Sequence[Sequence]):
    """Determinant by Gaussian elimination with partial pivoting.

    Pivots on the largest magnitude for inexact entries, on the first
    nonzero entry for exact ones.
    """
    A = [list(row) for row in M]
    n = len(A)
    exact = all(_is_exact(x) for row in A for x in row)
    det = A[0][0] * 0 + 1
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(complex(A[r][col])))
            if A[piv][col] == 0:
                piv = None
        if piv is None:
            return det * 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        for r in range(col + 1, n):
            factor = A[r][col] / A[col][col]
            if factor != 0:
                A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    return det


def solve_linear(M: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve ``M x = rhs`` by Gaussian elimination with partial pivoting."""
    n = len(M)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    exact = all(_is_exact(x) for row in A for x in row)
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(complex(A[r][col])))
        if piv is None or A[piv][col] == 0:
            raise ZeroDivisionError("singular system")
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col:
                factor = A[r][col] / A[col][col]
                A[r] = [x - factor * y for x, y in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


@dataclass(frozen=True)
class CoefficientSystem:
    lam: complex
    s: complex
    matrix: tuple
    rhs: tuple
    det_elimination: complex
    det_formula: complex
    coefficients: tuple
    solved: tuple
    residual: float

    @property
    def det_relative_error(self) -> float:
        return abs(self.det_elimination - self.det_formula) / abs(self.det_formula)


def coefficient_system(lam, s=None, sign: int = 1) -> CoefficientSystem:
    """Build the system fixing ``C_1..C_4`` in ``sum C_j w_j^n`` (float mode).

    Returns the elimination determinant next to ``-8 (x + 2)^2 s i``, the
    closed-form coefficients, an elimination solution, and the max-abs
    residual of the closed-form coefficients in the system.
    """
    lam = complex(lam)
    if _excluded(lam):
        raise DomainError(f"x = {lam!r} is an excluded point (system is singular)")
    s = _square_root_choice(lam, s, sign)
    i = 1j
    M = (
        (-lam + (lam + 1) * i, -lam - (lam + 1) * i, -lam + s, -lam - s),
        (1 - i, 1 + i, -lam - 1 + s, -lam - 1 - s),
        (1, 1, 1, 1),
        (-1 - i, -1 + i, lam + 1 + s, lam + 1 - s),
    )
    M = tuple(tuple(complex(x) for x in row) for row in M)
    rhs = (0j, 0j, 1 + 0j, 2 * lam + 2)
    det_e = det_elimination(M)
    det_f = -8 * (lam + 2) ** 2 * s * i
    c12 = 1 / (2 * (lam + 2) * i)
    c34 = (lam * lam + 3 * lam + 1) / (2 * (lam + 2) * s)
    C = (-c12, c12, 0.5 + c34, 0.5 - c34)
    res = max(abs(sum(m * c for m, c in zip(row, C)) - r) for row, r in zip(M, rhs))
    return CoefficientSystem(
        lam=lam,
        s=s,
        matrix=M,
        rhs=rhs,
        det_elimination=det_e,
        det_formula=det_f,
        coefficients=C,
        solved=tuple(solve_linear(M, rhs)),
        residual=res,
    )


def general_solution(n: int, lam, s=None, sign: int = 1) -> complex:
    """``sum_j C_j w_j^n`` with the closed-form coefficients (float mode)."""
    sysm = coefficient_system(lam, s, sign)
    roots = quartic_roots(sysm.lam, sysm.s).roots
    return sum(c * w ** n for c, w in zip(sysm.coefficients, roots))


# ---------------------------------------------------------------------------
# Cross-checks against the recurrence
# ---------------------------------------------------------------------------

def default_grid(points: int = 64) -> list[float]:
    """Cell midpoints of a uniform partition of (-1, 1)."""
    return [-1.0 + (2 * k + 1) / points for k in range(points)]


def crosscheck_theta1(N: int = 30, grid: Sequence[float] | None = None, tol: float = 1e-9) -> CheckReport:
    """Max deviation between the recurrence, the Chebyshev form and the root form
    of ``p_n(sqrt2 t - 1)`` for ``n <= N`` and ``t`` in ``grid``."""
    grid = default_grid() if grid is None else list(grid)
    p = theta1_pencil(max(N, 2), F64)
    dev = {"recurrence_vs_chebyshev": 0.0, "recurrence_vs_roots": 0.0, "chebyshev_vs_roots": 0.0}
    for t in grid:
        lam = SQRT2 * t - 1.0
        rec = generate_values(p, N, lam)
        for n in range(N + 1):
            cf = chebyshev_closed_form(n, t)
            rp = root_representation(n, lam)
            dev["recurrence_vs_chebyshev"] = max(dev["recurrence_vs_chebyshev"], abs(rec[n] - cf))
            dev["recurrence_vs_roots"] = max(dev["recurrence_vs_roots"], abs(rec[n] - rp))
            dev["chebyshev_vs_roots"] = max(dev["chebyshev_vs_roots"], abs(cf - rp))
    worst = max(dev.values())
    return CheckReport(
        "theta1 three-way agreement",
        worst <= tol,
        max_deviation=worst,
        tolerance=tol,
        details={"N": N, "grid_points": len(grid), "grid": [min(grid), max(grid)], **dev},
    )


def crosscheck_complex(N: int, samples: Sequence[complex], tol: float = 1e-9) -> CheckReport:
    """Relative deviation of the root form from the recurrence at complex points.

    Outside the real interval where the Chebyshev form is stated this is
    informational output.
    """
    p = theta1_pencil(max(N, 2), F64)
    worst = 0.0
    for lam in samples:
        rec = generate_values(p, N, complex(lam))
        for n in range(N + 1):
            rp = root_representation(n, lam)
            worst = max(worst, abs(rec[n] - rp) / max(1.0, abs(rec[n])))
    return CheckReport(
        "theta1 root form vs recurrence (complex samples)",
        worst <= tol,
        max_deviation=worst,
        tolerance=tol,
        details={"N": N, "samples": len(samples)},
    )
