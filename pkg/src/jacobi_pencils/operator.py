"""The operator A of a pencil on finitely supported vectors.

With ``u_n = J3 e_n`` and ``w_n = J5 e_n`` the operator is fixed by::

    A e_0 = (e_1 - beta e_0) / alpha,      A u_n = w_n.

Expanding ``u_n = a_{n-1} e_{n-1} + b_n e_n + a_n e_{n+1}`` gives the column
recursion ``A e_{n+1} = (w_n - a_{n-1} A e_{n-1} - b_n A e_n) / a_n``, which is
what :func:`build_operator` uses.  :func:`build_operator_via_basis` expands
each ``e_k`` in the basis ``{e_0, u_0, u_1, ...}`` instead and serves as an
independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .numeric import Field
from .pencil import JacobiPencil
from .recurrence import Polynomial, generate
from .report import CheckReport

__all__ = [
    "FiniteVector",
    "OperatorTruncation",
    "TruncationOverflow",
    "apply_poly",
    "build_operator",
    "build_operator_via_basis",
    "check_hessenberg",
    "gram_matrix",
    "inner",
    "krylov_vectors",
    "poly_images",
    "vector_recurrence_residual",
    "u_vec",
    "verify_vector_recurrence",
    "verify_basis_images",
    "verify_gram_identity",
    "verify_oprl_degeneration",
    "w_vec",
]


class TruncationOverflow(IndexError):
    """A result would need columns of A beyond the materialized truncation."""


def _conj(x):
    return x.conjugate() if hasattr(x, "conjugate") else x


class FiniteVector:
    """Finitely supported vector in the standard basis; trailing zeros trimmed."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence = ()):
        c = list(coords)
        while c and c[-1] == 0:
            c.pop()
        self.coords: tuple = tuple(c)

    @classmethod
    def basis(cls, k: int, fld: Field) -> FiniteVector:
        return cls([fld.zero] * k + [fld.one])

    @classmethod
    def from_terms(cls, terms, fld: Field) -> FiniteVector:
        """Sum of ``coef * e_k`` for ``(k, coef)`` pairs; negative ``k`` are dropped."""
        terms = [(k, c) for k, c in terms if k >= 0]
        if not terms:
            return cls()
        out = [fld.zero] * (max(k for k, _ in terms) + 1)
        for k, c in terms:
            out[k] = out[k] + c
        return cls(out)

    @property
    def top(self) -> int:
        """Largest index in the support; -1 for the zero vector."""
        return len(self.coords) - 1

    def __getitem__(self, k: int):
        return self.coords[k] if 0 <= k < len(self.coords) else 0

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: FiniteVector) -> FiniteVector:
        a, b = self.coords, other.coords
        if len(a) < len(b):
            a, b = b, a
        return FiniteVector([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self) -> FiniteVector:
        return FiniteVector([-x for x in self.coords])

    def __sub__(self, other: FiniteVector) -> FiniteVector:
        return self + (-other)

    def __mul__(self, c) -> FiniteVector:
        return FiniteVector([x * c for x in self.coords])

    def __rmul__(self, c) -> FiniteVector:
        return FiniteVector([c * x for x in self.coords])

    def __truediv__(self, c) -> FiniteVector:
        return FiniteVector([x / c for x in self.coords])

    def __eq__(self, other):
        if not isinstance(other, FiniteVector):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def padded(self, size: int, zero) -> list:
        if len(self.coords) > size:
            raise ValueError("vector does not fit")
        return list(self.coords) + [zero] * (size - len(self.coords))

    def norm(self) -> float:
        return math.sqrt(sum(abs(complex(x)) ** 2 for x in self.coords))

    def __repr__(self):
        return f"FiniteVector({list(self.coords)!r})"


def inner(c: FiniteVector, d: FiniteVector):
    """``sum_n c_n conj(d_n)``."""
    total = 0
    for x, y in zip(c.coords, d.coords):
        total = total + x * _conj(y)
    return total


def u_vec(p: JacobiPencil, n: int) -> FiniteVector:
    """``J3 e_n``."""
    p.require(n, f"u_{n}")
    return FiniteVector.from_terms(
        [(n - 1, p.a_at(n - 1)), (n, p.b[n]), (n + 1, p.a[n])], p.field
    )


def w_vec(p: JacobiPencil, n: int) -> FiniteVector:
    """``J5 e_n``."""
    p.require(n, f"w_{n}")
    return FiniteVector.from_terms(
        [
            (n - 2, p.gamma_at(n - 2)),
            (n - 1, p.beta_at(n - 1)),
            (n, p.alpha_seq[n]),
            (n + 1, p.beta_seq[n]),
            (n + 2, p.gamma_seq[n]),
        ],
        p.field,
    )


@dataclass(frozen=True)
class OperatorTruncation:
    """Columns ``A e_0 .. A e_N``."""

    pencil: JacobiPencil
    columns: tuple
    _kappa: list = field(default_factory=list, repr=False, compare=False)

    @property
    def N(self) -> int:
        return len(self.columns) - 1

    @property
    def field(self) -> Field:
        return self.pencil.field

    def column(self, k: int) -> FiniteVector:
        if k > self.N:
            raise TruncationOverflow(f"A e_{k} is beyond the truncation (N={self.N})")
        return self.columns[k]

    def apply(self, v: FiniteVector) -> FiniteVector:
        """``A v``; raises :class:`TruncationOverflow` when ``v`` reaches past ``e_N``."""
        if v.top > self.N:
            raise TruncationOverflow(
                f"A applied to a vector supported up to e_{v.top}, truncation has N={self.N}"
            )
        zero = self.field.zero
        size = (v.top + 2) if v.coords else 0
        out = [zero] * size
        for k, c in enumerate(v.coords):
            if c == 0:
                continue
            for j, x in enumerate(self.columns[k].coords):
                out[j] = out[j] + c * x
        return FiniteVector(out)

    def dense(self) -> list[list]:
        """Rows ``0..N+1`` by columns ``0..N``; the last row holds the subdiagonal
        entry of column ``N``."""
        zero = self.field.zero
        rows = self.N + 2
        cols = [c.padded(rows, zero) for c in self.columns]
        return [[cols[k][j] for k in range(self.N + 1)] for j in range(rows)]

    def kappa(self) -> float:
        """Sum of column 2-norms; scales float-mode tolerances."""
        if not self._kappa:
            self._kappa.append(sum(c.norm() for c in self.columns))
        return self._kappa[0]


def build_operator(p: JacobiPencil, N: int) -> OperatorTruncation:
    """Materialize ``A e_0 .. A e_N`` by the column recursion."""
    if N < 0:
        raise ValueError("N must be >= 0")
    p.require(N - 1, f"building A e_0..A e_{N}")
    f = p.field
    e0 = FiniteVector.basis(0, f)
    e1 = FiniteVector.basis(1, f)
    cols = [(e1 - p.beta * e0) / p.alpha]
    for n in range(N):
        acc = w_vec(p, n) - p.b[n] * cols[n]
        if n >= 1:
            acc = acc - p.a[n - 1] * cols[n - 1]
        cols.append(acc / p.a[n])
    return OperatorTruncation(p, tuple(cols))


def build_operator_via_basis(p: JacobiPencil, N: int) -> OperatorTruncation:
    """Same truncation from the defining expansion ``f = z e_0 + sum xi_n u_n``.

    ``e_k`` is expanded by back-substitution (``u_n`` has top entry ``a_n`` in
    row ``n+1``), then ``A e_k = (z/alpha)(e_1 - beta e_0) + sum xi_n w_n``.
    Cost is cubic in ``N``; intended for small cross-checks.
    """
    p.require(N - 1, f"building A e_0..A e_{N}")
    f = p.field
    zero = f.zero
    e0 = FiniteVector.basis(0, f)
    e1 = FiniteVector.basis(1, f)
    w = [w_vec(p, n) for n in range(N)]
    cols = []
    for k in range(N + 1):
        # rows j = k..1 determine xi_{j-1}; row 0 determines z
        xi = [zero] * k
        for j in range(k, 0, -1):
            rhs = f.one if j == k else zero
            rhs = rhs - p.b[j] * xi[j] if j < k else rhs
            if j + 1 < k:
                rhs = rhs - p.a[j] * xi[j + 1]
            xi[j - 1] = rhs / p.a[j - 1]
        z = (f.one if k == 0 else zero)
        if k >= 1:
            z = z - p.b[0] * xi[0]
        if k >= 2:
            z = z - p.a[0] * xi[1]
        col = (z / p.alpha) * (e1 - p.beta * e0)
        for n in range(k):
            col = col + xi[n] * w[n]
        cols.append(col)
    return OperatorTruncation(p, tuple(cols))


def krylov_vectors(T: OperatorTruncation, v: FiniteVector, k: int) -> list[FiniteVector]:
    """``[v, A v, ..., A^k v]``."""
    out = [v]
    for _ in range(k):
        out.append(T.apply(out[-1]))
    return out


def apply_poly(
    f: Polynomial,
    T: OperatorTruncation,
    v: FiniteVector,
    powers: Sequence[FiniteVector] | None = None,
) -> FiniteVector:
    """``f(A) v = sum_k d_k A^k v``.

    Uses Horner's scheme, or the precomputed ``powers[k] = A^k v`` when given.
    The zero polynomial maps every vector to zero.
    """
    if f.is_zero():
        return FiniteVector()
    if powers is not None:
        if len(powers) <= f.degree:
            raise TruncationOverflow("not enough precomputed powers")
        out = FiniteVector()
        for d, pv in zip(f.coeffs, powers):
            if d != 0:
                out = out + d * pv
        return out
    out = f.coeffs[-1] * v
    for d in reversed(f.coeffs[:-1]):
        out = T.apply(out) + d * v
    return out


def check_hessenberg(T: OperatorTruncation) -> CheckReport:
    bad = [k for k, c in enumerate(T.columns) if c.top > k + 1]
    return CheckReport(
        "hessenberg_profile",
        not bad,
        max_deviation=float(len(bad)),
        tolerance=0.0,
        details={"N": T.N, "offending_columns": bad},
    )


def _deviation(x, exact: bool) -> float:
    if exact:
        return 0.0 if x == 0 else abs(complex(x))
    return abs(complex(x))


def _tolerance(T: OperatorTruncation, tol: float | None) -> float:
    if T.field.exact:
        return 0.0
    if tol is not None:
        return tol
    return 1e-12 * T.kappa()


def _vector_deviation(v: FiniteVector, exact: bool) -> tuple[bool, float]:
    if exact:
        return v.is_zero(), max((abs(complex(x)) for x in v.coords), default=0.0)
    return True, max((abs(complex(x)) for x in v.coords), default=0.0)


def poly_images(
    p: JacobiPencil, N: int, T: OperatorTruncation, method: str | None = None
) -> list[FiniteVector]:
    """``p_n(A) e_0`` for ``n = 0..N``.

    ``powers``/``horner`` substitute A into the coefficient lists; ``recurrence``
    runs the five-term recurrence with A in place of the variable.  The
    coefficient routes are exact but lose all accuracy in floating point
    (coefficients grow exponentially), so floats default to ``recurrence``.
    """
    f = p.field
    if method is None:
        method = "powers" if f.exact else "recurrence"
    e0 = FiniteVector.basis(0, f)
    if method == "recurrence":
        return _recurrence_images(p, N, T, e0)
    polys = generate(p, max(N, 1)).polys[: N + 1]
    if method == "powers":
        powers = krylov_vectors(T, e0, N)
        return [apply_poly(q, T, e0, powers) for q in polys]
    if method == "horner":
        return [apply_poly(q, T, e0) for q in polys]
    raise ValueError(f"unknown method {method!r}")


def _recurrence_images(p, N, T, e0):
    zero = FiniteVector()
    ys = [e0, p.alpha * T.apply(e0) + p.beta * e0][: N + 1]
    Ay = [T.apply(e0)]

    def at(k):
        return ys[k] if k >= 0 else zero

    def A_at(k):
        return Ay[k] if k >= 0 else zero

    for n in range(N - 1):
        Ay.append(T.apply(ys[n + 1]))
        acc = (
            p.gamma_at(n - 2) * at(n - 2)
            + p.beta_at(n - 1) * at(n - 1)
            - p.a_at(n - 1) * A_at(n - 1)
            + p.alpha_seq[n] * at(n)
            - p.b[n] * A_at(n)
            + p.beta_seq[n] * at(n + 1)
            - p.a[n] * A_at(n + 1)
        )
        ys.append(-acc / p.gamma_seq[n])
    return ys


def verify_basis_images(
    p: JacobiPencil,
    N: int,
    tol: float | None = None,
    T: OperatorTruncation | None = None,
    method: str | None = None,
) -> CheckReport:
    """Check ``p_n(A) e_0 = e_n`` for ``n = 0..N``."""
    T = T or build_operator(p, N)
    f = p.field
    images = poly_images(p, N, T, method)
    tolerance = _tolerance(T, tol)
    worst, failed = 0.0, []
    for n, y in enumerate(images):
        ok, dev = _vector_deviation(y - FiniteVector.basis(n, f), f.exact)
        worst = max(worst, dev)
        if not ok or dev > tolerance:
            failed.append(n)
    return CheckReport(
        "e_n = p_n(A) e_0",
        not failed,
        max_deviation=worst,
        tolerance=tolerance,
        details={"N": N, "mode": f.name, "failed_n": failed, "kappa": T.kappa()},
    )


def gram_matrix(vectors: Sequence[FiniteVector]) -> list[list]:
    return [[inner(x, y) for y in vectors] for x in vectors]


def verify_gram_identity(
    p: JacobiPencil,
    N: int,
    tol: float | None = None,
    T: OperatorTruncation | None = None,
    method: str | None = None,
) -> CheckReport:
    """Gram matrix of ``p_n(A) e_0`` against the identity, ``n, m <= N``."""
    T = T or build_operator(p, N)
    f = p.field
    G = gram_matrix(poly_images(p, N, T, method))
    tolerance = _tolerance(T, tol)
    worst, exact_ok = 0.0, True
    for n, row in enumerate(G):
        for m, g in enumerate(row):
            d = g - (1 if n == m else 0)
            if f.exact and d != 0:
                exact_ok = False
            worst = max(worst, abs(complex(d)))
    passed = exact_ok if f.exact else worst <= tolerance
    return CheckReport(
        "gram(p_n(A) e_0) = I",
        passed,
        max_deviation=worst,
        tolerance=tolerance,
        details={"N": N, "mode": f.name, "kappa": T.kappa()},
        data={"gram": G},
    )


def vector_recurrence_residual(p: JacobiPencil, T: OperatorTruncation, n: int) -> FiniteVector:
    """Row ``n`` of the vector recurrence with ``y_k = e_k``."""
    f = p.field

    def e(k):
        return FiniteVector.basis(k, f) if k >= 0 else FiniteVector()

    def Ae(k):
        return T.column(k) if k >= 0 else FiniteVector()

    return (
        p.gamma_at(n - 2) * e(n - 2)
        + p.beta_at(n - 1) * e(n - 1)
        - p.a_at(n - 1) * Ae(n - 1)
        + p.alpha_seq[n] * e(n)
        - p.b[n] * Ae(n)
        + p.beta_seq[n] * e(n + 1)
        - p.a[n] * Ae(n + 1)
        + p.gamma_seq[n] * e(n + 2)
    )


def verify_vector_recurrence(
    p: JacobiPencil, N: int, tol: float | None = None, T: OperatorTruncation | None = None
) -> CheckReport:
    """Check that ``y_n = e_n`` solves the vector recurrence for ``n = 0..N-2``."""
    T = T or build_operator(p, N)
    f = p.field
    tolerance = _tolerance(T, tol)
    worst, failed = 0.0, []
    for n in range(max(N - 1, 0)):
        ok, dev = _vector_deviation(vector_recurrence_residual(p, T, n), f.exact)
        worst = max(worst, dev)
        if not ok or dev > tolerance:
            failed.append(n)
    return CheckReport(
        "vector recurrence solved by e_n",
        not failed,
        max_deviation=worst,
        tolerance=tolerance,
        details={"N": N, "mode": f.name, "failed_n": failed},
    )


def verify_oprl_degeneration(p: JacobiPencil, N: int, T: OperatorTruncation | None = None) -> CheckReport:
    """For ``J5 = J3**2``: columns ``0..N-1`` of A equal those of J3."""
    T = T or build_operator(p, N)
    f = p.field
    failed, worst = [], 0.0
    for k in range(N):
        j3col = u_vec(p, k)
        diff = T.column(k) - j3col
        ok, dev = _vector_deviation(diff, f.exact)
        worst = max(worst, dev)
        if not ok or (not f.exact and dev > _tolerance(T, None)):
            failed.append(k)
    return CheckReport(
        "A = J3 on columns 0..N-1",
        not failed,
        max_deviation=worst,
        tolerance=0.0 if f.exact else _tolerance(T, None),
        details={"N": N, "mode": f.name, "failed_columns": failed},
    )
