"""Zeros of associated polynomials (floating point).

Roots are found by Aberth-Ehrlich simultaneous iteration from a perturbed
circle of starting points and then polished with Newton steps.  The
realness summary is exploratory output only.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .pencil import JacobiPencil
from .numeric import F64
from .recurrence import Polynomial, generate, generate_values_and_derivatives

__all__ = [
    "RootSet",
    "RealnessRow",
    "find_roots",
    "realness_report",
    "rows_to_csv",
    "rows_to_json",
    "rootsets_to_csv",
]

log = logging.getLogger(__name__)

MAX_DEGREE = 60


@dataclass
class RootSet:
    n: int
    roots: np.ndarray
    residuals: np.ndarray
    converged: bool
    iterations: int

    @property
    def max_imag_abs(self) -> float:
        return float(np.max(np.abs(self.roots.imag))) if self.n else 0.0

    def sorted(self) -> np.ndarray:
        return self.roots[np.lexsort((self.roots.imag, self.roots.real))]


def _horner_with_derivative(c: np.ndarray, z: np.ndarray):
    """Values of the polynomial (ascending ``c``) and its derivative at ``z``."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _initial_guesses(c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = len(c) - 1
    # geometric mean of root moduli as radius, Cauchy bound as a cap
    radius = abs(c[0] / c[-1]) ** (1.0 / n) if c[0] != 0 else 1.0
    cauchy = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    radius = min(max(radius, 1e-3), cauchy)
    angles = 2 * np.pi * (np.arange(n) + 0.25) / n + rng.uniform(-0.1, 0.1, n) / n
    centre = -c[-2] / (n * c[-1])
    return centre + radius * np.exp(1j * angles)


def find_roots(
    poly: Polynomial,
    seed: int = 0,
    tol: float = 1e-15,
    max_iter: int = 500,
    newton_steps: int = 2,
    allow_high_degree: bool = False,
    evaluator: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] | None = None,
) -> RootSet:
    """All complex zeros (with multiplicity) of a nonzero polynomial of degree >= 1.

    ``evaluator(z)`` may supply ``(f(z), f'(z))`` for any function with the
    same zeros as ``poly`` (e.g. the recurrence values of an associated
    polynomial); otherwise the coefficients are evaluated by Horner's rule.
    Exact zero roots are split off first and are not passed to the evaluator.
    Residuals are always ``|poly(r)|`` by Horner.
    """
    c = np.array([complex(x) for x in poly.coeffs], dtype=complex)
    n = len(c) - 1
    if n < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    if n > MAX_DEGREE:
        if not allow_high_degree:
            raise ValueError(
                f"degree {n} exceeds {MAX_DEGREE}; float coefficients are too inaccurate"
            )
        warnings.warn(f"root finding at degree {n}: accuracy is not guaranteed", stacklevel=2)
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    c_red = c[k0:] / c[-1]
    m = len(c_red) - 1
    z = np.zeros(0, dtype=complex)
    converged, it = True, 0
    if m:
        if evaluator is None:
            def ev(x):
                return _horner_with_derivative(c_red, x)
        elif k0:
            def ev(x):
                # divide out x^k0: (f/x^k)' = (f' - k f/x) / x^k
                f, df = evaluator(x)
                xk = x ** k0
                return f / xk, (df - k0 * f / x) / xk
        else:
            ev = evaluator
        z = _initial_guesses(c_red, np.random.default_rng(seed))
        abs_c = np.abs(c_red).astype(complex)
        done = np.zeros(m, dtype=bool)
        for it in range(1, max_iter + 1):
            p, dp = ev(z)
            done |= p == 0
            if evaluator is None:
                # rounding level of Horner: eps * sum |c_k| |z|^k
                noise = np.abs(_horner_with_derivative(abs_c, np.abs(z).astype(complex))[0])
                done |= np.abs(p) <= 4 * np.finfo(float).eps * noise
            if done.all():
                break
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                ratio = np.where(dp != 0, p / dp, p)
                step = ratio / (1.0 - ratio * inv.sum(axis=1))
            step = np.where(np.isfinite(step) & ~done, step, 0.0)
            z = z - step
            done |= np.abs(step) <= tol * (1.0 + np.abs(z))
        converged = bool(done.all())
        for _ in range(newton_steps):
            p, dp = ev(z)
            with np.errstate(divide="ignore", invalid="ignore"):
                trial = z - p / dp
            trial = np.where(np.isfinite(trial), trial, z)
            pt, _ = ev(trial)
            z = np.where(np.abs(pt) < np.abs(p), trial, z)
        if np.all(c_red.imag == 0):
            # real coefficients: drop rounding-level imaginary parts when that
            # does not make the residual worse
            near = np.abs(z.imag) <= 8 * np.finfo(float).eps * (1.0 + np.abs(z))
            snapped = z.real.astype(complex)
            p, _ = ev(z)
            ps, _ = ev(snapped)
            z = np.where(near & (np.abs(ps) <= np.abs(p)), snapped, z)
    roots = np.concatenate([np.zeros(k0, dtype=complex), z])
    residuals = np.abs(_horner_with_derivative(c, roots)[0])
    if not converged:
        log.warning("Aberth iteration did not converge for degree %d after %d steps", n, it)
    return RootSet(n=n, roots=roots, residuals=residuals, converged=converged, iterations=it)


@dataclass
class RealnessRow:
    n: int
    max_imag_abs: float
    all_real: bool
    min_gap: float
    max_residual: float
    converged: bool
    roots: list = field(default_factory=list, repr=False)


def realness_report(
    pencil: JacobiPencil,
    n_max: int,
    imag_tol: float | None = None,
    seed: int = 0,
    allow_high_degree: bool = False,
) -> list[RealnessRow]:
    """Per-degree summary of how far the zeros of ``p_1..p_{n_max}`` are from the real line.

    A root counts as real when ``|Im r| <= imag_tol * (1 + |r|)``
    (default ``imag_tol = 1e-8``).
    """
    if imag_tol is None:
        imag_tol = 1e-8
    system = generate(pencil, n_max)
    fp = float_pencil(pencil)
    rows = []
    for n in range(1, n_max + 1):
        rs = find_roots(
            system[n],
            seed=seed,
            allow_high_degree=allow_high_degree,
            evaluator=lambda z, n=n: generate_values_and_derivatives(fp, n, z)[n],
        )
        r = rs.sorted()
        real = bool(np.all(np.abs(r.imag) <= imag_tol * (1.0 + np.abs(r))))
        if n > 1:
            d = np.abs(r[:, None] - r[None, :])
            np.fill_diagonal(d, np.inf)
            gap = float(d.min())
        else:
            gap = math.inf
        rows.append(
            RealnessRow(
                n=n,
                max_imag_abs=rs.max_imag_abs,
                all_real=real,
                min_gap=gap,
                max_residual=float(rs.residuals.max()),
                converged=rs.converged,
                roots=list(r),
            )
        )
    return rows


def float_pencil(p: JacobiPencil) -> JacobiPencil:
    """Copy of ``p`` with every entry converted to float."""
    if p.field is F64:
        return p
    conv = {k: tuple(float(x) for x in getattr(p, k)) for k in ("a", "b", "alpha_seq", "beta_seq", "gamma_seq")}
    return JacobiPencil(
        alpha=float(p.alpha), beta=float(p.beta), field=F64, name=p.name, origin=p.origin, **conv
    )


def _num(x: float) -> str:
    return repr(float(x))


def rootsets_to_csv(rows: list[RealnessRow], residual_of=None) -> str:
    """``zeros.csv``: columns ``n, re, im, residual``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "re", "im", "residual"])
    for row in rows:
        for k, z in enumerate(row.roots):
            res = residual_of(row.n, z) if residual_of else float("nan")
            w.writerow([row.n, _num(z.real), _num(z.imag), _num(res)])
    return buf.getvalue()


def rows_to_csv(rows: list[RealnessRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "max_imag_abs", "all_real", "min_gap", "max_residual", "converged"])
    for r in rows:
        w.writerow([r.n, _num(r.max_imag_abs), int(r.all_real), _num(r.min_gap), _num(r.max_residual), int(r.converged)])
    return buf.getvalue()


def rows_to_json(rows: list[RealnessRow], imag_tol: float = 1e-8) -> str:
    def fin(x):
        return x if math.isfinite(x) else None

    return json.dumps(
        {
            "imag_tol": imag_tol,
            "all_degrees_real": all(r.all_real for r in rows),
            "degrees": [
                {
                    "n": r.n,
                    "max_imag_abs": r.max_imag_abs,
                    "all_real": r.all_real,
                    "min_gap": fin(r.min_gap),
                    "max_residual": r.max_residual,
                    "converged": r.converged,
                }
                for r in rows
            ],
        },
        indent=2,
        sort_keys=True,
    )
