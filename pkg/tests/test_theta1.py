from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from jacobi_pencils import theta1 as th
from jacobi_pencils.numeric import F64, ComplexOf, QuadExt
from jacobi_pencils.pencil import theta1
from jacobi_pencils.recurrence import generate_values

R2 = math.sqrt(2)
EXCLUDED = (-2.0, -1 + R2, -1 - R2)


def admissible(rng, radius=3.0, guard=1e-3):
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(z) <= radius and min(abs(z - e) for e in EXCLUDED) > guard:
            return z


def test_chebyshev_basics():
    assert th.chebyshev("T", 2, 0) == -1
    assert th.chebyshev("U", 1, Fraction(1, 2)) == 1
    assert th.chebyshev("U", -1, 0.7) == 0
    assert th.chebyshev("T", 2, Fraction(1, 3)) == Fraction(-7, 9)
    with pytest.raises(ValueError):
        th.chebyshev("T", -1, 0.5)


@pytest.mark.parametrize("n", [0, 1, 5, 10, 17])
def test_chebyshev_trig_agreement(n):
    for t in (0.3, -0.77, 0.999):
        assert abs(th.chebyshev("T", n, t) - th.chebyshev_trig("T", n, t)) <= 1e-12
        assert abs(th.chebyshev("U", n, t) - th.chebyshev_trig("U", n, t)) <= 1e-11


@given(st.floats(min_value=-1, max_value=1), st.integers(0, 20))
def test_chebyshev_trig_identities(t, n):
    theta = math.acos(t)
    assert abs(th.chebyshev_trig("T", n, t) - math.cos(n * theta)) <= 1e-12
    if 1e-3 < theta < math.pi - 1e-3:
        assert abs(th.chebyshev_trig("U", n, t) * math.sin(theta) - math.sin((n + 1) * theta)) <= 1e-12


def test_closed_form_examples():
    assert th.chebyshev_closed_form(0, 0.25) == pytest.approx(1.0)
    for t in (-0.9, 0.1, 0.6):
        assert th.chebyshev_closed_form(1, t) == pytest.approx(2 * t)
    assert th.chebyshev_closed_form(2, Fraction(1, 2)) == -1
    assert th.chebyshev_closed_form(2, 0.5) == pytest.approx(-1.0, abs=1e-14)


def test_closed_form_exact_matches_recurrence():
    p = theta1(12)
    r2 = QuadExt(0, 1)
    for t in (Fraction(1, 3), Fraction(-9, 10), QuadExt(Fraction(1, 5), Fraction(1, 7))):
        lam = r2 * t - 1
        vals = generate_values(p, 10, lam)
        for n in range(11):
            assert th.chebyshev_closed_form(n, t) == vals[n]


def test_closed_form_domain():
    for t in (-1.0, 1.0, 1.5, -1 / R2, -1 / R2 + 1e-10):
        with pytest.raises(th.DomainError):
            th.chebyshev_closed_form(3, t)
    with pytest.raises(th.DomainError):
        th.chebyshev_closed_form(3, -QuadExt(0, Fraction(1, 2)))


def test_representation_examples():
    assert th.root_representation(0, 0.3 + 0.2j) == pytest.approx(1.0)
    assert th.root_representation(2, 1.0) == pytest.approx(6.0, abs=1e-12)
    # exact at lam = 1: s = sqrt2
    assert th.root_representation(2, QuadExt(1)) == 6
    assert th.root_representation(3, QuadExt(1)) == QuadExt(0, 11)


def test_representation_excluded():
    for x in EXCLUDED:
        with pytest.raises(th.DomainError):
            th.root_representation(4, x)


def test_branch_flip():
    rng = random.Random(7)
    for _ in range(50):
        lam = admissible(rng)
        for n in range(31):
            a = th.root_representation(n, lam, 1)
            b = th.root_representation(n, lam, -1)
            assert abs(a - b) <= 1e-12 * max(abs(a), 1e-300)


def test_representation_vs_recurrence_complex():
    rng = random.Random(3)
    samples = [admissible(rng, 1.5, 0.05) for _ in range(20)]
    rep = th.crosscheck_complex(25, samples, tol=1e-8)
    assert rep.passed, rep.max_deviation


def test_quartic_roots_vieta():
    rng = random.Random(11)
    for _ in range(100):
        lam = admissible(rng)
        w1, w2, w3, w4 = th.quartic_roots(lam).roots
        assert abs(w1 * w2 - 1) < 1e-12 and abs(w1 + w2 + R2) < 1e-12
        assert abs(w3 * w4 - 1) < 1e-10
        for w in (w1, w2, w3, w4):
            assert abs(th.quartic_value(w, lam)) <= 1e-10 * (1 + abs(lam)) ** 4


def test_quartic_exact_at_zero():
    qr = th.quartic_roots(QuadExt(0), s=ComplexOf(QuadExt(0), QuadExt(1)))
    for w in qr.roots:
        assert w ** 4 + 1 == 0
        assert th.quartic_value(w, ComplexOf(QuadExt(0), QuadExt(0))) == 0


def test_quartic_t_substitution():
    qr = th.quartic_roots(0.5)
    assert qr.t == pytest.approx(1.5 / R2)


def test_factorization_identity():
    left, right = th.factorization_identity()
    assert left == right
    r2 = QuadExt(0, 1)
    assert right == {(4, 0): 1, (3, 1): -r2, (2, 1): QuadExt(-2), (1, 1): -r2, (0, 0): 1}


def test_bivariate_random_factor():
    # product of random exact factors expands consistently with evaluation
    rng = random.Random(5)
    f = {(i, j): QuadExt(rng.randint(-3, 3), rng.randint(-3, 3)) for i in range(3) for j in range(2)}
    g = {(i, j): QuadExt(rng.randint(-3, 3), rng.randint(-3, 3)) for i in range(2) for j in range(3)}
    h = th.bivariate_mul(f, g)
    w, x = Fraction(2, 3), Fraction(-5, 7)

    def ev(poly):
        return sum((c * w ** i * x ** j for (i, j), c in poly.items()), QuadExt(0))

    assert ev(h) == ev(f) * ev(g)


def test_system_at_one():
    s = th.coefficient_system(1.0)
    assert s.s == pytest.approx(R2)
    assert s.det_formula == pytest.approx(-72 * R2 * 1j)
    assert s.det_relative_error <= 1e-10
    C = s.coefficients
    assert abs(sum(C) - 1) < 1e-14
    assert abs(C[0] + C[1]) < 1e-14 and abs(C[2] + C[3] - 1) < 1e-14


def test_system_random():
    rng = random.Random(2024)
    for _ in range(50):
        s = th.coefficient_system(admissible(rng))
        assert s.det_relative_error <= 1e-10
        assert s.residual <= 1e-10
        assert max(abs(a - b) for a, b in zip(s.solved, s.coefficients)) <= 1e-8 * max(1, max(map(abs, s.coefficients)))


def test_system_excluded():
    with pytest.raises(th.DomainError):
        th.coefficient_system(-2)


def test_general_solution_matches_recurrence():
    pf = theta1(22, F64)
    lam = 0.4 - 0.3j
    vals = generate_values(pf, 20, lam)
    for n in range(21):
        assert abs(th.general_solution(n, lam) - vals[n]) <= 1e-9 * max(1, abs(vals[n]))


def test_characteristic_quartic_from_pencil():
    q = th.characteristic_quartic(theta1(6))
    r2 = QuadExt(0, 1)
    assert q[(4, 0)] == 1 and q[(3, 1)] == -r2 and q[(2, 1)] == -2


def test_crosscheck_three_way():
    rep = th.crosscheck_theta1(30, th.default_grid(64))
    assert rep.passed
    assert rep.max_deviation <= 1e-9
    assert rep.details["grid_points"] == 64


def test_default_grid_avoids_singular_point():
    g = th.default_grid(64)
    assert all(-1 < t < 1 for t in g)
    assert min(abs(t + 1 / R2) for t in g) > 1e-3
