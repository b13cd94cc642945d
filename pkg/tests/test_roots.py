from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from jacobi_pencils.numeric import F64
from jacobi_pencils.pencil import from_oprl, theta1
from jacobi_pencils.recurrence import Polynomial, generate
from jacobi_pencils.roots import find_roots, realness_report, rows_to_csv, rows_to_json, rootsets_to_csv


def _close_sets(got, expected, tol):
    got = sorted(got, key=lambda z: (z.real, z.imag))
    expected = sorted(expected, key=lambda z: (z.real, z.imag))
    return len(got) == len(expected) and all(abs(a - b) <= tol for a, b in zip(got, expected))


def test_theta1_p2_p3(th1):
    s = generate(th1, 3)
    assert _close_sets(find_roots(s[2]).roots, [0, -2], 1e-10)
    r3 = math.sqrt(3)
    assert _close_sets(find_roots(s[3]).roots, [0, (-3 + r3) / 2, (-3 - r3) / 2], 1e-10)


def test_complex_pair():
    rs = find_roots(Polynomial([1.0, 0.0, 1.0]))
    assert _close_sets(rs.roots, [1j, -1j], 1e-12)
    assert rs.converged


def test_multiple_root():
    rs = find_roots(Polynomial([1.0, -3.0, 3.0, -1.0]))  # (x-1)^3
    assert np.all(np.abs(rs.roots - 1) < 1e-4)


def test_deterministic_given_seed(th1):
    q = generate(th1, 12)[12]
    a = find_roots(q, seed=4).roots
    b = find_roots(q, seed=4).roots
    assert np.array_equal(a, b)


def test_degree_checks():
    with pytest.raises(ValueError):
        find_roots(Polynomial([3.0]))
    with pytest.raises(ValueError):
        find_roots(Polynomial([1.0] * 70))
    with pytest.warns(UserWarning):
        find_roots(Polynomial([1.0] * 62), allow_high_degree=True)


def test_realness_theta1_up_to_60():
    rows = realness_report(theta1(62), 60)
    assert [r.n for r in rows] == list(range(1, 61))
    s = generate(theta1(62), 60)
    for r in rows:
        assert len(r.roots) == r.n
        c = s[r.n].map(float)
        cmax = max(abs(x) for x in c.coeffs)
        for z in r.roots:
            assert abs(c(complex(z))) <= 1e-8 * cmax * (1 + abs(z)) ** r.n
    assert rows[1].max_imag_abs == 0.0 and rows[1].all_real
    assert rows[2].all_real


def test_coefficient_reconstruction():
    rows = realness_report(theta1(42), 40)
    s = generate(theta1(42), 40)
    for r in rows:
        c = np.array([float(x) for x in s[r.n].coeffs])
        monic = c / c[-1]
        rebuilt = np.poly(np.array(r.roots))[::-1].real
        scale = np.maximum(np.abs(monic), 1.0)
        assert np.max(np.abs(rebuilt - monic) / scale) <= 1e-7, r.n


def test_classical_zeros_real():
    p = from_oprl([0.5] * 24, [0.0] * 24, F64)
    rows = realness_report(p, 20)
    assert all(r.all_real for r in rows)
    # Chebyshev U_n zeros cos(k pi/(n+1))
    expected = [math.cos(k * math.pi / 21) for k in range(1, 21)]
    got = sorted(z.real for z in rows[-1].roots)
    assert np.allclose(got, sorted(expected), atol=1e-10)


def test_emitters_well_formed():
    rows = realness_report(theta1(8), 6)
    table = list(csv.reader(io.StringIO(rows_to_csv(rows))))
    assert table[0][0] == "n" and len(table) == 7
    z = list(csv.reader(io.StringIO(rootsets_to_csv(rows, lambda n, r: 0.0))))
    assert z[0] == ["n", "re", "im", "residual"] and len(z) == 1 + sum(range(1, 7))
    doc = json.loads(rows_to_json(rows))
    assert doc["imag_tol"] == 1e-8 and len(doc["degrees"]) == 6
    assert isinstance(doc["all_degrees_real"], bool)
    assert doc["degrees"][0]["min_gap"] is None
