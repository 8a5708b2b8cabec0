"""Risk functional, lower bounds, eigenphase readout."""

from fractions import Fraction

import numpy as np
import pytest

import helpers
from qnfl_lab import (
    SeededRng,
    UnitaryOperator,
    bound_average,
    bound_fixed,
    bound_lindep,
    bound_orthogonal,
    eigenphase,
    haar_unitary,
    risk,
)


def test_risk_of_self_is_zero():
    u = haar_unitary(8, SeededRng(3))
    assert abs(risk(u, u).risk) < 1e-12


def test_risk_single_qubit_fixture():
    report = risk(helpers.HADAMARD, helpers.H_IMPOSTOR)
    assert abs(report.risk - 2.0 / 3.0) < 1e-12
    assert report.abs_trace < 1e-12


def test_risk_two_qubit_fixture():
    report = risk(helpers.ZZ, helpers.ZZ_IMPOSTOR)
    assert abs(report.risk - 0.6) < 1e-12
    assert abs(report.abs_trace - 2.0) < 1e-12


def test_risk_report_internal_consistency():
    rng = SeededRng(5)
    for _ in range(10):
        u = haar_unitary(4, rng)
        v = haar_unitary(4, rng)
        rep = risk(u, v)
        recomputed = 1.0 - (rep.dim + rep.abs_trace**2) / (rep.dim * (rep.dim + 1))
        assert abs(rep.risk - recomputed) < 1e-12
        assert 0.0 <= rep.abs_trace <= rep.dim


def test_risk_invariant_under_global_phase():
    rng = SeededRng(7)
    u = haar_unitary(8, rng)
    for alpha in (0.3, 1.2, -2.8):
        v = UnitaryOperator(np.exp(1j * alpha) * u.entries)
        assert abs(risk(u, v).risk) < 1e-12


def test_risk_dimension_mismatch():
    with pytest.raises(ValueError):
        risk(helpers.HADAMARD, helpers.ZZ)


# Frozen from exact rational evaluation of the clamped formulas.
BOUND_FIXTURES = [
    (bound_fixed, (2, 1, 1), Fraction(1, 3)),
    (bound_fixed, (64, 1, 1), Fraction(4094, 4160)),
    (bound_fixed, (64, 64, 1), Fraction(0)),
    (bound_average, (64, 2, 16), Fraction(3071, 4160)),
    (bound_average, (8, 8, 1), Fraction(0)),
    (bound_orthogonal, (64, [8] * 8), Fraction(3583, 4160)),
    (bound_orthogonal, (64, [1] * 64), Fraction(4031, 4160)),
    (bound_orthogonal, (8, [8]), Fraction(0)),
    (bound_lindep, (64, 2), Fraction(4091, 4160)),
    (bound_lindep, (8, 8), Fraction(0)),
]


@pytest.mark.parametrize("fn,args,expect", BOUND_FIXTURES)
def test_bound_fixtures(fn, args, expect):
    assert abs(fn(*args) - float(expect)) < 1e-9


def test_average_bound_matches_fixed_on_integers():
    for d, r, t in [(8, 1, 1), (8, 2, 3), (64, 4, 2), (16, 16, 1)]:
        assert bound_average(d, r, t) == bound_fixed(d, r, t)


def test_bound_fixed_monotone_in_rank_and_samples():
    for t in (1, 2, 4):
        values = [bound_fixed(64, r, t) for r in range(1, 65)]
        assert all(a >= b for a, b in zip(values, values[1:]))
    for r in (1, 2, 8):
        values = [bound_fixed(64, r, t) for t in range(1, 65)]
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_bounds_are_clamped_to_zero():
    assert bound_fixed(64, 64, 1) == 0.0
    assert bound_average(8, 7.9, 2) == 0.0
    assert bound_lindep(4, 4) == 0.0


def test_orthogonal_bound_equal_ranks_closed_form():
    for d, r, t in [(8, 2, 4), (64, 8, 8), (16, 1, 16)]:
        expect = max(0.0, 1.0 - (r * r * t + d + 1) / (d * (d + 1)))
        assert bound_orthogonal(d, [r] * t) == expect


def test_lindep_bound_ignores_sample_count():
    # Only the span rank enters; extra samples change nothing.
    assert bound_lindep(8, 2) == bound_orthogonal(8, [2])


def test_eigenphase_of_self():
    u = haar_unitary(4, SeededRng(11))
    psi = helpers.random_state(4, 2, np.random.default_rng(13))
    theta, magnitude = eigenphase(u, u, psi)
    assert abs(theta) < 1e-12
    assert abs(magnitude - 1.0) < 1e-12


def test_eigenphase_two_qubit_fixture():
    _, psi2 = helpers.two_qubit_inputs()
    theta, magnitude = eigenphase(helpers.ZZ, helpers.ZZ_IMPOSTOR, psi2)
    assert abs(theta) < 1e-12
    assert abs(magnitude - 1.0) < 1e-12


def test_eigenphase_single_qubit_fixture_is_pi():
    _, one_one = helpers.single_qubit_inputs()
    theta, _ = eigenphase(helpers.HADAMARD, helpers.H_IMPOSTOR, one_one)
    assert abs(theta - np.pi) < 1e-12


def test_eigenphase_rejects_vanishing_magnitude():
    zero, one = helpers.single_qubit_inputs()
    not_x = UnitaryOperator(np.array([[0, 1], [1, 0]], dtype=complex))
    with pytest.raises(ValueError):
        eigenphase(UnitaryOperator(np.eye(2)), not_x, zero)
