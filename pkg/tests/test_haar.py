"""Reproducible randomness and Haar statistics."""

import numpy as np
import pytest

from qnfl_lab import SeededRng, derive_seed, haar_unitary, random_schmidt_coeffs


def test_same_seed_same_stream():
    a = haar_unitary(8, SeededRng(123))
    b = haar_unitary(8, SeededRng(123))
    assert np.array_equal(a.entries, b.entries)


def test_child_streams_are_distinct():
    rng = SeededRng(123)
    a = haar_unitary(4, rng.child())
    b = haar_unitary(4, rng.child())
    assert not np.allclose(a.entries, b.entries)


def test_keyed_children_are_reproducible():
    a = haar_unitary(4, SeededRng(5).child(2, 7))
    b = haar_unitary(4, SeededRng(5).child(2, 7))
    c = haar_unitary(4, SeededRng(5).child(2, 8))
    assert np.array_equal(a.entries, b.entries)
    assert not np.allclose(a.entries, c.entries)


def test_derive_seed_is_stable_and_sensitive():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 2, 4)
    assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)


def test_u1_sample_is_unit_modulus():
    u = haar_unitary(1, SeededRng(7))
    assert u.entries.shape == (1, 1)
    assert abs(abs(u.entries[0, 0]) - 1.0) < 1e-12


@pytest.mark.parametrize("d", [2, 5, 8])
def test_sampled_matrices_are_unitary(d):
    rng = SeededRng(17)
    for _ in range(20):
        u = haar_unitary(d, rng)
        defect = np.linalg.norm(u.entries.conj().T @ u.entries - np.eye(d))
        assert defect < 1e-9 * d


def test_trace_moments_are_translation_invariant():
    # Tr[WU] must match Tr[U] in its first two moments when U is Haar.
    rng = SeededRng(19)
    w = haar_unitary(8, rng).entries
    n = 2000
    plain = np.empty(n, dtype=complex)
    rotated = np.empty(n, dtype=complex)
    for i in range(n):
        u = haar_unitary(8, rng).entries
        plain[i] = np.trace(u)
        rotated[i] = np.trace(w @ u)
    for series in (plain, rotated):
        # E Tr = 0 and E|Tr|^2 = 1 for Haar samples in any dimension.
        for part in (series.real, series.imag):
            assert abs(part.mean()) < 3 * part.std() / np.sqrt(n)
        sq = np.abs(series) ** 2
        assert abs(sq.mean() - 1.0) < 3 * sq.std() / np.sqrt(n)


def test_schmidt_coeffs_single_rank():
    assert np.array_equal(random_schmidt_coeffs(1, SeededRng(3)), [1.0])


def test_schmidt_coeffs_contract():
    rng = SeededRng(23)
    for r in (2, 3, 8, 64):
        c = random_schmidt_coeffs(r, rng)
        assert c.shape == (r,)
        assert abs(np.sum(c**2) - 1.0) < 1e-12
        assert np.all(np.diff(c) <= 1e-15)
        assert np.all(c > 0)


def test_schmidt_coeffs_floor_holds_at_high_rank():
    # The generator redraws until every weight clears the floor.
    rng = SeededRng(29)
    worst = min(random_schmidt_coeffs(64, rng).min() ** 2 for _ in range(10_000))
    assert worst >= 1e-6
