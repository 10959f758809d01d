import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scqm.bases import (BasisKind, finite_difference_basis, ladder_operators, make_basis, oscillator_basis,
                        position_basis, sylvester_matrix)
from scqm.exceptions import BasisError, DimensionError
from scqm.models import ScqmParams, scqm_one_boson_aop

even_dims = st.sampled_from([2, 4, 8, 16, 32])


def test_oscillator_two_by_two():
    b = oscillator_basis(2)
    np.testing.assert_allclose(b.x, np.array([[0, 1], [1, 0]]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(b.p, 1j * np.array([[0, -1], [1, 0]]) / math.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("n", [4, 6, 16])
def test_oscillator_commutator_corner_defect(n):
    b = oscillator_basis(n)
    c = b.x @ b.p - b.p @ b.x
    expected = 1j * np.eye(n)
    expected[-1, -1] = -1j * (n - 1)
    np.testing.assert_allclose(c, expected, atol=1e-12)


@pytest.mark.parametrize("n", [6, 16])
def test_oscillator_number_spectrum(n):
    b = oscillator_basis(n)
    w = np.linalg.eigvalsh(b.x @ b.x + b.p @ b.p)
    expected = np.sort(np.r_[2 * np.arange(n - 1) + 1, n - 1])
    np.testing.assert_allclose(w, expected, atol=1e-10)


def test_oscillator_length_scaling_keeps_commutator():
    b = oscillator_basis(8, length=2.0)
    ref = oscillator_basis(8)
    np.testing.assert_allclose(b.x, 2 * ref.x)
    np.testing.assert_allclose(b.x @ b.p - b.p @ b.x, ref.x @ ref.p - ref.p @ ref.x, atol=1e-13)


def test_position_four_points():
    b = position_basis(4)
    unit = math.sqrt(math.pi / 2)
    np.testing.assert_allclose(b.grid, [-1.5 * unit, -0.5 * unit, 0.5 * unit, 1.5 * unit], atol=1e-15)


@given(even_dims)
def test_position_basis_invariants(n):
    b = position_basis(n)
    f = b.sylvester
    assert np.abs(f.conj().T @ f - np.eye(n)).max() <= 1e-12
    assert abs(np.trace(b.x)) <= 1e-12
    assert np.all(np.diff(b.grid) > 0) and np.all(b.grid != 0)
    for m in (b.x, b.p):
        assert np.abs(m - m.conj().T).max() <= 1e-12
    np.testing.assert_allclose(np.sort(b.grid), -np.sort(b.grid)[::-1], atol=1e-12)


def test_sylvester_entry_convention():
    f = sylvester_matrix(4)
    c = 2 * np.arange(1, 5) - 5
    assert abs(f[0, 3] - np.exp(2j * math.pi * c[0] * c[3] / 16) / 2) < 1e-15


@pytest.mark.parametrize("kind", [BasisKind.OSCILLATOR, BasisKind.POSITION])
def test_low_lying_number_spectrum_matches_odd_integers(kind):
    b = make_basis(kind, 16)
    w = np.linalg.eigvalsh(b.x @ b.x + b.p @ b.p)[:4]
    np.testing.assert_allclose(w, [1, 3, 5, 7], rtol=0.05)


def test_finite_difference_four():
    b = finite_difference_basis(4)
    tri = 2 * np.eye(4) - np.eye(4, k=1) - np.eye(4, k=-1)
    np.testing.assert_allclose(b.p_squared, 2 * tri)


@given(even_dims)
def test_finite_difference_invariants(n):
    b = finite_difference_basis(n)
    w = np.linalg.eigvalsh(b.p_squared)
    assert w.min() >= -1e-12 and w.max() <= 2 * n + 1e-12
    spacing = np.diff(b.grid)
    np.testing.assert_allclose(1 / spacing ** 2, n / 2)
    assert np.all(b.grid != 0)
    with pytest.raises(BasisError):
        _ = b.p


@pytest.mark.parametrize("ctor", [position_basis, finite_difference_basis])
def test_odd_grids_rejected(ctor):
    with pytest.raises(BasisError):
        ctor(5)


def test_oscillator_requires_two_states():
    with pytest.raises(DimensionError):
        oscillator_basis(1)


def test_ladder_structure_and_free_limit():
    b = oscillator_basis(16, length=math.sqrt(2))
    a, a_dag = ladder_operators(b, 0.5, 1.0, 0.0)
    np.testing.assert_allclose(a_dag, a.conj().T, atol=1e-12)
    assert abs(np.linalg.eigvalsh(a_dag @ a)[0]) < 1e-10


def test_ladder_table_value():
    assert abs(np.linalg.eigvalsh(scqm_one_boson_aop(ScqmParams(), 16).matrix)[0] - 0.001904019686) < 1e-9


def test_ladder_rejects_other_bases():
    with pytest.raises(BasisError):
        ladder_operators(position_basis(4), 0.5, 1.0, 1.0)
    with pytest.raises(BasisError):
        ladder_operators(oscillator_basis(5), 0.5, 1.0, 1.0)
