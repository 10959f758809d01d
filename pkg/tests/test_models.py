import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scqm.exceptions import DimensionError
from scqm.models import (MODEL_LABELS, CmsParams, ScqmParams, bosonic_cms, build_model, cms_exact_ground_energy,
                         fermion_operators, scqm_boson_fermion, scqm_boson_fermion_operators, scqm_exact_spectrum,
                         scqm_exact_ground_wavefunction, scqm_one_boson, scqm_one_boson_aop, supercharge_deviation,
                         susy_cms, susy_cms_exact_ground_wavefunction)
from scqm.validation import hermiticity_defect


def ground(h):
    return float(np.linalg.eigvalsh(h)[0])


def fd_reference(n, m=0.5, w=1.0, g=math.sqrt(2)):
    """Finite-difference SCQM Hamiltonian written out directly."""
    x = math.sqrt(1 / (2 * n)) * (2 * np.arange(1, n + 1) - (n + 1))
    spacing = x[1] - x[0]
    lap = (2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / spacing ** 2
    h_minus = lap + np.diag((m * w) ** 2 * x ** 2 + (g * g - g) / x ** 2) - (m * w + 2 * m * w * g) * np.eye(n)
    return h_minus / (2 * m)


def test_every_model_is_hermitian():
    for label in MODEL_LABELS:
        assert hermiticity_defect(build_model(label).matrix) <= 1e-12


def test_finite_difference_matches_direct_construction():
    h = scqm_one_boson(ScqmParams(), "finite_difference", 16)
    np.testing.assert_allclose(h.matrix, fd_reference(16), atol=1e-12)
    assert h.constant_shift == pytest.approx(-(0.5 + 2 * 0.5 * math.sqrt(2)))


# dense diagonalisation of the module's own matrices; these are the truncated
# (discrete) ground energies, which sit well away from the continuum value 0
@pytest.mark.parametrize("basis,expected", [
    ("finite_difference", 0.23761256),
    ("oscillator", -0.10806552),
    ("position", -0.06747678),
])
def test_one_boson_discrete_ground(basis, expected):
    assert ground(scqm_one_boson(ScqmParams(), basis, 16).matrix) == pytest.approx(expected, abs=1e-8)


def test_g_equal_one_is_a_shifted_oscillator():
    # g^2 - g = 0 leaves p^2 + x^2/4: full-line levels spaced by omega
    w = np.linalg.eigvalsh(scqm_one_boson(ScqmParams(g=1.0), "oscillator", 16).matrix)
    np.testing.assert_allclose(np.diff(w[:6]), 1.0, atol=1e-9)


def test_aop_table_value():
    assert ground(scqm_one_boson_aop(ScqmParams(), 16).matrix) == pytest.approx(0.001904019686, abs=1e-9)


@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(-2.0, 3.0), st.sampled_from([4, 8, 16]))
def test_aop_is_positive_semidefinite(m, w, g, dim):
    h = scqm_one_boson_aop(ScqmParams(m, w, g), dim).matrix
    assert np.linalg.eigvalsh(h)[0] >= -1e-12 * max(1.0, np.abs(h).max())


def test_aop_converges_with_dimension():
    errors = [abs(ground(scqm_one_boson_aop(ScqmParams(), d).matrix)) for d in (8, 16, 32)]
    assert errors[1] <= errors[0] + 1e-9 and errors[2] <= errors[1] + 1e-9


def test_aop_levels_match_continuum_spectrum():
    # the full-line grid carries every half-line level twice (x > 0 and x < 0)
    w = np.linalg.eigvalsh(scqm_one_boson_aop(ScqmParams(), 16).matrix)
    np.testing.assert_allclose(w[0::2][:4], scqm_exact_spectrum(ScqmParams(), 4), atol=3e-2)


def test_boson_fermion_shape_and_ground():
    h = scqm_boson_fermion(ScqmParams(), 16)
    assert h.dim == 32 and h.n_qubits == 5
    assert ground(h.matrix) == pytest.approx(0.00190358, abs=1e-6)
    assert ground(h.matrix) == pytest.approx(ground(scqm_one_boson_aop(ScqmParams(), 16).matrix), abs=1e-5)
    assert h.metadata["extension"] is False
    assert scqm_boson_fermion(ScqmParams(g=1.0), 8).metadata["extension"] is True


def test_boson_fermion_sectors():
    q, c = scqm_boson_fermion_operators(ScqmParams(), 16)
    assert np.abs(c @ c).max() == 0
    h = scqm_boson_fermion(ScqmParams(), 16).matrix
    # fermion occupation is qubit 0; H has no matrix elements between sectors
    assert np.abs(h[0::2, 1::2]).max() == 0
    a = scqm_one_boson_aop(ScqmParams(), 16)
    sectors = np.sort(np.r_[np.linalg.eigvalsh(h[0::2, 0::2]), np.linalg.eigvalsh(h[1::2, 1::2])])
    np.testing.assert_allclose(np.linalg.eigvalsh(h), sectors, atol=1e-10)
    np.testing.assert_allclose(np.linalg.eigvalsh(h[1::2, 1::2]), np.linalg.eigvalsh(a.matrix), atol=1e-10)


def cms_reference(n=4, w=1.0, g=math.sqrt(2)):
    """Bosonic CMS with the coincident points of (x_i - x_j)^-2 mapped to 0."""
    grid = math.sqrt(2 * math.pi / (4 * n)) * (2 * np.arange(1, n + 1) - (n + 1))
    c = 2 * np.arange(1, n + 1) - (n + 1)
    f = np.exp(2j * math.pi * np.outer(c, c) / (4 * n)) / math.sqrt(n)
    p = f.conj().T @ np.diag(grid) @ f
    p = (p + p.conj().T) / 2
    eye = np.eye(n)
    ps = [np.kron(np.kron(p if i == 0 else eye, p if i == 1 else eye), p if i == 2 else eye) for i in range(3)]
    coords = np.array(list(itertools.product(grid, repeat=3)))
    pot = np.zeros(len(coords))
    for i, j in itertools.combinations(range(3), 2):
        d = coords[:, i] - coords[:, j]
        inv = np.zeros_like(d)
        inv[d != 0] = 1 / d[d != 0] ** 2
        pot += w * w / 6 * d ** 2 + g * g * inv
    return 0.5 * sum(q @ q for q in ps) + np.diag(pot)


def test_bosonic_cms_matches_direct_construction():
    h = bosonic_cms(CmsParams())
    assert h.dim == 64 and h.n_qubits == 6
    np.testing.assert_allclose(h.matrix, cms_reference(), atol=1e-12)
    assert h.metadata["coincident_entries"] == 3 * 16


def test_bosonic_cms_discrete_grounds():
    assert ground(bosonic_cms(CmsParams()).matrix) == pytest.approx(2.2423307494, abs=1e-8)
    assert ground(bosonic_cms(CmsParams(coincident="penalty")).matrix) == pytest.approx(6.1268680, abs=1e-6)
    # g = 0: two relative oscillators of frequency omega plus a nearly free centre of mass
    assert ground(bosonic_cms(CmsParams(g=0.0)).matrix) == pytest.approx(1.1227996, abs=1e-6)


def test_cms_exact_ground_energy():
    assert cms_exact_ground_energy(3, 1.0, math.sqrt(2)) == pytest.approx(7.0, abs=1e-12)
    assert cms_exact_ground_energy(1, 3.0, 0.7) == 0.0
    assert cms_exact_ground_energy(3, 1.0, 0.0) == pytest.approx(4.0)


def test_cms_params_validation():
    with pytest.raises(ValueError):
        CmsParams(n_particles=4)
    with pytest.raises(DimensionError):
        CmsParams(per_boson_dim=6)
    with pytest.raises(ValueError):
        CmsParams(coincident="zero")


def test_fermion_algebra_nine_qubits():
    thetas = fermion_operators(3, boson_dim=64)
    eye = np.eye(512)
    for i, j in itertools.product(range(3), repeat=2):
        ti, tj = thetas[i], thetas[j]
        assert np.abs(ti @ tj.conj().T + tj.conj().T @ ti - (i == j) * eye).max() <= 1e-15
        assert np.abs(ti @ tj + tj @ ti).max() <= 1e-15


def test_susy_cms_shape_and_ground():
    h = susy_cms(CmsParams())
    assert h.dim == 512 and h.n_qubits == 9
    assert h.constant_shift == pytest.approx(-1.5 * (2 * math.sqrt(2) - 1))
    assert ground(h.matrix) == pytest.approx(-0.6837908412, abs=1e-8)


def test_susy_cms_zero_fermion_sector_is_bosonic_like():
    # with no fermions the theta terms vanish: H = 1/2 sum(p^2 + w^2 x^2) + g(g-1) sum x_ij^-2 + shift
    h = susy_cms(CmsParams()).matrix
    block = h[0::8, 0::8]
    assert np.abs(block - block.conj().T).max() < 1e-12
    assert np.abs(h[0::8, 1::8]).max() == 0


def test_supercharge_deviation_is_reported():
    assert np.isfinite(supercharge_deviation(CmsParams()))


def test_exact_spectrum():
    np.testing.assert_array_equal(scqm_exact_spectrum(ScqmParams(), 3), [0, 2, 4])
    np.testing.assert_array_equal(scqm_exact_spectrum(ScqmParams(), 1), [0])
    with pytest.raises(ValueError):
        scqm_exact_spectrum(ScqmParams(g=0.2), 3)


def test_scqm_ground_wavefunction():
    p = ScqmParams()
    assert scqm_exact_ground_wavefunction(p, 1.0) == pytest.approx(0.5 * math.exp(-0.25), abs=1e-12)
    assert scqm_exact_ground_wavefunction(p, 1e-9) < 1e-12
    xs = np.linspace(0.5, 3.0, 25001)
    peak = xs[np.argmax(scqm_exact_ground_wavefunction(p, xs))]
    assert peak == pytest.approx(math.sqrt(2 * math.sqrt(2)), abs=1e-4)
    with pytest.raises(ValueError):
        scqm_exact_ground_wavefunction(p, 0.0)


def test_scqm_ground_wavefunction_solves_the_equation():
    # H_- psi = -psi'' + (m^2 w^2 x^2 + (g^2 - g)/x^2 - m w - 2 m w g) psi vanishes
    p = ScqmParams()
    x = np.linspace(0.5, 4.0, 2001)
    h = x[1] - x[0]
    psi = scqm_exact_ground_wavefunction(p, x)
    d2 = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / h ** 2
    xm = x[1:-1]
    m, w, g = p.m, p.omega, p.g
    h_minus = -d2 + ((m * w) ** 2 * xm ** 2 + (g * g - g) / xm ** 2 - (m * w + 2 * m * w * g)) * psi[1:-1]
    assert np.abs(h_minus).max() < 1e-5


def test_susy_cms_wavefunction():
    p = CmsParams()
    assert susy_cms_exact_ground_wavefunction(p, [1.0, 0.0, -1.0]) == pytest.approx(2 ** math.sqrt(2) * math.exp(-1))
    v = susy_cms_exact_ground_wavefunction(p, [0.3, -0.2, 1.1])
    for perm in itertools.permutations([0.3, -0.2, 1.1]):
        assert susy_cms_exact_ground_wavefunction(p, perm) == pytest.approx(v)
        assert susy_cms_exact_ground_wavefunction(p, [-c for c in perm]) == pytest.approx(v)
    with pytest.raises(ValueError):
        susy_cms_exact_ground_wavefunction(p, [0.5, 0.5, 1.0])


def test_build_model_dispatch():
    assert build_model("scqm_basis", basis="position", dim=8).basis == "position"
    assert build_model("cms_bosonic", per_boson_dim=2).dim == 8
    with pytest.raises(ValueError):
        build_model("nope")
    with pytest.raises(TypeError):
        build_model("scqm_aop", basis="position")
