import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborshear.coneshear import (
    ConeParams,
    ConeSystem,
    ConeValidationError,
    _cone_mask,
    angular_filters,
    cayley,
    cayley_identity_residual,
    cone_lowpass,
    cone_split,
    feasible_jmax,
    project,
    xi_adjoint,
    xi_map,
)
from gaborshear.filters1d import smith_barnwell_residual
from gaborshear.grid2d import FreqGrid, GridFn, random_packets
from gaborshear.groupshear import tightness_ratio
from gaborshear.lattice import frame_operator_bounds

FAMILIES = ["meyer", "shannon"]


def random_spectrum(N, seed):
    rng = np.random.default_rng(seed)
    return GridFn(FreqGrid(N), rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))


def interior_cone_input(N, cone, seed):
    """Random spectrum strictly inside a cone and off the unpaired Nyquist row and column."""
    F = random_spectrum(N, seed)
    keep = _cone_mask(F.grid, cone) == 1.0
    keep[0, :] = False
    keep[:, 0] = False
    return GridFn(F.grid, F.data * keep)


@settings(max_examples=50)
@given(st.floats(-1e3, 1e3))
def test_cayley_maps_reflection_to_negation(t):
    assert abs(cayley(t)) == pytest.approx(1.0)
    if abs(t) > 1e-6:
        assert cayley(-1.0 / t) == pytest.approx(-cayley(t), abs=1e-9)


@pytest.mark.parametrize("family", FAMILIES)
def test_cayley_identity(family):
    assert cayley_identity_residual(family) < 1e-12
    assert smith_barnwell_residual(cone_lowpass(family)) < 1e-12


@settings(max_examples=40)
@given(st.floats(-50, 50), st.floats(-50, 50), st.sampled_from(FAMILIES))
def test_angular_filters_power_complementary(a, b, family):
    hp, hm = angular_filters(np.array([a]), np.array([b]), family)
    assert abs(hp[0]) ** 2 + abs(hm[0]) ** 2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_cone_projections(family):
    F = random_spectrum(64, 0)
    h, v = cone_split(F, family)
    n = F.norm()
    assert np.linalg.norm(h.data + v.data - F.data) / n < 1e-12
    assert np.linalg.norm(project(h, "h", family).data - h.data) / n < 1e-12
    assert np.linalg.norm(project(v, "v", family).data - v.data) / n < 1e-12
    assert np.linalg.norm(project(v, "h", family).data) / n < 1e-12
    assert np.linalg.norm(project(h, "v", family).data) / n < 1e-12


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("cone", ["h", "v"])
def test_cone_isometry(family, cone):
    G = interior_cone_input(64, cone, 3)
    E = xi_map(G, cone, family)
    assert abs(E.norm() - G.norm()) / G.norm() < 1e-12
    np.testing.assert_allclose(xi_adjoint(E, cone, family).data, G.data, atol=1e-12)


def test_cone_mask_weights():
    grid = FreqGrid(8)
    h, v = _cone_mask(grid, "h"), _cone_mask(grid, "v")
    # Diagonals are split evenly; the origin only counts for the horizontal cone.
    assert h[4 + 2, 4 + 2] == v[4 + 2, 4 + 2] == 0.5
    assert h[4, 4] == 0.25 and v[4, 4] == 0.0
    assert h[4 + 1, 4 + 3] == 1.0 and v[4 + 1, 4 + 3] == 0.0


def test_feasible_jmax_frozen():
    assert feasible_jmax(64) == 2
    # (1/3) 16^4 < 512^2 / 8 < (1/3) 16^5.
    assert feasible_jmax(512) == 4
    assert feasible_jmax(1024, 0.0) == 4


def test_validation():
    with pytest.raises(ConeValidationError):
        ConeParams(N0=4, tau=4)
    with pytest.raises(ConeValidationError):
        ConeParams(N0=4, tau=3, epsilon=0.25)
    with pytest.raises(ConeValidationError):
        ConeSystem(ConeParams(jmax=9), 64)
    with pytest.raises(ConeValidationError):
        ConeSystem(ConeParams(), 63)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("N0,tau", [(4, 3), (8, 7)])
def test_tightness_on_packets(family, N0, tau):
    system = ConeSystem(ConeParams(N0, tau, family=family), 128)
    rng = np.random.default_rng(11)
    for _ in range(2):
        P = random_packets(rng, 4, (6, 50), 1.0, 2.0)
        assert tightness_ratio(system, P, P.norm2()) == pytest.approx(1.0, abs=1e-3)


def test_real_image_round_trip():
    system = ConeSystem(ConeParams(), 64)
    x = (np.arange(64) - 32) / 64
    img = np.exp(-(x[None, :] ** 2 + x[:, None] ** 2) / 0.02)
    rec = system.reconstruct(system.analyze(img), real=True)
    assert np.linalg.norm(rec - img) / np.linalg.norm(img) < 2e-2


def test_small_grid_eigen_bounds():
    lo, hi = frame_operator_bounds(ConeSystem(ConeParams(), 16))
    assert lo == pytest.approx(4 / 3, rel=0.05)
    assert hi == pytest.approx(4 / 3, rel=0.05)


def test_atom_hat_matches_cone_split_of_pre_atom():
    # The cone atom is the horizontal-cone part of its pre-atom pushed through the isometry.
    system = ConeSystem(ConeParams(), 64)
    idx = (1, 0, 1, 3, 1, 2, -1)
    grid = FreqGrid(64)
    xi1, xi2 = grid.mesh()
    pre = GridFn(grid, system.pre_atom(idx, xi1, xi2) * (np.abs(xi2) < np.abs(xi1)))
    np.testing.assert_allclose(system.atom_hat(idx, xi1, xi2), xi_map(pre, "h").data, atol=1e-13)


def test_vertical_atoms_are_transposed_horizontal_atoms():
    # Exact away from the angular transition band, where the rotated copies enter with swapped phases.
    system = ConeSystem(ConeParams(), 64)
    xi1, xi2 = FreqGrid(64).mesh()
    h = system.atom_hat((1, 0, 1, 3, 1, 2, -1), xi2, xi1)
    v = system.atom_hat((1, 1, 1, 3, 1, 2, -1), xi1, xi2)
    np.testing.assert_array_equal(h, v)


def test_finest_scale_mirror_symmetry():
    # A transposition-symmetric image gives matching h and v coefficients at the finest scale.
    N = 64
    x = (np.arange(N) - N // 2) / N
    x1, x2 = np.meshgrid(x, x)
    img = np.exp(-(x1**2 + x2**2) / 0.01) * (1 + 0.5 * np.cos(16 * np.pi * x1) + 0.5 * np.cos(16 * np.pi * x2))
    img = img + 0.3 * np.exp(-((x1 - 0.1) ** 2 + (x2 - 0.1) ** 2) / 0.002)
    img = (img + img.T) / 2
    system = ConeSystem(ConeParams(), N)
    coeffs = system.analyze(img)
    table, flat = coeffs.index_table(), coeffs.flat()
    rows = table[(table[:, 1] == 0) & (table[:, 2] == system.jmax) & (table[:, 0] == 1)]
    mirrored = rows.copy()
    mirrored[:, 1] = 1
    diff = flat[coeffs.positions(rows)] - flat[coeffs.positions(mirrored)]
    assert np.max(np.abs(diff)) < 1e-5 * np.abs(flat).max()
