import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import circulant

from gaborshear.filters1d import build_mband_bank
from gaborshear.subband import (
    SubbandValidationError,
    inverse_z_transform,
    project_all,
    project_subband,
    project_two_band,
    projection_residuals,
    z_transform,
)


def dense_projection(bank, ell, L):
    """Filter, keep every M-th sample (scaled by M), filter with the adjoint: as dense matrices."""
    taps = np.fft.ifft(bank.filter(ell)(np.arange(L) / L))
    C = circulant(taps)
    keep = np.diag((np.arange(L) % bank.M == 0) * float(bank.M))
    return C @ keep @ C.conj().T


@pytest.mark.parametrize("M", [2, 3, 4])
@pytest.mark.parametrize("family", ["meyer", "shannon"])
def test_matches_dense_matrix(M, family):
    bank = build_mband_bank(M, family)
    L = 12 * M
    rng = np.random.default_rng(3)
    c = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    for ell in range(M):
        P = dense_projection(bank, ell, L)
        np.testing.assert_allclose(project_subband(c, bank, ell), P @ c, atol=1e-13)
        # The dense form is a Hermitian idempotent.
        np.testing.assert_allclose(P, P.conj().T, atol=1e-13)


@pytest.mark.parametrize("M", [2, 16])
@pytest.mark.parametrize("family", ["meyer", "shannon"])
def test_projection_residuals(M, family):
    res = projection_residuals(build_mband_bank(M, family), 512, 20, seed=1)
    assert set(res) == {"sum", "idempotent", "orthogonal"}
    assert max(res.values()) < 1e-10


@pytest.mark.parametrize("family", ["meyer", "shannon"])
def test_two_band_form_agrees(family):
    bank = build_mband_bank(2, family)
    rng = np.random.default_rng(0)
    c = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    H = bank.filter(0)
    np.testing.assert_allclose(project_two_band(c, H, "low"), project_subband(c, bank, 0), atol=1e-12)
    np.testing.assert_allclose(project_two_band(c, H, "high"), project_subband(c, bank, 1), atol=1e-12)


def test_real_input_stays_real():
    bank = build_mband_bank(4)
    out = project_subband(np.random.default_rng(0).standard_normal(32), bank, 2)
    assert np.isrealobj(out)


def test_z_transform_round_trip_and_convention():
    c = np.zeros(8)
    c[1] = 1.0
    # c_1 z with z = exp(-2 pi i k / 8).
    np.testing.assert_allclose(z_transform(c), np.exp(-2j * np.pi * np.arange(8) / 8), atol=1e-15)
    x = np.random.default_rng(2).standard_normal(16)
    np.testing.assert_allclose(inverse_z_transform(z_transform(x)).real, x, atol=1e-15)


def test_length_must_divide():
    with pytest.raises(SubbandValidationError):
        project_subband(np.ones(30), build_mband_bank(16), 1)
    with pytest.raises(SubbandValidationError):
        project_two_band(np.ones(8), build_mband_bank(2).filter(0), "middle")


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_parseval_across_bands(M, blocks, seed):
    bank = build_mband_bank(M)
    c = np.random.default_rng(seed).standard_normal(M * blocks * 2)
    parts = project_all(c, bank)
    energy = sum(np.vdot(p, p).real for p in parts)
    assert energy == pytest.approx(np.vdot(c, c).real, rel=1e-10, abs=1e-12)
