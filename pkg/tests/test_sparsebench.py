import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborshear.coneshear import ConeParams, ConeSystem
from gaborshear.sparsebench import (
    CartoonSpec,
    CartoonValidationError,
    DecayCurve,
    SeparableWavelet,
    cartoon_preset,
    default_ns,
    fit_decay,
    nterm_error_curve,
    per_scale_weak_lp,
    render_cartoon,
    top_n_order,
    wavelet_baseline_curve,
    weak_lp_norm,
)


def test_disk_area():
    img = render_cartoon(cartoon_preset("disk"), 256)
    assert img.mean() == pytest.approx(np.pi * 0.25**2, rel=1e-2)
    assert set(np.unique(img)) == {0.0, 1.0}


def test_three_lobe_radius_and_curvature():
    spec = cartoon_preset("three-lobe")
    np.testing.assert_allclose(spec.rho(np.array([0.0, np.pi / 3])), [0.30, 0.20])
    # rho'' = -9 * 0.05 cos(3 theta).
    assert spec.rho_second(np.array([0.0]))[0] == pytest.approx(-0.45)
    spec.validate()


def test_cartoon_validation():
    with pytest.raises(CartoonValidationError, match="exceeds A"):
        CartoonSpec(cos_coeffs=(0.25, 0.0, 0.0, 0.05), A=0.1).validate()
    with pytest.raises(CartoonValidationError, match="radius"):
        CartoonSpec(cos_coeffs=(0.6,)).validate()
    with pytest.raises(CartoonValidationError):
        render_cartoon(cartoon_preset("disk"), 100)
    with pytest.raises(CartoonValidationError, match="unknown cartoon"):
        cartoon_preset("square")


def test_top_n_order_breaks_ties_by_position():
    order = top_n_order(np.array([1.0, 3.0, 1.0, 3.0, 2.0]))
    np.testing.assert_array_equal(order, [1, 3, 4, 0, 2])


@pytest.mark.parametrize("N", [16, 64])
def test_wavelet_is_orthonormal(N):
    img = np.random.default_rng(N).standard_normal((N, N))
    wt = SeparableWavelet(N)
    flat = wt.coefficients(img)
    assert flat.size == N * N
    assert np.sum(flat**2) == pytest.approx(np.sum(img**2), rel=1e-12)
    np.testing.assert_allclose(wt.inverse_flat(flat), img, atol=1e-12)


def test_wavelet_curve_is_monotone_and_ends_at_zero():
    img = render_cartoon(cartoon_preset("disk"), 32)
    curve = wavelet_baseline_curve(img, [0, 10, 100, 1024, 2000])
    assert np.all(np.diff(curve.errors) <= 1e-15)
    assert curve.errors[0] == pytest.approx(np.mean(img**2))
    assert curve.errors[-2] < 1e-24
    assert curve.truncated


def test_nterm_curve_on_cone_system():
    img = render_cartoon(cartoon_preset("disk"), 64)
    system = ConeSystem(ConeParams(), 64)
    curve = nterm_error_curve(img, system, [16, 64, 256])
    assert np.all(np.diff(curve.errors) < 0)
    with pytest.raises(ValueError):
        nterm_error_curve(img, system, [64, 16])


@settings(max_examples=20)
@given(st.floats(-3.0, -0.2), st.floats(-5.0, 5.0))
def test_fit_decay_recovers_power_law(slope, logc):
    Ns = default_ns()
    curve = DecayCurve(Ns, np.exp(logc) * Ns.astype(float) ** slope)
    fit = fit_decay(curve)
    assert fit["slope"] == pytest.approx(slope, abs=1e-9)
    assert fit["r2"] == pytest.approx(1.0)
    assert not fit["excluded"]
    assert curve.slope == fit["slope"]


def test_fit_decay_needs_points():
    with pytest.raises(ValueError, match="at least 4"):
        fit_decay(DecayCurve(np.array([64, 128]), np.array([1.0, 0.5])))


def test_default_ns():
    np.testing.assert_array_equal(default_ns(64, 256, 2), [64, 91, 128, 181, 256])
    assert default_ns()[0] == 64 and default_ns()[-1] == 4096


def test_weak_lp():
    # Magnitudes k^{-1/p} have weak norm exactly one.
    p = 2 / 3
    c = np.arange(1, 100) ** (-1 / p)
    assert weak_lp_norm(-c[::-1], p) == pytest.approx(1.0)
    assert weak_lp_norm(np.array([]), p) == 0.0
    with pytest.raises(ValueError):
        weak_lp_norm(c, 0.0)


def test_per_scale_weak_lp_covers_wavelet_scales():
    img = render_cartoon(cartoon_preset("disk"), 64)
    system = ConeSystem(ConeParams(), 64)
    norms = per_scale_weak_lp(system.analyze(img))
    assert sorted(norms) == list(range(system.params.j0, system.jmax + 1))
    assert all(v > 0 for v in norms.values())
