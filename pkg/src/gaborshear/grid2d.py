"""Frequency grids, spectra of images, the parabolic warp and its operator group.

An ``N x N`` image holds samples at ``x = (n - N/2) / N`` with ``n`` in
``{0..N-1}^2``, so the image is centred at the origin; array rows index
``x2`` and columns index ``x1``. Its spectrum is the discrete-time Fourier
transform

    F(xi) = N^{-2} sum_n f[n] exp(-2 pi i (n - N/2) . xi / N),

so that ``sum_{xi in grid} |F|^2 = N^{-2} sum_n |f[n]|^2`` and integrating
``|F|^2`` over the Nyquist square gives the same value. The frequency grid
is the integer lattice ``{-N/2 .. N/2 - 1}^2``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import finufft
import numpy as np

SpectrumFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

NUFFT_TOL = 1e-12
THREADS_ENV = "GABORSHEAR_THREADS"


def nufft_threads() -> int:
    """Thread count for the NUFFT; one unless overridden, which keeps results bit-identical."""
    value = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise GridValidationError(f"{THREADS_ENV} must be a positive integer, got {value!r}") from None


class GridValidationError(ValueError):
    """Raised for malformed grids or images."""


@dataclass(frozen=True)
class FreqGrid:
    N: int

    def __post_init__(self) -> None:
        if self.N < 2 or self.N % 2:
            raise GridValidationError(f"grid size must be even and >= 2, got {self.N}")

    @property
    def axis(self) -> np.ndarray:
        return np.arange(-self.N // 2, self.N // 2, dtype=float)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(xi1, xi2)`` arrays of shape ``(N, N)``; rows vary ``xi2``."""
        xi1, xi2 = np.meshgrid(self.axis, self.axis)
        return xi1, xi2


@dataclass
class GridFn:
    grid: FreqGrid
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != (self.grid.N, self.grid.N):
            raise GridValidationError(f"data shape {self.data.shape} does not match N={self.grid.N}")

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.data) ** 2)))

    def inner(self, other: "GridFn") -> complex:
        return complex(np.vdot(other.data, self.data))


def evaluate(fn: SpectrumFn, grid: FreqGrid) -> GridFn:
    xi1, xi2 = grid.mesh()
    return GridFn(grid, np.asarray(fn(xi1, xi2), dtype=complex))


def check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise GridValidationError(f"image must be square, got shape {img.shape}")
    if img.shape[0] % 2:
        raise GridValidationError(f"image side must be even, got {img.shape[0]}")
    if not np.all(np.isfinite(img)):
        raise GridValidationError("image contains non-finite values")
    return img


def forward_spectrum(img: np.ndarray) -> GridFn:
    img = check_image(img)
    N = img.shape[0]
    return GridFn(FreqGrid(N), np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(img))) / N**2)


def inverse_spectrum(F: GridFn) -> np.ndarray:
    N = F.grid.N
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(F.data))) * N**2


def dtft(img: np.ndarray, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    """Spectrum ``F`` of ``img`` at arbitrary frequencies (type-2 NUFFT)."""
    img = np.ascontiguousarray(img, dtype=complex)
    N = img.shape[0]
    xi1 = np.ascontiguousarray(xi1, dtype=float).ravel()
    xi2 = np.ascontiguousarray(xi2, dtype=float).ravel()
    if xi1.size == 0:
        return np.zeros(0, dtype=complex)
    # finufft's centred modes k = n - N/2 match the pixel positions.
    out = finufft.nufft2d2(
        2 * np.pi * xi2 / N, 2 * np.pi * xi1 / N, img, isign=-1, eps=NUFFT_TOL, nthreads=nufft_threads()
    )
    return out / N**2


def dtft_adjoint(values: np.ndarray, xi1: np.ndarray, xi2: np.ndarray, N: int) -> np.ndarray:
    """Adjoint of :func:`dtft` for the image inner product ``N^{-2} sum f conj g``.

    Returns ``g[n] = sum_p values_p exp(2 pi i (n - N/2) . xi_p / N)``.
    """
    values = np.ascontiguousarray(values, dtype=complex).ravel()
    xi1 = np.ascontiguousarray(xi1, dtype=float).ravel()
    xi2 = np.ascontiguousarray(xi2, dtype=float).ravel()
    if values.size == 0:
        return np.zeros((N, N), dtype=complex)
    return finufft.nufft2d1(
        2 * np.pi * xi2 / N, 2 * np.pi * xi1 / N, values, (N, N), isign=1, eps=NUFFT_TOL, nthreads=nufft_threads()
    )


# Parabolic warp.


def warp_h(xi1: np.ndarray, xi2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(sgn(xi1) xi1^2 / 2, xi2 / xi1)``; undefined on the line ``xi1 = 0``."""
    xi1 = np.asarray(xi1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 0.5 * np.sign(xi1) * xi1**2, np.asarray(xi2) / xi1


def unwarp_h(eta1: np.ndarray, eta2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xi1 = np.sign(eta1) * np.sqrt(2.0 * np.abs(eta1))
    return xi1, np.asarray(eta2) * xi1


def warp_v(xi1: np.ndarray, xi2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Warp with the roles of the two coordinates exchanged."""
    return warp_h(xi2, xi1)


def unwarp_v(eta1: np.ndarray, eta2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = unwarp_h(eta1, eta2)
    return b, a


def warp_jacobian_h(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    """Determinant of the warp's derivative; its modulus is one off the axis."""
    xi1 = np.asarray(xi1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        d11, d12 = np.abs(xi1), np.zeros_like(xi1)
        d21, d22 = -np.asarray(xi2) / xi1**2, 1.0 / xi1
    return d11 * d22 - d12 * d21


# Operators acting on spectra given as callables.


def shear(s: float) -> Callable[[SpectrumFn], SpectrumFn]:
    return lambda F: (lambda a, b: F(a, b - s * a))


def chirp(beta1: float, beta2: float) -> Callable[[SpectrumFn], SpectrumFn]:
    def op(F: SpectrumFn) -> SpectrumFn:
        def G(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            g1, g2 = warp_h(a, b)
            return np.exp(2j * np.pi * beta1 * g1) * np.exp(2j * np.pi * beta2 * g2) * F(a, b)

        return G

    return op


def dilation(j: float) -> Callable[[SpectrumFn], SpectrumFn]:
    return lambda F: (lambda a, b: 2.0 ** (-1.5 * j) * F(2.0 ** (-2 * j) * a, 2.0 ** (-j) * b))


def rotation(F: SpectrumFn) -> SpectrumFn:
    """Quarter turn ``F(xi1, xi2) -> F(xi2, -xi1)``."""
    return lambda a, b: F(b, -a)


def commutation_residual(s: float, beta: tuple[float, float], F: SpectrumFn, grid: FreqGrid) -> float:
    """Relative deviation from ``S_s X_beta = exp(-2 pi i beta2 s) X_beta S_s`` on ``F``.

    Evaluated on the grid with the axis ``xi1 = 0`` removed.
    """
    xi1, xi2 = grid.mesh()
    keep = xi1 != 0
    lhs = shear(s)(chirp(*beta)(F))(xi1[keep], xi2[keep])
    rhs = np.exp(-2j * np.pi * beta[1] * s) * chirp(*beta)(shear(s)(F))(xi1[keep], xi2[keep])
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


def gaussian_packet(
    center: tuple[float, float], width: float | tuple[float, float], position: tuple[float, float] = (0.0, 0.0)
) -> SpectrumFn:
    """Spectrum of a Gaussian wave packet located at ``position`` in space.

    ``width`` is the frequency standard deviation, per axis if a pair.
    """
    w1, w2 = (width, width) if np.isscalar(width) else width

    def F(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r2 = ((a - center[0]) / w1) ** 2 + ((b - center[1]) / w2) ** 2
        return np.exp(-0.5 * r2 - 2j * np.pi * (a * position[0] + b * position[1]))

    return F


@dataclass(frozen=True)
class PacketSum:
    """Sum of Gaussian wave packets with a closed-form ``L^2`` norm.

    Packet ``i`` is ``amp_i exp(-|xi - c_i|^2 / (2 w^2) - 2 pi i xi . x_i)``.
    """

    centers: np.ndarray
    positions: np.ndarray
    amplitudes: np.ndarray
    width: float

    def __call__(self, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(xi1, xi2).shape, dtype=complex)
        for c, x, a in zip(self.centers, self.positions, self.amplitudes):
            r2 = (xi1 - c[0]) ** 2 + (xi2 - c[1]) ** 2
            out += a * np.exp(-0.5 * r2 / self.width**2 - 2j * np.pi * (xi1 * x[0] + xi2 * x[1]))
        return out

    def norm2(self) -> float:
        w2 = self.width**2
        c, x, a = self.centers, self.positions, self.amplitudes
        dc = c[:, None, :] - c[None, :, :]
        dx = x[:, None, :] - x[None, :, :]
        mid = 0.5 * (c[:, None, :] + c[None, :, :])
        g = np.pi * w2 * np.exp(
            -np.sum(dc**2, -1) / (4 * w2) - 2j * np.pi * np.sum(mid * dx, -1) - np.pi**2 * w2 * np.sum(dx**2, -1)
        )
        return float(np.real(np.sum(a[:, None] * np.conj(a[None, :]) * g)))


def random_packets(
    rng: np.random.Generator, count: int, radius: tuple[float, float], slope_max: float, width: float,
    spread: float = 0.25,
) -> PacketSum:
    """Packets centred at ``|xi1|`` in ``radius`` with ``|xi2 / xi1| <= slope_max``, located near the origin."""
    r = rng.uniform(*radius, count) * rng.choice([-1.0, 1.0], count)
    s = rng.uniform(-slope_max, slope_max, count)
    centers = np.stack([r, r * s], axis=1)
    positions = rng.uniform(-spread, spread, (count, 2))
    amps = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    return PacketSum(centers, positions, amps, width)


# Operators acting on grid functions. Non-lattice resampling is bilinear with
# zero extension; orientation "v" exchanges the roles of the two coordinates.


def _bilinear(data: np.ndarray, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    """Bilinear lookup of grid values at frequencies ``(xi1, xi2)``, zero off the grid."""
    N = data.shape[0]
    c = np.asarray(xi1, dtype=float) + N // 2
    r = np.asarray(xi2, dtype=float) + N // 2
    c0, r0 = np.floor(c).astype(int), np.floor(r).astype(int)
    tc, tr = c - c0, r - r0
    out = np.zeros(np.broadcast(c, r).shape, dtype=complex)
    for dr, wr in ((0, 1.0 - tr), (1, tr)):
        for dc, wc in ((0, 1.0 - tc), (1, tc)):
            rr, cc = r0 + dr, c0 + dc
            ok = (rr >= 0) & (rr < N) & (cc >= 0) & (cc < N)
            w = wr * wc
            out[ok] += w[ok] * data[rr[ok], cc[ok]]
    return out


def _oriented(g: GridFn, orientation: str) -> np.ndarray:
    if orientation not in ("h", "v"):
        raise GridValidationError(f"orientation must be 'h' or 'v', got {orientation!r}")
    return g.data if orientation == "h" else g.data.T


def _restore(data: np.ndarray, grid: FreqGrid, orientation: str) -> GridFn:
    return GridFn(grid, data if orientation == "h" else np.ascontiguousarray(data.T))


def apply_shear(g: GridFn, s: float, orientation: str = "h") -> GridFn:
    """``g(xi1, xi2 - s xi1)``, interpolating along ``xi2`` only."""
    data = _oriented(g, orientation)
    xi1, xi2 = g.grid.mesh()
    shift = s * xi1
    if np.allclose(shift, np.round(shift), rtol=0.0, atol=1e-12):
        # Lattice-preserving shear: an exact index shift.
        N = g.grid.N
        rows = (xi2 - np.round(shift)).astype(int) + N // 2
        ok = (rows >= 0) & (rows < N)
        cols = (xi1 + N // 2).astype(int)
        out = np.zeros_like(data, dtype=complex)
        out[ok] = data[rows[ok], cols[ok]]
    else:
        out = _bilinear(data, xi1, xi2 - shift)
    return _restore(out, g.grid, orientation)


def apply_chirp(g: GridFn, beta: tuple[float, float], orientation: str = "h") -> GridFn:
    data = _oriented(g, orientation)
    xi1, xi2 = g.grid.mesh()
    keep = xi1 != 0
    g1, g2 = warp_h(np.where(keep, xi1, 1.0), xi2)
    # Separate factors keep the large warped-radius phase free of rounding from the slope term.
    phase = np.where(keep, np.exp(2j * np.pi * beta[0] * g1) * np.exp(2j * np.pi * beta[1] * g2), 0.0)
    return _restore(phase * data, g.grid, orientation)


def apply_dilation(g: GridFn, j: float, orientation: str = "h") -> GridFn:
    """``2^{-3j/2} g(2^{-2j} xi1, 2^{-j} xi2)`` by bilinear resampling."""
    data = _oriented(g, orientation)
    xi1, xi2 = g.grid.mesh()
    out = 2.0 ** (-1.5 * j) * _bilinear(data, 2.0 ** (-2 * j) * xi1, 2.0 ** (-j) * xi2)
    return _restore(out, g.grid, orientation)


def apply_rotation(g: GridFn, power: int = 1) -> GridFn:
    """``power`` quarter turns ``g(xi1, xi2) -> g(xi2, -xi1)``; the Nyquist row and column wrap."""
    N = g.grid.N
    xi1, xi2 = g.grid.mesh()
    rows = (-xi1 + N // 2).astype(int) % N
    cols = (xi2 + N // 2).astype(int) % N
    data = g.data
    for _ in range(power % 4):
        data = data[rows, cols]
    return GridFn(g.grid, data)


def grid_commutation_residual(s: float, beta: tuple[float, float], g: GridFn, orientation: str = "h") -> float:
    """``||S_s X_beta g - exp(-2 pi i beta2 s) X_beta S_s g|| / ||g||`` with grid operators."""
    lhs = apply_shear(apply_chirp(g, beta, orientation), s, orientation)
    rhs = apply_chirp(apply_shear(g, s, orientation), beta, orientation)
    diff = lhs.data - np.exp(-2j * np.pi * beta[1] * s) * rhs.data
    return float(np.linalg.norm(diff) / g.norm())
