"""One-dimensional Meyer-type scaling functions, wavelets and M-band filter banks.

Frequencies follow the convention ``f_hat(xi) = int f(x) exp(-2 pi i x xi) dx``.
A filter symbol ``H`` is a 1-periodic function of ``nu``; it stands for the
trigonometric polynomial ``H(z)`` evaluated at ``z = exp(-2 pi i nu)``.

Every M-band bank built here satisfies the perfect reconstruction condition:
the matrix ``(H_n(nu + l/M))_{n,l}`` is unitary for every ``nu``, and the
wavelets obey ``psi_l(M xi) = H_l(xi) phi(xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

ArrayLike = np.ndarray | float

ProfileKind = Literal["poly4", "step"]
Family = Literal["meyer", "shannon"]

DEFAULT_THETA = 1.0 / 3.0


class FilterValidationError(ValueError):
    """Raised for invalid bank parameters."""


def smooth_step(x: ArrayLike, kind: ProfileKind = "poly4") -> np.ndarray:
    """Smooth transition from 0 (x <= 0) to 1 (x >= 1).

    The ``poly4`` profile is ``x^4 (35 - 84 x + 70 x^2 - 20 x^3)``, which is C^3
    at both ends. Both profiles satisfy ``s(x) + s(1 - x) = 1``.
    """
    x = np.asarray(x, dtype=float)
    if kind == "poly4":
        t = np.clip(x, 0.0, 1.0)
        # Evaluate the upper half by symmetry; the polynomial cancels badly near 1.
        u = np.minimum(t, 1.0 - t)
        low = u**4 * (35.0 - 84.0 * u + 70.0 * u**2 - 20.0 * u**3)
        return np.where(t <= 0.5, low, 1.0 - low)
    if kind == "step":
        return np.where(x > 0.5, 1.0, np.where(x < 0.5, 0.0, 0.5))
    raise FilterValidationError(f"unknown profile {kind!r}")


def _fall(x: np.ndarray, edge: float, half_width: float, kind: ProfileKind) -> np.ndarray:
    """Cosine edge: 1 below ``edge - half_width``, 0 above ``edge + half_width``."""
    if half_width == 0.0:
        return (x < edge).astype(float)
    arg = (x - edge + half_width) / (2.0 * half_width)
    return np.where(arg >= 1.0, 0.0, np.cos(0.5 * np.pi * smooth_step(arg, kind)))


def _rise(x: np.ndarray, edge: float, half_width: float, kind: ProfileKind) -> np.ndarray:
    """Sine edge complementary to :func:`_fall`, so that ``rise^2 + fall^2 = 1``."""
    if half_width == 0.0:
        return (x >= edge).astype(float)
    arg = (x - edge + half_width) / (2.0 * half_width)
    return np.where(arg <= 0.0, 0.0, np.sin(0.5 * np.pi * smooth_step(arg, kind)))


def _reduce(nu: ArrayLike) -> np.ndarray:
    """Representative of ``nu`` modulo 1 in ``[-1/2, 1/2)``."""
    nu = np.asarray(nu, dtype=float)
    return nu - np.floor(nu + 0.5)


@dataclass(frozen=True)
class Filter1D:
    """A 1-periodic filter symbol given by a vectorized callable of ``nu``."""

    symbol: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def __call__(self, nu: ArrayLike) -> np.ndarray:
        return np.asarray(self.symbol(np.asarray(nu, dtype=float)), dtype=complex)

    def at_z(self, z: ArrayLike) -> np.ndarray:
        """Evaluate at points ``z`` of the unit circle."""
        z = np.asarray(z, dtype=complex)
        return self(-np.angle(z) / (2.0 * np.pi))


@dataclass(frozen=True)
class WaveletBank:
    """M-band Meyer-type bank with transition parameter ``theta``.

    ``theta`` is the relative width of the scaling function's roll-off; the
    scaling function equals one on ``|xi| <= (1 - theta)/2`` and vanishes for
    ``|xi| >= (1 + theta)/2``. ``theta = 0`` yields the Shannon bank.
    """

    M: int
    theta: float = DEFAULT_THETA
    profile: ProfileKind = "poly4"

    def __post_init__(self) -> None:
        if int(self.M) != self.M or self.M < 2:
            raise FilterValidationError(f"M must be an integer >= 2, got {self.M}")
        if not 0.0 <= self.theta <= 0.5:
            raise FilterValidationError(f"theta must lie in [0, 1/2], got {self.theta}")

    @property
    def half_width(self) -> float:
        """Half width of each transition band in the filter variable."""
        return self.theta / (2.0 * self.M)

    @property
    def family(self) -> Family:
        return "shannon" if self.theta == 0.0 else "meyer"

    def phi_hat(self, xi: ArrayLike) -> np.ndarray:
        """Scaling function in frequency (real, even, values in [0, 1])."""
        xi = np.asarray(xi, dtype=float)
        if self.theta == 0.0:
            return ((xi >= -0.5) & (xi < 0.5)).astype(float)
        return _fall(np.abs(xi), 0.5, 0.5 * self.theta, self.profile)

    def _magnitude(self, n: int, x: np.ndarray) -> np.ndarray:
        """Modulus of band ``n`` as a function of ``x = |nu|`` in ``[0, 1/2]``."""
        M, w, kind = self.M, self.half_width, self.profile
        out = np.ones_like(x)
        if n > 0:
            out = out * _rise(x, n / (2.0 * M), w, kind)
        if n < M - 1:
            out = out * _fall(x, (n + 1) / (2.0 * M), w, kind)
        return out

    def _band_symbol(self, n: int, nu: np.ndarray) -> np.ndarray:
        r = _reduce(nu)
        if self.theta == 0.0:
            # Left-closed intervals on both sides keep every modulation orbit
            # inside distinct bands, also at band edges.
            k = np.floor(2 * self.M * r)
            mag = (np.where(k >= 0, k, -k - 1) == n).astype(complex)
        else:
            mag = self._magnitude(n, np.abs(r)).astype(complex)
        if n == 0:
            return mag
        if n < self.M - 1:
            sign = 1.0 if n % 2 == 0 else -1.0
            return np.where(r >= 0.0, mag, sign * mag)
        if self.M % 2 == 0:
            return -np.exp(-1j * np.pi * self.M * r) * mag
        return mag

    def filter(self, n: int) -> Filter1D:
        """Filter symbol ``H_n`` for ``0 <= n < M``."""
        if not 0 <= n < self.M:
            raise FilterValidationError(f"band index {n} outside [0, {self.M})")
        return Filter1D(lambda nu, n=n: self._band_symbol(n, nu), name=f"H{n}")

    def filters(self) -> list[Filter1D]:
        return [self.filter(n) for n in range(self.M)]

    def psi_hat(self, ell: int, xi: ArrayLike) -> np.ndarray:
        """Wavelet ``ell`` in frequency; ``ell = 0`` returns the scaling function."""
        xi = np.asarray(xi, dtype=float)
        if ell == 0:
            return self.phi_hat(xi).astype(complex)
        return self._band_symbol(ell, xi / self.M) * self.phi_hat(xi / self.M)

    def support(self, ell: int) -> tuple[float, float]:
        """Interval of ``|xi|`` outside of which ``psi_hat(ell)`` vanishes."""
        if ell == 0:
            return 0.0, 0.5 * (1 + self.theta)
        return max(0.0, 0.5 * (ell - self.theta)), 0.5 * self.M * (1 + self.theta)


def build_mband_bank(
    M: int, family: Family = "meyer", theta: float | None = None, profile: ProfileKind = "poly4"
) -> WaveletBank:
    """Construct the M-band bank of the requested family."""
    if family == "shannon":
        return WaveletBank(M, 0.0, profile)
    if family != "meyer":
        raise FilterValidationError(f"unknown family {family!r}")
    return WaveletBank(M, DEFAULT_THETA if theta is None else theta, profile)


# Two-band Meyer closed forms, used as independent references.


def meyer_phi_hat(xi: ArrayLike) -> np.ndarray:
    a = np.abs(np.asarray(xi, dtype=float))
    return np.where(a <= 1 / 3, 1.0, np.where(a <= 2 / 3, np.cos(0.5 * np.pi * smooth_step(3 * a - 1)), 0.0))


def meyer_psi_hat(xi: ArrayLike) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    a = np.abs(xi)
    mag = np.where(
        (a >= 1 / 3) & (a <= 2 / 3),
        np.sin(0.5 * np.pi * smooth_step(3 * a - 1)),
        np.where((a > 2 / 3) & (a <= 4 / 3), np.cos(0.5 * np.pi * smooth_step(1.5 * a - 1)), 0.0),
    )
    return -np.exp(-1j * np.pi * xi) * mag


def meyer_lowpass(nu: ArrayLike) -> np.ndarray:
    a = np.abs(_reduce(nu))
    return np.where(a <= 1 / 6, 1.0, np.where(a <= 1 / 3, np.cos(0.5 * np.pi * smooth_step(6 * a - 1)), 0.0))


def highpass_from_lowpass(H: Filter1D) -> Filter1D:
    """Quadrature mirror partner ``G(z) = -z conj(H(-z))``."""

    def sym(nu: np.ndarray) -> np.ndarray:
        return -np.exp(-2j * np.pi * nu) * np.conj(H(nu + 0.5))

    return Filter1D(sym, name="G")


def smith_barnwell_residual(H: Filter1D, samples: int = 4096) -> float:
    """Max deviation of ``|H(z)|^2 + |H(-z)|^2`` from one on a uniform grid."""
    nu = np.arange(samples) / samples - 0.5
    return float(np.max(np.abs(np.abs(H(nu)) ** 2 + np.abs(H(nu + 0.5)) ** 2 - 1.0)))


def modulation_matrix(filters: list[Filter1D], nu: ArrayLike) -> np.ndarray:
    """Matrices ``(H_n(nu + l/M))_{n,l}`` stacked along the leading axis."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    M = len(filters)
    shifts = nu[:, None] + np.arange(M)[None, :] / M
    return np.stack([f(shifts) for f in filters], axis=1)


def modulation_matrix_residual(filters: list[Filter1D], samples: int = 4096) -> float:
    """Max entry of ``U U^* - I`` for the modulation matrix ``U`` on a uniform grid."""
    M = len(filters)
    nu = (np.arange(samples) + 0.5) / samples / M
    U = modulation_matrix(filters, nu)
    gram = U @ np.conj(np.swapaxes(U, 1, 2))
    return float(np.max(np.abs(gram - np.eye(M)[None])))


def cascade_phi_hat(H: Filter1D, xi: ArrayLike, depth: int = 40) -> np.ndarray:
    """Infinite product ``prod_{j >= 1} H(xi / 2^j)`` truncated at ``depth``."""
    xi = np.asarray(xi, dtype=float)
    out = np.ones(xi.shape, dtype=complex)
    for j in range(1, depth + 1):
        out *= H(xi / 2.0**j)
    return out


def partition_of_unity_residual(bank: WaveletBank, xi: ArrayLike) -> float:
    """Max of ``|phi(xi)|^2 + sum_j sum_l |psi_l(M^-j xi)|^2 - 1`` over ``xi``."""
    xi = np.asarray(xi, dtype=float)
    total = np.abs(bank.phi_hat(xi)) ** 2
    scale = 1.0
    while True:
        contrib = sum(np.abs(bank.psi_hat(ell, xi / scale)) ** 2 for ell in range(1, bank.M))
        total = total + contrib
        scale *= bank.M
        if scale * bank.support(bank.M - 1)[0] > np.max(np.abs(xi)) * bank.M + 1:
            break
    return float(np.max(np.abs(total - 1.0)))


def two_scale_profile_residual(bank: WaveletBank, samples: int = 4096) -> float:
    """Max of ``| |phi(xi/M)|^2 - |phi(xi)|^2 - sum_l |psi_l(xi)|^2 |`` for ``|xi| <= M``.

    Samples sit at cell midpoints so that no band edge is hit.
    """
    xi = bank.M * (-1.0 + 2.0 * (np.arange(samples) + 0.5) / samples)
    rhs = np.abs(bank.phi_hat(xi)) ** 2 + sum(np.abs(bank.psi_hat(ell, xi)) ** 2 for ell in range(1, bank.M))
    return float(np.max(np.abs(np.abs(bank.phi_hat(xi / bank.M)) ** 2 - rhs)))
