"""Tight Gabor windows, their 2-periodic versions, and frame redundancy.

The base window is ``w(x) = s((1/2 + eps - |x|) / (2 eps))^{1/2}`` with ``s``
the smooth step, supported on ``[-1/2 - eps, 1/2 + eps]``. Its integer
translates satisfy ``sum_n w(x - n)^2 = 1``.

The periodized window lives on ``[-1, 1)``. It is the unit-norm dilate of
``w`` by ``alpha = 2 / N0``, wrapped with period 2. With translations
``k alpha`` (``0 <= k < N0``) and modulations ``m tau / 2`` it forms an
``N0 / tau``-tight frame of ``L^2([-1, 1])`` provided ``1 + 2 eps <= N0 / tau``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters1d import ProfileKind, smooth_step


class WindowValidationError(ValueError):
    """Raised for invalid window parameters."""


@dataclass(frozen=True)
class Window:
    epsilon: float
    profile: ProfileKind = "poly4"

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 0.5:
            raise WindowValidationError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")

    @property
    def b(self) -> float:
        """Largest modulation step for which ``(w, 1, b)`` is tight."""
        return 1.0 / (1.0 + 2.0 * self.epsilon)

    @property
    def half_support(self) -> float:
        return 0.5 + self.epsilon

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        ax = np.abs(np.asarray(x, dtype=float))
        if self.profile == "step":
            # Compare with the jump directly; the rescaled argument rounds off 1/2.
            return np.sqrt(np.where(ax < 0.5, 1.0, np.where(ax > 0.5, 0.0, 0.5)))
        a = (self.half_support - ax) / (2.0 * self.epsilon)
        return np.sqrt(smooth_step(a, self.profile))


def build_window(epsilon: float, profile: ProfileKind = "poly4") -> Window:
    return Window(float(epsilon), profile)


def max_epsilon(N0: int, tau: int) -> float:
    """Largest ``eps`` keeping the dilated window inside one modulation period."""
    return 0.5 * (N0 / tau - 1.0)


@dataclass(frozen=True)
class PeriodizedWindow:
    base: Window
    N0: int
    tau: int

    @property
    def alpha(self) -> float:
        return 2.0 / self.N0

    @property
    def redundancy(self) -> float:
        return self.N0 / self.tau

    @property
    def is_painless(self) -> bool:
        """True when each translate fits in one modulation period (tight case)."""
        return self.alpha * (1.0 + 2.0 * self.base.epsilon) <= 2.0 / self.tau + 1e-12

    def dilated(self, x: np.ndarray | float) -> np.ndarray:
        """Unit-norm dilate ``alpha^{-1/2} w(x / alpha)`` on the real line."""
        return self.base(np.asarray(x, dtype=float) / self.alpha) / np.sqrt(self.alpha)

    def __call__(self, x: np.ndarray | float, k: int = 0) -> np.ndarray:
        """Translate by ``k alpha`` of the 2-periodic window, evaluated at ``x``."""
        y = np.asarray(x, dtype=float) - k * self.alpha
        y = y - 2.0 * np.floor((y + 1.0) / 2.0)
        # The dilated support is shorter than the period, so at most two copies overlap.
        return self.dilated(y) + self.dilated(y - 2.0) + self.dilated(y + 2.0)


def periodize(window: Window, N0: int, tau: int) -> PeriodizedWindow:
    if int(N0) != N0 or int(tau) != tau or tau < 1 or N0 < 1:
        raise WindowValidationError("N0 and tau must be positive integers")
    if tau >= N0:
        raise WindowValidationError(f"tau must be smaller than N0, got tau={tau}, N0={N0}")
    return PeriodizedWindow(window, int(N0), int(tau))


def default_window(N0: int, tau: int, profile: ProfileKind = "poly4") -> PeriodizedWindow:
    """Periodized window with the smoothest transition that keeps the frame tight."""
    return periodize(build_window(max_epsilon(N0, tau), profile), N0, tau)


# Finite frames.


def redundancy_function(frame: np.ndarray, x: np.ndarray) -> float:
    """``sum_i |<x, phi_i>|^2 / ||phi_i||^2`` for unit ``x``; rows of ``frame`` are the ``phi_i``."""
    frame = np.asarray(frame)
    x = np.asarray(x) / np.linalg.norm(x)
    norms2 = np.sum(np.abs(frame) ** 2, axis=1)
    return float(np.sum(np.abs(np.conj(frame) @ x) ** 2 / norms2))


def normalized_frame_operator(frame: np.ndarray) -> np.ndarray:
    frame = np.asarray(frame)
    unit = frame / np.linalg.norm(frame, axis=1, keepdims=True)
    return unit.T @ np.conj(unit)


def redundancy_bounds(frame: np.ndarray) -> tuple[float, float]:
    """Smallest and largest redundancy over unit vectors."""
    ev = np.linalg.eigvalsh(normalized_frame_operator(frame))
    return float(ev[0]), float(ev[-1])


def mercedes_benz_frame() -> np.ndarray:
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


# Gabor frames.


def integer_tightness_residual(window: Window, samples: int = 4096) -> float:
    """Max deviation of ``sum_n w(x - n)^2`` from one over a period."""
    x = np.arange(samples) / samples
    total = sum(window(x - n) ** 2 for n in range(-2, 3))
    return float(np.max(np.abs(total - 1.0)))


def window_fourier_coefficients(pw: PeriodizedWindow, qmax: int, grid: int) -> np.ndarray:
    """Coefficients ``<w_per, e_q>`` for ``|q| <= qmax`` with ``e_q = 2^{-1/2} exp(pi i q x)``.

    Midpoint quadrature with ``grid`` nodes on ``[-1, 1)``.
    """
    x = -1.0 + (np.arange(grid) + 0.5) * 2.0 / grid
    wx = pw(x)
    q = np.arange(-qmax, qmax + 1)
    out = np.empty(q.size, dtype=complex)
    for start in range(0, q.size, 256):
        block = q[start : start + 256]
        out[start : start + 256] = np.exp(-1j * np.pi * np.outer(block, x)) @ wx
    return out * (2.0 / grid) / np.sqrt(2.0)


def gabor_frame_operator(pw: PeriodizedWindow, bandwidth: int, grid: int) -> np.ndarray:
    """Frame operator in the Fourier basis, compressed to ``|p| <= bandwidth``.

    For the system ``exp(pi i m tau x) w_per(x - k alpha)`` the entry at
    ``(p, p')`` is ``N0 [p = p' mod N0] sum_m W(p - m tau) conj W(p' - m tau)``
    where ``W`` are the window's Fourier coefficients.
    """
    qmax = grid // 2 - 1
    W = window_fourier_coefficients(pw, qmax, grid)
    p = np.arange(-bandwidth, bandwidth + 1)
    m = np.arange(-(qmax + bandwidth) // pw.tau - 1, (qmax + bandwidth) // pw.tau + 2)
    idx = p[:, None] - m[None, :] * pw.tau
    valid = np.abs(idx) <= qmax
    A = np.where(valid, W[np.clip(idx + qmax, 0, 2 * qmax)], 0.0)
    S = A @ np.conj(A.T)
    same_class = (p[:, None] - p[None, :]) % pw.N0 == 0
    return pw.N0 * S * same_class


def gabor_frame_check(pw: PeriodizedWindow, grid: int = 4096, bandwidth: int | None = None) -> dict[str, float]:
    """Frame bounds of the periodized Gabor system on band-limited functions.

    Returns the ratio of upper to lower bound and the redundancy range; the
    frame elements have unit norm, so the bounds are the redundancies.
    """
    if bandwidth is None:
        bandwidth = grid // 16
    ev = np.linalg.eigvalsh(gabor_frame_operator(pw, bandwidth, grid))
    return {
        "tightness_ratio": float(ev[-1] / ev[0]),
        "Rminus": float(ev[0]),
        "Rplus": float(ev[-1]),
        "expected_redundancy": pw.redundancy,
        "painless": pw.is_painless,
    }


def gabor_analysis(x: np.ndarray, pw: PeriodizedWindow, mmax: int) -> np.ndarray:
    """Coefficients ``<x, M_{m tau/2} T_{k alpha} w_per>`` from midpoint samples on ``[-1, 1)``.

    Returns an array of shape ``(N0, 2 mmax + 1)``; ``m`` runs from ``-mmax``.
    """
    G = x.shape[-1]
    t = -1.0 + (np.arange(G) + 0.5) * 2.0 / G
    m = np.arange(-mmax, mmax + 1)
    E = np.exp(-1j * np.pi * pw.tau * np.outer(m, t))
    return np.stack([E @ (x * pw(t, k)) for k in range(pw.N0)]) * (2.0 / G)
