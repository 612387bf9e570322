"""Orthogonal subband projections of periodic sequences.

A sequence ``c`` of length ``L`` is identified with its z-transform
``Zc(z) = sum_n c_n z^n`` sampled at ``z = exp(-2 pi i k / L)``, which is the
discrete Fourier transform computed by :func:`numpy.fft.fft`. The rotation
``R_M`` maps ``Zc(z)`` to ``Zc(omega z)`` with ``omega = exp(-2 pi i / M)``,
a cyclic shift of the spectrum by ``L / M`` bins.
"""

from __future__ import annotations

import numpy as np

from .filters1d import Filter1D, WaveletBank


class SubbandValidationError(ValueError):
    """Raised when a sequence length is incompatible with the bank."""


def z_transform(c: np.ndarray) -> np.ndarray:
    """Samples of ``sum_n c_n z^n`` at ``z_k = exp(-2 pi i k / L)``."""
    return np.fft.fft(np.asarray(c), axis=-1)


def inverse_z_transform(Z: np.ndarray) -> np.ndarray:
    return np.fft.ifft(Z, axis=-1)


def _rotate(Z: np.ndarray, M: int, j: int = 1) -> np.ndarray:
    """Apply ``R_M^j`` to spectrum samples."""
    L = Z.shape[-1]
    return np.roll(Z, -j * (L // M), axis=-1)


def _check_length(L: int, M: int) -> None:
    if L % M:
        raise SubbandValidationError(f"sequence length {L} is not divisible by M={M}")


def project_subband(c: np.ndarray, bank: WaveletBank, ell: int) -> np.ndarray:
    """Orthogonal projection onto the band-``ell`` subspace.

    In the z-domain this is ``H_l (sum_j R_M^j) conj(H_l)``.
    """
    c = np.asarray(c)
    L, M = c.shape[-1], bank.M
    _check_length(L, M)
    nu = np.arange(L) / L
    H = bank.filter(ell)(nu)
    G = np.conj(H) * z_transform(c)
    folded = sum(_rotate(G, M, j) for j in range(M))
    out = inverse_z_transform(H * folded)
    # Each projection has a Hermitian symbol, so real input stays real.
    return out.real if np.isrealobj(c) else out


def project_all(c: np.ndarray, bank: WaveletBank) -> list[np.ndarray]:
    return [project_subband(c, bank, ell) for ell in range(bank.M)]


def project_two_band(c: np.ndarray, H: Filter1D, part: str) -> np.ndarray:
    """Two-band projections written with the half-turn ``R_2``.

    ``part="low"`` gives ``H (I + R_2) conj(H)`` and ``part="high"`` gives
    ``conj(H_-) (I - R_2) H_-`` where ``H_-(z) = H(-z)``.
    """
    c = np.asarray(c)
    L = c.shape[-1]
    _check_length(L, 2)
    nu = np.arange(L) / L
    F = z_transform(c)
    if part == "low":
        h = H(nu)
        G = np.conj(h) * F
        return inverse_z_transform(h * (G + _rotate(G, 2)))
    if part == "high":
        hm = H(nu + 0.5)
        G = hm * F
        return inverse_z_transform(np.conj(hm) * (G - _rotate(G, 2)))
    raise SubbandValidationError(f"unknown part {part!r}")


def projection_residuals(bank: WaveletBank, L: int, trials: int, seed: int = 0) -> dict[str, float]:
    """Worst relative residuals of completeness, idempotence and orthogonality.

    Random complex test sequences are drawn from a seeded generator.
    """
    _check_length(L, bank.M)
    rng = np.random.default_rng(seed)
    worst = {"sum": 0.0, "idempotent": 0.0, "orthogonal": 0.0}
    for _ in range(trials):
        c = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        norm = np.linalg.norm(c)
        parts = project_all(c, bank)
        worst["sum"] = max(worst["sum"], np.linalg.norm(sum(parts) - c) / norm)
        ell = int(rng.integers(bank.M))
        again = project_subband(parts[ell], bank, ell)
        worst["idempotent"] = max(worst["idempotent"], np.linalg.norm(again - parts[ell]) / norm)
        a, b = rng.choice(bank.M, size=2, replace=False)
        inner = abs(np.vdot(parts[b], parts[a])) / norm**2
        worst["orthogonal"] = max(worst["orthogonal"], inner)
    return {k: float(v) for k, v in worst.items()}
