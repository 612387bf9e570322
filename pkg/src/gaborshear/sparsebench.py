"""Cartoon test images and N-term approximation experiments.

A cartoon is ``f0 + f1 * 1_B`` on ``[0, 1]^2`` with ``B`` a star-shaped
domain ``|x - center| <= rho(theta)``. Images are sampled at pixel centres
``(n + 1/2) / N`` without anti-aliasing, so the edge stays a jump.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .filters1d import Family, build_mband_bank
from .lattice import Coefficients, LatticeSystem

SmoothFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class CartoonValidationError(ValueError):
    """Raised for cartoon parameters violating the curvature or radius bounds."""


def _zero(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.zeros(np.broadcast(x1, x2).shape)


def _one(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.ones(np.broadcast(x1, x2).shape)


def _bump(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.exp(-((x1 - 0.5) ** 2 + (x2 - 0.5) ** 2) / (2 * 0.12**2))


@dataclass(frozen=True)
class CartoonSpec:
    """Radius ``rho(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)``."""

    cos_coeffs: tuple[float, ...] = (0.25,)
    sin_coeffs: tuple[float, ...] = ()
    A: float = 1.0
    rho0: float = 0.5
    f0: SmoothFn = field(default=_zero, compare=False)
    f1: SmoothFn = field(default=_one, compare=False)
    center: tuple[float, float] = (0.5, 0.5)

    def rho(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.cos_coeffs):
            out = out + a * np.cos(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out = out + b * np.sin(k * theta)
        return out

    def rho_second(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.cos_coeffs):
            out = out - k**2 * a * np.cos(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out = out - k**2 * b * np.sin(k * theta)
        return out

    def validate(self, samples: int = 4096) -> None:
        theta = 2 * np.pi * np.arange(samples) / samples
        r = self.rho(theta)
        if np.any(r <= 0) or np.any(r > self.rho0) or self.rho0 > 1:
            raise CartoonValidationError(f"radius must lie in (0, rho0] with rho0 <= 1; range is [{r.min():.4g}, {r.max():.4g}]")
        curv = float(np.max(np.abs(self.rho_second(theta))))
        if curv > self.A:
            raise CartoonValidationError(f"sup |rho''| = {curv:.4g} exceeds A = {self.A}")

    def boundary(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r = self.rho(theta)
        return self.center[0] + r * np.cos(theta), self.center[1] + r * np.sin(theta)


CARTOONS: dict[str, CartoonSpec] = {
    "disk": CartoonSpec(),
    "three-lobe": CartoonSpec(cos_coeffs=(0.25, 0.0, 0.0, 0.05), A=0.5),
    "smooth": CartoonSpec(f0=_bump, f1=_zero),
}


def cartoon_preset(name: str) -> CartoonSpec:
    try:
        return CARTOONS[name]
    except KeyError:
        raise CartoonValidationError(f"unknown cartoon {name!r}; choose from {sorted(CARTOONS)}") from None


def pixel_centres(N: int) -> tuple[np.ndarray, np.ndarray]:
    """``(x1, x2)`` of shape ``(N, N)``; rows vary ``x2``."""
    t = (np.arange(N) + 0.5) / N
    return np.meshgrid(t, t)


def render_cartoon(spec: CartoonSpec, N: int) -> np.ndarray:
    if N < 2 or N & (N - 1):
        raise CartoonValidationError(f"N must be a power of two, got {N}")
    spec.validate()
    x1, x2 = pixel_centres(N)
    d1, d2 = x1 - spec.center[0], x2 - spec.center[1]
    inside = np.hypot(d1, d2) <= spec.rho(np.arctan2(d2, d1))
    return spec.f0(x1, x2) + spec.f1(x1, x2) * inside


# Approximation curves.


@dataclass
class DecayCurve:
    Ns: np.ndarray
    errors: np.ndarray
    truncated: bool = False
    slope: float | None = None
    intercept: float | None = None


def top_n_order(magnitudes: np.ndarray) -> np.ndarray:
    """Flat positions by decreasing magnitude, ties in increasing position."""
    # A stable sort on the negated values keeps equal entries in index order.
    return np.argsort(-magnitudes, kind="stable")


def _check_ns(Ns) -> np.ndarray:
    Ns = np.asarray(Ns, dtype=int)
    if Ns.ndim != 1 or np.any(np.diff(Ns) < 0) or np.any(Ns < 0):
        raise ValueError("Ns must be a non-decreasing list of non-negative integers")
    return Ns


def nterm_error_curve(image: np.ndarray, system: LatticeSystem, Ns) -> DecayCurve:
    """Squared grid error of reconstructions from the ``N`` largest coefficients.

    Errors use the image norm ``N^{-2} sum |f|^2``, i.e. the ``L^2`` norm of
    the pixel-sampled function.
    """
    Ns = _check_ns(Ns)
    image = np.asarray(image, dtype=float)
    coeffs = system.analyze(image)
    flat = coeffs.flat()
    order = top_n_order(np.abs(flat))
    total = flat.size
    scale = image.size
    errors = []
    for n in Ns:
        n = min(int(n), total)
        kept = np.zeros_like(flat)
        kept[order[:n]] = flat[order[:n]]
        approx = system.reconstruct(coeffs.with_flat(kept), real=True)
        errors.append(float(np.sum((image - approx) ** 2) / scale))
    return DecayCurve(Ns, np.array(errors), truncated=bool(np.any(Ns > total)))


class SeparableWavelet:
    """Periodic orthonormal tensor wavelet basis from the two-band Meyer bank."""

    def __init__(self, N: int, family: Family = "meyer", levels: int | None = None, coarsest: int = 8) -> None:
        if N < 2 or N & (N - 1):
            raise ValueError(f"N must be a power of two, got {N}")
        self.N = N
        bank = build_mband_bank(2, family)
        self.H, self.G = bank.filter(0), bank.filter(1)
        top = max(0, int(np.log2(N // min(coarsest, N))))
        self.levels = top if levels is None else min(levels, top)

    def _split(self, X: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
        # X is the DFT along axis; returns DFTs of the half-length low and high parts.
        L = X.shape[axis]
        nu = np.arange(L // 2) / L
        shape = [1] * X.ndim
        shape[axis] = L // 2
        lo = np.take(X, np.arange(L // 2), axis=axis)
        hi = np.take(X, np.arange(L // 2, L), axis=axis)
        H0, H1 = (np.conj(self.H(nu)).reshape(shape), np.conj(self.H(nu + 0.5)).reshape(shape))
        G0, G1 = (np.conj(self.G(nu)).reshape(shape), np.conj(self.G(nu + 0.5)).reshape(shape))
        s = np.sqrt(2.0)
        return (H0 * lo + H1 * hi) / s, (G0 * lo + G1 * hi) / s

    def _merge(self, A: np.ndarray, D: np.ndarray, axis: int) -> np.ndarray:
        L = 2 * A.shape[axis]
        nu = np.arange(L // 2) / L
        shape = [1] * A.ndim
        shape[axis] = L // 2
        s = np.sqrt(2.0)
        lo = (self.H(nu).reshape(shape) * A + self.G(nu).reshape(shape) * D) * s
        hi = (self.H(nu + 0.5).reshape(shape) * A + self.G(nu + 0.5).reshape(shape) * D) * s
        return np.concatenate([lo, hi], axis=axis)

    def forward(self, image: np.ndarray) -> list[np.ndarray]:
        """DFTs of the detail blocks from fine to coarse (three per level), then the coarse block."""
        X = np.fft.fft2(np.asarray(image, dtype=float))
        out = []
        for _ in range(self.levels):
            Lr, Hr = self._split(X, 0)
            LL, LH = self._split(Lr, 1)
            HL, HH = self._split(Hr, 1)
            out += [LH, HL, HH]
            X = LL
        out.append(X)
        return out

    def coefficients(self, image: np.ndarray) -> np.ndarray:
        """All basis coefficients as one flat real array, orthonormal in the pixel sum."""
        # Each split preserves sum |X|^2 / size, so the inverse DFT of every block is orthonormal.
        return np.concatenate([np.real(np.fft.ifft2(b)).ravel() for b in self.forward(image)])

    def inverse_flat(self, flat: np.ndarray) -> np.ndarray:
        blocks, pos = [], 0
        for shp in self._shapes():
            n = shp[0] * shp[1]
            blocks.append(np.fft.fft2(flat[pos : pos + n].reshape(shp)))
            pos += n
        X = blocks[-1]
        for lev in reversed(range(self.levels)):
            LH, HL, HH = blocks[3 * lev : 3 * lev + 3]
            X = self._merge(self._merge(X, LH, 1), self._merge(HL, HH, 1), 0)
        return np.real(np.fft.ifft2(X))

    def _shapes(self) -> list[tuple[int, int]]:
        shapes, n = [], self.N
        for _ in range(self.levels):
            n //= 2
            shapes += [(n, n)] * 3
        shapes.append((n, n))
        return shapes


def wavelet_baseline_curve(image: np.ndarray, Ns, family: Family = "meyer") -> DecayCurve:
    Ns = _check_ns(Ns)
    image = np.asarray(image, dtype=float)
    wt = SeparableWavelet(image.shape[0], family)
    flat = wt.coefficients(image)
    order = top_n_order(np.abs(flat))
    errors = []
    for n in Ns:
        n = min(int(n), flat.size)
        kept = np.zeros_like(flat)
        kept[order[:n]] = flat[order[:n]]
        errors.append(float(np.sum((image - wt.inverse_flat(kept)) ** 2) / image.size))
    return DecayCurve(Ns, np.array(errors), truncated=bool(np.any(Ns > flat.size)))


def fit_decay(curve: DecayCurve, Nmin: int = 2**6, Nmax: int = 2**12) -> dict[str, float | bool]:
    """Least-squares slope of ``log error`` against ``log N`` on ``[Nmin, Nmax]``."""
    Ns = np.asarray(curve.Ns, dtype=float)
    err = np.asarray(curve.errors, dtype=float)
    sel = (Ns >= Nmin) & (Ns <= Nmax)
    usable = sel & (err > 0)
    if usable.sum() < 4:
        raise ValueError(f"need at least 4 positive errors in [{Nmin}, {Nmax}], got {int(usable.sum())}")
    x, y = np.log(Ns[usable]), np.log(err[usable])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    r2 = 1.0 - float(np.sum(resid**2) / np.sum((y - y.mean()) ** 2))
    curve.slope, curve.intercept = float(slope), float(intercept)
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2, "excluded": bool(usable.sum() < sel.sum())}


def weak_lp_norm(coeffs, p: float) -> float:
    """``sup_N N^{1/p} |c|_(N)`` with ``|c|_(N)`` the ``N``-th largest magnitude."""
    if p <= 0:
        raise ValueError("p must be positive")
    a = np.sort(np.abs(np.asarray(coeffs)).ravel())[::-1]
    if a.size == 0:
        return 0.0
    return float(np.max(np.arange(1, a.size + 1) ** (1.0 / p) * a))


def per_scale_weak_lp(coeffs: Coefficients, p: float = 2 / 3) -> dict[int, float]:
    """Weak-``l^p`` norm of the wavelet-part coefficients of each scale."""
    groups: dict[int, list[np.ndarray]] = {}
    for (kind, _orient, j, _ell), block in zip(coeffs.keys, coeffs.blocks):
        if kind == 1:
            groups.setdefault(j, []).append(np.abs(block).ravel())
    return {j: weak_lp_norm(np.concatenate(v), p) for j, v in sorted(groups.items())}


def default_ns(lo: int = 2**6, hi: int = 2**12, per_octave: int = 2) -> np.ndarray:
    steps = int(round(np.log2(hi / lo) * per_octave))
    return np.unique(np.round(lo * 2.0 ** (np.arange(steps + 1) / per_octave)).astype(int))
