"""Chirp-modulated shearlet system generated by the shearlet group.

Atoms in frequency are

    2^{-3j/2} psi_l(16^{-j} eta1) w(2^j eta2 - k)
        exp(2 pi i m1 16^{-j} eta1) exp(2 pi i m2 b 2^j eta2)

in the warped coordinates ``eta = (sgn(xi1) xi1^2 / 2, xi2 / xi1)``, with the
M = 16 band wavelets ``psi_l`` and the window ``w`` of transition ``eps``,
``b = 1 / (1 + 2 eps)``. The full system is ``1 / b``-tight on ``L^2``; on a
finite grid it is truncated to slopes ``|xi2 / xi1| <= slope_max`` and the
scales reaching the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .filters1d import Family, ProfileKind, WaveletBank, build_mband_bank
from .gaborwin import Window, build_window
from .grid2d import FreqGrid, GridFn
from .lattice import (
    KIND_SCALING,
    KIND_WAVELET,
    LatticeSystem,
    ScaleLattice,
    band_resolution,
    build_band_axis,
    group_gabor_axis,
    u_extent,
    xi1_extent,
)
from .coneshear import feasible_jmax

M_BANDS = 16


class GroupValidationError(ValueError):
    """Raised for inconsistent group system parameters."""


@dataclass(frozen=True)
class GroupParams:
    epsilon: float = 0.25
    family: Family = "meyer"
    profile: ProfileKind = "poly4"
    j0: int = 0
    jmax: int | None = None
    slope_max: float = 2.0
    spacing1: float = 0.35
    spacing2: float = 0.7
    min_samples: int = 16

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 0.5:
            raise GroupValidationError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")
        if self.slope_max <= 0:
            raise GroupValidationError("slope_max must be positive")
        if self.j0 < 0:
            raise GroupValidationError("j0 must be non-negative")

    @property
    def b(self) -> float:
        return 1.0 / (1.0 + 2.0 * self.epsilon)


class GroupSystem(LatticeSystem):
    orientations = ("h",)

    def __init__(self, params: GroupParams, N: int) -> None:
        if N < 4 or N % 2:
            raise GroupValidationError(f"grid size must be even and >= 4, got {N}")
        self.params = params
        self.N = N
        self.bank: WaveletBank = build_mband_bank(M_BANDS, params.family, profile=params.profile)
        self.window: Window = build_window(params.epsilon, params.profile)
        self.frame_bound = 1.0 / params.b
        top = feasible_jmax(N, self.bank.theta)
        jmax = top if params.jmax is None else params.jmax
        if jmax > top:
            raise GroupValidationError(f"jmax={jmax} is too large for N={N}; the largest feasible value is {top}")
        if jmax < params.j0:
            raise GroupValidationError(f"jmax={jmax} is below j0={params.j0}")
        self.jmax = jmax
        lats = [(KIND_SCALING, self._lattice(params.j0, [0]))]
        lats += [(KIND_WAVELET, self._lattice(j, list(range(1, M_BANDS)))) for j in range(params.j0, jmax + 1)]
        self.entries = [(kind, 0, lat) for kind, lat in lats]

    def _lattice(self, j: int, bands: list[int]) -> ScaleLattice:
        p = self.params
        lo, hi = self.bank.support(bands[0])[0], max(self.bank.support(b)[1] for b in bands)
        u_max = min(hi, u_extent(j, self.N))
        U = max(1, int(np.ceil(u_max - 1e-12)))
        P1 = max(band_resolution(j, lo, p.spacing1), p.min_samples)
        band = build_band_axis(self.bank, j, bands, P1, U, u_extent(j, self.N))
        xi_top = xi1_extent(j, u_max, self.N)
        kappa = p.b * 2.0**j
        P2 = max(p.min_samples, int(np.ceil(xi_top / (kappa * p.spacing2))))
        # Translates up to kmax cover the slopes |eta2| <= slope_max completely.
        kmax = int(np.ceil(p.slope_max * 2**j + 0.5 - p.epsilon))
        gabor = group_gabor_axis(self.window, j, P2, kmax)
        return ScaleLattice(j, "scaling" if bands == [0] else "wavelet", band, gabor, self.N)

    def window_fn(self, lat: ScaleLattice):
        w, j = self.window, lat.j
        return lambda eta2, k: w(2.0**j * eta2 - k)

    def point_sets(self, orient: int, lat: ScaleLattice, a: np.ndarray, b: np.ndarray):
        return [(a, b, np.ones((1, 1)), None)]

    def atom_hat(self, idx: tuple[int, ...], xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        return self.pre_atom(idx, xi1, xi2)

    def atom_grid(self, idx: tuple[int, ...]) -> GridFn:
        grid = FreqGrid(self.N)
        xi1, xi2 = grid.mesh()
        return GridFn(grid, self.atom_hat(idx, xi1, xi2))

    def covers(self, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        """Frequencies where the truncated system still forms a partition of unity."""
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        h = self.N / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            slope_ok = np.abs(xi2) <= self.params.slope_max * np.abs(xi1)
        return slope_ok & (np.abs(xi1) <= h) & (np.abs(xi2) <= h) & (xi1 != 0)

    def support_box(self, idx: tuple[int, ...]) -> tuple[float, float, float, float]:
        """``(xi1_lo, xi1_hi, eta2_lo, eta2_hi)`` bounding the atom for ``xi1 > 0`` (mirrored for ``xi1 < 0``)."""
        kind, _, j, ell, k = (int(v) for v in idx[:5])
        lo, hi = self.bank.support(ell)
        h = self.window.half_support
        return np.sqrt(2 * 16.0**j * lo), np.sqrt(2 * 16.0**j * hi), (k - h) / 2.0**j, (k + h) / 2.0**j

    def atom_norm(self, idx: tuple[int, ...], samples: int = 400) -> float:
        """``L^2`` norm of the atom by a midpoint rule with ``samples`` nodes per side of its support box.

        The modulus does not depend on the modulations, so they are ignored.
        """
        a, b, e_lo, e_hi = self.support_box(idx)
        base = tuple(idx[:5]) + (0, 0)
        x_lo, x_hi = min(e_lo * b, e_lo * a), max(e_hi * b, e_hi * a)
        h1, h2 = (b - a) / samples, (x_hi - x_lo) / samples
        t = np.arange(samples) + 0.5
        total = 0.0
        for sign in (1.0, -1.0):
            g1, g2 = np.meshgrid(sign * (a + t * h1), sign * (x_lo + t * h2))
            total += float(np.sum(np.abs(self.atom_hat(base, g1, g2)) ** 2)) * h1 * h2
        return float(np.sqrt(total))

    def inside_grid(self, idx: tuple[int, ...]) -> bool:
        """True when the atom's support box lies in the Nyquist square."""
        a, b, e_lo, e_hi = self.support_box(idx)
        return b <= self.N / 2 and max(abs(e_lo), abs(e_hi)) * b <= self.N / 2


def tightness_ratio(system: LatticeSystem, spectrum, norm2: float) -> float:
    """Coefficient energy over ``frame_bound * ||f||^2``; one for covered ``f``."""
    return system.analyze_spectrum(spectrum).energy() / (system.frame_bound * norm2)


def two_scale_residual(params: GroupParams, N: int = 64, trials: int = 3, seed: int = 0, atoms: int = 12) -> float:
    """Energy mismatch between scale-``j0`` scaling plus wavelet atoms and scale-``j0 + 1`` scaling atoms.

    Each trial draws a random combination of scale-``j0`` atoms with small
    modulations and translates inside the slopes covered at both scales,
    evaluated in closed form, and compares the two coefficient energies.
    """
    j0 = params.j0
    coarse = GroupSystem(replace(params, jmax=j0), N)
    fine = GroupSystem(replace(params, j0=j0 + 1, jmax=j0 + 1), N)
    reach = params.slope_max - coarse.window.half_support / 2.0**j0
    table = coarse.enumerate_indices()
    pool = table[(np.abs(table[:, 4]) <= reach * 2.0**j0) & (np.abs(table[:, 5]) <= 2) & (np.abs(table[:, 6]) <= 2)]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        chosen = pool[rng.choice(len(pool), size=min(atoms, len(pool)), replace=False)]
        amps = rng.standard_normal(len(chosen)) + 1j * rng.standard_normal(len(chosen))

        def spectrum(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
            return sum(a * coarse.atom_hat(tuple(idx), xi1, xi2) for a, idx in zip(amps, chosen))

        e_coarse = coarse.analyze_spectrum(spectrum).energy()
        cf = fine.analyze_spectrum(spectrum)
        e_fine = sum(float(np.sum(np.abs(b) ** 2)) for key, b in zip(cf.keys, cf.blocks) if key[0] == KIND_SCALING)
        worst = max(worst, abs(e_coarse - e_fine) / e_coarse)
    return worst
