"""Cone-adapted chirp-modulated shearlet system.

The plane is split smoothly into a horizontal and a vertical cone by the
isometries

    Xi_h^* F = restrict_h[ S_+ (conj(H_+) F) ],   S_+ = I + c R + conj(c) R^3,
    Xi_v^* F = restrict_v[ S_- (H_- F) ],         S_- = I - c R - conj(c) R^3,

with ``c = (1 + i) / 2``, ``R`` the quarter turn, and the angular filters
``H_+(xi) = H(zeta(xi2 / xi1))`` and ``H_-(xi) = H(-zeta(xi2 / xi1))`` built
from a two-band lowpass ``H`` through the Cayley map
``zeta(t) = (1 + i t) / (1 - i t)``. ``Xi_h Xi_h^* + Xi_v Xi_v^* = I``.

Inside each cone the system uses M = 16 band wavelets in the warped radial
variable and the periodized Gabor window in the slope variable. With
``N0`` translates and modulation step ``tau / 2`` it is ``N0 / tau``-tight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters1d import Family, Filter1D, ProfileKind, WaveletBank, build_mband_bank
from .gaborwin import PeriodizedWindow, build_window, max_epsilon, periodize
from .grid2d import FreqGrid, GridFn, apply_rotation
from .lattice import (
    KIND_SCALING,
    KIND_WAVELET,
    LatticeSystem,
    ScaleLattice,
    band_resolution,
    build_band_axis,
    cone_gabor_axis,
    u_extent,
    xi1_extent,
)

M_BANDS = 16
C_ROT = (1 + 1j) / 2


class ConeValidationError(ValueError):
    """Raised for inconsistent cone system parameters."""


@dataclass(frozen=True)
class ConeParams:
    N0: int = 4
    tau: int = 3
    epsilon: float | None = None
    family: Family = "meyer"
    profile: ProfileKind = "poly4"
    j0: int = 0
    jmax: int | None = None
    spacing1: float = 0.35
    spacing2: float = 0.7
    min_samples: int = 16

    def __post_init__(self) -> None:
        if self.tau >= self.N0:
            raise ConeValidationError(f"tau must be smaller than N0, got tau={self.tau}, N0={self.N0}")
        if self.tau < 1:
            raise ConeValidationError("tau must be positive")
        if self.j0 < 0:
            raise ConeValidationError("j0 must be non-negative")
        eps = self.window_epsilon
        if eps > max_epsilon(self.N0, self.tau) + 1e-12:
            raise ConeValidationError(
                f"epsilon={eps} exceeds {max_epsilon(self.N0, self.tau):.6g}, "
                f"the largest value keeping the system tight for N0={self.N0}, tau={self.tau}"
            )

    @property
    def window_epsilon(self) -> float:
        return max_epsilon(self.N0, self.tau) if self.epsilon is None else float(self.epsilon)

    @property
    def redundancy(self) -> float:
        return self.N0 / self.tau


def _ideal_half_band(nu: np.ndarray) -> np.ndarray:
    a = np.abs(nu - np.floor(nu + 0.5))
    return np.sqrt(np.where(a < 0.25, 1.0, np.where(a > 0.25, 0.0, 0.5)))


def cone_lowpass(family: Family, profile: ProfileKind = "poly4") -> Filter1D:
    """Two-band lowpass feeding the angular filters.

    The ideal filter takes the value ``2^{-1/2}`` on its jump, which falls on
    the diagonals, so that diagonal frequencies are shared evenly by both cones.
    """
    if family == "shannon":
        return Filter1D(_ideal_half_band, name="H")
    return build_mband_bank(2, family, profile=profile).filter(0)


def angular_filters(
    xi1: np.ndarray, xi2: np.ndarray, family: Family = "meyer", profile: ProfileKind = "poly4"
) -> tuple[np.ndarray, np.ndarray]:
    """``H_+`` and ``H_-`` at the given frequencies."""
    H = cone_lowpass(family, profile)
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    if family == "shannon":
        # The jump sits on the diagonals; comparing moduli avoids rounding in the angle.
        a1, a2 = np.abs(xi1), np.abs(xi2)
        half = np.sqrt(0.5)
        origin = (a1 == 0) & (a2 == 0)
        hp = np.where(a2 < a1, 1.0, np.where(a2 > a1, 0.0, half))
        hm = np.where(a2 > a1, 1.0, np.where(a2 < a1, 0.0, half))
        # At the origin the angle is taken as zero, as for the smooth filters.
        return np.where(origin, 1.0, hp).astype(complex), np.where(origin, 0.0, hm).astype(complex)
    # z = zeta(t) = exp(2 i arctan t) corresponds to nu = -arctan(t) / pi.
    nu = -np.arctan2(xi2 * np.where(xi1 < 0, -1.0, 1.0), np.abs(xi1)) / np.pi
    return H(nu), H(nu + 0.5)


def _turn(a: np.ndarray, b: np.ndarray, times: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply ``rho(xi1, xi2) = (xi2, -xi1)`` the given number of times."""
    for _ in range(times % 4):
        a, b = b, -a
    return a, b


def feasible_jmax(N: int, theta: float = 1 / 3) -> int:
    """Largest scale whose wavelets reach inside the Nyquist square."""
    j = 0
    while 0.5 * (1 - theta) * 16.0 ** (j + 1) < (N / 2.0) ** 2 / 2.0:
        j += 1
    return j


class ConeSystem(LatticeSystem):
    orientations = ("h", "v")

    def __init__(self, params: ConeParams, N: int) -> None:
        if N < 4 or N % 2:
            raise ConeValidationError(f"grid size must be even and >= 4, got {N}")
        self.params = params
        self.N = N
        self.bank: WaveletBank = build_mband_bank(M_BANDS, params.family, profile=params.profile)
        self.window: PeriodizedWindow = periodize(
            build_window(params.window_epsilon, params.profile), params.N0, params.tau
        )
        self.frame_bound = params.redundancy
        top = feasible_jmax(N, self.bank.theta)
        jmax = top if params.jmax is None else params.jmax
        if jmax > top:
            raise ConeValidationError(f"jmax={jmax} is too large for N={N}; the largest feasible value is {top}")
        if jmax < params.j0:
            raise ConeValidationError(f"jmax={jmax} is below j0={params.j0}")
        self.jmax = jmax
        self.lattices: list[tuple[int, ScaleLattice]] = [(KIND_SCALING, self._lattice(params.j0, [0]))]
        for j in range(params.j0, jmax + 1):
            self.lattices.append((KIND_WAVELET, self._lattice(j, list(range(1, M_BANDS)))))
        self.entries = [(kind, o, lat) for o in range(2) for kind, lat in self.lattices]

    def _lattice(self, j: int, bands: list[int]) -> ScaleLattice:
        p = self.params
        lo, hi = self.bank.support(bands[0])[0], max(self.bank.support(b)[1] for b in bands)
        u_max = min(hi, u_extent(j, self.N))
        U = max(1, int(np.ceil(u_max - 1e-12)))
        P1 = max(band_resolution(j, lo, p.spacing1), p.min_samples)
        band = build_band_axis(self.bank, j, bands, P1, U, u_extent(j, self.N))
        xi_top = xi1_extent(j, u_max, self.N)
        Q_min = 2.0 * xi_top / p.spacing2
        P2 = max(p.min_samples, int(np.ceil(Q_min / (p.tau * 2**j))))
        gabor = cone_gabor_axis(self.window, j, P2)
        return ScaleLattice(j, "scaling" if bands == [0] else "wavelet", band, gabor, self.N)

    def window_fn(self, lat: ScaleLattice):
        pw, j = self.window, lat.j

        def w(eta2: np.ndarray, k: int) -> np.ndarray:
            inside = np.abs(eta2) <= 1.0
            y = eta2 - k * pw.alpha / 2.0**j
            y = y - 2.0 * np.floor((y + 1.0) / 2.0)
            return np.where(inside, pw.dilated(2.0**j * y), 0.0)

        return w

    def point_sets(self, orient: int, lat: ScaleLattice, a: np.ndarray, b: np.ndarray):
        if orient == 1:
            a, b = b, a
        # The angular filters depend on the slope only, hence on eta2 alone.
        one = np.ones((1, lat.gabor.n))
        e2 = lat.gabor.eta2[None, :]
        ua, ub = (one, e2) if orient == 0 else (e2, one)
        fam = self.params.family
        sets = []
        # R g(xi) = g(rho xi) with rho(xi1, xi2) = (xi2, -xi1); R^3 uses rho^3 = -rho.
        for rot, coef, mirror in ((0, 1.0, None), (1, C_ROT, None), (3, np.conj(C_ROT), 1)):
            (x, y), (ux, uy) = _turn(a, b, rot), _turn(ua, ub, rot)
            hp, hm = angular_filters(ux, uy, fam, self.params.profile)
            if orient == 0:
                sets.append((x, y, coef * np.conj(hp), mirror))
            else:
                sets.append((x, y, (1.0 if rot == 0 else -coef) * hm, mirror))
        return sets

    def atom_hat(self, idx: tuple[int, ...], xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        """Atom in frequency after the cone isometry, at arbitrary frequencies."""
        orient = int(idx[1])
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        hp, hm = angular_filters(xi1, xi2, self.params.family, self.params.profile)

        def g(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            # Pre-atom restricted to its own cone, in the plane's coordinates.
            if orient == 0:
                return np.where(np.abs(y) < np.abs(x), self.pre_atom(idx, x, y), 0.0)
            return np.where(np.abs(x) < np.abs(y), self.pre_atom(idx, y, x), 0.0)

        s = 1.0 if orient == 0 else -1.0
        total = g(xi1, xi2) + s * C_ROT * g(xi2, -xi1) + s * np.conj(C_ROT) * g(-xi2, xi1)
        return (hp if orient == 0 else np.conj(hm)) * total

    def atom_grid(self, idx: tuple[int, ...]) -> GridFn:
        grid = FreqGrid(self.N)
        xi1, xi2 = grid.mesh()
        return GridFn(grid, self.atom_hat(idx, xi1, xi2))


def cayley(t: np.ndarray | float) -> np.ndarray:
    """``(1 + i t) / (1 - i t)``, mapping the real line onto the unit circle minus ``-1``."""
    t = np.asarray(t, dtype=float)
    return (1 + 1j * t) / (1 - 1j * t)


def cayley_identity_residual(family: Family = "meyer", samples: int = 4096, lowpass=None) -> float:
    """``max_t | |H(zeta(t))|^2 + |H(zeta(-1/t))|^2 - 1 |`` over log-spaced slopes of both signs."""
    H = cone_lowpass(family) if lowpass is None else lowpass
    t = np.logspace(-4, 4, samples // 2)
    t = np.concatenate([-t[::-1], t])

    def lifted(s: np.ndarray) -> np.ndarray:
        # zeta(s) = exp(-2 pi i nu) with nu = -arctan(s) / pi.
        return np.asarray(H(-np.arctan(s) / np.pi))

    return float(np.max(np.abs(np.abs(lifted(t)) ** 2 + np.abs(lifted(-1.0 / t)) ** 2 - 1.0)))


def _grid_turn(data: np.ndarray, grid: FreqGrid, times: int) -> np.ndarray:
    return apply_rotation(GridFn(grid, data), times).data


def _cone_mask(grid: FreqGrid, cone: str) -> np.ndarray:
    """Weights restricting to a cone; the diagonals are shared equally.

    The origin is fixed by the quarter turn, where the symmetrizer acts as 2
    on the horizontal side and as 0 on the vertical side.
    """
    xi1, xi2 = grid.mesh()
    horiz = np.abs(xi2) < np.abs(xi1)
    diag = np.abs(xi2) == np.abs(xi1)
    inside = horiz if cone == "h" else ~horiz & ~diag
    mask = np.where(inside, 1.0, 0.0) + 0.5 * diag
    mask[(xi1 == 0) & (xi2 == 0)] = 0.25 if cone == "h" else 0.0
    return mask


def _symmetrize(data: np.ndarray, grid: FreqGrid, sign: float) -> np.ndarray:
    c = sign * C_ROT
    return data + c * _grid_turn(data, grid, 1) + np.conj(c) * _grid_turn(data, grid, 3)


def xi_adjoint(F: GridFn, cone: str, family: Family = "meyer") -> GridFn:
    """Map a grid spectrum to its cone: ``restrict(S (conj(H_+) F))`` or ``restrict(S_- (H_- F))``."""
    xi1, xi2 = F.grid.mesh()
    hp, hm = angular_filters(xi1, xi2, family)
    if cone == "h":
        out = _symmetrize(np.conj(hp) * F.data, F.grid, 1.0)
    else:
        out = _symmetrize(hm * F.data, F.grid, -1.0)
    return GridFn(F.grid, out * _cone_mask(F.grid, cone))


def xi_map(G: GridFn, cone: str, family: Family = "meyer") -> GridFn:
    """Extend a cone-supported spectrum to the plane: ``H_+ S G`` or ``conj(H_-) S_- G``."""
    xi1, xi2 = G.grid.mesh()
    hp, hm = angular_filters(xi1, xi2, family)
    if cone == "h":
        return GridFn(G.grid, hp * _symmetrize(G.data, G.grid, 1.0))
    return GridFn(G.grid, np.conj(hm) * _symmetrize(G.data, G.grid, -1.0))


def project(F: GridFn, cone: str, family: Family = "meyer") -> GridFn:
    return xi_map(xi_adjoint(F, cone, family), cone, family)


def cone_split(F: GridFn, family: Family = "meyer") -> tuple[GridFn, GridFn]:
    """Projections ``P_h F`` and ``P_v F`` on the integer grid."""
    return project(F, "h", family), project(F, "v", family)
