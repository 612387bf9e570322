"""Sampled warped lattices and the fast per-scale atom transforms on them.

At scale ``j`` the warped coordinates are ``u = 16^{-j} eta1`` and ``eta2``
where ``eta = (sgn(xi1) xi1^2 / 2, xi2 / xi1)``. The map has unit Jacobian,
so integrals over frequency become integrals over ``(eta1, eta2)``.

A scale lattice is a product of

* a band axis: midpoints ``u_a = (a + 1/2) / P1 - U``, uniform with ``P1``
  samples per unit, so that the modulations ``exp(2 pi i m1 u)`` reduce to a
  length-``P1`` DFT after folding modulo one;
* a Gabor axis: midpoints in ``eta2`` with ``P2`` samples per modulation
  period, so that ``exp(2 pi i m2 kappa eta2)`` reduces to a length-``P2``
  DFT over the samples of each window translate.

Atom coefficients are lattice quadratures ``sum_p Delta F(p) conj(atom(p))``.
Both the quadrature weights and the folding are exact discrete Parseval
identities, so the per-scale transform is a tight frame on lattice functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .filters1d import WaveletBank
from .gaborwin import PeriodizedWindow, Window


def _even_ceil(x: float) -> int:
    n = max(2, int(np.ceil(x - 1e-9)))
    return n + (n % 2)


def _centred(P: int) -> np.ndarray:
    return np.arange(P) - P // 2


@dataclass
class BandAxis:
    """Samples of ``u`` and the band functions restricted to unit blocks."""

    j: int
    P1: int
    U: int
    blocks: dict[int, list[tuple[int, np.ndarray]]]

    @property
    def A(self) -> int:
        return 2 * self.U * self.P1

    @property
    def u(self) -> np.ndarray:
        return (np.arange(self.A) + 0.5) / self.P1 - self.U

    @property
    def m1(self) -> np.ndarray:
        return _centred(self.P1)

    @property
    def phase(self) -> np.ndarray:
        # exp(-2 pi i m1 u_a) = exp(-pi i m1 / P1) exp(-2 pi i m1 a / P1) since U is an integer.
        return np.exp(-1j * np.pi * self.m1 / self.P1)

    @property
    def bands(self) -> list[int]:
        return sorted(self.blocks)


def build_band_axis(
    bank: WaveletBank, j: int, bands: list[int], P1: int, U: int, u_limit: float = np.inf
) -> BandAxis:
    """Band axis keeping only unit blocks where a band is nonzero below ``|u| <= u_limit``.

    Bands without any such block are dropped.
    """
    u = (np.arange(2 * U * P1) + 0.5) / P1 - U
    usable = np.abs(u) <= u_limit
    blocks: dict[int, list[tuple[int, np.ndarray]]] = {}
    for ell in bands:
        vals = bank.psi_hat(ell, u)
        kept = []
        for b in range(2 * U):
            sl = slice(b * P1, (b + 1) * P1)
            if np.any((vals[sl] != 0) & usable[sl]):
                kept.append((b, vals[sl]))
        if kept:
            blocks[ell] = kept
    return BandAxis(j, P1, U, blocks)


@dataclass
class GaborAxis:
    """Samples of ``eta2`` with window translates and modulation rate ``kappa``.

    Window ``i`` occupies the consecutive samples ``starts[i] + (0..P2-1)``
    (taken modulo the axis length when ``periodic``) with values ``weights[i]``.
    """

    eta2: np.ndarray
    P2: int
    kappa: float
    eta0: float
    ks: np.ndarray
    starts: np.ndarray
    weights: np.ndarray
    periodic: bool

    @property
    def n(self) -> int:
        return self.eta2.size

    @property
    def spacing(self) -> float:
        return 1.0 / (self.kappa * self.P2)

    @property
    def m2(self) -> np.ndarray:
        return _centred(self.P2)

    def phases(self) -> np.ndarray:
        """``exp(-2 pi i m2 kappa eta2)`` split off from the per-window DFTs, shape ``(K, P2)``."""
        m2 = self.m2
        base = np.exp(-2j * np.pi * m2 * self.kappa * self.eta0) * np.exp(-1j * np.pi * m2 / self.P2)
        return base[None, :] * np.exp(-2j * np.pi * np.outer(self.starts, m2) / self.P2)

    def indices(self) -> np.ndarray:
        idx = self.starts[:, None] + np.arange(self.P2)[None, :]
        return idx % self.n if self.periodic else idx


def cone_gabor_axis(pw: PeriodizedWindow, j: int, P2: int) -> GaborAxis:
    """Periodic axis ``eta2 in [-1, 1)`` with ``N0 2^j`` window translates."""
    kappa = pw.tau * 2.0 ** (j - 1)
    Q = int(round(pw.tau * 2**j * P2))
    eta2 = -1.0 + (np.arange(Q) + 0.5) * 2.0 / Q
    K = pw.N0 * 2**j
    ks = np.arange(K) - (K - 1) // 2
    centres = ks * pw.alpha / 2.0**j
    half = 0.5 * pw.alpha * (1 + 2 * pw.base.epsilon) / 2.0**j
    starts = np.ceil((centres - half + 1.0) * Q / 2.0 - 0.5).astype(int)
    idx = (starts[:, None] + np.arange(P2)[None, :]) % Q
    y = eta2[idx] - centres[:, None]
    y = y - 2.0 * np.floor((y + 1.0) / 2.0)
    weights = pw.dilated(2.0**j * y)
    return GaborAxis(eta2, P2, kappa, -1.0, ks, starts, weights, True)


def group_gabor_axis(window: Window, j: int, P2: int, kmax: int) -> GaborAxis:
    """Axis covering the translates ``w(2^j eta2 - k)`` for ``|k| <= kmax``."""
    kappa = window.b * 2.0**j
    reach = (kmax + 0.5 + window.epsilon) / 2.0**j
    L = int(np.ceil(kappa * reach - 1e-9))
    eta0 = -L / kappa
    n = 2 * L * P2
    eta2 = eta0 + (np.arange(n) + 0.5) / (kappa * P2)
    ks = np.arange(-kmax, kmax + 1)
    centres = ks / 2.0**j
    starts = np.ceil((centres - 0.5 / kappa - eta0) * kappa * P2 - 0.5).astype(int)
    idx = starts[:, None] + np.arange(P2)[None, :]
    weights = window(2.0**j * eta2[idx] - ks[:, None])
    return GaborAxis(eta2, P2, kappa, eta0, ks, starts, weights, False)


@dataclass
class ScaleLattice:
    """One scale of one orientation: band axis times Gabor axis."""

    j: int
    kind: str
    band: BandAxis
    gabor: GaborAxis
    N: int
    _points: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def dilation(self) -> float:
        return 16.0**self.j

    @property
    def norm(self) -> float:
        return 2.0 ** (-1.5 * self.j)

    @property
    def weight(self) -> float:
        """Quadrature weight ``d eta1 d eta2`` of one lattice cell."""
        return self.dilation / self.band.P1 * self.gabor.spacing

    @property
    def shape(self) -> tuple[int, int]:
        return self.band.A, self.gabor.n

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Frequencies ``(xi1, xi2)`` of the lattice in the horizontal orientation."""
        if self._points is None:
            eta1 = self.dilation * self.band.u
            xi1 = np.sign(eta1) * np.sqrt(2.0 * np.abs(eta1))
            self._points = (
                np.broadcast_to(xi1[:, None], self.shape),
                xi1[:, None] * self.gabor.eta2[None, :],
            )
        return self._points

    def inside(self) -> np.ndarray:
        """Mask of lattice points inside the Nyquist square."""
        xi1, xi2 = self.points()
        h = self.N / 2.0
        return (np.abs(xi1) <= h) & (np.abs(xi2) <= h)

    @property
    def coefficient_count(self) -> int:
        return len(self.band.bands) * self.gabor.ks.size * self.band.P1 * self.gabor.P2

    def block_shape(self) -> tuple[int, int, int]:
        return self.gabor.ks.size, self.band.P1, self.gabor.P2

    def analyze(self, G: np.ndarray) -> dict[int, np.ndarray]:
        """Coefficients per band, arrays of shape ``(K, P1, P2)`` indexed ``[k, m1, m2]``."""
        bx, gx = self.band, self.gabor
        P1 = bx.P1
        idx = gx.indices()
        ph2 = gx.phases()
        r1 = bx.m1 % P1
        r2 = gx.m2 % gx.P2
        scale = self.norm * self.weight
        out = {}
        for ell, blocks in bx.blocks.items():
            Z = np.zeros((P1, gx.n), dtype=complex)
            for b, vals in blocks:
                Z += G[b * P1 : (b + 1) * P1] * np.conj(vals)[:, None]
            X = np.fft.fft(Z, axis=0)[r1] * bx.phase[:, None]
            V = X[:, idx] * gx.weights[None]
            C = np.fft.fft(V, axis=2)[:, :, r2] * ph2[None]
            out[ell] = scale * np.transpose(C, (1, 0, 2))
        return out

    def synthesize(self, coeffs: dict[int, np.ndarray]) -> np.ndarray:
        """Adjoint of :meth:`analyze` for the weighted lattice inner product."""
        bx, gx = self.band, self.gabor
        P1, P2 = bx.P1, gx.P2
        idx = gx.indices()
        ph2 = gx.phases()
        r1 = bx.m1 % P1
        r2 = gx.m2 % P2
        G = np.zeros(self.shape, dtype=complex)
        for ell, blocks in bx.blocks.items():
            C = np.transpose(coeffs[ell], (1, 0, 2)) * np.conj(ph2)[None]
            Vf = np.empty_like(C)
            Vf[:, :, r2] = C
            V = np.fft.ifft(Vf, axis=2) * P2 * gx.weights[None]
            X = np.zeros((P1, gx.n), dtype=complex)
            if gx.periodic:
                for i in range(idx.shape[0]):
                    X[:, idx[i]] += V[:, i]
            else:
                np.add.at(X, (slice(None), idx), V)
            X = X * np.conj(bx.phase)[:, None]
            Xf = np.empty_like(X)
            Xf[r1] = X
            Z = np.fft.ifft(Xf, axis=0) * P1
            for b, vals in blocks:
                G[b * P1 : (b + 1) * P1] += Z * vals[:, None]
        return self.norm * G

    def atom(self, ell: int, k_index: int, m1: int, m2: int, xi1: np.ndarray, xi2: np.ndarray,
             bank: WaveletBank, window_fn) -> np.ndarray:
        """Closed-form atom before any cone splitting, at frequencies ``(xi1, xi2)``."""
        with np.errstate(divide="ignore", invalid="ignore"):
            eta1 = 0.5 * np.sign(xi1) * xi1**2
            eta2 = np.where(xi1 != 0, xi2 / np.where(xi1 == 0, 1.0, xi1), 0.0)
        u = eta1 / self.dilation
        k = int(self.gabor.ks[k_index])
        val = bank.psi_hat(ell, u) * window_fn(eta2, k)
        mod = np.exp(2j * np.pi * (m1 * u + m2 * self.gabor.kappa * eta2))
        return np.where(xi1 != 0, self.norm * val * mod, 0.0)


def band_resolution(j: int, u_lo: float, spacing: float) -> int:
    """Samples per unit ``u`` so that ``xi1`` gaps stay below ``spacing``."""
    r = 4.0**j
    if u_lo <= 0.0:
        # Across the origin the gap is 2 r / sqrt(P1).
        return _even_ceil((2.0 * r / spacing) ** 2)
    return _even_ceil(r / (spacing * np.sqrt(2.0 * u_lo)))


def u_extent(j: int, N: int) -> float:
    """``u`` at the Nyquist frequency ``xi1 = N / 2``."""
    return (N / 2.0) ** 2 / 2.0 / 16.0**j


def xi1_extent(j: int, u_hi: float, N: int) -> float:
    return min(N / 2.0, 4.0**j * np.sqrt(2.0 * u_hi))


# Whole systems built from scale lattices.

KIND_SCALING = 0
KIND_WAVELET = 1
ORIENTATIONS = ("h", "v")


@dataclass
class Coefficients:
    """Coefficient blocks of a lattice system.

    ``blocks[i]`` belongs to ``keys[i] = (kind, orientation, j, ell)`` and has
    shape ``(K, P1, P2)``; ``ks``, ``m1`` and ``m2`` give the index values
    along its axes.
    """

    keys: list[tuple[int, int, int, int]]
    blocks: list[np.ndarray]
    ks: list[np.ndarray]
    m1: list[np.ndarray]
    m2: list[np.ndarray]

    def flat(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks]) if self.blocks else np.zeros(0, complex)

    def with_flat(self, values: np.ndarray) -> "Coefficients":
        out, pos = [], 0
        for b in self.blocks:
            out.append(values[pos : pos + b.size].reshape(b.shape))
            pos += b.size
        return Coefficients(self.keys, out, self.ks, self.m1, self.m2)

    def index_table(self) -> np.ndarray:
        """Integer array of rows ``(kind, orientation, j, ell, k, m1, m2)`` in flat order."""
        rows = []
        for key, b, ks, m1, m2 in zip(self.keys, self.blocks, self.ks, self.m1, self.m2):
            K, P1, P2 = b.shape
            kk, aa, cc = np.meshgrid(ks, m1, m2, indexing="ij")
            head = np.broadcast_to(np.array(key), (b.size, 4))
            rows.append(np.column_stack([head, kk.ravel(), aa.ravel(), cc.ravel()]))
        return np.concatenate(rows) if rows else np.zeros((0, 7), int)

    def energy(self) -> float:
        return float(sum(np.sum(np.abs(b) ** 2) for b in self.blocks))

    def positions(self, table: np.ndarray) -> np.ndarray:
        """Flat positions of index rows ``(kind, orientation, j, ell, k, m1, m2)``.

        Raises ``KeyError`` for rows outside the index set.
        """
        table = np.asarray(table, dtype=np.int64).reshape(-1, 7)
        out = np.full(len(table), -1, dtype=np.int64)
        lookup = {key: i for i, key in enumerate(self.keys)}
        starts = np.cumsum([0] + [b.size for b in self.blocks])
        block_of = np.array([lookup.get(tuple(int(v) for v in row[:4]), -1) for row in table])
        for i in np.unique(block_of):
            if i < 0:
                continue
            rows = block_of == i
            K, P1, P2 = self.blocks[i].shape
            ks, m1, m2 = self.ks[i], self.m1[i], self.m2[i]
            ki = np.searchsorted(ks, table[rows, 4])
            a = table[rows, 5] - m1[0]
            c = table[rows, 6] - m2[0]
            ok = (ki < K) & (a >= 0) & (a < P1) & (c >= 0) & (c < P2)
            ok[ok] &= ks[ki[ok]] == table[rows, 4][ok]
            pos = np.where(ok, starts[i] + (ki * P1 + a) * P2 + c, -1)
            out[rows] = pos
        if np.any(out < 0):
            bad = table[np.flatnonzero(out < 0)[0]]
            raise KeyError(f"index {tuple(int(v) for v in bad)} is not part of the system")
        return out

    @property
    def size(self) -> int:
        return sum(b.size for b in self.blocks)


class LatticeSystem:
    """Common analysis and synthesis for warped lattice systems.

    Subclasses provide the scale lattices per orientation, the frequency
    point sets feeding each lattice, and the frame bound.
    """

    bank: WaveletBank
    N: int
    orientations: tuple[str, ...]
    entries: list[tuple[int, int, ScaleLattice]]

    frame_bound: float = 1.0

    def point_sets(
        self, orient: int, lat: ScaleLattice, a: np.ndarray, b: np.ndarray
    ) -> list[tuple[np.ndarray, np.ndarray, np.ndarray, int | None]]:
        """Frequency point sets feeding a lattice, for lattice points ``(a, b)``.

        ``(a, b)`` are horizontal-orientation frequencies of lattice points.
        Returns ``(xi1, xi2, multiplier, mirror)`` tuples; the lattice function
        is ``sum multiplier * F(xi)``. Multipliers broadcast against ``a``.
        ``mirror`` names an earlier set whose points are the negatives of this
        one, so that real images can reuse ``F(-xi) = conj F(xi)``.
        """
        raise NotImplementedError

    def window_fn(self, lat: ScaleLattice):
        raise NotImplementedError

    # Lattice functions.

    def _active(self, lat: ScaleLattice, extra: np.ndarray | None = None):
        mask = lat.inside() if extra is None else lat.inside() & extra
        rows = np.flatnonzero(mask.any(axis=1))
        xi1, xi2 = lat.points()
        return rows, mask[rows], xi1[rows], xi2[rows]

    def lattice_values(self, spectrum, orient: int, lat: ScaleLattice, real: bool = False) -> np.ndarray:
        """Lattice function from a spectrum callable ``F(xi1, xi2)`` (zero outside the grid).

        With ``real`` the spectrum is assumed Hermitian and mirrored sets are not evaluated.
        """
        rows, sub, a, b = self._active(lat)
        sets = self.point_sets(orient, lat, a, b)
        todo = [i for i, st in enumerate(sets) if not (real and st[3] is not None)]
        xs = np.concatenate([sets[i][0][sub] for i in todo])
        ys = np.concatenate([sets[i][1][sub] for i in todo])
        vals = spectrum(xs, ys)
        n = int(sub.sum())
        got = {i: vals[t * n : (t + 1) * n] for t, i in enumerate(todo)}
        Gs = np.zeros(sub.shape, dtype=complex)
        for i, (_, _, mult, mirror) in enumerate(sets):
            Fi = got[i] if i in got else np.conj(got[mirror])
            Gs[sub] += np.broadcast_to(mult, sub.shape)[sub] * Fi
        G = np.zeros(lat.shape, dtype=complex)
        G[rows] = Gs
        return G

    def lattice_adjoint(self, G: np.ndarray, orient: int, lat: ScaleLattice) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Weighted point values whose image-side adjoint gives the synthesis."""
        rows, sub, a, b = self._active(lat, G != 0)
        sets = self.point_sets(orient, lat, a, b)
        g = G[rows][sub] * lat.weight
        xs = np.concatenate([st[0][sub] for st in sets])
        ys = np.concatenate([st[1][sub] for st in sets])
        vals = np.concatenate([np.conj(np.broadcast_to(st[2], sub.shape)[sub]) * g for st in sets])
        return xs, ys, vals

    # Image level.

    def analyze_spectrum(self, spectrum, real: bool = False) -> Coefficients:
        keys, blocks, ks, m1, m2 = [], [], [], [], []
        for kind, orient, lat in self.entries:
            G = self.lattice_values(spectrum, orient, lat, real)
            for ell, C in lat.analyze(G).items():
                keys.append((kind, orient, lat.j, ell))
                blocks.append(C)
                ks.append(lat.gabor.ks)
                m1.append(lat.band.m1)
                m2.append(lat.gabor.m2)
        return Coefficients(keys, blocks, ks, m1, m2)

    def analyze(self, img: np.ndarray) -> Coefficients:
        from .grid2d import check_image, dtft

        img = check_image(img)
        if img.shape[0] != self.N:
            raise ValueError(f"image size {img.shape[0]} does not match system size {self.N}")
        return self.analyze_spectrum(lambda a, b: dtft(img, a, b), real=bool(np.isrealobj(img)))

    def synthesize(self, coeffs: Coefficients, real: bool = False) -> np.ndarray:
        """Adjoint of :meth:`analyze` for the image inner product."""
        from .grid2d import dtft_adjoint

        out = np.zeros((self.N, self.N), dtype=complex)
        pos = 0
        for kind, orient, lat in self.entries:
            sub = {}
            for ell in lat.band.bands:
                assert coeffs.keys[pos] == (kind, orient, lat.j, ell)
                sub[ell] = coeffs.blocks[pos]
                pos += 1
            if not any(np.any(b) for b in sub.values()):
                continue
            G = lat.synthesize(sub)
            xs, ys, vals = self.lattice_adjoint(G, orient, lat)
            out += dtft_adjoint(vals, xs, ys, self.N)
        return out.real if real else out

    def reconstruct(self, coeffs: Coefficients, real: bool = False) -> np.ndarray:
        """Canonical dual synthesis ``frame_bound^{-1} T^*``."""
        return self.synthesize(coeffs, real) / self.frame_bound

    def template(self) -> Coefficients:
        keys, blocks, ks, m1, m2 = [], [], [], [], []
        for kind, orient, lat in self.entries:
            for ell in lat.band.bands:
                keys.append((kind, orient, lat.j, ell))
                blocks.append(np.zeros(lat.block_shape(), dtype=complex))
                ks.append(lat.gabor.ks)
                m1.append(lat.band.m1)
                m2.append(lat.gabor.m2)
        return Coefficients(keys, blocks, ks, m1, m2)

    def enumerate_indices(self) -> np.ndarray:
        return self.template().index_table()

    @property
    def coefficient_count(self) -> int:
        return sum(lat.coefficient_count for _, _, lat in self.entries)

    @property
    def lattice_size(self) -> int:
        return sum(lat.shape[0] * lat.shape[1] for _, _, lat in self.entries)

    def find(self, kind: int, orient: int, j: int) -> ScaleLattice:
        for kd, o, lat in self.entries:
            if kd == kind and o == orient and lat.j == j:
                return lat
        raise KeyError(f"no lattice for kind={kind}, orientation={orient}, j={j}")

    def pre_atom(self, idx: tuple[int, ...], xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        """Atom in its orientation's own coordinates, before any cone splitting."""
        kind, orient, j, ell, k, m1, m2 = (int(v) for v in idx)
        lat = self.find(kind, orient, j)
        ki = int(np.searchsorted(lat.gabor.ks, k))
        if ki >= lat.gabor.ks.size or lat.gabor.ks[ki] != k:
            raise KeyError(f"translate {k} not present at scale {j}")
        return lat.atom(ell, ki, m1, m2, np.asarray(xi1, float), np.asarray(xi2, float), self.bank, self.window_fn(lat))

    def atom_hat(self, idx: tuple[int, ...], xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def analyze_direct(self, spectrum, indices: np.ndarray) -> np.ndarray:
        """Coefficients one atom at a time, by quadrature on the atom's lattice."""
        out = np.empty(len(indices), dtype=complex)
        cache: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        for i, idx in enumerate(indices):
            kind, orient, j = int(idx[0]), int(idx[1]), int(idx[2])
            lat = self.find(kind, orient, j)
            key = (kind, orient, j)
            if key not in cache:
                xi1, xi2 = lat.points()
                cache[key] = (self.lattice_values(spectrum, orient, lat), np.asarray(xi1), np.asarray(xi2))
            G, xi1, xi2 = cache[key]
            atom = self.pre_atom(tuple(idx), xi1, xi2)
            out[i] = lat.weight * np.vdot(atom[lat.inside()], G[lat.inside()])
        return out

    def analyze_grid(self, F, indices: np.ndarray) -> np.ndarray:
        """Coefficients as plain sums over the integer frequency grid."""
        xi1, xi2 = F.grid.mesh()
        return np.array([np.vdot(self.atom_hat(tuple(idx), xi1, xi2), F.data) for idx in indices])

    def analyze_image_direct(self, img: np.ndarray, indices: np.ndarray, oversample: int = 2) -> np.ndarray:
        """Coefficients as sums over a frequency grid ``oversample`` times finer than the DFT grid.

        The image spectrum is sampled exactly at the finer points, so only the
        quadrature of each atom limits the accuracy.
        """
        from .grid2d import dtft

        N = self.N
        t = np.arange(-N // 2 * oversample, N // 2 * oversample) / oversample
        xi1, xi2 = np.meshgrid(t, t)
        F = dtft(img, xi1.ravel(), xi2.ravel()).reshape(xi1.shape)
        return np.array([np.vdot(self.atom_hat(tuple(idx), xi1, xi2), F) for idx in indices]) / oversample**2


def frame_operator_bounds(system: LatticeSystem, tol: float = 1e-8, seed: int = 0) -> tuple[float, float]:
    """Smallest and largest eigenvalues of ``T^* T`` on complex ``N x N`` images.

    The image inner product is ``N^{-2} sum f conj g``, for which
    :meth:`LatticeSystem.synthesize` is the adjoint of analysis.
    """
    from scipy.sparse.linalg import LinearOperator, eigsh

    N = system.N
    n = N * N

    def matvec(v: np.ndarray) -> np.ndarray:
        img = np.asarray(v, dtype=complex).reshape(N, N)
        return system.synthesize(system.analyze(img)).ravel()

    op = LinearOperator((n, n), matvec=matvec, dtype=complex)
    v0 = np.random.default_rng(seed).standard_normal(n).astype(complex)
    hi = eigsh(op, k=1, which="LA", tol=tol, v0=v0, return_eigenvectors=False)[0]
    lo = eigsh(op, k=1, which="SA", tol=tol, v0=v0, return_eigenvectors=False)[0]
    return float(lo), float(hi)
