"""Wavevector grids, helicity bases and single-photon spectra.

The whole package works in natural units (hbar = c = epsilon_0 = 1); SI
factors enter only at export time.  Spectra live on regular cartesian
wavevector grids, and every k-space integral is a Riemann sum with the
uniform cell weight

    w = dkx * dky * dkz / (2 pi)^3

so a normalized spectrum satisfies sum_lambda sum_k w |c_lambda(k)|^2 = 1.
The zero mode (omega = 0) is excluded from every grid: its amplitude is
pinned to zero and the 1/sqrt(omega) mode factor is never evaluated there.

Scalar products are conjugate-linear in the first slot:
(s1, s2) = sum w conj(c1) c2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi

#: storage order of the helicity axis: index 0 is lambda = +1, index 1 is -1
HELICITIES = (+1, -1)


def _triple(value, name):
    try:
        t = tuple(float(v) for v in value)
    except TypeError:
        raise ValueError(f"{name} must be a length-3 sequence, got {value!r}") from None
    if len(t) != 3:
        raise ValueError(f"{name} must have three components, got {value!r}")
    return t


@dataclass(frozen=True)
class WaveVectorGrid:
    """Regular cartesian wavevector grid.

    Samples along axis a sit at k_min[a] + j * delta_k[a], j = 0..n-1.
    ``exclusion_mask`` is True on samples where omega = |k| would vanish;
    those carry zero amplitude in every spectrum built on the grid.
    """

    n_per_axis: tuple[int, int, int]
    delta_k: tuple[float, float, float]
    k_min: tuple[float, float, float]

    def __post_init__(self):
        n = tuple(int(v) for v in self.n_per_axis)
        if any(v < 1 for v in n):
            raise ValueError(f"n_per_axis must be >= 1, got {self.n_per_axis!r}")
        object.__setattr__(self, "n_per_axis", n)
        dk = _triple(self.delta_k, "delta_k")
        if any(v <= 0 for v in dk):
            raise ValueError(f"delta_k components must be positive, got {dk!r}")
        object.__setattr__(self, "delta_k", dk)
        object.__setattr__(self, "k_min", _triple(self.k_min, "k_min"))

    @classmethod
    def centered(cls, n_per_axis, delta_k):
        """Grid symmetric about k = 0 (k_min = -(n//2) dk per axis).

        This is the layout the FFT synthesis path expects; it also makes the
        mirror sample -k of every interior sample another grid sample.
        """
        n = tuple(int(v) for v in n_per_axis)
        dk = _triple(delta_k, "delta_k")
        k_min = tuple(-(ni // 2) * di for ni, di in zip(n, dk))
        return cls(n, dk, k_min)

    @classmethod
    def collinear(cls, n_z, delta_kz, delta_k_perp=1.0):
        """1 x 1 x n_z grid with all samples on the z axis."""
        return cls.centered((1, 1, int(n_z)), (delta_k_perp, delta_k_perp, delta_kz))

    @cached_property
    def axes(self):
        return tuple(
            self.k_min[a] + self.delta_k[a] * np.arange(self.n_per_axis[a])
            for a in range(3)
        )

    @cached_property
    def k_vectors(self):
        """(nx, ny, nz, 3) array of sample wavevectors."""
        kx, ky, kz = np.meshgrid(*self.axes, indexing="ij")
        k = np.stack([kx, ky, kz], axis=-1)
        k.flags.writeable = False
        return k

    @cached_property
    def omega(self):
        """|k| = angular frequency of each sample (c = 1)."""
        w = np.linalg.norm(self.k_vectors, axis=-1)
        w.flags.writeable = False
        return w

    @cached_property
    def exclusion_mask(self):
        m = self.omega <= 1e-9 * min(self.delta_k)
        m.flags.writeable = False
        return m

    @cached_property
    def cell_weight(self):
        """k-space integration weight dk^3 / (2 pi)^3 per sample."""
        return self.delta_k[0] * self.delta_k[1] * self.delta_k[2] / TWO_PI**3

    @property
    def n_samples(self):
        return self.n_per_axis[0] * self.n_per_axis[1] * self.n_per_axis[2]

    @property
    def unmasked_count(self):
        return int(self.n_samples - np.count_nonzero(self.exclusion_mask))

    def same_grid(self, other):
        return (
            self.n_per_axis == other.n_per_axis
            and np.allclose(self.delta_k, other.delta_k, rtol=0, atol=1e-12)
            and np.allclose(self.k_min, other.k_min, rtol=0, atol=1e-12)
        )

    def coverage_contains(self, k0):
        """True when k0 lies inside the sampled k-range (per axis)."""
        k0 = _triple(k0, "k0")
        for a in range(3):
            lo = self.k_min[a] - 0.5 * self.delta_k[a]
            hi = self.k_min[a] + (self.n_per_axis[a] - 0.5) * self.delta_k[a]
            if not (lo <= k0[a] <= hi):
                return False
        return True


@dataclass(frozen=True)
class PolarizationBasis:
    """Right-handed helicity triad per grid sample.

    e_par = k/|k|, e_plus/e_minus = (e_theta +/- i e_phi)/sqrt(2).  At the
    poles (k parallel to +/-z) the azimuth is fixed to phi = 0, which gives
    e_theta = (+/-1, 0, 0) and e_phi = (0, 1, 0).  Masked samples carry zero
    vectors.
    """

    e_par: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray

    def for_helicity(self, lam):
        if lam == +1:
            return self.e_plus
        if lam == -1:
            return self.e_minus
        raise ValueError(f"helicity must be +1 or -1, got {lam!r}")


def build_basis(grid: WaveVectorGrid) -> PolarizationBasis:
    """Construct the helicity triad on every unmasked sample of ``grid``."""
    k = grid.k_vectors
    kn = grid.omega
    mask = grid.exclusion_mask
    safe = np.where(mask, 1.0, kn)

    kx, ky, kz = k[..., 0], k[..., 1], k[..., 2]
    k_perp = np.hypot(kx, ky)
    # phi = 0 on the z axis implements the pole convention automatically
    on_pole = k_perp <= 1e-12 * safe
    phi = np.where(on_pole, 0.0, np.arctan2(ky, kx))
    cos_t = kz / safe
    sin_t = k_perp / safe

    e_theta = np.stack(
        [cos_t * np.cos(phi), cos_t * np.sin(phi), -sin_t], axis=-1
    )
    e_phi = np.stack(
        [-np.sin(phi), np.cos(phi), np.zeros_like(phi)], axis=-1
    )

    keep = ~mask[..., None]
    e_par = np.where(keep, k / safe[..., None], 0.0)
    e_theta = np.where(keep, e_theta, 0.0)
    e_phi = np.where(keep, e_phi, 0.0)

    inv_rt2 = 1.0 / np.sqrt(2.0)
    e_plus = (e_theta + 1j * e_phi) * inv_rt2
    e_minus = (e_theta - 1j * e_phi) * inv_rt2
    for arr in (e_par, e_plus, e_minus):
        arr.flags.writeable = False
    return PolarizationBasis(e_par=e_par, e_plus=e_plus, e_minus=e_minus)


@dataclass(frozen=True)
class PhotonSpectrum:
    """Transverse helicity amplitudes c_lambda(k) on a wavevector grid.

    ``c`` has shape (2, nx, ny, nz); c[0] is the lambda = +1 block and c[1]
    the lambda = -1 block.  ``normalized`` marks states with unit k-space
    norm; ``physical`` is False for idealized constructions (e.g. the
    localized basis) that are not meant to be normalizable in the continuum
    limit.
    """

    grid: WaveVectorGrid
    c: np.ndarray
    normalized: bool = False
    physical: bool = True

    def __post_init__(self):
        expected = (2,) + self.grid.n_per_axis
        c = np.asarray(self.c, dtype=np.complex128)
        if c.shape != expected:
            raise ValueError(f"amplitude array must have shape {expected}, got {c.shape}")
        if not np.isfinite(c.view(np.float64)).all():
            raise ValueError("amplitude array contains non-finite entries")
        mask = self.grid.exclusion_mask
        if np.count_nonzero(mask):
            c = np.where(mask[None, ...], 0.0 + 0.0j, c)
        c.flags.writeable = False
        object.__setattr__(self, "c", c)
        if self.normalized:
            n = float(np.real(scalar_product(self, self)))
            if abs(n - 1.0) > 1e-10:
                raise ValueError(f"normalized flag set but norm is {n!r}")

    def helicity_block(self, lam):
        return self.c[HELICITIES.index(lam)]

    @property
    def norm(self):
        return float(np.real(scalar_product(self, self)))

    def pure_helicity(self):
        """Return +1/-1 when exactly one helicity block is populated, else None."""
        has = [bool(np.any(self.c[i])) for i in range(2)]
        if has[0] and not has[1]:
            return +1
        if has[1] and not has[0]:
            return -1
        return None


@dataclass(frozen=True)
class SpectralSummary:
    """Mode-sum invariants of a spectrum (k-space side of Parseval)."""

    number: float
    energy: float
    momentum: tuple[float, float, float]
    helicity: float


def scalar_product(s1: PhotonSpectrum, s2: PhotonSpectrum) -> complex:
    """Mode-wise product sum_lambda sum_k w conj(c1) c2 (conjugate-linear in s1)."""
    if not s1.grid.same_grid(s2.grid):
        raise ValueError("grid mismatch between spectra")
    return complex(s1.grid.cell_weight * np.sum(np.conj(s1.c) * s2.c))


def normalize(s: PhotonSpectrum) -> PhotonSpectrum:
    """Scale to unit k-space norm; zero spectra are unnormalizable."""
    n = float(np.real(scalar_product(s, s)))
    if not np.isfinite(n) or n <= 0.0:
        raise ValueError("unnormalizable spectrum (zero or non-finite norm)")
    return PhotonSpectrum(s.grid, s.c / np.sqrt(n), normalized=True, physical=s.physical)


def evolve(s: PhotonSpectrum, dt: float) -> PhotonSpectrum:
    """Free propagation: multiply each amplitude by exp(-i omega dt)."""
    phase = np.exp(-1j * s.grid.omega * float(dt))
    return PhotonSpectrum(
        s.grid, s.c * phase[None, ...], normalized=s.normalized, physical=s.physical
    )


def gaussian_spectrum(grid, k0, sigma, helicity_weights=(1.0, 0.0)) -> PhotonSpectrum:
    """Normalized gaussian packet exp(-|k-k0|^2 / (4 sigma^2)) per helicity.

    ``helicity_weights`` are the complex weights (w_plus, w_minus); their
    relative magnitude fixes the helicity mixture.  Warns when |k0| < 5 sigma
    (packet reaches into the excluded zero mode region).
    """
    k0 = _triple(k0, "k0")
    sigma = float(sigma)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    w_plus, w_minus = (complex(w) for w in helicity_weights)
    if w_plus == 0 and w_minus == 0:
        raise ValueError("helicity_weights must not both vanish")
    if not grid.coverage_contains(k0):
        raise ValueError(f"k0 {k0!r} lies outside the grid coverage")
    if np.linalg.norm(k0) < 5.0 * sigma:
        warnings.warn(
            "gaussian packet is not well separated from the zero mode "
            "(|k0| < 5 sigma); low-frequency truncation may be visible",
            stacklevel=2,
        )
    d2 = np.sum((grid.k_vectors - np.asarray(k0)) ** 2, axis=-1)
    envelope = np.exp(-d2 / (4.0 * sigma**2))
    c = np.stack([w_plus * envelope, w_minus * envelope], axis=0)
    return normalize(PhotonSpectrum(grid, c))


def single_mode_spectrum(grid, index, helicity=+1) -> PhotonSpectrum:
    """Normalized spectrum populating exactly one unmasked grid sample."""
    idx = tuple(int(i) for i in index)
    if grid.exclusion_mask[idx]:
        raise ValueError(f"sample {idx!r} is masked (omega = 0)")
    c = np.zeros((2,) + grid.n_per_axis, dtype=np.complex128)
    c[(HELICITIES.index(helicity),) + idx] = 1.0
    return normalize(PhotonSpectrum(grid, c))


def localized_spectrum(grid, x0) -> PhotonSpectrum:
    """Localized-basis amplitudes c_lambda(k) = exp(-i k . x0) on both helicities.

    The continuum version is not normalizable, so the result is flagged
    non-physical; on a finite grid it is still a valid band-limited state.
    """
    x0 = _triple(x0, "x0")
    phase = np.exp(-1j * np.tensordot(grid.k_vectors, np.asarray(x0), axes=([-1], [0])))
    c = np.stack([phase, phase], axis=0)
    return PhotonSpectrum(grid, c, normalized=False, physical=False)


def spectral_summary(s: PhotonSpectrum) -> SpectralSummary:
    """Number, energy, momentum and helicity as plain k-space mode sums."""
    w = s.grid.cell_weight
    p2 = np.abs(s.c) ** 2
    number = float(w * np.sum(p2))
    p2_total = p2[0] + p2[1]
    energy = float(w * np.sum(s.grid.omega * p2_total))
    momentum = tuple(
        float(w * np.sum(s.grid.k_vectors[..., a] * p2_total)) for a in range(3)
    )
    helicity = float(w * (np.sum(p2[0]) - np.sum(p2[1])))
    return SpectralSummary(number=number, energy=energy, momentum=momentum, helicity=helicity)
