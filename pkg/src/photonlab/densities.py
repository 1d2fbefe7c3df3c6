"""Photon number, current, four-momentum and angular-momentum densities.

All densities are bilinears of the positive-frequency fields,

    rho  = sigma * (1/2) [ -i A+ . E-  + c.c. ]  =  sigma * Im(A+ . conj(E+))
    J    = sigma * (1/2) [ -i A+ x cB- + c.c. ]
    H    = sigma * (1/2) [  i E+ . (omega A)- + c.c. ]
    P_j  = sigma * (1/2) [  i E+ . (k_j A)-   + c.c. ]

with the spectral operators (omega A), (k_j A) applied mode-wise.  ``sigma``
is a global sign fixed once by a self-calibration: the sign that makes the
number density of a single propagating mode positive.  It is logged on first
use and never varied per state.

The comparison wave fields are, per helicity lambda,

    F   = (1/2) (E + i lambda c B)        (|F|^2 is the energy density)
    psi = (1/2) (Omega^{1/2} A - i Omega^{-1/2} E)   (|psi|^2 integrates to 1)

where Omega is the spectral multiplier c|k|.  Both carry a 1/sqrt(2) on top
of the sqrt(epsilon_0/2)-style prefactors so that they share the photon-number
normalization of rho: a monochromatic mode then satisfies |F|^2 = omega rho
pointwise, and F = i Omega^{1/2} psi holds spectrally either way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import field_synthesis as fs
from .mode_space import PhotonSpectrum, WaveVectorGrid, single_mode_spectrum

logger = logging.getLogger(__name__)

DENSITY_KINDS = frozenset(
    {
        "number",
        "current",
        "energy",
        "momentum",
        "four_momentum",
        "angular_momentum",
        "bb_energy",
        "lp_number",
    }
)

_IMAG_RESIDUE_TOL = 1e-13


@dataclass(frozen=True)
class DensityField:
    """A real density (scalar or vector components on the trailing axis)."""

    kind: str
    data: np.ndarray
    t: float
    grid: fs.SpatialGrid

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")

    def integral(self):
        """Cell-volume weighted sum over the box (per trailing component)."""
        spatial = tuple(range(3))
        return self.grid.cell_volume * np.sum(self.data, axis=spatial)


@lru_cache(maxsize=1)
def density_sign() -> int:
    """Global density sign, calibrated once on a single propagating mode.

    Contracts the raw -i A+ . E- + c.c. bilinear for one populated mode and
    returns the sign that makes the resulting number density positive.
    """
    kgrid = WaveVectorGrid.centered((4, 4, 4), (1.0, 1.0, 1.0))
    s = single_mode_spectrum(kgrid, (2, 2, 3), +1)
    f = fs.synthesize(s, fs.SpatialGrid.paired(kgrid), 0.0)
    raw = float(np.mean(np.imag(np.sum(f.A_plus * np.conj(f.E_plus), axis=-1))))
    sign = 1 if raw > 0 else -1
    logger.info("number-density sign calibrated to %+d", sign)
    return sign


def _real_part(z, what):
    """Take the real part, asserting the imaginary residue is negligible."""
    scale = float(np.max(np.abs(z))) or 1.0
    residue = float(np.max(np.abs(np.imag(z))))
    if residue > _IMAG_RESIDUE_TOL * scale:
        raise AssertionError(f"{what}: imaginary residue {residue} exceeds tolerance")
    return np.real(z)


def number_density(f: fs.FieldSnapshot) -> DensityField:
    """rho = sigma/2 (-i A+ . E- + c.c.); integrates to the k-space norm."""
    z = -1j * np.sum(f.A_plus * np.conj(f.E_plus), axis=-1)
    rho = density_sign() * _real_part(0.5 * (z + np.conj(z)), "number density")
    return DensityField("number", rho, f.t, f.sgrid)


def photon_current(f: fs.FieldSnapshot) -> DensityField:
    """J = sigma/2 (-i A+ x cB- + c.c.) (c = 1 here)."""
    z = -1j * np.cross(f.A_plus, np.conj(f.B_plus))
    cur = density_sign() * _real_part(0.5 * (z + np.conj(z)), "photon current")
    return DensityField("current", cur, f.t, f.sgrid)


def _operator_density(f: fs.FieldSnapshot, symbol):
    """sigma/2 ( i E+ . conj(op A+) + c.c. ) for a real spectral symbol."""
    coeffs = f.a_coeffs * np.asarray(symbol)[..., None]
    op_a = fs.spectrum_to_field(coeffs, f.kgrid, f.sgrid)
    z = 1j * np.sum(f.E_plus * np.conj(op_a), axis=-1)
    return density_sign() * _real_part(0.5 * (z + np.conj(z)), "operator density")


def four_momentum_density(f: fs.FieldSnapshot) -> DensityField:
    """(H, P): energy from the omega multiplier, momentum from the k multiplier."""
    omega = f.kgrid.omega
    k = f.kgrid.k_vectors
    h = _operator_density(f, omega)
    parts = [h] + [_operator_density(f, k[..., a]) for a in range(3)]
    data = np.stack(parts, axis=-1)
    return DensityField("four_momentum", data, f.t, f.sgrid)


def energy_density(f: fs.FieldSnapshot) -> DensityField:
    return DensityField("energy", _operator_density(f, f.kgrid.omega), f.t, f.sgrid)


def momentum_density(f: fs.FieldSnapshot) -> DensityField:
    k = f.kgrid.k_vectors
    data = np.stack([_operator_density(f, k[..., a]) for a in range(3)], axis=-1)
    return DensityField("momentum", data, f.t, f.sgrid)


def helicity_density(f: fs.FieldSnapshot) -> np.ndarray:
    """Density of the helicity observable (normalized-curl spectral operator).

    The operator i khat x (.) has the helicity eigenvalue lambda on each
    helicity mode, so the integral reproduces the k-space helicity sum.
    """
    kgrid = f.kgrid
    khat = np.where(
        kgrid.exclusion_mask[..., None],
        0.0,
        kgrid.k_vectors / np.where(kgrid.exclusion_mask, 1.0, kgrid.omega)[..., None],
    )
    coeffs = 1j * np.cross(khat, f.a_coeffs)
    op_a = fs.spectrum_to_field(coeffs, f.kgrid, f.sgrid)
    z = 1j * np.sum(f.E_plus * np.conj(op_a), axis=-1)
    return density_sign() * _real_part(0.5 * (z + np.conj(z)), "helicity density")


def spin_angular_momentum_density(f: fs.FieldSnapshot) -> DensityField:
    """Spin part Re(E+ x A-); sign fixed so a pure-lambda state integrates
    to lambda * khat (checked against the k-space oracle)."""
    z = np.cross(f.E_plus, np.conj(f.A_plus))
    data = _real_part(0.5 * (z + np.conj(z)), "spin density")
    return DensityField("angular_momentum", data, f.t, f.sgrid)


def orbital_angular_momentum_density(f: fs.FieldSnapshot, origin) -> DensityField:
    """Orbital part r x P with P the momentum density (so that shifting the
    reference origin by d changes the integral by -d x total momentum)."""
    p = momentum_density(f).data
    r = f.sgrid.coordinates - np.asarray(origin, dtype=float)
    return DensityField("angular_momentum", np.cross(r, p), f.t, f.sgrid)


def angular_momentum_density(f: fs.FieldSnapshot, origin) -> DensityField:
    """Total angular momentum density: orbital (r x P) plus spin."""
    total = (
        orbital_angular_momentum_density(f, origin).data
        + spin_angular_momentum_density(f).data
    )
    return DensityField("angular_momentum", total, f.t, f.sgrid)


def apply_frequency_operator(field, kgrid: WaveVectorGrid, sgrid: fs.SpatialGrid, power):
    """Apply the spectral multiplier (c |k|)^power to a field array.

    power must be 1, 1/2 or -1/2.  The field must be band-limited to the
    paired grid (true for everything synthesized here).  Content on the
    excluded omega = 0 bins is rejected for the inverse power and zeroed
    otherwise.
    """
    if power not in (1, 1.0, 0.5, -0.5):
        raise ValueError(f"unsupported power {power!r}; use 1, 0.5 or -0.5")
    field = np.asarray(field, dtype=np.complex128)
    scalar = field.ndim == 3
    work = field[..., None] if scalar else field
    coeffs = fs.field_to_spectrum(work, kgrid, sgrid)
    mask = kgrid.exclusion_mask
    if np.count_nonzero(mask):
        content = float(np.max(np.abs(coeffs[mask])))
        scale = float(np.max(np.abs(coeffs))) or 1.0
        if power < 0 and content > 1e-12 * scale:
            raise ValueError("field has content on the omega = 0 mode; "
                             "cannot apply a negative frequency power")
        coeffs = np.where(mask[..., None], 0.0, coeffs)
    omega = np.where(mask, 1.0, kgrid.omega)
    coeffs = coeffs * (omega**float(power))[..., None]
    out = fs.spectrum_to_field(coeffs, kgrid, sgrid)
    return out[..., 0] if scalar else out


@dataclass(frozen=True)
class PhotonWaveFields:
    """Pure-helicity comparison wave functions F and psi (see module docs)."""

    helicity: int
    F: np.ndarray
    psi: np.ndarray
    t: float
    grid: fs.SpatialGrid


def photon_wave_fields(f: fs.FieldSnapshot, s: PhotonSpectrum) -> PhotonWaveFields:
    """Build F and psi from the real fields of a pure-helicity state."""
    lam = s.pure_helicity()
    if lam is None:
        raise ValueError("mixed-helicity spectrum: F and psi need a pure helicity")
    A, E, B = fs.real_fields(f)
    half = 0.5  # = (1/sqrt 2) * sqrt(1/2): photon-number normalization, cf. module docs
    F = half * (E + 1j * lam * B)
    om_a = apply_frequency_operator(A.astype(np.complex128), f.kgrid, f.sgrid, 0.5)
    om_e = apply_frequency_operator(E.astype(np.complex128), f.kgrid, f.sgrid, -0.5)
    psi = half * (om_a - 1j * om_e)
    return PhotonWaveFields(helicity=lam, F=F, psi=psi, t=f.t, grid=f.sgrid)


def bb_energy_density(wf: PhotonWaveFields) -> DensityField:
    """|F|^2: the energy-density reading of the first wave function."""
    data = np.sum(np.abs(wf.F) ** 2, axis=-1)
    return DensityField("bb_energy", data, wf.t, wf.grid)


def lp_number_density(wf: PhotonWaveFields) -> DensityField:
    """|psi|^2: the number-density reading of the second wave function."""
    data = np.sum(np.abs(wf.psi) ** 2, axis=-1)
    return DensityField("lp_number", data, wf.t, wf.grid)
