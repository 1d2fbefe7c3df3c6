"""Quadratic observable densities and the two comparison wave functions."""

from __future__ import annotations

import numpy as np
import pytest

from photonlab import densities
from photonlab.densities import (
    DENSITY_KINDS,
    angular_momentum_density,
    apply_frequency_operator,
    bb_energy_density,
    density_sign,
    energy_density,
    four_momentum_density,
    helicity_density,
    lp_number_density,
    momentum_density,
    number_density,
    orbital_angular_momentum_density,
    photon_current,
    photon_wave_fields,
    spin_angular_momentum_density,
)
from photonlab.field_synthesis import SpatialGrid, synthesize
from photonlab.mode_space import (
    PhotonSpectrum,
    WaveVectorGrid,
    gaussian_spectrum,
    single_mode_spectrum,
    spectral_summary,
)


@pytest.fixture(scope="module")
def small_snapshot(small_spatial, small_packet):
    return synthesize(small_packet, small_spatial, 0.0)


def test_density_kind_registry():
    assert DENSITY_KINDS == frozenset(
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


def test_sign_calibration_is_negative_and_cached():
    assert density_sign() == -1
    hits_before = density_sign.cache_info().hits
    assert density_sign() == -1
    assert density_sign.cache_info().hits == hits_before + 1


# ---------------------------------------------------------------------------
# Single propagating mode: the simplest exactly solvable case


def test_single_mode_density_is_uniform_one_over_box():
    grid = WaveVectorGrid.centered((6, 6, 6), (1.3, 1.3, 1.3))
    spatial = SpatialGrid.paired(grid)
    state = single_mode_spectrum(grid, (4, 2, 5), +1)
    snap = synthesize(state, spatial, 0.0)
    rho = number_density(snap)
    box_volume = float(np.prod(spatial.box_lengths))
    assert np.max(np.abs(rho.data - 1.0 / box_volume)) < 1e-12 / box_volume
    assert rho.integral() == pytest.approx(1.0, abs=1e-12)


def test_single_mode_matches_wave_function_reading_pointwise():
    grid = WaveVectorGrid.centered((6, 6, 6), (1.3, 1.3, 1.3))
    spatial = SpatialGrid.paired(grid)
    state = single_mode_spectrum(grid, (4, 2, 5), +1)
    snap = synthesize(state, spatial, 0.0)
    rho = number_density(snap).data
    wave = photon_wave_fields(snap, state)
    omega = grid.omega[4, 2, 5]
    energy_reading = bb_energy_density(wave).data / omega
    assert np.max(np.abs(energy_reading - rho)) < 1e-12 * np.max(rho)
    number_reading = lp_number_density(wave).data
    assert np.max(np.abs(number_reading - rho)) < 1e-12 * np.max(rho)


# ---------------------------------------------------------------------------
# Integrals against k-space mode sums


def test_density_integrals_match_spectral_sums(small_packet, small_snapshot):
    summary = spectral_summary(small_packet)
    assert number_density(small_snapshot).integral() == pytest.approx(
        summary.number, abs=1e-10
    )
    assert energy_density(small_snapshot).integral() == pytest.approx(
        summary.energy, rel=1e-10
    )
    momentum = np.asarray(momentum_density(small_snapshot).integral())
    assert np.allclose(momentum, summary.momentum, atol=1e-10)
    four = np.asarray(four_momentum_density(small_snapshot).integral())
    assert four[0] == pytest.approx(summary.energy, rel=1e-10)
    assert np.allclose(four[1:], summary.momentum, atol=1e-10)


def test_current_integral_is_group_velocity_average(small_packet, small_snapshot):
    grid = small_packet.grid
    mass = np.sum(np.abs(small_packet.c) ** 2, axis=0)
    omega = np.where(grid.exclusion_mask, 1.0, grid.omega)
    direction = np.where(
        grid.exclusion_mask[..., None], 0.0, grid.k_vectors / omega[..., None]
    )
    oracle = grid.cell_weight * np.einsum("ijk,ijkx->x", mass, direction)
    measured = np.asarray(photon_current(small_snapshot).integral())
    assert np.allclose(measured, oracle, atol=1e-10)


def test_helicity_integral_tracks_the_weights(small_grid, small_spatial):
    for weights, expected in (((1.0, 0.0), 1.0), ((0.0, 1.0), -1.0), ((1.0, 1.0), 0.0)):
        packet = gaussian_spectrum(small_grid, (0.0, 0.0, 3.2), 0.55, weights)
        snap = synthesize(packet, small_spatial, 0.0)
        total = float(np.sum(helicity_density(snap)) * small_spatial.cell_volume)
        assert total == pytest.approx(expected, abs=1e-10)


# ---------------------------------------------------------------------------
# Invariances


def test_densities_ignore_a_global_phase(small_grid, small_spatial, small_packet):
    rotated = PhotonSpectrum(
        small_grid, np.exp(0.7j) * small_packet.c, normalized=True
    )
    a = number_density(synthesize(small_packet, small_spatial, 0.0)).data
    b = number_density(synthesize(rotated, small_spatial, 0.0)).data
    assert np.max(np.abs(a - b)) < 1e-14 * np.max(a)


def test_integrals_are_constants_of_motion(small_spatial, small_packet):
    reference = None
    for t in (0.0, 0.9, 2.3):
        snap = synthesize(small_packet, small_spatial, t)
        values = np.concatenate(
            [
                [number_density(snap).integral(), energy_density(snap).integral()],
                np.asarray(momentum_density(snap).integral()),
            ]
        )
        if reference is None:
            reference = values
        else:
            assert np.max(np.abs(values - reference)) < 1e-10


# ---------------------------------------------------------------------------
# Angular momentum: spin, orbital and the origin-shift rule


def test_total_is_spin_plus_orbital(small_snapshot):
    origin = (0.4, -0.2, 0.1)
    total = angular_momentum_density(small_snapshot, origin).data
    parts = (
        spin_angular_momentum_density(small_snapshot).data
        + orbital_angular_momentum_density(small_snapshot, origin).data
    )
    assert np.array_equal(total, parts)


def test_orbital_origin_shift_rule(small_snapshot):
    shift = np.array([0.3, 0.5, -0.7])
    at_zero = np.asarray(orbital_angular_momentum_density(small_snapshot, (0, 0, 0)).integral())
    at_shift = np.asarray(orbital_angular_momentum_density(small_snapshot, shift).integral())
    momentum = np.asarray(momentum_density(small_snapshot).integral())
    predicted = at_zero - np.cross(shift, momentum)
    assert np.allclose(at_shift, predicted, atol=1e-12)


def test_spin_integral_points_along_mean_wave_vector(small_packet, small_snapshot):
    grid = small_packet.grid
    mass = np.abs(small_packet.c) ** 2
    omega = np.where(grid.exclusion_mask, 1.0, grid.omega)
    direction = np.where(
        grid.exclusion_mask[..., None], 0.0, grid.k_vectors / omega[..., None]
    )
    oracle = grid.cell_weight * np.einsum("ijk,ijkx->x", mass[0] - mass[1], direction)
    measured = np.asarray(spin_angular_momentum_density(small_snapshot).integral())
    assert np.allclose(measured, oracle, atol=1e-10)


# ---------------------------------------------------------------------------
# Comparison wave functions


def test_wave_function_closed_forms_for_pure_helicity(small_grid, small_spatial):
    for helicity, weights in ((+1, (1.0, 0.0)), (-1, (0.0, 1.0))):
        packet = gaussian_spectrum(small_grid, (0.0, 0.0, 3.2), 0.55, weights)
        snap = synthesize(packet, small_spatial, 0.3)
        wave = photon_wave_fields(snap, packet)
        assert wave.helicity == helicity
        scale = np.max(np.abs(snap.E_plus))
        assert np.max(np.abs(wave.F - snap.E_plus)) < 1e-11 * scale
        psi_oracle = -1j * apply_frequency_operator(
            snap.E_plus, small_grid, small_spatial, -0.5
        )
        assert np.max(np.abs(wave.psi - psi_oracle)) < 1e-11 * np.max(np.abs(psi_oracle))


def test_wave_function_norms(small_packet, small_snapshot):
    wave = photon_wave_fields(small_snapshot, small_packet)
    summary = spectral_summary(small_packet)
    assert bb_energy_density(wave).integral() == pytest.approx(summary.energy, rel=1e-10)
    assert lp_number_density(wave).integral() == pytest.approx(1.0, abs=1e-10)


def test_wave_fields_require_pure_helicity(small_grid, small_spatial):
    mixed = gaussian_spectrum(small_grid, (0.0, 0.0, 3.2), 0.55, (1.0, 1.0))
    snap = synthesize(mixed, small_spatial, 0.0)
    with pytest.raises(ValueError, match="helicity"):
        photon_wave_fields(snap, mixed)


def test_frequency_operator_identity(small_grid, small_spatial, small_packet):
    snap = synthesize(small_packet, small_spatial, 0.0)
    wave = photon_wave_fields(snap, small_packet)
    predicted = 1j * apply_frequency_operator(wave.psi, small_grid, small_spatial, 0.5)
    assert np.max(np.abs(wave.F - predicted)) < 1e-11 * np.max(np.abs(wave.F))


def test_frequency_operator_powers_compose(small_grid, small_spatial, small_snapshot):
    field = small_snapshot.A_plus
    twice_half = apply_frequency_operator(
        apply_frequency_operator(field, small_grid, small_spatial, 0.5),
        small_grid,
        small_spatial,
        0.5,
    )
    once = apply_frequency_operator(field, small_grid, small_spatial, 1)
    assert np.max(np.abs(twice_half - once)) < 1e-11 * np.max(np.abs(once))


def test_frequency_operator_rejects_other_powers(small_grid, small_spatial, small_snapshot):
    with pytest.raises(ValueError, match="power"):
        apply_frequency_operator(small_snapshot.A_plus, small_grid, small_spatial, 2.0)
