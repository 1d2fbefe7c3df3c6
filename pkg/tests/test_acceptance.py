"""Full acceptance suite: one test per headline guarantee.

Each test runs one registered check from :mod:`photonlab.runner`, prints its
single PASS/FAIL line (visible with ``pytest -s`` and in failure reports) and
asserts that every metric landed inside its threshold.  The same registry
backs ``photonlab selftest``; here each guarantee gets its own test id so a
regression names the broken physics directly.
"""

from __future__ import annotations

import pytest

from photonlab import runner

_BY_NAME = dict(runner.ACCEPTANCE_CHECKS + runner.CONTROL_CHECKS)


def _run(name: str) -> None:
    result = _BY_NAME[name]()
    print(result.line())
    assert result.ok, result.line()


def test_01_ladder_operator_identities():
    """Number, reversed-product and commutator expectations on a Fock ladder."""
    _run("fock-identities")


def test_02_number_density_norm_is_conserved():
    """Unit photon number, preserved across ten spectral evolution steps."""
    _run("number-norm")


def test_03_current_integral_matches_mode_sum():
    """Volume-integrated number current equals its mode-space oracle."""
    _run("current-integral")


def test_04_energy_and_momentum_integrals_match_mode_sums():
    """Volume-integrated energy and momentum equal their mode-space oracles."""
    _run("energy-momentum")


def test_05_continuity_residual_and_convergence_order():
    """d(rho)/dt + div J is small and shrinks quadratically with the step."""
    _run("continuity")


def test_06_helicity_and_spin_expectations():
    """Pure circular packets carry unit helicity and matching spin integral."""
    _run("helicity-spin")


def test_07_packet_transport_at_light_speed():
    """Centroid speed within 1% of c plus an exact 1-D translation residual."""
    _run("transport")


def test_08_half_power_frequency_operator_identity():
    """Energy-normalized and number-normalized wave fields are related by
    the square root of the frequency operator."""
    _run("omega-identity")


def test_09_longitudinal_scalar_cancellation():
    """Matched longitudinal and scalar amplitudes cancel exactly; a 10%
    mismatch leaves a strictly positive residual."""
    _run("longitudinal-cancellation")


def test_10_retarded_potential_solver():
    """Coulomb limit, gauge residual with refinement gain, and bit-exact
    causality of the retarded integrator."""
    _run("retarded-solver")


def test_11_localization_widths_are_box_independent():
    """Density widths for a broadband packet agree across two box sizes."""
    _run("localization")


@pytest.mark.parametrize("name", [name for name, _ in runner.CONTROL_CHECKS])
def test_negative_controls_detect_seeded_faults(name):
    """Deliberately corrupted conventions must trip their detectors."""
    _run(name)
