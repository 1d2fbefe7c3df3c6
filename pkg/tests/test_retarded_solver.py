"""Causal potential quadrature: statics, radiation, causality, file format."""

from __future__ import annotations

import math

import numpy as np
import pytest

from photonlab.retarded_solver import (
    PotentialField,
    SourceCurrent,
    faraday_tensor,
    fields_from_potential,
    gauge_residual,
    gaussian_dipole_source,
    read_columnar_source,
    retarded_potential,
    uniform_ball_source,
    write_columnar_source,
)
from photonlab.field_synthesis import SpatialGrid
from photonlab.runner import _dipole_gauge_residual, dipole_source


@pytest.fixture(scope="module")
def ball():
    return uniform_ball_source(2.5, 1.0, 2.2 / 15, 15)


@pytest.fixture(scope="module")
def small_dipole():
    return gaussian_dipole_source(
        (0.0, 0.0, 1.0), 1.0, 0.4, 0.2, 9, t0=0.0, delta_t=0.5, n_times=8
    )


def _coulomb_error(src: SourceCurrent, charge: float, radius: float) -> float:
    directions = np.array(
        [[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], [0.577350269, 0.577350269, 0.577350269]]
    )
    field = retarded_potential(src, radius * directions, 0.0)
    exact = charge / (4.0 * math.pi * radius)
    return float(np.max(np.abs(field.phi_over_c[0] / exact - 1.0)))


# ---------------------------------------------------------------------------
# Statics: the exactly solvable benchmark


def test_static_ball_reproduces_point_charge_potential(ball):
    assert _coulomb_error(ball, 2.5, 3.0) < 1e-3
    assert _coulomb_error(ball, 2.5, 5.0) < _coulomb_error(ball, 2.5, 3.0)


def test_coulomb_error_shrinks_under_refinement(ball):
    fine = uniform_ball_source(2.5, 1.0, 2.2 / 30, 30)
    coarse_err = _coulomb_error(ball, 2.5, 3.0)
    fine_err = _coulomb_error(fine, 2.5, 3.0)
    assert coarse_err / fine_err >= 2.0


def test_static_ball_charge_and_conservation(ball):
    assert ball.total_charge() == pytest.approx(2.5, abs=1e-12)
    assert ball.conservation_residual() == 0.0


def test_static_ball_fields_are_electrostatic(ball):
    center = (0.0, 0.0, 3.0)
    h = 0.3
    origin = tuple(c - 2.0 * h for c in center)
    grid = SpatialGrid((5, 5, 5), (h, h, h), origin)
    field = retarded_potential(ball, grid, [0.0, 0.5, 1.0, 1.5, 2.0])
    e_field, b_field = fields_from_potential(field)
    assert np.max(np.abs(b_field)) == 0.0  # zero current => zero A => zero curl
    assert gauge_residual(field) == 0.0
    r = 3.0
    exact = 2.5 / (4.0 * math.pi * r * r)
    measured = e_field[0, 1, 1, 1]  # interior point closest to the centre
    assert measured[2] == pytest.approx(exact, rel=2e-2)
    assert abs(measured[0]) < 2e-2 * exact and abs(measured[1]) < 2e-2 * exact


# ---------------------------------------------------------------------------
# Conserved dipole: sampling error, gauge defect, radiation falloff


def test_dipole_is_conserved_and_neutral():
    src = dipole_source()
    assert src.conservation_residual() < 1e-3
    for it in (0, src.n_times // 2, src.n_times - 1):
        assert abs(src.total_charge(it)) < 1e-12


def test_conservation_residual_detects_current_deficit(small_dipole):
    broken = SourceCurrent(
        small_dipole.rho,
        0.5 * small_dipole.current,
        small_dipole.delta_x,
        small_dipole.origin,
        small_dipole.t0,
        small_dipole.delta_t,
    )
    assert small_dipole.conservation_residual() < 2e-2
    assert broken.conservation_residual() > 0.5


def test_gauge_residual_small_and_converging():
    src = dipole_source()
    coarse = _dipole_gauge_residual(src, 0.5, 0.2)
    fine = _dipole_gauge_residual(src, 0.25, 0.1)
    assert coarse < 1e-2
    assert coarse / fine > 2.0


def test_radiated_amplitude_falls_off_as_inverse_distance():
    src = dipole_source()
    directions = np.vstack([np.eye(3), -np.eye(3)])
    radii = np.array([8.0, 11.0, 14.0, 17.0])
    amplitudes = []
    for r in radii:
        # evaluation times aligned so every radius sees the same retarded phase
        field = retarded_potential(src, r * directions, math.pi / 2.0 + r)
        amplitudes.append(float(np.mean(np.linalg.norm(field.A[0], axis=1))))
    slope = np.polyfit(np.log(radii), np.log(amplitudes), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.05)


# ---------------------------------------------------------------------------
# Structural properties of the quadrature


def test_potential_is_linear_in_the_source(small_dipole):
    src = small_dipole
    rolled = SourceCurrent(
        np.roll(src.rho, 2, axis=3),
        np.roll(src.current, 2, axis=3),
        src.delta_x,
        src.origin,
        src.t0,
        src.delta_t,
    )
    combined = SourceCurrent(
        1.75 * src.rho + rolled.rho,
        1.75 * src.current + rolled.current,
        src.delta_x,
        src.origin,
        src.t0,
        src.delta_t,
    )
    point = np.array([[2.0, 1.0, 1.5]])
    t = 4.85
    a = retarded_potential(src, point, t)
    b = retarded_potential(rolled, point, t)
    c = retarded_potential(combined, point, t)
    scale = max(np.max(np.abs(c.phi_over_c)), np.max(np.abs(c.A)))
    assert np.max(np.abs(c.phi_over_c - 1.75 * a.phi_over_c - b.phi_over_c)) < 1e-14 * scale
    assert np.max(np.abs(c.A - 1.75 * a.A - b.A)) < 1e-14 * scale


def test_causality_is_discretely_exact(small_dipole):
    src = small_dipole
    rho = src.rho.copy()
    current = src.current.copy()
    rho[-1] += 1e3
    current[-1] += 7e2
    edited = SourceCurrent(rho, current, src.delta_x, src.origin, src.t0, src.delta_t)
    point = np.array([[3.0, 0.0, 0.0]])

    # Before the edited slice can causally reach the point: bitwise identical.
    early_a = retarded_potential(src, point, 4.5)
    early_b = retarded_potential(edited, point, 4.5)
    assert np.array_equal(early_a.phi_over_c, early_b.phi_over_c)
    assert np.array_equal(early_a.A, early_b.A)

    # After light from the edit arrives: the huge perturbation is visible.
    late_a = retarded_potential(src, point, 5.4)
    late_b = retarded_potential(edited, point, 5.4)
    assert not np.array_equal(late_a.phi_over_c, late_b.phi_over_c)


def test_window_violation_names_the_required_range(small_dipole):
    far_point = np.array([[30.0, 0.0, 0.0]])
    with pytest.raises(ValueError, match="retarded time outside source window"):
        retarded_potential(small_dipole, far_point, 1.0)


def test_inside_source_requires_regularization(small_dipole):
    inside = np.array([[0.0, 0.0, 0.0]])
    with pytest.raises(ValueError, match="inside a source cell"):
        retarded_potential(small_dipole, inside, 3.4, regularization_radius=0.0)
    softened = retarded_potential(small_dipole, inside, 3.4)
    assert np.all(np.isfinite(softened.phi_over_c))
    assert np.all(np.isfinite(softened.A))


def test_point_shape_validation(small_dipole):
    with pytest.raises(ValueError, match=r"shape \(n_points, 3\)"):
        retarded_potential(small_dipole, np.zeros((2, 4)), 4.0)


# ---------------------------------------------------------------------------
# Synthetic potentials: stencil fidelity and tensor packaging


def test_plane_wave_fields_travel_at_light_speed():
    """A = x-polarized cos(k z - w t) with k = w: finite differences must
    reproduce |E| = |B| (equality of the field magnitudes at light speed)."""
    n, h, ht = 9, 0.05, 0.03
    grid = SpatialGrid((n, n, n), (h, h, h), (-(n // 2) * h,) * 3)
    times = ht * (np.arange(5) - 2)
    z = grid.coordinates[..., 2]
    phase = z[None, ...] - times[:, None, None, None]
    a_field = np.zeros((5, n, n, n, 3))
    a_field[..., 0] = 0.8 * np.cos(phase)
    field = PotentialField(np.zeros((5, n, n, n)), a_field, tuple(times), grid=grid)

    assert gauge_residual(field) == 0.0  # A_x has no x-dependence, phi = 0
    e_field, b_field = fields_from_potential(field)
    ratio = np.linalg.norm(e_field) / np.linalg.norm(b_field)
    assert abs(ratio - 1.0) < 1e-3
    assert np.max(np.abs(np.sum(e_field * b_field, axis=-1))) == 0.0
    assert np.max(np.abs(e_field[..., 1:])) == 0.0
    assert np.max(np.abs(b_field[..., 0])) == 0.0 and np.max(np.abs(b_field[..., 2])) == 0.0


def test_faraday_tensor_layout_and_antisymmetry(rng):
    e_field = rng.normal(size=(4, 3))
    b_field = rng.normal(size=(4, 3))
    tensor = faraday_tensor(e_field, b_field)
    assert tensor.shape == (4, 4, 4)
    assert np.max(np.abs(tensor + np.swapaxes(tensor, -1, -2))) == 0.0
    assert np.array_equal(tensor[..., 0, 1], e_field[..., 0])
    assert np.array_equal(tensor[..., 0, 2], e_field[..., 1])
    assert np.array_equal(tensor[..., 0, 3], e_field[..., 2])
    assert np.array_equal(tensor[..., 1, 2], -b_field[..., 2])
    assert np.array_equal(tensor[..., 1, 3], b_field[..., 1])
    assert np.array_equal(tensor[..., 2, 3], -b_field[..., 0])


def test_faraday_tensor_rejects_mismatched_shapes():
    with pytest.raises(ValueError, match="shape"):
        faraday_tensor(np.zeros((2, 3)), np.zeros((3, 3)))


def test_potential_field_time_step_checks():
    grid = SpatialGrid((3, 3, 3), (0.1, 0.1, 0.1), (0.0, 0.0, 0.0))
    shape = (3, 3, 3, 3)
    uniform = PotentialField(
        np.zeros(shape), np.zeros(shape + (3,)), (0.0, 0.1, 0.2), grid=grid
    )
    assert uniform.time_step == pytest.approx(0.1)
    ragged = PotentialField(
        np.zeros(shape), np.zeros(shape + (3,)), (0.0, 0.1, 0.35), grid=grid
    )
    with pytest.raises(ValueError, match="uniform"):
        _ = ragged.time_step


# ---------------------------------------------------------------------------
# Source validation and the columnar text format


def test_source_shape_validation():
    with pytest.raises(ValueError, match="rho must have shape"):
        SourceCurrent(np.zeros((3, 3, 3)), np.zeros((3, 3, 3, 3)), (0.1,) * 3, (0.0,) * 3)
    with pytest.raises(ValueError, match="current shape"):
        SourceCurrent(
            np.zeros((1, 3, 3, 3)), np.zeros((1, 3, 3, 2, 3)), (0.1,) * 3, (0.0,) * 3
        )
    with pytest.raises(ValueError, match="delta_t"):
        SourceCurrent(
            np.zeros((2, 3, 3, 3)), np.zeros((2, 3, 3, 3, 3)), (0.1,) * 3, (0.0,) * 3
        )


def test_columnar_round_trip_is_bit_exact(small_dipole, tmp_path):
    path = tmp_path / "dipole.txt"
    write_columnar_source(small_dipole, str(path))
    back = read_columnar_source(str(path))
    assert np.array_equal(back.rho, small_dipole.rho)
    assert np.array_equal(back.current, small_dipole.current)
    assert back.delta_x == small_dipole.delta_x
    assert back.origin == small_dipole.origin
    assert back.t0 == small_dipole.t0
    assert back.delta_t == small_dipole.delta_t


def test_columnar_parse_errors_carry_location(tmp_path):
    good = tmp_path / "good.txt"
    write_columnar_source(uniform_ball_source(1.0, 0.5, 0.4, 3), str(good))
    text = good.read_text()

    bad_magic = tmp_path / "bad_magic.txt"
    bad_magic.write_text("# some other file\n" + text)
    with pytest.raises(ValueError, match="missing magic"):
        read_columnar_source(str(bad_magic))

    lines = text.splitlines()
    bad_row = tmp_path / "bad_row.txt"
    bad_row.write_text("\n".join(lines + ["0 1 1"]) + "\n")
    with pytest.raises(ValueError, match=rf"{bad_row.name}:{len(lines) + 1}: expected 8 columns"):
        read_columnar_source(str(bad_row))

    bad_value = tmp_path / "bad_value.txt"
    bad_value.write_text("\n".join(lines + ["0 1 1 1 frog 0 0 0"]) + "\n")
    with pytest.raises(ValueError, match=rf"{bad_value.name}:{len(lines) + 1}:"):
        read_columnar_source(str(bad_value))

    out_of_range = tmp_path / "out_of_range.txt"
    out_of_range.write_text("\n".join(lines + ["0 9 0 0 1 0 0 0"]) + "\n")
    with pytest.raises(ValueError, match="outside the declared lattice"):
        read_columnar_source(str(out_of_range))

    first_data = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    duplicated = tmp_path / "duplicated.txt"
    duplicated.write_text("\n".join(lines + [lines[first_data]]) + "\n")
    with pytest.raises(ValueError, match="duplicate sample"):
        read_columnar_source(str(duplicated))

    headerless = tmp_path / "headerless.txt"
    headerless.write_text(
        "\n".join(l for l in lines if not l.startswith("# n_times")) + "\n"
    )
    with pytest.raises(ValueError, match="missing header keys: n_times"):
        read_columnar_source(str(headerless))
