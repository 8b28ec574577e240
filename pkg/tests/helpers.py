"""Shared numerical helpers for the test suite."""

import numpy as np
from scipy.linalg import expm

import phasegate as pg


def gaussian_envelope(t0, width, t_stop, dt=1e-3, t_start=0.0):
    times = t_start + dt * np.arange(int(round((t_stop - t_start) / dt)) + 1)
    return pg.synthesize_gaussian(pg.PulseSpec("gaussian", t0, width), times)


def dense_generator(params, grid, delta_qd):
    """Matrix form of the amplitude equations on [alpha, beta, beta_k...]."""
    n = grid.n_modes
    mat = np.zeros((n + 2, n + 2), dtype=complex)
    mat[0, 0] = -1j * delta_qd - params.gamma
    mat[0, 1] = params.g
    mat[1, 0] = -params.g
    mat[1, 1] = -1j * params.delta_cav
    mat[1, 2:] = params.kappa_prime
    mat[2:, 1] = -params.kappa_prime
    mat[2:, 2:] = np.diag(-1j * grid.detunings)
    return mat


def expm_final_state(initial, params, grid, schedule, T):
    """Piecewise dense matrix-exponential evolution, exact per segment."""
    y = initial.packed()
    for start, stop, delta in schedule.segments:
        s0, s1 = max(start, 0.0), min(stop, T)
        if s1 - s0 <= 1e-12:
            continue
        y = expm(dense_generator(params, grid, delta) * (s1 - s0)) @ y
    return y


def scatter_narrowband(qd_mode, gamma, g=1.0, kappa_field=1.0):
    """Long-pulse scattering off a static system vs the analytic oracle.

    Returns (simulated overlap magnitude, simulated phase, oracle r at
    the carrier).  The pulse is wide enough (w=20) that the scattered
    field is essentially monochromatic at the carrier.
    """
    grid = pg.build_mode_grid(300, 1.5)
    g_eff = 0.0 if qd_mode == "decoupled" else g
    params = pg.SystemParams.for_grid(grid, g=g_eff, kappa=2.0 * kappa_field,
                                      gamma=gamma)
    t_stop, dt = 280.0, 5e-3
    env = gaussian_envelope(130.0, 20.0, t_stop, dt=dt)
    initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
    schedule = pg.StarkSchedule(((0.0, t_stop, 0.0),))
    traj = pg.integrate(initial, params, grid, schedule, t_stop, dt=dt)
    f_out = pg.modes_to_envelope(traj.final_state.beta_k, grid, t_stop, env.times)
    report = pg.fidelity(env, f_out)
    phase = pg.aggregate_phase(env, f_out)
    oracle = pg.reflection_oracle(0.0, params, qd_mode)
    return report.value, phase, oracle


def angle_distance(a, b):
    """Absolute phase difference modulo 2*pi."""
    return float(abs(pg.wrap_angle(np.asarray(a) - np.asarray(b))))


def bright_phase_deviation(result, target):
    """Worst |phase - target| (mod 2pi) across the FWHM of photon 2."""
    profile = pg.phase_profile(result.photon2_in, result.photon2_out,
                               result.delay2)
    mags = np.abs(result.photon2_in.values)
    ref = np.interp(profile.times - result.delay2, result.photon2_in.times, mags)
    sel = ref >= mags.max() / np.sqrt(2)
    dev = np.abs(pg.wrap_angle(profile.phase[sel] - target))
    return float(dev.max())
