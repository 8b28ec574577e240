"""Equations of motion, Stark schedules, and the fixed-step integrator."""

import numpy as np
import pytest

import phasegate as pg
from phasegate.errors import ScheduleGapError, StepTooLargeError, ValidationError

from helpers import expm_final_state, gaussian_envelope


def small_grid():
    return pg.build_mode_grid(4, 2.0)


def small_params(**overrides):
    kwargs = dict(g=0.7, kappa=2.0, gamma=0.0, delta_cav=0.5, kappa_prime=0.3)
    kwargs.update(overrides)
    return pg.SystemParams(**kwargs)


def flat_schedule(delta=1.3, t_stop=10.0):
    return pg.StarkSchedule(((0.0, t_stop, delta),))


class TestState:
    def test_pack_roundtrip(self):
        state = pg.ExcitationState(0.6, 0.8j, np.array([0.1, 0.2 + 0.1j]))
        back = pg.ExcitationState.from_packed(state.packed())
        assert back.alpha == state.alpha
        assert back.beta == state.beta
        np.testing.assert_array_equal(back.beta_k, state.beta_k)

    def test_norm(self):
        state = pg.ExcitationState(0.6, 0.8j, np.array([0.1, 0.2]))
        assert pg.norm(state) == pytest.approx(1.05, abs=1e-12)

    def test_vacuum_cavity(self):
        state = pg.ExcitationState.vacuum_cavity(5, alpha=1.0)
        assert state.alpha == 1.0
        assert np.all(state.beta_k == 0)

    def test_rejects_matrix_continuum(self):
        with pytest.raises(ValidationError):
            pg.ExcitationState(0.0, 0.0, np.zeros((2, 2)))


class TestRhs:
    def test_excited_emitter(self):
        state = pg.ExcitationState.vacuum_cavity(4, alpha=1.0)
        d = pg.rhs(state, 0.0, small_params(), small_grid(), flat_schedule())
        assert d.alpha == pytest.approx(-1.3j)
        assert d.beta == pytest.approx(-0.7)
        assert np.all(d.beta_k == 0)

    def test_excited_cavity(self):
        state = pg.ExcitationState.vacuum_cavity(4, beta=1.0)
        d = pg.rhs(state, 0.0, small_params(), small_grid(), flat_schedule())
        assert d.alpha == pytest.approx(0.7)
        assert d.beta == pytest.approx(-0.5j)
        np.testing.assert_allclose(d.beta_k, -0.3 * np.ones(4), atol=1e-15)

    def test_single_continuum_mode(self):
        beta_k = np.zeros(4, dtype=complex)
        beta_k[1] = 1.0  # detuning -1 on this grid
        state = pg.ExcitationState(0.0, 0.0, beta_k)
        d = pg.rhs(state, 0.0, small_params(), small_grid(), flat_schedule())
        assert d.alpha == 0.0
        assert d.beta == pytest.approx(0.3)
        assert d.beta_k[1] == pytest.approx(1.0j)

    def test_emitter_loss_enters_alpha_only(self):
        state = pg.ExcitationState.vacuum_cavity(4, alpha=1.0)
        d = pg.rhs(state, 0.0, small_params(gamma=0.1), small_grid(),
                   flat_schedule())
        assert d.alpha == pytest.approx(-0.1 - 1.3j)

    def test_rejects_mismatched_state(self):
        state = pg.ExcitationState.vacuum_cavity(3, alpha=1.0)
        with pytest.raises(ValidationError):
            pg.rhs(state, 0.0, small_params(), small_grid(), flat_schedule())


class TestSchedule:
    def test_right_continuous_boundaries(self):
        sched = pg.StarkSchedule(((0.0, 4.0, 0.0), (4.0, 8.0, 5.0)))
        assert sched.delta_at(3.9999) == 0.0
        assert sched.delta_at(4.0) == 5.0
        assert sched.delta_at(8.0) == 5.0
        assert sched.t_min == 0.0
        assert sched.t_max == 8.0

    def test_ramp_interpolates_jumps(self):
        sched = pg.StarkSchedule(((0.0, 4.0, 0.0), (4.0, 8.0, 5.0)),
                                 ramp_time=0.05)
        assert sched.delta_at(4.025) == pytest.approx(2.5)
        assert sched.delta_at(4.05) == 5.0
        assert sched.delta_at(2.0) == 0.0

    def test_max_abs_delta(self):
        sched = pg.StarkSchedule(((0.0, 1.0, -3.0), (1.0, 2.0, 2.0)))
        assert sched.max_abs_delta() == 3.0

    def test_queries_outside_coverage_fail(self):
        sched = flat_schedule(t_stop=5.0)
        with pytest.raises(ScheduleGapError):
            sched.delta_at(-1.0)
        with pytest.raises(ScheduleGapError):
            sched.delta_at(6.0)

    @pytest.mark.parametrize("segments", [
        (),
        ((0.0, 0.0, 1.0),),
        ((0.0, 2.0, 1.0), (3.0, 4.0, 0.0)),
    ])
    def test_rejects_broken_segment_lists(self, segments):
        with pytest.raises(ValidationError):
            pg.StarkSchedule(segments)

    @pytest.mark.parametrize("ramp", [-0.01, 0.1, 0.5])
    def test_rejects_bad_ramp(self, ramp):
        with pytest.raises(ValidationError):
            pg.StarkSchedule(((0.0, 1.0, 0.0),), ramp_time=ramp)


class TestIntegrate:
    def test_decoupled_emitter_pulse_returns_fully(self):
        # g = 0: the pulse bounces off the bare cavity; all energy is
        # back in the waveguide by the end and the carrier is flipped in
        # sign (all-pass response at gamma = 0, with some group delay)
        grid = pg.build_mode_grid(200, 4.0)
        params = pg.SystemParams.for_grid(grid, g=0.0, kappa=2.0)
        env = gaussian_envelope(6.0, 1.0, 20.0)
        initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
        traj = pg.integrate(initial, params, grid, flat_schedule(0.0, 20.0), 20.0)
        final = traj.final_state
        assert abs(final.alpha) ** 2 + abs(final.beta) ** 2 < 1e-6
        assert np.sum(np.abs(final.beta_k) ** 2) > 1 - 1e-6
        assert np.max(np.abs(traj.norm - 1.0)) < 1e-6
        f_out = pg.modes_to_envelope(final.beta_k, grid, 20.0, env.times)
        report = pg.fidelity(env, f_out)
        assert report.value > 0.99  # mild dispersion, no loss
        assert abs(pg.wrap_angle(pg.aggregate_phase(env, f_out) - np.pi)) < 0.05

    def test_norm_is_conserved_without_loss(self):
        grid = pg.build_mode_grid(200, 4.0)
        params = pg.SystemParams.for_grid(grid, g=1.0, kappa=2.0)
        env = gaussian_envelope(6.0, 1.0, 20.0)
        initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
        traj = pg.integrate(initial, params, grid, flat_schedule(0.0, 20.0), 20.0)
        assert np.max(np.abs(traj.norm - 1.0)) < 1e-8 * traj.times[-1] + 1e-9

    def test_emitter_loss_drains_norm_monotonically(self):
        grid = pg.build_mode_grid(200, 4.0)
        params = pg.SystemParams.for_grid(grid, g=1.0, kappa=2.0, gamma=0.05)
        env = gaussian_envelope(6.0, 1.0, 20.0)
        initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
        traj = pg.integrate(initial, params, grid, flat_schedule(0.0, 20.0), 20.0)
        assert np.all(np.diff(traj.norm) <= 1e-12)
        assert traj.norm[-1] < 0.999

    def test_halving_dt_leaves_final_state_unchanged(self):
        grid = pg.build_mode_grid(400, 8.0)
        params = pg.SystemParams.for_grid(grid, g=1.0, kappa=2.0)
        env = gaussian_envelope(3.0, 0.5, 8.0)
        initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
        sched = pg.StarkSchedule(((0.0, 4.0, 0.0), (4.0, 8.0, 20.0)))
        coarse = pg.integrate(initial, params, grid, sched, 8.0, dt=1e-3)
        fine = pg.integrate(initial, params, grid, sched, 8.0, dt=5e-4)
        diff = np.max(np.abs(coarse.final_state.packed() - fine.final_state.packed()))
        assert diff < 1e-7

    @pytest.mark.parametrize("n_modes", [4, 8])
    def test_matches_dense_matrix_exponential(self, n_modes):
        grid = pg.build_mode_grid(n_modes, 2.0)
        params = pg.SystemParams.for_grid(grid, g=0.7, kappa=1.1, gamma=0.05,
                                          delta_cav=0.3)
        rng = np.random.default_rng(7)
        y0 = rng.normal(size=n_modes + 2) + 1j * rng.normal(size=n_modes + 2)
        y0 /= np.linalg.norm(y0)
        initial = pg.ExcitationState.from_packed(y0)
        sched = pg.StarkSchedule(((0.0, 4.0, 0.0), (4.0, 8.0, 5.0)))
        traj = pg.integrate(initial, params, grid, sched, 8.0, dt=1e-3)
        exact = expm_final_state(initial, params, grid, sched, 8.0)
        assert np.max(np.abs(traj.final_state.packed() - exact)) < 1e-6

    def test_generator_is_linear(self):
        grid = pg.build_mode_grid(16, 2.0)
        params = pg.SystemParams.for_grid(grid, g=0.8, kappa=1.5)
        sched = flat_schedule(2.0, 2.0)
        rng = np.random.default_rng(11)

        def run(y0):
            state = pg.ExcitationState.from_packed(y0)
            return pg.integrate(state, params, grid, sched, 2.0).final_state.packed()

        x = rng.normal(size=18) + 1j * rng.normal(size=18)
        z = rng.normal(size=18) + 1j * rng.normal(size=18)
        a, b = 0.3 - 0.2j, 1.1 + 0.4j
        combined = run(a * x + b * z)
        assert np.max(np.abs(combined - (a * run(x) + b * run(z)))) < 1e-9

    def test_rejects_unstable_step(self):
        grid = pg.build_mode_grid(8, 40.0)
        params = pg.SystemParams.for_grid(grid, g=1.0, kappa=2.0)
        initial = pg.ExcitationState.vacuum_cavity(8, alpha=1.0)
        with pytest.raises(StepTooLargeError):
            pg.integrate(initial, params, grid, flat_schedule(20.0, 1.0), 1.0,
                         dt=1e-2)

    def test_rejects_uncovered_window(self):
        grid = small_grid()
        params = pg.SystemParams.for_grid(grid, kappa=2.0)
        initial = pg.ExcitationState.vacuum_cavity(4, alpha=1.0)
        with pytest.raises(ScheduleGapError):
            pg.integrate(initial, params, grid, flat_schedule(0.0, 2.0), 3.0)
        with pytest.raises(ScheduleGapError):
            pg.integrate(initial, params, grid,
                         pg.StarkSchedule(((0.5, 2.0, 0.0),)), 1.0)

    @pytest.mark.parametrize("kwargs", [
        {"T": 0.0}, {"T": -1.0}, {"T": 1.0, "dt": 0.0},
        {"T": 1.0, "sample_every": 0},
    ])
    def test_rejects_bad_run_arguments(self, kwargs):
        grid = small_grid()
        params = pg.SystemParams.for_grid(grid, kappa=2.0)
        initial = pg.ExcitationState.vacuum_cavity(4, alpha=1.0)
        T = kwargs.pop("T")
        with pytest.raises(ValidationError):
            pg.integrate(initial, params, grid, flat_schedule(0.0, 2.0), T,
                         **kwargs)

    def test_sampling_stride_keeps_endpoints(self):
        grid = small_grid()
        params = pg.SystemParams.for_grid(grid, kappa=2.0)
        initial = pg.ExcitationState.vacuum_cavity(4, beta=1.0)
        traj = pg.integrate(initial, params, grid, flat_schedule(0.0, 2.0), 2.0,
                            dt=1e-2, sample_every=1000)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(2.0)
        assert len(traj.times) == 2

    def test_ramped_schedule_integrates_and_conserves_norm(self):
        grid = pg.build_mode_grid(100, 4.0)
        params = pg.SystemParams.for_grid(grid, g=1.0, kappa=2.0)
        env = gaussian_envelope(4.2, 0.7, 12.0)
        initial = pg.ExcitationState(0.0, 0.0, pg.envelope_to_modes(env, grid, 0.0))
        sched = pg.StarkSchedule(((0.0, 6.0, 0.0), (6.0, 12.0, 8.0)),
                                 ramp_time=0.05)
        hard = pg.StarkSchedule(((0.0, 6.0, 0.0), (6.0, 12.0, 8.0)))
        ramped = pg.integrate(initial, params, grid, sched, 12.0)
        abrupt = pg.integrate(initial, params, grid, hard, 12.0)
        # drift relative to the initial norm (the pulse itself loses a
        # few 1e-5 of energy to the band edges before the run starts)
        assert np.max(np.abs(ramped.norm - ramped.norm[0])) < 1e-6
        gap = np.abs(ramped.final_state.packed() - abrupt.final_state.packed())
        assert np.max(gap) > 1e-6  # the ramp is dynamically visible
