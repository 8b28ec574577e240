"""Single-excitation amplitude equations under a programmed Stark shift.

The state (alpha, beta, beta_k) evolves as

    d alpha   = g beta + (-i Delta_QD(t) - gamma) alpha
    d beta    = -i Delta_c beta - g alpha + kappa' sum_k beta_k
    d beta_k  = -i Delta_k beta_k - kappa' beta

with Delta_QD(t) a piecewise-constant schedule (optionally smoothed by a
short linear ramp).  The generator is linear and, for gamma = 0,
anti-Hermitian, so total norm is conserved.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import ScheduleGapError, StepTooLargeError, ValidationError
from .model import ModeGrid, SystemParams

# Schedule times are compared with this absolute slack.
_T_EPS = 1e-9

# dt * (bandwidth + max |Delta_QD|) must stay below this for the explicit
# fixed-step integrator to be trustworthy.
_STABILITY_LIMIT = 0.5


@dataclass(frozen=True, eq=False)
class ExcitationState:
    """Amplitudes of the single-excitation ansatz: QD, cavity, continuum."""

    alpha: complex
    beta: complex
    beta_k: np.ndarray = field(repr=False)

    def __post_init__(self):
        bk = np.asarray(self.beta_k, dtype=complex)
        if bk.ndim != 1:
            raise ValidationError("beta_k must be one-dimensional")
        object.__setattr__(self, "beta_k", bk)

    @classmethod
    def vacuum_cavity(cls, n_modes: int, alpha: complex = 0.0,
                      beta: complex = 0.0) -> "ExcitationState":
        return cls(alpha=alpha, beta=beta, beta_k=np.zeros(n_modes, dtype=complex))

    def packed(self) -> np.ndarray:
        """Flat complex vector [alpha, beta, beta_k...] for the integrator."""
        out = np.empty(2 + len(self.beta_k), dtype=complex)
        out[0] = self.alpha
        out[1] = self.beta
        out[2:] = self.beta_k
        return out

    @classmethod
    def from_packed(cls, y: np.ndarray) -> "ExcitationState":
        return cls(alpha=complex(y[0]), beta=complex(y[1]), beta_k=y[2:].copy())


def norm(state: ExcitationState) -> float:
    """Total excitation norm |alpha|^2 + |beta|^2 + sum |beta_k|^2."""
    return float(abs(state.alpha) ** 2 + abs(state.beta) ** 2
                 + np.sum(np.abs(state.beta_k) ** 2))


@dataclass(frozen=True)
class StarkSchedule:
    """Piecewise-constant QD detuning over contiguous time segments.

    Each segment is (t_start, t_end, delta_qd).  Boundary values are
    right-continuous: at a segment start the new detuning applies.  A
    nonzero ramp_time replaces each jump by a linear ramp of that
    duration at the start of the new segment; it must stay well below
    the coupling timescale (< 0.1).
    """

    segments: tuple[tuple[float, float, float], ...]
    ramp_time: float = 0.0

    def __post_init__(self):
        segs = tuple((float(a), float(b), float(d)) for a, b, d in self.segments)
        if not segs:
            raise ValidationError("schedule needs at least one segment")
        for a, b, _ in segs:
            if not b > a:
                raise ValidationError(f"segment ({a:g}, {b:g}) has non-positive length")
        for (_, b0, _), (a1, _, _) in zip(segs, segs[1:]):
            if abs(b0 - a1) > _T_EPS:
                raise ValidationError(
                    f"segments must be contiguous: gap between {b0:g} and {a1:g}")
        if self.ramp_time < 0:
            raise ValidationError("ramp_time must be >= 0")
        if self.ramp_time >= 0.1:
            raise ValidationError(
                f"ramp_time must be < 0.1 (much faster than the coupling), "
                f"got {self.ramp_time:g}")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "_starts", tuple(a for a, _, _ in segs))

    @property
    def t_min(self) -> float:
        return self.segments[0][0]

    @property
    def t_max(self) -> float:
        return self.segments[-1][1]

    def _segment_index(self, t: float) -> int:
        if t < self.t_min - _T_EPS or t > self.t_max + _T_EPS:
            raise ScheduleGapError(
                f"t={t:g} outside schedule coverage [{self.t_min:g}, {self.t_max:g}]")
        i = bisect_right(self._starts, t) - 1
        return max(0, min(i, len(self.segments) - 1))

    def delta_at(self, t: float) -> float:
        """QD detuning at time t, right-continuous at boundaries."""
        i = self._segment_index(t)
        start, _, delta = self.segments[i]
        if self.ramp_time > 0 and i > 0 and t < start + self.ramp_time:
            prev = self.segments[i - 1][2]
            frac = max(0.0, (t - start) / self.ramp_time)
            return prev + (delta - prev) * frac
        return delta

    def max_abs_delta(self) -> float:
        return max(abs(d) for _, _, d in self.segments)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled populations and norm along an integration run."""

    times: np.ndarray = field(repr=False)
    alpha_abs2: np.ndarray = field(repr=False)
    beta_abs2: np.ndarray = field(repr=False)
    norm: np.ndarray = field(repr=False)
    final_state: ExcitationState = field(repr=False)

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.alpha_abs2) == len(self.beta_abs2) == len(self.norm) == n):
            raise ValidationError("trajectory column lengths disagree")


def rhs(state: ExcitationState, t: float, params: SystemParams, grid: ModeGrid,
        schedule: StarkSchedule) -> ExcitationState:
    """Time derivative of the amplitudes at time t, packaged like a state."""
    if len(state.beta_k) != grid.n_modes:
        raise ValidationError(
            f"state has {len(state.beta_k)} continuum amplitudes, grid has "
            f"{grid.n_modes} modes")
    delta_qd = schedule.delta_at(t)
    ssum = np.sum(state.beta_k)
    d_alpha = params.g * state.beta + (-1j * delta_qd - params.gamma) * state.alpha
    d_beta = (-1j * params.delta_cav * state.beta - params.g * state.alpha
              + params.kappa_prime * ssum)
    d_beta_k = -1j * grid.detunings * state.beta_k - params.kappa_prime * state.beta
    return ExcitationState(alpha=d_alpha, beta=d_beta, beta_k=d_beta_k)


def _deriv_factory(params: SystemParams, grid: ModeGrid):
    """RHS on packed vectors with the detuning passed explicitly."""
    g = params.g
    gamma = params.gamma
    dcav = params.delta_cav
    kp = params.kappa_prime
    det = grid.detunings

    def deriv(y: np.ndarray, delta_qd: float) -> np.ndarray:
        dy = np.empty_like(y)
        bk = y[2:]
        dy[0] = g * y[1] + (-1j * delta_qd - gamma) * y[0]
        dy[1] = -1j * dcav * y[1] - g * y[0] + kp * bk.sum()
        np.multiply(det, bk, out=dy[2:])
        dy[2:] *= -1j
        dy[2:] -= kp * y[1]
        return dy

    return deriv


def integrate(initial: ExcitationState, params: SystemParams, grid: ModeGrid,
              schedule: StarkSchedule, T: float, dt: float = 1e-3,
              sample_every: int = 1) -> Trajectory:
    """Fixed-step RK4 integration from t=0 to t=T.

    The run is split at schedule boundaries so every step sees a single
    segment; the step size within a piece is shrunk slightly so steps
    land exactly on boundaries and on T.  Populations are recorded every
    `sample_every` accepted steps (t=0 and t=T always included).

    Raises StepTooLargeError when dt*(bandwidth + max|Delta_QD|) >= 0.5
    and ScheduleGapError when the schedule does not cover [0, T].
    """
    if len(initial.beta_k) != grid.n_modes:
        raise ValidationError(
            f"initial state has {len(initial.beta_k)} continuum amplitudes, "
            f"grid has {grid.n_modes} modes")
    if T <= 0:
        raise ValidationError(f"T must be > 0, got {T:g}")
    if dt <= 0:
        raise ValidationError(f"dt must be > 0, got {dt:g}")
    if sample_every < 1:
        raise ValidationError(f"sample_every must be >= 1, got {sample_every}")
    stiffness = dt * (grid.bandwidth + schedule.max_abs_delta())
    if stiffness >= _STABILITY_LIMIT:
        raise StepTooLargeError(
            f"dt*(bandwidth + max|Delta_QD|) = {stiffness:.3g} exceeds "
            f"{_STABILITY_LIMIT:g}; reduce dt")
    if schedule.t_min > _T_EPS or schedule.t_max < T - _T_EPS:
        raise ScheduleGapError(
            f"schedule covers [{schedule.t_min:g}, {schedule.t_max:g}], "
            f"run needs [0, {T:g}]")

    # Clip schedule segments to [0, T]; each piece is integrated with a
    # constant detuning unless a ramp makes it time dependent.
    pieces = []
    for a, b, d in schedule.segments:
        s0, s1 = max(a, 0.0), min(b, T)
        if s1 - s0 > _T_EPS:
            pieces.append((s0, s1, d))
    ramped = schedule.ramp_time > 0

    deriv = _deriv_factory(params, grid)
    y = initial.packed()

    times = [0.0]
    a2 = [abs(y[0]) ** 2]
    b2 = [abs(y[1]) ** 2]
    nrm = [float(np.sum(np.abs(y) ** 2))]
    step_count = 0

    for s0, s1, delta in pieces:
        n_steps = max(1, int(np.ceil((s1 - s0) / dt - 1e-12)))
        h = (s1 - s0) / n_steps
        t = s0
        for _ in range(n_steps):
            if ramped:
                d0 = schedule.delta_at(t)
                dh = schedule.delta_at(min(t + 0.5 * h, s1))
                d1 = schedule.delta_at(min(t + h, s1))
            else:
                d0 = dh = d1 = delta
            k1 = deriv(y, d0)
            k2 = deriv(y + 0.5 * h * k1, dh)
            k3 = deriv(y + 0.5 * h * k2, dh)
            k4 = deriv(y + h * k3, d1)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
            step_count += 1
            if step_count % sample_every == 0:
                times.append(t)
                a2.append(abs(y[0]) ** 2)
                b2.append(abs(y[1]) ** 2)
                nrm.append(float(np.sum(np.abs(y) ** 2)))

    if times[-1] < T - _T_EPS:
        times.append(T)
        a2.append(abs(y[0]) ** 2)
        b2.append(abs(y[1]) ** 2)
        nrm.append(float(np.sum(np.abs(y) ** 2)))

    return Trajectory(times=np.asarray(times), alpha_abs2=np.asarray(a2),
                      beta_abs2=np.asarray(b2), norm=np.asarray(nrm),
                      final_state=ExcitationState.from_packed(y))
