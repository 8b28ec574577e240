"""Discretized waveguide continuum, physical parameters, and pulse envelopes.

The waveguide field is represented by N modes with detunings uniformly
spaced over [center - bandwidth, center + bandwidth).  A pulse envelope
f(t) on a uniform time grid and the mode amplitude vector beta_k are
related by the discrete Fourier pair

    beta_k      = sqrt(spacing/2pi) * sum_t f(t) exp(+i Delta_k (t - ref)) dt
    f(t)        = sqrt(spacing/2pi) * sum_k beta_k exp(-i Delta_k (t - T))

The sqrt(spacing) density factor makes the pair unitary (Parseval): a
unit-norm envelope maps to a unit-norm mode vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BandwidthExceededError, ValidationError

# Gaussian envelopes are identically zero beyond this many widths from t0.
GAUSSIAN_TRUNCATION = 6.0

# Maximum fraction of envelope energy allowed to fall outside the grid.
SPECTRAL_LEAKAGE_TOL = 1e-4

# Transform matrices are evaluated in time chunks of this size to bound
# peak memory at large N.
_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class ModeGrid:
    """Uniform discretization of the waveguide quasi-continuum."""

    n_modes: int
    bandwidth: float
    center: float
    spacing: float
    detunings: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_modes < 2:
            raise ValidationError(f"n_modes must be >= 2, got {self.n_modes}")
        if self.bandwidth <= 0:
            raise ValidationError(f"bandwidth must be > 0, got {self.bandwidth}")


def build_mode_grid(n_modes: int, bandwidth: float, center: float = 0.0) -> ModeGrid:
    """Build a mode grid of `n_modes` detunings centered on `center`.

    The spacing is 2*bandwidth/n_modes and the detunings cover
    [center - bandwidth, center + bandwidth), including the left edge.
    """
    if n_modes < 2:
        raise ValidationError(f"n_modes must be >= 2, got {n_modes}")
    if bandwidth <= 0:
        raise ValidationError(f"bandwidth must be > 0, got {bandwidth}")
    spacing = 2.0 * bandwidth / n_modes
    detunings = center - bandwidth + spacing * np.arange(n_modes)
    return ModeGrid(n_modes=n_modes, bandwidth=bandwidth, center=center,
                    spacing=spacing, detunings=detunings)


def derive_kappa_prime(kappa: float, spacing: float) -> float:
    """Coupling of the cavity to one discretized mode, sqrt(kappa*spacing/2pi).

    `kappa` is the rate at which energy leaves the cavity into the
    continuum: summing the per-mode coupling over the grid reproduces a
    cavity photon-number decay at exactly `kappa`.
    """
    if kappa <= 0:
        raise ValidationError(f"kappa must be > 0, got {kappa}")
    if spacing <= 0:
        raise ValidationError(f"spacing must be > 0, got {spacing}")
    return float(np.sqrt(kappa * spacing / (2.0 * np.pi)))


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the coupled quantum-dot--cavity system.

    `kappa` is the waveguide power coupling rate (the cavity photon
    number decays at `kappa`).  User-facing constructors in the protocol
    and CLI layers take the cavity field decay rate instead and pass
    twice that value here; see `README.md` for the convention.
    """

    g: float = 1.0
    kappa: float = 2.0
    gamma: float = 0.0
    delta_cav: float = 0.0
    delta_bind: float = 20.0
    kappa_prime: float = 0.0

    def __post_init__(self):
        # g = 0 is legal: it decouples the emitter (bare-cavity runs).
        if self.g < 0:
            raise ValidationError(f"g must be >= 0, got {self.g}")
        if self.kappa <= 0:
            raise ValidationError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValidationError(f"gamma must be >= 0, got {self.gamma}")

    @classmethod
    def for_grid(cls, grid: ModeGrid, g: float = 1.0, kappa: float = 2.0,
                 gamma: float = 0.0, delta_cav: float = 0.0,
                 delta_bind: float = 20.0) -> "SystemParams":
        """Construct params with kappa_prime derived from the grid spacing."""
        return cls(g=g, kappa=kappa, gamma=gamma, delta_cav=delta_cav,
                   delta_bind=delta_bind,
                   kappa_prime=derive_kappa_prime(kappa, grid.spacing))


@dataclass(frozen=True, eq=False)
class PulseSpec:
    """Description of a single-photon pulse.

    kind "gaussian" synthesizes a unit-norm Gaussian centered at t0 with
    temporal width `width`; kind "sampled" carries an explicit envelope.
    """

    kind: str = "gaussian"
    t0: float = 0.0
    width: float = 1.0
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("gaussian", "sampled"):
            raise ValidationError(f"unknown pulse kind {self.kind!r}")
        if self.kind == "gaussian" and self.width <= 0:
            raise ValidationError(f"width must be > 0, got {self.width}")
        if self.kind == "sampled" and self.samples is None:
            raise ValidationError("sampled pulse requires samples")


@dataclass(frozen=True, eq=False)
class Envelope:
    """Complex pulse envelope f(t) on a uniform time grid."""

    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValidationError("times and values must have equal length")
        if len(self.times) < 2:
            raise ValidationError("envelope needs at least two samples")
        dt = np.diff(self.times)
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
            raise ValidationError("time grid must be uniform")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def norm(self) -> float:
        """Total envelope energy, sum |f|^2 dt."""
        return float(np.sum(np.abs(self.values) ** 2) * self.dt)


def synthesize_gaussian(spec: PulseSpec, times: np.ndarray) -> Envelope:
    """Unit-norm Gaussian envelope centered at spec.t0 on the given grid.

    The analytic form is pi^(-1/4) w^(-1/2) exp(-(t-t0)^2 / (2 w^2)),
    set to exactly zero beyond t0 +/- 6w.  The grid must span the full
    truncated support, otherwise normalization would silently break.
    """
    if spec.kind == "sampled":
        values = np.asarray(spec.samples, dtype=complex)
        env = Envelope(times=np.asarray(times, dtype=float), values=values)
        n = env.norm()
        if n <= 0:
            raise ValidationError("sampled pulse has zero norm")
        return Envelope(times=env.times, values=values / np.sqrt(n))
    t0, w = spec.t0, spec.width
    times = np.asarray(times, dtype=float)
    edge = 1e-9
    if (times[0] > t0 - GAUSSIAN_TRUNCATION * w + edge
            or times[-1] < t0 + GAUSSIAN_TRUNCATION * w - edge):
        raise ValidationError(
            f"time grid [{times[0]:g}, {times[-1]:g}] does not contain "
            f"t0 +/- {GAUSSIAN_TRUNCATION:g}*width = "
            f"[{t0 - GAUSSIAN_TRUNCATION * w:g}, {t0 + GAUSSIAN_TRUNCATION * w:g}]")
    values = np.pi ** (-0.25) / np.sqrt(w) * np.exp(-((times - t0) ** 2) / (2.0 * w * w))
    values = np.where(np.abs(times - t0) <= GAUSSIAN_TRUNCATION * w, values, 0.0)
    return Envelope(times=times, values=values.astype(complex))


def envelope_to_modes(env: Envelope, grid: ModeGrid, ref_time: float) -> np.ndarray:
    """Forward transform: mode amplitudes beta_k of an envelope.

    Phases are referenced to `ref_time`, i.e. a free mode evolving as
    exp(-i Delta_k (t - ref_time)) reproduces the envelope.  Raises
    BandwidthExceededError when more than SPECTRAL_LEAKAGE_TOL of the
    envelope energy falls outside the grid bandwidth (detected as a
    Parseval deficit).
    """
    dt = env.dt
    beta = np.zeros(grid.n_modes, dtype=complex)
    for i in range(0, len(env.times), _CHUNK):
        ts = env.times[i:i + _CHUNK] - ref_time
        beta += np.exp(1j * np.outer(grid.detunings, ts)) @ env.values[i:i + _CHUNK]
    beta *= np.sqrt(grid.spacing / (2.0 * np.pi)) * dt
    total = env.norm()
    if total > 0:
        captured = float(np.sum(np.abs(beta) ** 2))
        leakage = 1.0 - captured / total
        if leakage > SPECTRAL_LEAKAGE_TOL:
            raise BandwidthExceededError(
                f"envelope leaks {leakage:.3e} of its energy outside the "
                f"grid bandwidth {grid.bandwidth:g} (tolerance {SPECTRAL_LEAKAGE_TOL:g})")
    return beta


def modes_to_envelope(beta_k: np.ndarray, grid: ModeGrid, T: float,
                      times: np.ndarray) -> Envelope:
    """Inverse transform: reconstruct f(t) from mode amplitudes at time T."""
    beta_k = np.asarray(beta_k, dtype=complex)
    if len(beta_k) != grid.n_modes:
        raise ValidationError(
            f"expected {grid.n_modes} mode amplitudes, got {len(beta_k)}")
    times = np.asarray(times, dtype=float)
    values = np.empty(len(times), dtype=complex)
    pref = np.sqrt(grid.spacing / (2.0 * np.pi))
    for i in range(0, len(times), _CHUNK):
        ts = times[i:i + _CHUNK] - T
        values[i:i + _CHUNK] = pref * (np.exp(-1j * np.outer(ts, grid.detunings)) @ beta_k)
    return Envelope(times=times, values=values)
