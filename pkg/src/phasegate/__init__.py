"""Deterministic simulator of a Stark-tuned cavity QED photonic phase gate.

A quantum-dot--cavity system stores photon 1, lets photon 2 reflect off
either the biexciton transition or the bare cavity, and releases photon
1 again; the conditional pi phase between those reflections implements
a two-qubit controlled-phase gate on position-coded photonic qubits.
Everything is simulated as single-excitation wavepacket scattering on a
discretized waveguide continuum.
"""

from .analysis import (ConvergenceResult, FidelityReport, PhaseProfile,
                       SweepResult, aggregate_phase, convergence_check,
                       fidelity, gamma_sweep, phase_profile, reflection_oracle,
                       wrap_angle)
from .dynamics import (ExcitationState, StarkSchedule, Trajectory, integrate,
                       norm, rhs)
from .errors import (BandwidthExceededError, DegenerateStateError,
                     InconsistentInputsError, NumericalError, ScheduleGapError,
                     StepTooLargeError, UndefinedPhaseError, ValidationError)
from .model import (GAUSSIAN_TRUNCATION, Envelope, ModeGrid, PulseSpec,
                    SystemParams, build_mode_grid, derive_kappa_prime,
                    envelope_to_modes, modes_to_envelope, synthesize_gaussian)
from .protocol import (CALIBRATED_WIDTH, INPUT_STATES, PEAK_TRANSFER_DELAY,
                       GateMatrix, GateScenario, Photon1Result, Photon2Result,
                       ScenarioResult, apply_to_superposition,
                       assemble_gate_matrix, correction_phase, make_scenario,
                       run_photon1, run_photon2, run_scenario, with_resolution)

__version__ = "0.1.0"

__all__ = [
    "BandwidthExceededError", "CALIBRATED_WIDTH", "ConvergenceResult",
    "DegenerateStateError", "Envelope", "ExcitationState", "FidelityReport",
    "GAUSSIAN_TRUNCATION", "GateMatrix", "GateScenario",
    "InconsistentInputsError", "INPUT_STATES", "ModeGrid", "NumericalError",
    "PEAK_TRANSFER_DELAY", "PhaseProfile", "Photon1Result", "Photon2Result",
    "PulseSpec", "ScenarioResult", "ScheduleGapError", "StarkSchedule",
    "StepTooLargeError", "SweepResult", "SystemParams", "Trajectory",
    "UndefinedPhaseError", "ValidationError", "aggregate_phase",
    "apply_to_superposition", "assemble_gate_matrix", "build_mode_grid",
    "convergence_check", "correction_phase", "derive_kappa_prime",
    "envelope_to_modes", "fidelity", "gamma_sweep", "integrate",
    "make_scenario", "modes_to_envelope", "norm", "phase_profile",
    "reflection_oracle", "rhs", "run_photon1", "run_photon2", "run_scenario",
    "synthesize_gaussian", "with_resolution", "wrap_angle",
]
