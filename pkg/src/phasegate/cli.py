"""Configuration-driven command line: runs, sweeps, convergence checks.

Commands
    run       simulate basis states, write trajectory/envelope/phase CSVs
              and a scenario JSON per state
    sweep     gamma/kappa fidelity sweep, write sweep.csv
    converge  rerun at paired (n_modes, dt) resolutions, write convergence.csv

Exit codes: 0 success, 2 usage, 3 validation, 4 numerical (bandwidth or
step-size trouble).  All numbers are serialized with 12 significant
digits and repeated runs produce byte-identical files.

Config files are flat INI text; every key is optional.  Frequencies are
in units of g and times in 1/g; `kappa` is the cavity field decay rate.

    [params]   g, kappa, gamma, delta_bind, delta_cav
    [grid]     n_modes, bandwidth, dt
    [pulses]   w, t0_1, t0_2
    [schedule] t1, t2, t_end, ramp_time
    [options]  biexciton_coupling_factor, bare_cavity_model, residual_model
    [run]      state, out
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, protocol
from .dynamics import Trajectory
from .errors import NumericalError, ValidationError
from .model import Envelope

DEFAULT_SWEEP_RATIOS = (0.0, 0.001, 0.01, 0.02, 0.05, 0.1, 0.2)
DEFAULT_CONVERGE_GRIDS = (2000, 4000)
DEFAULT_CONVERGE_STEPS = (1e-3, 5e-4)

# Trajectory CSVs keep every tenth sample; full resolution lives in the
# scenario JSON parameters for anyone who needs to rerun.
_TRAJECTORY_STRIDE = 10


@dataclass
class RunConfig:
    """Validated, fully-defaulted run parameters."""

    g: float = 1.0
    kappa: float = 1.0
    gamma: float = 0.0
    delta_bind: float = 20.0
    delta_cav: float = 0.0
    n_modes: int = 2000
    bandwidth: float = 20.0
    dt: float = 1e-3
    w: float = 1.0
    t0_1: float | None = None
    t0_2: float | None = None
    t1: float | None = None
    t2: float | None = None
    t_end: float | None = None
    ramp_time: float = 0.0
    biexciton_coupling_factor: float = 1.0
    bare_cavity_model: str = "decoupled"
    residual_model: str = "discard"
    state: str = "all"
    out: str = "."

    def __post_init__(self):
        if self.g <= 0:
            raise ValidationError(f"g must be > 0, got {self.g:g}")
        if self.kappa <= 0:
            raise ValidationError(f"kappa must be > 0, got {self.kappa:g}")
        if self.gamma < 0:
            raise ValidationError(f"gamma must be >= 0, got {self.gamma:g}")
        if self.n_modes < 2:
            raise ValidationError(f"n_modes must be >= 2, got {self.n_modes}")
        if self.bandwidth <= 0:
            raise ValidationError(f"bandwidth must be > 0, got {self.bandwidth:g}")
        if self.dt <= 0:
            raise ValidationError(f"dt must be > 0, got {self.dt:g}")
        if self.w <= 0:
            raise ValidationError(f"w must be > 0, got {self.w:g}")
        if not 0.0 <= self.ramp_time < 0.1:
            raise ValidationError(
                f"ramp_time must lie in [0, 0.1), got {self.ramp_time:g}")
        if self.biexciton_coupling_factor <= 0:
            raise ValidationError("biexciton_coupling_factor must be > 0")
        if self.bare_cavity_model not in protocol.BARE_CAVITY_MODELS:
            raise ValidationError(
                f"bare_cavity_model must be one of {protocol.BARE_CAVITY_MODELS}, "
                f"got {self.bare_cavity_model!r}")
        if self.residual_model not in protocol.RESIDUAL_MODELS:
            raise ValidationError(
                f"residual_model must be one of {protocol.RESIDUAL_MODELS}, "
                f"got {self.residual_model!r}")
        if self.state not in protocol.INPUT_STATES + ("all",):
            raise ValidationError(
                f"state must be one of {protocol.INPUT_STATES + ('all',)}, "
                f"got {self.state!r}")


# section -> key -> (RunConfig attribute, parser)
_SCHEMA = {
    "params": {"g": ("g", float), "kappa": ("kappa", float),
               "gamma": ("gamma", float), "delta_bind": ("delta_bind", float),
               "delta_cav": ("delta_cav", float)},
    "grid": {"n_modes": ("n_modes", int), "bandwidth": ("bandwidth", float),
             "dt": ("dt", float)},
    "pulses": {"w": ("w", float), "t0_1": ("t0_1", float),
               "t0_2": ("t0_2", float)},
    "schedule": {"t1": ("t1", float), "t2": ("t2", float),
                 "t_end": ("t_end", float), "ramp_time": ("ramp_time", float)},
    "options": {"biexciton_coupling_factor": ("biexciton_coupling_factor", float),
                "bare_cavity_model": ("bare_cavity_model", str),
                "residual_model": ("residual_model", str)},
    "run": {"state": ("state", str), "out": ("out", str)},
}


def load_config(path: str) -> RunConfig:
    """Parse and validate an INI config file; absent keys take defaults."""
    if not os.path.isfile(path):
        raise ValidationError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=path)
    except configparser.Error as exc:
        raise ValidationError(f"config parse error: {exc}") from exc
    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ValidationError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ValidationError(f"unknown key '{key}' in section [{section}]")
            attr, convert = _SCHEMA[section][key]
            try:
                values[attr] = convert(raw) if convert is not str else raw.strip()
            except ValueError as exc:
                raise ValidationError(
                    f"bad value for '{key}' in section [{section}]: {raw!r}") from exc
    return RunConfig(**values)


def scenario_from_config(cfg: RunConfig, state: str) -> protocol.GateScenario:
    return protocol.make_scenario(
        input_state=state, g=cfg.g, kappa=cfg.kappa, gamma=cfg.gamma,
        delta_bind=cfg.delta_bind, delta_cav=cfg.delta_cav, width=cfg.w,
        n_modes=cfg.n_modes, bandwidth=cfg.bandwidth, dt=cfg.dt,
        t0_1=cfg.t0_1, t1=cfg.t1, t0_2=cfg.t0_2, t2=cfg.t2, t_end=cfg.t_end,
        biexciton_coupling_factor=cfg.biexciton_coupling_factor,
        bare_cavity_model=cfg.bare_cavity_model,
        residual_model=cfg.residual_model, ramp_time=cfg.ramp_time)


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _json_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{json.dumps(k)}: {_json_text(v, indent + 1)}"
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_text(v, indent) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return _fmt(obj)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_envelope_csv(path: str, env: Envelope) -> None:
    phase = analysis.wrap_angle(np.angle(env.values))
    rows = ["t,re_f,im_f,abs2_f,phase"]
    for t, v, p in zip(env.times, env.values, phase):
        rows.append(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)},"
                    f"{_fmt(abs(v) ** 2)},{_fmt(p)}")
    _write_text(path, "\n".join(rows) + "\n")


def _write_trajectory_csv(path: str, traj: Trajectory) -> None:
    idx = list(range(0, len(traj.times), _TRAJECTORY_STRIDE))
    if idx[-1] != len(traj.times) - 1:
        idx.append(len(traj.times) - 1)
    rows = ["t,alpha_abs2,beta_abs2,norm"]
    for i in idx:
        rows.append(f"{_fmt(traj.times[i])},{_fmt(traj.alpha_abs2[i])},"
                    f"{_fmt(traj.beta_abs2[i])},{_fmt(traj.norm[i])}")
    _write_text(path, "\n".join(rows) + "\n")


def _write_phase_csv(path: str, profile: analysis.PhaseProfile) -> None:
    rows = ["t,phase"]
    for t, p in zip(profile.times, profile.phase):
        rows.append(f"{_fmt(t)},{_fmt(p)}")
    _write_text(path, "\n".join(rows) + "\n")


def _params_block(scenario: protocol.GateScenario) -> dict:
    t1, t2, t_end = scenario.schedule_times
    return {
        "g": scenario.params.g,
        "kappa": scenario.params.kappa / 2.0,
        "gamma": scenario.params.gamma,
        "delta_bind": scenario.params.delta_bind,
        "delta_cav": scenario.params.delta_cav,
        "n_modes": scenario.grid.n_modes,
        "bandwidth": scenario.grid.bandwidth,
        "w": scenario.photon1_pulse.width,
        "t0_1": scenario.photon1_pulse.t0,
        "t0_2": scenario.photon2_pulse.t0,
        "t1": t1, "t2": t2, "t_end": t_end,
        "dt": scenario.dt,
        "ramp_time": scenario.ramp_time,
        "biexciton_coupling_factor": scenario.biexciton_coupling_factor,
        "bare_cavity_model": scenario.bare_cavity_model,
        "residual_model": scenario.residual_model,
    }


def _write_result_files(out_dir: str, result: protocol.ScenarioResult) -> None:
    st = result.input_state
    doc = {
        "input_state": st,
        "fidelity1": result.fidelity1,
        "fidelity2": result.fidelity2,
        "phase1": result.phase1,
        "phase2": result.phase2,
        "gate_element_re": result.gate_element.real,
        "gate_element_im": result.gate_element.imag,
        "stored_excitation_prob": result.stored_excitation_prob,
        "params": _params_block(result.scenario),
    }
    _write_text(os.path.join(out_dir, f"{st}_scenario.json"),
                _json_text(doc) + "\n")
    pairs = (("photon1", result.photon1_in, result.photon1_out,
              result.trajectory1, result.delay1),
             ("photon2", result.photon2_in, result.photon2_out,
              result.trajectory2, result.delay2))
    for tag, f_in, f_out, traj, delay in pairs:
        if f_in is None:
            continue
        _write_envelope_csv(os.path.join(out_dir, f"{st}_{tag}_in.csv"), f_in)
        _write_envelope_csv(os.path.join(out_dir, f"{st}_{tag}_out.csv"), f_out)
        _write_trajectory_csv(os.path.join(out_dir, f"{st}_{tag}_trajectory.csv"), traj)
        profile = analysis.phase_profile(f_in, f_out, delay)
        _write_phase_csv(os.path.join(out_dir, f"{st}_{tag}_phase.csv"), profile)


def _cmd_run(cfg: RunConfig, out_dir: str, state: str) -> int:
    states = protocol.INPUT_STATES if state == "all" else (state,)
    os.makedirs(out_dir, exist_ok=True)
    results = []
    for st in states:
        scenario = scenario_from_config(cfg, st)
        result = protocol.run_scenario(scenario)
        results.append(result)
        _write_result_files(out_dir, result)
        print(f"{st}: fidelity1={_fmt(result.fidelity1)} "
              f"fidelity2={_fmt(result.fidelity2)} "
              f"|element|={_fmt(result.combined_fidelity)} "
              f"phase1={_fmt(result.phase1)} phase2={_fmt(result.phase2)}")
    if state == "all":
        matrix = protocol.assemble_gate_matrix(results)
        amps, concurrence = protocol.apply_to_superposition(matrix)
        diag = np.diagonal(matrix.elements)
        doc = {
            "basis": list(protocol.INPUT_STATES),
            "diagonal_re": [v.real for v in diag],
            "diagonal_im": [v.imag for v in diag],
            "correction_phase": matrix.correction_phase,
            "comparison_metric": matrix.comparison_metric,
            "superposition_out_re": [v.real for v in amps],
            "superposition_out_im": [v.imag for v in amps],
            "concurrence": concurrence,
        }
        _write_text(os.path.join(out_dir, "gate_matrix.json"),
                    _json_text(doc) + "\n")
        print(f"gate: m={_fmt(matrix.comparison_metric)} "
              f"concurrence={_fmt(concurrence)} "
              f"correction_phase={_fmt(matrix.correction_phase)}")
    return 0


def _cmd_sweep(cfg: RunConfig, out_dir: str, ratios) -> int:
    os.makedirs(out_dir, exist_ok=True)
    base = scenario_from_config(cfg, "aa")
    sweep = analysis.gamma_sweep(base, ratios)
    rows = ["gamma_over_kappa,F_aa,F_ab,F_ba,F_bb"]
    for i, ratio in enumerate(sweep.axis):
        rows.append(",".join([_fmt(ratio)] + [
            _fmt(sweep.fidelities[st][i]) for st in protocol.INPUT_STATES]))
    _write_text(os.path.join(out_dir, "sweep.csv"), "\n".join(rows) + "\n")
    for line in rows:
        print(line)
    return 0


def _cmd_converge(cfg: RunConfig, out_dir: str, grids, steps) -> int:
    os.makedirs(out_dir, exist_ok=True)
    state = cfg.state if cfg.state != "all" else "aa"
    scenario = scenario_from_config(cfg, state)
    report = analysis.convergence_check(scenario, grids, steps)
    rows = ["n_modes,dt,F"]
    for n, d, f in report.entries:
        rows.append(f"{n},{_fmt(d)},{_fmt(f)}")
    _write_text(os.path.join(out_dir, "convergence.csv"), "\n".join(rows) + "\n")
    for line in rows:
        print(line)
    print(f"max deviation from finest: {_fmt(report.max_deviation)}")
    return 0


def _parse_list(text: str, convert, what: str):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of {what}")
    try:
        return [convert(s) for s in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad {what} list: {text!r}")


def _ratio_list(text: str):
    return _parse_list(text, float, "gamma/kappa ratios")


def _grid_list(text: str):
    grids = _parse_list(text, int, "mode counts")
    if any(n < 2 for n in grids):
        raise argparse.ArgumentTypeError("mode counts must be >= 2")
    return grids


def _step_list(text: str):
    steps = _parse_list(text, float, "step sizes")
    if any(d <= 0 for d in steps):
        raise argparse.ArgumentTypeError("step sizes must be > 0")
    return steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasegate",
        description="Simulate a Stark-tuned cavity QED photonic phase gate.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="INI config file (defaults used when omitted)")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default from config, else '.')")

    p_run = sub.add_parser("run", parents=[common],
                           help="run basis-state scenarios and write artifacts")
    p_run.add_argument("--state", choices=protocol.INPUT_STATES + ("all",),
                       help="basis state to run (default from config, else all)")

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="fidelity vs gamma/kappa sweep")
    p_sweep.add_argument("--ratios", type=_ratio_list,
                         default=list(DEFAULT_SWEEP_RATIOS),
                         help="comma-separated gamma/kappa ratios")

    p_conv = sub.add_parser("converge", parents=[common],
                            help="rerun at paired (n_modes, dt) resolutions")
    p_conv.add_argument("--grids", type=_grid_list,
                        default=list(DEFAULT_CONVERGE_GRIDS),
                        help="comma-separated mode counts")
    p_conv.add_argument("--steps", type=_step_list,
                        default=list(DEFAULT_CONVERGE_STEPS),
                        help="comma-separated integrator steps")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        out_dir = args.out if args.out is not None else cfg.out
        if args.command == "run":
            state = args.state if args.state is not None else cfg.state
            return _cmd_run(cfg, out_dir, state)
        if args.command == "sweep":
            return _cmd_sweep(cfg, out_dir, args.ratios)
        return _cmd_converge(cfg, out_dir, args.grids, args.steps)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
