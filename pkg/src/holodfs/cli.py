"""Command-line front end: ``holodfs <command> [--config FILE] [flags]``.

Commands: holonomy, adiabatic, validate-eff, noise, synthesize, report.
Flags override config values. Results land in ``<root>/<name>/`` where the
root is ``--out``, else ``$HOLODFS_OUTPUT_ROOT``, else ``./runs``; the name
defaults to the command plus a digest of the resolved config.

Exit status: 0 success, 2 invalid input (nothing written), 3 numerical
failure (nothing written), 4 I/O failure. Failures print a JSON record
``{"error": {...}}`` on stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import kernels
from .core import HoloDFSError, NumericalError, ValidationError
from .report import dumps, emit_report, matrix_record

ENV_OUTPUT_ROOT = "HOLODFS_OUTPUT_ROOT"
COMMANDS = ("holonomy", "adiabatic", "validate-eff", "noise", "synthesize", "report")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


# (dest, section, key)
_SCHEDULE_FLAGS = [
    ("family", "schedule", "family", str),
    ("theta0", "schedule", "theta0", float),
    ("theta1", "schedule", "theta1", float),
    ("samples", "schedule", "samples", int),
    ("windings", "schedule", "windings", int),
    ("direction", "schedule", "direction", int),
]
_TIME_FLAGS = [
    ("omega", "schedule", "omega", float),
    ("ramp_shape", "schedule", "ramp_shape", str),
    ("timing", "schedule", "timing", str),
    ("steps_per_unit", "schedule", "steps_per_unit", int),
    ("trajectory_samples", "schedule", "trajectory_samples", int),
    ("initial", "schedule", "initial", str),
]
_TRAP_FLAGS = [
    ("eta", "trap", "eta", float),
    ("n_max", "trap", "n_max", int),
    ("rabi", "drive", "rabi", float),
    ("detuning", "drive", "detuning", float),
    ("periods", "drive", "periods", int),
    ("steps_per_period", "drive", "steps_per_period", int),
]
_NOISE_FLAGS = [
    ("kind", "noise", "kind", str),
    ("strength", "noise", "strength", float),
    ("kick_count", "noise", "kick_count", int),
    ("realizations", "noise", "realizations", int),
    ("noise_seed", "noise", "seed", int),
]


def _flag(dest: str) -> str:
    return "--" + dest.replace("_", "-")


def _add(p, flags):
    for dest, _, _, typ in flags:
        p.add_argument(_flag(dest), dest=dest, type=typ, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holodfs", description="Holonomic gates in a two-ion decoherence-free subspace.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", type=Path, default=None, help="INI config file")
        p.add_argument("--out", type=Path, default=None, help=f"output root (default ${ENV_OUTPUT_ROOT} or ./runs)")
        p.add_argument("--name", default=None, help="run directory name")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("holonomy", help="Wilson loop versus analytic phase")
    common(p)
    _add(p, _SCHEDULE_FLAGS)
    p.add_argument("--connection", choices=("analytic", "numeric"), default=None)

    p = sub.add_parser("adiabatic", help="time-domain gate extraction over a T sweep")
    common(p)
    _add(p, _SCHEDULE_FLAGS + _TIME_FLAGS)
    p.add_argument("--total-time", dest="total_times", type=float, nargs="+", default=None)
    p.add_argument("--refine", action="store_true", default=None)

    p = sub.add_parser("validate-eff", help="full two-ion model versus the effective coupling")
    common(p)
    _add(p, _TRAP_FLAGS)

    p = sub.add_parser("noise", help="collective dephasing: encoded versus bare")
    common(p)
    _add(p, _SCHEDULE_FLAGS + _TIME_FLAGS + _NOISE_FLAGS)
    p.add_argument("--total-time", dest="total_times", type=float, nargs="+", default=None)

    p = sub.add_parser("synthesize", help="loop sequence for a single-qubit target")
    common(p)
    p.add_argument("--target-su2", dest="target", default=None, help="alias (hadamard, x, y, z, s, t)")
    p.add_argument("--phi3", type=float, default=None, help="controlled-phase angle (default pi)")
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("report", help="index existing summaries under the output root")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--name", default=None)
    return parser


_ALL_FLAGS = _SCHEDULE_FLAGS + _TIME_FLAGS + _TRAP_FLAGS + _NOISE_FLAGS + [
    ("connection", "schedule", "connection", str),
    ("total_times", "schedule", "total_times", list),
    ("refine", "schedule", "refine", bool),
    ("seed", "run", "seed", int),
    ("name", "run", "name", str),
]


def resolve_config(args) -> cfgmod.ExperimentConfig:
    values = cfgmod.load(args.config) if getattr(args, "config", None) else cfgmod.defaults()
    for dest, section, key, _ in _ALL_FLAGS:
        v = getattr(args, dest, None)
        if v is not None:
            cfgmod.set_value(values, section, key, v)
    if args.command == "synthesize":
        for dest in ("target", "phi3", "samples"):
            v = getattr(args, dest, None)
            if v is not None:
                cfgmod.set_value(values, "synthesize", dest, v)
    return cfgmod.validate(values)


def output_root(args) -> Path:
    if getattr(args, "out", None) is not None:
        return Path(args.out)
    return Path(os.environ.get(ENV_OUTPUT_ROOT) or "runs")


def _digest(command: str, resolved: dict) -> str:
    return hashlib.sha256(dumps({"command": command, "config": resolved}).encode()).hexdigest()[:12]


# ------------------------------------------------------------- commands


def _loop(s: dict):
    from .holonomy import three_segment_loop

    return three_segment_loop(s["theta0"], s["samples"], s["windings"], s["direction"], s["theta1"])


def run_holonomy(cfg: cfgmod.ExperimentConfig):
    from .holonomy import analytic_holonomy, frame_to_logical, projective_distance, transported_gate, wilson_loop
    from .core import operator_distance

    s = cfg["schedule"]
    fam = s["family"]
    path = _loop(s)
    res = wilson_loop(fam, path, connection=s["connection"])
    w = res.logical_gate()
    a = frame_to_logical(fam, analytic_holonomy(fam, res.phase_integral))
    run = {
        "key": fam,
        "family": fam,
        "path": path.to_record(),
        "phase_integral": res.phase_integral,
        "wilson_gate": matrix_record(w),
        "analytic_gate": matrix_record(a),
        "distance": operator_distance(w, a),
        "projective_distance": projective_distance(w, a),
        "transported_gate": matrix_record(transported_gate(fam, path)),
        "connection": s["connection"],
    }
    return [run], {}


def _initial_state(family: str, label):
    from .adiabatic import basis_labels, logical_basis_state
    from .holonomy import effective_dim, logical_dim

    labels = basis_labels(family)
    if label is None:
        label = "11" if family == "u3" else "1L"
    if label == "+":
        d = logical_dim(family)
        v = sum(logical_basis_state(family, k) for k in range(d)) / np.sqrt(d)
        return label, v
    if label not in labels:
        raise ValidationError(f"initial state must be one of {labels} or '+', got {label!r}")
    v = np.zeros(effective_dim(family), dtype=complex)
    v[labels.index(label)] = 1.0
    return label, v


def _schedule(s: dict, total_time: float):
    from .adiabatic import Schedule

    return Schedule(s["family"], _loop(s), total_time, s["omega"], s["ramp_shape"], s["timing"], s["steps_per_unit"])


def run_adiabatic(cfg: cfgmod.ExperimentConfig):
    from .adiabatic import extract_logical_gate, simulate_schedule

    s = cfg["schedule"]
    label, psi0 = _initial_state(s["family"], s["initial"])
    scheds = [(T, _schedule(s, T)) for T in s["total_times"]]  # validate all before running
    runs, traj = [], {}
    for T, sched in scheds:
        rep = extract_logical_gate(sched, refine=s["refine"])
        final, tr = simulate_schedule(sched, psi0, s["trajectory_samples"])
        key = f"T{T:g}"
        runs.append(
            {
                "key": key,
                "total_time": T,
                "schedule": sched.to_record(),
                "realized_gate": matrix_record(rep.realized_gate),
                "target_gate": matrix_record(rep.target_gate),
                "infidelity": rep.infidelity,
                "renormalized_infidelity": rep.renormalized_infidelity,
                "projective_distance": rep.projective_distance,
                "leakage": rep.leakage,
                "failed": rep.failed,
                "min_gap": rep.min_gap,
                "max_drive_rate": rep.max_drive_rate,
                "adiabaticity_ratio": rep.adiabaticity_ratio,
                "unitarity_error": rep.unitarity_error,
                "n_steps": rep.n_steps,
                "step_change": rep.step_change,
                "refine_converged": rep.refine_converged,
                "initial": label,
                "final_populations": dict(zip(tr.labels, np.abs(final) ** 2)),
                "trajectory_rows": int(tr.times.shape[0]),
            }
        )
        traj[key] = (tr.columns(), tr.rows())
    for prev, cur in zip(runs, runs[1:]):
        cur["infidelity_ratio_vs_previous"] = prev["infidelity"] / cur["infidelity"] if cur["infidelity"] > 0 else None
    return runs, traj


def run_validate_eff(cfg: cfgmod.ExperimentConfig):
    from .ion_model import (
        BichromaticDrive,
        TrapIonConfig,
        effective_model_oracle,
        effective_rabi_closed_form,
        effective_rabi_single,
    )

    t, d = cfg["trap"], cfg["drive"]
    if t["n_ions"] != 2:
        raise ValidationError("validate-eff simulates two ions; set [trap] n_ions = 2")
    conf = TrapIonConfig(eta=t["eta"], n_max=t["n_max"], n_ions=2, nu=t["nu"])
    d1 = BichromaticDrive(0, "1", d["rabi"], d["detuning"])
    d2 = BichromaticDrive(1, "0", d["rabi"], d["detuning"])
    closed = effective_rabi_closed_form(d1, d2, conf.eta)
    summed = effective_rabi_single(d1, d2, conf.eta, n=0, levels=conf.levels, nu=conf.nu)
    rep = effective_model_oracle(conf, d["rabi"], d["detuning"], d["periods"], d["steps_per_period"])
    run = {
        "key": "oracle",
        "predicted_rabi": rep.predicted_rabi,
        "closed_form_rabi": closed,
        "perturbation_sum_rabi": summed,
        "fitted_rabi": rep.fitted_rabi,
        "fitted_amplitude": rep.fitted_amplitude,
        "relative_error": rep.relative_error,
        "rabi_ok": rep.rabi_ok,
        "max_phonon_population": rep.max_phonon_population,
        "phonon_population_cycle_end": rep.phonon_population_cycle_end,
        "phonon_bound": rep.phonon_bound,
        "phonon_ok": rep.phonon_ok,
        "light_shift": rep.light_shift,
        "weak_field_ratio": d1.weak_field_ratio(conf.eta),
    }
    cols = ["t", "pop_10", "pop_ee", "pop_phonon"]
    rows = np.column_stack([rep.times] + [rep.populations[c] for c in cols[1:]])
    return [run], {"": (cols, rows)}


def run_noise(cfg: cfgmod.ExperimentConfig):
    from .adiabatic import NoiseModel, coherence_after_kicks, dfs_immunity_experiment, memory_fidelity

    s, n = cfg["schedule"], cfg["noise"]
    noise = NoiseModel(n["kind"], n["strength"], cfg.noise_seed, n["kick_count"], n["realizations"], n["duration"])
    scheds = [(T, _schedule(s, T)) for T in s["total_times"]]
    runs = []
    for T, sched in scheds:
        r = dfs_immunity_experiment(sched, noise)
        runs.append(
            {
                "key": f"T{T:g}",
                "total_time": T,
                "schedule": sched.to_record(),
                "noise": noise.to_record(),
                "encoded_clean_infidelity": r.encoded_clean_infidelity,
                "encoded_noisy_infidelity": r.encoded_noisy_infidelity,
                "encoded_degradation": r.encoded_degradation,
                "bare_clean_infidelity": r.bare_clean_infidelity,
                "bare_noisy_infidelity": r.bare_noisy_infidelity,
                "bare_degradation": r.bare_degradation,
                "advantage": r.advantage,
                "transient_exposure": r.transient_exposure,
                "encoded_z_weights": r.encoded_z_weights,
                "bare_z_weights": r.bare_z_weights,
                "max_trace_error": r.max_trace_error,
            }
        )
    if noise.kind != "none":
        mem = {
            "key": "memory",
            "noise": noise.to_record(),
            "encoded_plus_fidelity": memory_fidelity(np.array([1, 1]) / np.sqrt(2), noise),
        }
        if noise.kind == "phase_kicks":
            mem["bare_coherence"] = coherence_after_kicks(noise)
        runs.append(mem)
    return runs, {}


def run_synthesize(cfg: cfgmod.ExperimentConfig):
    from .synthesis import loop_for_phase, resolve_target, synthesize_su2, u3

    y = cfg["synthesize"]
    target = resolve_target(y["target"])
    res = synthesize_su2(target, samples=y["samples"])
    cz = loop_for_phase("u3", y["phi3"], samples=y["samples"])
    run = {
        "key": "synthesis",
        "target": y["target"],
        "target_gate": matrix_record(res.target),
        "euler": {
            "phi_z1": res.angles.phi_z1,
            "phi_y": res.angles.phi_y,
            "phi_z2": res.angles.phi_z2,
            "global_phase": res.angles.global_phase,
        },
        "sequence": [lp.to_record() for lp in res.loops],
        "composed_gate": matrix_record(res.composed),
        "fidelity": res.fidelity,
        "controlled_phase": {"loop": cz.to_record(), "gate": matrix_record(u3(y["phi3"]))},
        "drive_orientation": "each loop is traversed reversed by the adiabatic drive",
    }
    return [run], {}


def run_report(root: Path):
    entries = []
    if root.is_dir():
        for p in sorted(root.glob("*/summary.json")):
            try:
                doc = json.loads(p.read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise ValidationError(f"unreadable summary {p}: {exc}") from exc
            if doc.get("command") == "report":
                continue
            entries.append(
                {
                    "path": str(p.relative_to(root)),
                    "command": doc.get("command"),
                    "schema_version": doc.get("schema_version"),
                    "run_keys": [r.get("key") for r in doc.get("runs", [])],
                }
            )
    return entries


RUNNERS = {
    "holonomy": run_holonomy,
    "adiabatic": run_adiabatic,
    "validate-eff": run_validate_eff,
    "noise": run_noise,
    "synthesize": run_synthesize,
}


def _error(kind: str, message: str, code: int) -> int:
    rec = {"error": {"type": kind, "message": message, "exit_code": code}}
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        root = output_root(args)
        if args.command == "report":
            runs = run_report(root)
            out_dir = root / (args.name or "report")
            config = {"root": str(root)}
            paths = emit_report(out_dir, "report", config, runs)
        else:
            cfg = resolve_config(args)
            resolved = cfg.resolved()
            name = cfg["run"]["name"] or f"{args.command}-{_digest(args.command, resolved)}"
            with np.errstate(all="ignore"):
                runs, traj = RUNNERS[args.command](cfg)
            for r in runs:
                if any(isinstance(v, float) and not np.isfinite(v) for k, v in r.items() if k.endswith("infidelity")):
                    raise NumericalError(f"non-finite infidelity in run {r.get('key')}")
            paths = emit_report(root / name, args.command, resolved, runs, traj)
    except ValidationError as exc:
        return _error("ValidationError", str(exc), 2)
    except NumericalError as exc:
        return _error("NumericalError", str(exc), 3)
    except np.linalg.LinAlgError as exc:
        return _error("NumericalError", str(exc), 3)
    except OSError as exc:
        return _error("IOError", str(exc), 4)
    except HoloDFSError as exc:
        return _error(type(exc).__name__, str(exc), 2)
    print(json.dumps({"backend": kernels.BACKEND, "written": [str(p) for p in paths]}, sort_keys=True))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
