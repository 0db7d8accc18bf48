"""Command-line harness: ``qadder <command>``.

Exit codes: 0 success, 2 usage error, 3 input error, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .adders import encode_gate
from .circuit_text import CircuitSyntaxError, load, parse_angle, serialize
from .ga import evolve, ga_autoencoder, parse_ga_config
from .gates import controlled, named_gate, u1, UnknownGateError
from .noise import (
    NoiseModel,
    apply_readout_error,
    load_noise_config,
    noisy_run,
    readout_damping,
)
from .sim import (
    evolve_density,
    measurement_distribution,
    product_state,
    sample_shots,
    to_density,
)
from .tables import compute_table
from .transpile import circuit_unitary, cnot_count, phase_aligned_distance, transpile

EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 2, 3, 4


class InvariantError(RuntimeError):
    """An internal consistency check failed."""


def data_path(name: str) -> Path:
    return Path(str(resources.files("qadder") / "data" / name))


def manifest(command: str, config: dict, seed) -> dict:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return {
        "command": command,
        "config": config,
        "seed": seed,
        "version": __version__,
        # wall-clock time would break byte-identical reruns
        "timestamp": int(epoch) if epoch and epoch.isdigit() else None,
    }


def _csv_text(man: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# manifest: {json.dumps(man, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _noise(args, default: NoiseModel | None) -> NoiseModel | None:
    return load_noise_config(args.noise) if args.noise else default


def _fmt(x) -> str:
    return "" if x is None else f"{x:.4f}"


def cmd_table(args) -> None:
    adder = load(args.adder) if args.adder else None
    noise = _noise(args, NoiseModel())
    rows = compute_table(args.n, args.profile, adder, noise, args.shots, args.seed)
    config = {"table": args.n, "profile": args.profile, "shots": args.shots,
              "adder": args.adder, "noise": noise.as_dict() if args.profile == "advanced" else None}
    man = manifest("table", config, args.seed)
    note = None
    if args.profile == "advanced":
        gap = float(np.mean([1 - r.f_tilde for r in rows]))
        note = (f"mean noisy-gate infidelity 1 - f_tilde = {gap:.4f}; the published "
                "forecasts correspond to f_tilde close to 1")
    if args.format == "json":
        _emit(_json_text({"manifest": man, "rows": [r.as_dict() for r in rows], "note": note}),
              args.out)
        return
    header = ["label", "arm", "computed", "reference", "deviation", "up_to_date",
              "f_tilde", "n_cnot"]
    body = [[r.label, r.arm, _fmt(r.computed), _fmt(r.reference), _fmt(r.deviation),
             _fmt(r.up_to_date), _fmt(r.f_tilde), "" if r.n_cnot is None else r.n_cnot]
            for r in rows]
    text = _csv_text(man, header, body)
    if note:
        text += f"# note: {note}\n"
    _emit(text, args.out)


def _parse_input(spec: str | None, n: int) -> list[float]:
    angles = [parse_angle(a) for a in spec.split(",")] if spec else []
    if len(angles) > n:
        raise ValueError(f"--input gives {len(angles)} angles for a {n}-qubit circuit")
    return angles + [0.0] * (n - len(angles))


def cmd_simulate(args) -> None:
    circuit = load(args.circuit)
    n = circuit.n_qubits
    angles = _parse_input(args.input, n)
    if args.measure:
        qubits = [int(q) - 1 for q in args.measure.split(",")]
    else:
        qubits = list(range(n))
    noise = _noise(args, None)
    rho = to_density(product_state(angles))
    if noise is None:
        rho = evolve_density(circuit, rho)
        dist = measurement_distribution(rho, qubits)
    else:
        rho = readout_damping(noisy_run(circuit, noise, rho), noise, qubits)
        dist = apply_readout_error(measurement_distribution(rho, qubits), noise)
    config = {"circuit": args.circuit, "input": angles, "measure": [q + 1 for q in qubits],
              "shots": args.shots, "noise": noise.as_dict() if noise else None}
    man = manifest("simulate", config, args.seed)
    if args.shots:
        hist = sample_shots(dist, args.shots, args.seed)
        if args.format == "json":
            _emit(_json_text({"manifest": man, "histogram": hist}), args.out)
        else:
            _emit(_csv_text(man, ["outcome", "count"], [[k, v] for k, v in hist.items()]),
                  args.out)
        return
    if args.format == "json":
        _emit(_json_text({"manifest": man, "distribution": dist}), args.out)
    else:
        _emit(_csv_text(man, ["outcome", "probability"],
                        [[k, _fmt(v)] for k, v in dist.items()]), args.out)


def cmd_ga(args) -> None:
    cfg_path = args.config or data_path("ga_default.cfg")
    config, noise_aware = parse_ga_config(Path(cfg_path).read_text(encoding="utf-8"))
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, seed=args.seed)
    noise = _noise(args, NoiseModel()) if noise_aware else None
    result = evolve(config, noise)
    adder, decoder = ga_autoencoder(result)
    roundtrip = adder.circuit.then(decoder)
    summary = {
        "average_fidelity": result.average_fidelity,
        "minimum_fidelity": result.minimum_fidelity,
        "minimum_input": list(result.minimum_input),
        "n_gates": len(result.circuit),
        "cnot_count": {"published": cnot_count(result.circuit, "published"),
                       "transpiled": cnot_count(result.circuit, "transpiled")},
        "roundtrip_cnot_count": {"published": cnot_count(roundtrip, "published"),
                                 "transpiled": cnot_count(roundtrip, "transpiled")},
    }
    cfg = {k: v for k, v in vars(config).items() if k != "grid"}
    cfg["grid_size"] = len(config.grid)
    cfg["noise_aware"] = noise_aware
    man = manifest("ga", cfg, config.seed)
    prefix = args.out or "ga_result"
    comments = [f"manifest: {json.dumps(man, sort_keys=True)}",
                f"average fidelity {result.average_fidelity:.6f}, "
                f"minimum {result.minimum_fidelity:.6f}"]
    Path(f"{prefix}.qc").write_text(serialize(result.circuit, comments), encoding="utf-8")
    Path(f"{prefix}_history.csv").write_text(
        _csv_text(man, ["generation", "best_fitness"],
                  [[i, f"{f:.12g}"] for i, f in enumerate(result.history)]), encoding="utf-8")
    text = _json_text({"manifest": man, "summary": summary})
    Path(f"{prefix}_summary.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_transpile(args) -> None:
    circuit = load(args.circuit)
    lowered = transpile(circuit)
    gap = phase_aligned_distance(circuit_unitary(circuit), circuit_unitary(lowered))
    if not gap < 1e-8:
        raise InvariantError(f"transpiled circuit deviates from the source by {gap:.3g}")
    counts = {"published": cnot_count(circuit, "published"),
              "transpiled": cnot_count(circuit, "transpiled")}
    man = manifest("transpile", {"circuit": args.circuit}, args.seed)
    if args.format == "json":
        text = _json_text({"manifest": man, "cnot_count": counts, "circuit": serialize(lowered)})
    else:
        text = serialize(lowered, [f"manifest: {json.dumps(man, sort_keys=True)}",
                                   f"cnot_count published={counts['published']} "
                                   f"transpiled={counts['transpiled']}"])
    _emit(text, args.out)
    if args.out:
        print(f"cnot_count published={counts['published']} transpiled={counts['transpiled']}")


def gate_from_spec(spec: str) -> np.ndarray:
    """Two-qubit gate from a name such as ``CZ``, ``CT``, ``CSDG``, ``SWAP`` or ``CU1(pi/4)``."""
    s = spec.strip().upper()
    if s.startswith("CU1(") and s.endswith(")"):
        return controlled(u1(parse_angle(spec.strip()[4:-1])))
    try:
        m = named_gate(s)
    except UnknownGateError:
        m = None
    if m is not None and m.shape == (4, 4):
        return m
    if s.startswith("C"):
        try:
            inner = named_gate(s[1:])
        except UnknownGateError:
            inner = None
        if inner is not None and inner.shape == (2, 2):
            return controlled(inner)
    raise ValueError(f"cannot read a two-qubit gate from {spec!r}")


def _c(z: complex) -> list[float]:
    return [round(float(np.real(z)), 12) + 0.0, round(float(np.imag(z)), 12) + 0.0]


def _complex(z: complex) -> str:
    re_, im = (round(float(x), 4) + 0.0 for x in (np.real(z), np.imag(z)))
    return f"{re_:.4f}{im:+.4f}j"


def cmd_encode_gate(args) -> None:
    res = encode_gate(gate_from_spec(args.gate))
    man = manifest("encode-gate", {"gate": args.gate}, args.seed)
    u = None if res.u_tilde is None else [[_c(z) for z in row] for row in res.u_tilde]
    phase = None if res.phase is None else _c(res.phase)
    if args.format == "json":
        _emit(_json_text({"manifest": man, "gate": args.gate, "solvable": res.solvable,
                          "u_tilde": u, "phase": phase}), args.out)
    else:
        row = [args.gate, str(res.solvable).lower()]
        row.append("" if phase is None else _complex(res.phase))
        row.append("" if u is None else
                   "[" + "; ".join(" ".join(_complex(z) for z in r) for r in res.u_tilde) + "]")
        _emit(_csv_text(man, ["gate", "solvable", "phase", "u_tilde"], [row]), args.out)


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, suppress: bool):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--seed", type=int, default=d(None), help="RNG seed")
        p.add_argument("--noise", default=d(None), help="noise config file (key=value)")
        p.add_argument("--format", choices=("csv", "json"), default=d("csv"))
        p.add_argument("--out", default=d(None), help="output path (prefix for ga)")

    parser = argparse.ArgumentParser(prog="qadder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="recompute a published fidelity table")
    p.add_argument("n", type=int, choices=(1, 2, 3, 4, 5))
    p.add_argument("--profile", choices=("ideal", "advanced"), default="ideal")
    p.add_argument("--shots", type=int)
    p.add_argument("--adder", help="adder circuit (.qc); required for tables 4 and 5")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="run a circuit file")
    p.add_argument("circuit")
    p.add_argument("--input", help="comma-separated angles for the leading qubits")
    p.add_argument("--measure", help="comma-separated one-based qubits (default all)")
    p.add_argument("--shots", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ga", help="evolve a gate-limited adder")
    p.add_argument("--config", help="GA config file (key=value)")
    p.set_defaults(func=cmd_ga)

    p = sub.add_parser("transpile", help="lower a circuit to U1/U3/CNOT")
    p.add_argument("circuit")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("encode-gate", help="test whether a controlled gate encodes on the ancilla")
    p.add_argument("gate")
    p.set_defaults(func=cmd_encode_gate)

    for name, sp in sub.choices.items():
        add_globals(sp, suppress=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "table" and args.n in (4, 5) and not args.adder:
        print(f"qadder: error[input]: table {args.n} needs --adder <file.qc>", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "shots", None) is not None and args.shots < 1:
        print("qadder: error[usage]: --shots must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except CircuitSyntaxError as e:
        where = getattr(args, "circuit", None) or getattr(args, "adder", None) or "<input>"
        print(f"qadder: error[input]: {where}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as e:
        print(f"qadder: error[internal]: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (OSError, ValueError) as e:
        print(f"qadder: error[input]: {e}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
