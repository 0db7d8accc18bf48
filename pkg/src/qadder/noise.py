"""Kraus channels, noisy density-matrix execution and the advanced-QPU forecast."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .gates import Circuit, Gate
from .sim import (
    Distribution,
    apply_unitary_density,
    check_completeness,
    n_qubits_of,
)
from .transpile import decompose_ch, decompose_toffoli


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if len({k.shape for k in ops}) > 1:
            raise ValueError("Kraus operators must share one shape")
        check_completeness(ops)
        object.__setattr__(self, "operators", ops)

    def __call__(self, rho: np.ndarray, qubit: int) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        out = np.zeros_like(rho)
        for k in self.operators:
            out += apply_unitary_density(rho, k, (qubit,))
        return out


def _check_prob(p: float, what: str) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {p}")
    return float(p)


def amplitude_damping(p: float) -> KrausChannel:
    """Decay of ``|1>`` to ``|0>`` with probability ``p``."""
    p = _check_prob(p, "damping probability")
    k1 = np.diag([1.0, np.sqrt(1 - p)])
    k2 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]])
    return KrausChannel((k1, k2))


def dephasing(p: float) -> KrausChannel:
    """Scales off-diagonal entries by ``1 - 2p``."""
    p = _check_prob(p, "dephasing probability")
    k1 = np.sqrt(1 - p) * np.eye(2)
    k2 = np.sqrt(p) * np.diag([1.0, -1.0])
    return KrausChannel((k1, k2))


@dataclass(frozen=True)
class NoiseModel:
    """Per-operation damping/dephasing probabilities plus the forecast factors.

    The defaults are the values used for the "advanced" processor forecast.
    """

    p_damp: float = 0.003
    p_dephase: float = 0.003
    f_cnot: float = 0.99
    f_flip: float = 0.99
    t1_readout: bool = True

    def __post_init__(self):
        for f in ("p_damp", "p_dephase", "f_cnot", "f_flip"):
            _check_prob(getattr(self, f), f)

    @classmethod
    def ideal(cls) -> NoiseModel:
        return cls(0.0, 0.0, 1.0, 1.0, False)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def parse_noise_config(text: str) -> NoiseModel:
    """Read a flat ``key = value`` noise file. ``#`` starts a comment."""
    fields = {f.name: f for f in dataclasses.fields(NoiseModel)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in fields:
            raise ValueError(f"line {lineno}: unknown noise key {key!r}")
        if key == "t1_readout":
            if val.lower() not in _BOOL:
                raise ValueError(f"line {lineno}: t1_readout must be true/false")
            values[key] = _BOOL[val.lower()]
        else:
            try:
                values[key] = float(val)
            except ValueError:
                raise ValueError(f"line {lineno}: {key} is not a number") from None
    return NoiseModel(**values)


def load_noise_config(path: str | Path) -> NoiseModel:
    return parse_noise_config(Path(path).read_text(encoding="utf-8"))


def format_noise_config(model: NoiseModel) -> str:
    lines = []
    for k, v in model.as_dict().items():
        lines.append(f"{k} = {str(v).lower() if isinstance(v, bool) else repr(v)}")
    return "\n".join(lines) + "\n"


def _decohere(rho: np.ndarray, qubits: Sequence[int], damp: KrausChannel,
              deph: KrausChannel) -> np.ndarray:
    for q in qubits:
        rho = damp(rho, q)
        rho = deph(rho, q)
    return rho


def physical_gates(g: Gate, n: int) -> list[Gate]:
    """Operations a gate runs as: Toffoli and controlled-Hadamard are decomposed,
    with X conjugation for their negated controls; everything else is one operation."""
    if g.name == "CCNOT":
        sub = decompose_toffoli(g.controls[0], g.controls[1], g.targets[0], n)
    elif g.name == "CH":
        sub = decompose_ch(g.controls[0], g.targets[0], n)
    else:
        return [g]
    flips = [Gate("X", (q,)) for q, neg in zip(g.controls, g.negated) if neg]
    return flips + list(sub.gates) + flips


def noisy_run(circuit: Circuit, model: NoiseModel, rho: np.ndarray) -> np.ndarray:
    """Density evolution with damping then dephasing after every physical operation.

    Each operation from :func:`physical_gates` is followed by damping and
    dephasing on the qubits it touched. CNOT infidelity and readout are not
    applied here; they enter the forecast multiplicatively.
    """
    rho = np.asarray(rho, dtype=complex)
    n = circuit.n_qubits
    if n_qubits_of(rho) != n:
        raise ValueError("circuit and density matrix sizes differ")
    damp, deph = amplitude_damping(model.p_damp), dephasing(model.p_dephase)
    quiet = model.p_damp == 0 and model.p_dephase == 0
    for g in circuit.gates:
        for low in physical_gates(g, n):
            rho = apply_unitary_density(rho, low.to_matrix(), low.qubits)
            if not quiet:
                rho = _decohere(rho, low.qubits, damp, deph)
    return rho


def readout_damping(rho: np.ndarray, model: NoiseModel, qubits: Sequence[int]) -> np.ndarray:
    """Pre-measurement hook: one extra damping step on each measured qubit."""
    if not model.t1_readout or model.p_damp == 0:
        return rho
    damp = amplitude_damping(model.p_damp)
    for q in qubits:
        rho = damp(rho, q)
    return rho


def apply_readout_error(dist: Mapping[str, float], model: NoiseModel) -> Distribution:
    """Symmetric bit-flip confusion on every measured bit; stay probability ``f_flip``."""
    labels = list(dist)
    if not labels:
        return {}
    width = len(labels[0])
    probs = np.zeros(1 << width)
    for k, v in dist.items():
        probs[int(k, 2)] += v
    f = model.f_flip
    confusion = np.array([[f, 1 - f], [1 - f, f]])
    t = probs.reshape((2,) * width) if width else probs
    for axis in range(width):
        t = np.moveaxis(np.tensordot(confusion, t, axes=([1], [axis])), 0, axis)
    out = t.reshape(-1)
    return {format(i, f"0{width}b"): float(p) for i, p in enumerate(out)}


def advanced_fidelity(f_tilde: float, f_cnot: float, n_cnot: int, f_flip: float,
                      n_measured: int = 1) -> float:
    """Forecast ``f_tilde * f_cnot**n_cnot * f_flip**n_measured``.

    The readout factor enters once per measured qubit.
    """
    if n_cnot < 0 or n_measured < 0:
        raise ValueError("n_cnot and n_measured must be non-negative")
    for v, name in ((f_tilde, "f_tilde"), (f_cnot, "f_cnot"), (f_flip, "f_flip")):
        if not -1e-9 <= v <= 1 + 1e-9:
            raise ValueError(f"{name} must lie in [0, 1]")
    return float(f_tilde * f_cnot ** n_cnot * f_flip ** n_measured)
