from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np


@dataclass(frozen=True)
class FidelityReport:
    value: float
    method: str  # quantum_exact | classical_exact | classical_shots
    shots: int | None = None
    seed: int | None = None


def quantum_fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """``<target| rho |target>`` for a pure target state."""
    rho = np.asarray(rho, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if rho.shape != (target.shape[0],) * 2:
        raise ValueError(f"density matrix {rho.shape} does not match target of length {target.shape[0]}")
    f = target.conj() @ rho @ target
    return float(f.real)


def classical_fidelity(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """Bhattacharyya coefficient ``sum_i sqrt(p_i q_i)``; missing labels count as 0."""
    total = 0.0
    for k, pk in p.items():
        qk = q.get(k, 0.0)
        if pk > 0 and qk > 0:
            total += np.sqrt(pk * qk)
    return float(min(total, 1.0))


def shot_fidelity(p_ideal: Mapping[str, float], hist: Mapping[str, int],
                  seed: int | None = None) -> FidelityReport:
    shots = int(sum(hist.values()))
    if shots < 1:
        raise ValueError("histogram holds no shots")
    q = {k: c / shots for k, c in hist.items()}
    return FidelityReport(classical_fidelity(p_ideal, q), "classical_shots", shots, seed)
