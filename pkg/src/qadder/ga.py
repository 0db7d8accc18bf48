"""Genetic search for gate-limited three-qubit adders.

A genome is a fixed number of gene slots; ``I`` genes are empty slots. The
fitness of a genome is the mean adder fidelity of its circuit over a grid of
addend angles. Every offspring draws from its own random stream derived from
``(seed, generation, index)``, so runs are reproducible and the fitness
evaluations could be farmed out without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .adders import AdderSpec, as_adder
from .gates import Circuit, Gate, dagger_circuit
from .sim import _apply

N_QUBITS = 3
SINGLE_FIXED = ("I", "X", "Z", "H", "S", "SDG", "T", "TDG")
ROTATIONS = ("RX", "RY", "RZ")
TWO_QUBIT = ("CNOT", "CH")
ALPHABET = SINGLE_FIXED + ROTATIONS + TWO_QUBIT
# charge against the CNOT budget; the Toffoli is never drawn by the search but
# lets hand-written circuits such as the basis adder be expressed as genomes
CNOT_COST = {"CNOT": 1, "CH": 1, "CCNOT": 6}

DEFAULT_ANGLES = (0.0, np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2)


class ConstraintError(ValueError):
    """A genome breaks the gate limit or the CNOT budget."""


@dataclass(frozen=True)
class Gene:
    """One instruction; controlled genes list controls first, then the target."""

    name: str
    operands: tuple[int, ...]
    angle: float = 0.0
    negated: tuple[bool, ...] = ()

    def to_gate(self) -> Gate:
        if self.name in CNOT_COST:
            *controls, t = self.operands
            return Gate(self.name, (t,), tuple(controls), negated=self.negated)
        params = (self.angle,) if self.name in ROTATIONS else ()
        return Gate(self.name, self.operands, params=params)

    @classmethod
    def from_gate(cls, g: Gate) -> Gene:
        angle = g.params[0] if g.name in ROTATIONS else 0.0
        if g.name not in ALPHABET and g.name not in CNOT_COST:
            raise ValueError(f"{g.name} is not expressible as a gene")
        negated = g.negated if any(g.negated) else ()
        return cls(g.name, g.controls + g.targets, angle, negated)

    @property
    def is_two_qubit(self) -> bool:
        return self.name in CNOT_COST

    @property
    def cnot_cost(self) -> int:
        return CNOT_COST.get(self.name, 0)


IDLE = Gene("I", (0,))


@dataclass(frozen=True)
class Genome:
    genes: tuple[Gene, ...]

    def two_qubit_count(self) -> int:
        """CNOTs charged against the budget (Toffoli genes cost 6)."""
        return sum(g.cnot_cost for g in self.genes)

    def active(self) -> tuple[Gene, ...]:
        return tuple(g for g in self.genes if g.name != "I")


def default_grid() -> list[tuple[float, float]]:
    return [(a, b) for a in DEFAULT_ANGLES for b in DEFAULT_ANGLES]


@dataclass(frozen=True)
class GaConfig:
    population: int = 100
    generations: int = 300
    tournament: int = 3
    elitism: int = 1
    mutation_rate: float = 0.1
    angle_sigma: float = 0.1
    grid: tuple[tuple[float, float], ...] = field(default_factory=lambda: tuple(default_grid()))
    cnot_budget: int = 2
    gate_limit: int = 20
    seed: int = 42

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        if not 1 <= self.tournament <= self.population:
            raise ValueError("tournament size must lie in [1, population]")
        if not 0 <= self.elitism <= self.population:
            raise ValueError("elitism must lie in [0, population]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.angle_sigma < 0 or self.cnot_budget < 0 or self.gate_limit < 1:
            raise ValueError("angle_sigma and cnot_budget must be >= 0, gate_limit >= 1")
        if not self.grid:
            raise ValueError("fitness grid is empty")
        object.__setattr__(self, "grid", tuple((float(a), float(b)) for a, b in self.grid))


def decode_genome(genome: Genome, cnot_budget: int = 2, gate_limit: int = 20) -> Circuit:
    """Circuit of the genome's non-idle genes, in order."""
    if genome.two_qubit_count() > cnot_budget:
        raise ConstraintError(
            f"{genome.two_qubit_count()} two-qubit genes exceed the budget of {cnot_budget}")
    active = genome.active()
    if len(active) > gate_limit:
        raise ConstraintError(f"{len(active)} gates exceed the limit of {gate_limit}")
    return Circuit(N_QUBITS, [g.to_gate() for g in active], "ga_adder")


class GridEvaluator:
    """Mean adder fidelity over a fixed angle grid, all inputs simulated as one batch."""

    def __init__(self, grid: Sequence[tuple[float, float]]):
        self.grid = [(float(a), float(b)) for a, b in grid]
        cols, targets = [], []
        for a, b in self.grid:
            p1 = np.array([np.cos(a), np.sin(a)])
            p2 = np.array([np.cos(b), np.sin(b)])
            cols.append(np.kron(np.kron(p1, p2), [1.0, 0.0]))
            s = p1 + p2
            targets.append(s / np.linalg.norm(s))
        self.inputs = np.array(cols, dtype=complex).T
        self.targets = np.array(targets, dtype=complex).T

    def fidelities(self, circuit: Circuit) -> np.ndarray:
        out = self.inputs
        for g in circuit.gates:
            out = _apply(out, g.to_matrix(), g.qubits, N_QUBITS)
        # amplitude on (data bits, ancilla) projected on the ideal sum
        proj = np.einsum("dam,am->dm", out.reshape(4, 2, -1), self.targets.conj())
        return np.sum(np.abs(proj) ** 2, axis=0)

    def __call__(self, circuit: Circuit) -> float:
        return float(np.mean(self.fidelities(circuit)))


def fitness(genome: Genome, grid: Sequence[tuple[float, float]] | None = None,
            noise=None, cnot_budget: int = 2, gate_limit: int = 20) -> float:
    """Mean adder fidelity of the decoded circuit over ``grid``.

    With a noise model the slower density-matrix path is used.
    """
    grid = default_grid() if grid is None else grid
    circuit = decode_genome(genome, cnot_budget, gate_limit)
    if noise is None:
        return GridEvaluator(grid)(circuit)
    from .adders import adder_fidelity

    return float(np.mean([adder_fidelity(circuit, a, b, noise) for a, b in grid]))


def _random_gene(rng: np.random.Generator, allow_two_qubit: bool = True) -> Gene:
    names = ALPHABET if allow_two_qubit else SINGLE_FIXED + ROTATIONS
    name = names[rng.integers(len(names))]
    if name in TWO_QUBIT:
        operands = tuple(int(q) for q in rng.choice(N_QUBITS, size=2, replace=False))
    else:
        operands = (int(rng.integers(N_QUBITS)),)
    angle = float(rng.uniform(-np.pi, np.pi)) if name in ROTATIONS else 0.0
    return Gene(name, operands, angle)


def _repair(genes: list[Gene], rng: np.random.Generator, budget: int) -> list[Gene]:
    """Turn two-qubit genes past the budget into single-qubit genes."""
    seen = 0
    for i, g in enumerate(genes):
        if g.is_two_qubit:
            seen += g.cnot_cost
            if seen > budget:
                seen -= g.cnot_cost
                genes[i] = _random_gene(rng, allow_two_qubit=False)
    return genes


def random_genome(rng: np.random.Generator, config: GaConfig) -> Genome:
    genes = [_random_gene(rng) for _ in range(config.gate_limit)]
    return Genome(tuple(_repair(genes, rng, config.cnot_budget)))


def genome_from_circuit(c: Circuit) -> Genome:
    if c.n_qubits != N_QUBITS:
        raise ValueError("genomes describe three-qubit circuits")
    return Genome(tuple(Gene.from_gate(g) for g in c.gates))


def _mutate_gene(g: Gene, rng: np.random.Generator, sigma: float) -> Gene:
    kind = rng.integers(3)
    if kind == 0:
        return _random_gene(rng)
    if kind == 1:
        if g.name == "CCNOT":
            ops = tuple(int(q) for q in rng.permutation(N_QUBITS))
        elif g.is_two_qubit:
            ops = tuple(int(q) for q in rng.choice(N_QUBITS, size=2, replace=False))
        else:
            ops = (int(rng.integers(N_QUBITS)),)
        return replace(g, operands=ops)
    if g.name in ROTATIONS:
        return replace(g, angle=float(g.angle + rng.normal(0.0, sigma)))
    return _random_gene(rng)


def _tournament(rng, scores: np.ndarray, k: int) -> int:
    contenders = rng.choice(len(scores), size=k, replace=False)
    # ties go to the lowest index so selection is order-stable
    best = max(contenders, key=lambda i: (scores[i], -i))
    return int(best)


def make_offspring(parents: Sequence[Genome], scores: np.ndarray, config: GaConfig,
                   rng: np.random.Generator) -> Genome:
    a = parents[_tournament(rng, scores, config.tournament)].genes
    b = parents[_tournament(rng, scores, config.tournament)].genes
    cut = int(rng.integers(1, len(a))) if len(a) > 1 else 0
    genes = list(a[:cut] + b[cut:])
    for i, g in enumerate(genes):
        if rng.random() < config.mutation_rate:
            genes[i] = _mutate_gene(g, rng, config.angle_sigma)
    return Genome(tuple(_repair(genes, rng, config.cnot_budget)))


@dataclass(frozen=True)
class GaResult:
    best: Genome
    circuit: Circuit
    history: tuple[float, ...]
    average_fidelity: float
    minimum_fidelity: float
    minimum_input: tuple[float, float]
    config: GaConfig


def _stream(seed: int, generation: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, generation, index]))


def evolve(config: GaConfig = GaConfig(), noise=None) -> GaResult:
    """Tournament selection, single-point crossover, per-gene mutation and elitism."""
    evaluator = GridEvaluator(config.grid)

    def score(genome: Genome) -> float:
        circuit = decode_genome(genome, config.cnot_budget, config.gate_limit)
        if noise is None:
            return evaluator(circuit)
        return fitness(genome, config.grid, noise, config.cnot_budget, config.gate_limit)

    cache: dict[Genome, float] = {}

    def cached(genome: Genome) -> float:
        if genome not in cache:
            cache[genome] = score(genome)
        return cache[genome]

    population = [random_genome(_stream(config.seed, 0, i), config)
                  for i in range(config.population)]
    scores = np.array([cached(g) for g in population])
    history = [float(scores.max())]
    for gen in range(1, config.generations):
        order = sorted(range(len(population)), key=lambda i: (-scores[i], i))
        children = [population[i] for i in order[:config.elitism]]
        for idx in range(config.elitism, config.population):
            rng = _stream(config.seed, gen, idx)
            children.append(make_offspring(population, scores, config, rng))
        population = children
        scores = np.array([cached(g) for g in population])
        history.append(float(scores.max()))
        if len(cache) > 50_000:
            cache.clear()

    best_idx = min(range(len(population)), key=lambda i: (-scores[i], i))
    best = population[best_idx]
    circuit = decode_genome(best, config.cnot_budget, config.gate_limit)
    per_input = evaluator.fidelities(circuit)
    worst = int(np.argmin(per_input))
    return GaResult(
        best=best,
        circuit=circuit,
        history=tuple(history),
        average_fidelity=float(per_input.mean()),
        minimum_fidelity=float(per_input[worst]),
        minimum_input=config.grid[worst],
        config=config,
    )


def ga_autoencoder(result: GaResult | AdderSpec | Circuit) -> tuple[AdderSpec, Circuit]:
    """The evolved adder as an encoder, and its dagger as the decoder."""
    if isinstance(result, GaResult):
        adder = AdderSpec(result.circuit, "ga adder")
    else:
        adder = as_adder(result)
    return adder, dagger_circuit(adder.circuit)


_INT_KEYS = ("population", "generations", "tournament", "elitism", "cnot_budget",
             "gate_limit", "seed")
_FLOAT_KEYS = ("mutation_rate", "angle_sigma")


def parse_ga_config(text: str) -> tuple[GaConfig, bool]:
    """Read a ``key = value`` GA config; returns the config and the noise-aware flag.

    ``angles`` lists addend angles (``pi`` forms allowed) whose ordered pairs
    form the fitness grid.
    """
    from .circuit_text import parse_angle

    values: dict = {}
    noise_aware = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key == "angles":
                angles = [parse_angle(a) for a in val.split(",")]
                values["grid"] = tuple((a, b) for a in angles for b in angles)
            elif key == "noise_aware":
                if val.lower() not in ("true", "false"):
                    raise ValueError("noise_aware must be true or false")
                noise_aware = val.lower() == "true"
            else:
                raise ValueError(f"unknown GA key {key!r}")
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return GaConfig(**values), noise_aware
