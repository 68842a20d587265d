"""Seeded memory experiments: consecutive EC rounds under depolarizing noise.

The estimator runs one protocol round after another, carrying the residual
frame forward; each round the running frame is classified by the ideal
decoder, and a logical verdict counts one failure and resets the frame.
Quiet stretches are skipped analytically: while the frame commutes with
every generator, a fault-free round is an exact no-op, so the number of
rounds until the next faulty one is a geometric draw and only that round is
simulated (with its first fault placed by the conditional law, so the
skipped process is distributed exactly like the naive loop).

Shards split the round budget into independent substreams keyed by
(seed, shard index), so results merge by addition and a shard's stream does
not depend on how many other shards exist.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .circuit import FaultLocation
from .codes import ec_orderings, get_code
from .pauli import PauliOperator
from .protocol import (
    ECRound,
    FaultSource,
    NoiseSampler,
    ShorECRound,
    ideal_decode,
)
from .sim import ONE_QUBIT_FAULTS, TWO_QUBIT_FAULTS, NoiseModel, fault_rate
from .verify import _trace

METHODS = ("two-qubit-flagged", "shor-cat")

DEFAULT_MIN_FAILURES = 100

CSV_COLUMNS = (
    "code", "method", "p", "p1", "p_prep", "p_meas",
    "rounds", "failures", "rate", "stderr", "rate_over_p2", "seed",
)


@dataclass(frozen=True)
class RunConfig:
    """One memory-experiment setting; rounds is a budget, not a promise."""

    code: str
    method: str
    noise: NoiseModel
    rounds: int
    seed: int
    shards: int = 1

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; pick from {METHODS}")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")


@dataclass(frozen=True)
class RunStats:
    """Tally of one experiment; rate and stderr are per round."""

    config: RunConfig
    rounds: int
    failures: int

    @property
    def rate(self) -> float:
        return self.failures / self.rounds

    @property
    def stderr(self) -> float:
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.rounds)

    def csv_row(self) -> dict:
        nm = self.config.noise
        p2 = nm.p2
        return {
            "code": self.config.code,
            "method": self.config.method,
            "p": repr(p2),
            "p1": repr(nm.p1),
            "p_prep": repr(nm.p_prep),
            "p_meas": repr(nm.p_meas),
            "rounds": self.rounds,
            "failures": self.failures,
            "rate": repr(self.rate),
            "stderr": repr(self.stderr),
            "rate_over_p2": repr(self.rate / p2**2) if p2 > 0 else "",
            "seed": self.config.seed,
        }


def build_protocol(code_token: str, method: str):
    if method == "two-qubit-flagged":
        code, orders = ec_orderings(code_token)
        return ECRound(code, orders)
    if method == "shor-cat":
        return ShorECRound(get_code(code_token))
    raise ValueError(f"unknown method {method!r}; pick from {METHODS}")


class _PinnedFirstFault(FaultSource):
    """Fault plan for one conditioned round: clean segments, then a segment
    with a pre-drawn fault set starting at the pinned location, then fresh
    independent samples for whatever executes afterwards."""

    def __init__(self, sampler: NoiseSampler, step: int, faults) -> None:
        self.sampler = sampler
        self.pinned_step = step
        self.pinned_faults = faults

    def faults_for(self, step, circuit):
        if step < self.pinned_step:
            return ()
        if step == self.pinned_step:
            return self.pinned_faults
        return self.sampler.faults_for(step, circuit)


def _random_pauli(gate, rng) -> str:
    if gate.is_prep or gate.is_meas:
        return "flip"
    if gate.is_two_qubit:
        return TWO_QUBIT_FAULTS[rng.integers(15)]
    return ONE_QUBIT_FAULTS[rng.integers(3)]


class _RoundSimulator:
    """Per-shard state: the protocol, the quiet-path law, and the frame."""

    def __init__(self, protocol, noise: NoiseModel, rng) -> None:
        self.protocol = protocol
        self.code = protocol.code
        self.noise = noise
        self.rng = rng
        self.sampler = NoiseSampler(noise, rng)
        self.frame = PauliOperator.identity(self.code.n)

        # The event-free path is fixed while the frame commutes with every
        # generator, so its per-gate fault law can be tabulated once.
        _, base = _trace(protocol)
        flat = [
            (step, circuit, gate_index, gate)
            for step, circuit in base
            for gate_index, gate in enumerate(circuit.gates)
        ]
        rates = np.array([fault_rate(g, noise) for _, _, _, g in flat])
        survive = np.cumprod(1.0 - rates)
        first_prob = rates.copy()
        first_prob[1:] *= survive[:-1]
        self.base = flat
        self.base_steps = [step for step, _ in base]
        self.p_active = float(1.0 - survive[-1]) if len(flat) else 0.0
        self.first_cdf = np.cumsum(first_prob)

    def next_faulty_round(self) -> int | None:
        """Geometric draw: how many rounds until the next one with a fault,
        counting that round itself; None when faults are impossible."""
        if self.p_active <= 0.0:
            return None
        return int(self.rng.geometric(self.p_active))

    def run_active_round(self) -> None:
        """Simulate one round conditioned on >= 1 fault on the quiet path."""
        u = self.rng.random() * self.first_cdf[-1]
        j = int(np.searchsorted(self.first_cdf, u, side="right"))
        j = min(j, len(self.base) - 1)
        step, circuit, gate_index, gate = self.base[j]
        faults = [FaultLocation(gate_index, _random_pauli(gate, self.rng))]
        for gi in range(gate_index + 1, len(circuit.gates)):
            g = circuit.gates[gi]
            if self.rng.random() < fault_rate(g, self.noise):
                faults.append(FaultLocation(gi, _random_pauli(g, self.rng)))
        source = _PinnedFirstFault(self.sampler, step, tuple(faults))
        self._finish_round(source)

    def run_plain_round(self) -> None:
        self._finish_round(self.sampler)

    def _finish_round(self, source: FaultSource) -> None:
        result = self.protocol.run(source=source, incoming=self.frame)
        self.frame = result.residual

    def classify_and_reset(self) -> bool:
        decoded = ideal_decode(self.code, self.frame)
        if self.code.logical_effect(decoded) == "logical":
            self.frame = PauliOperator.identity(self.code.n)
            return True
        return False

    def frame_is_quiet(self) -> bool:
        return not any(self.code.syndrome_of(self.frame))


def _run_shard(
    protocol, noise: NoiseModel, budget: int, seed: int, shard: int,
    failure_target: int,
) -> tuple[int, int]:
    """One substream: returns (rounds executed, failures)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shard,)))
    sim = _RoundSimulator(protocol, noise, rng)
    rounds = 0
    failures = 0
    while rounds < budget and failures < failure_target:
        if sim.frame_is_quiet():
            k = sim.next_faulty_round()
            if k is None or k > budget - rounds:
                # the budget runs out inside the quiet stretch
                rounds = budget
                break
            rounds += k
            sim.run_active_round()
        else:
            rounds += 1
            sim.run_plain_round()
        if sim.classify_and_reset():
            failures += 1
    return rounds, failures


def run_memory_experiment(
    cfg: RunConfig, min_failures: int = DEFAULT_MIN_FAILURES
) -> RunStats:
    """Estimate the per-round logical failure rate for one configuration.

    Each shard simulates its slice of the budget and stops early once it
    has collected its share of min_failures; tallies merge by addition.
    Deterministic given (seed, shards).
    """
    protocol = build_protocol(cfg.code, cfg.method)
    per_shard_target = max(1, -(-min_failures // cfg.shards)) if min_failures else cfg.rounds + 1
    base_budget, extra = divmod(cfg.rounds, cfg.shards)
    rounds = 0
    failures = 0
    for shard in range(cfg.shards):
        budget = base_budget + (1 if shard < extra else 0)
        if budget == 0:
            continue
        r, f = _run_shard(
            protocol, cfg.noise, budget, cfg.seed, shard, per_shard_target
        )
        rounds += r
        failures += f
    return RunStats(cfg, rounds, failures)


def sweep(
    template: RunConfig,
    p_values: Sequence[float],
    min_failures: int = DEFAULT_MIN_FAILURES,
) -> list[RunStats]:
    """One run per p, uniform noise at that p, seeds ascending from the
    template's so rows stay independently reproducible."""
    if not p_values:
        raise ValueError("sweep needs at least one p value")
    out = []
    for i, p in enumerate(p_values):
        cfg = replace(
            template, noise=NoiseModel.uniform(p), seed=template.seed + i
        )
        out.append(run_memory_experiment(cfg, min_failures))
    return out


def write_csv(stats: Iterable[RunStats], target) -> None:
    """Write sweep rows; target is a path or a text file object."""
    if hasattr(target, "write"):
        _write_csv(stats, target)
    else:
        with open(target, "w", newline="") as fh:
            _write_csv(stats, fh)


def _write_csv(stats: Iterable[RunStats], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for st in stats:
        writer.writerow(st.csv_row())


def csv_text(stats: Iterable[RunStats]) -> str:
    buf = io.StringIO()
    _write_csv(stats, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class QuadraticFit:
    """Weighted least squares of rate = linear * p + quadratic * p^2."""

    linear: float
    quadratic: float
    linear_stderr: float
    quadratic_stderr: float

    def linear_consistent_with_zero(self, sigmas: float = 3.0) -> bool:
        return abs(self.linear) <= sigmas * self.linear_stderr


def fit_quadratic(stats: Sequence[RunStats]) -> QuadraticFit:
    """Fit the two-term scaling law through the measured points.

    Weights are inverse variances from the binomial standard errors; a
    zero-failure point gets 1/rounds as its error scale so it still pulls
    the fit toward zero without dividing by zero.
    """
    if len(stats) < 2:
        raise ValueError("need at least two points to fit two terms")
    ps = np.array([st.config.noise.p2 for st in stats])
    rates = np.array([st.rate for st in stats])
    sigmas = np.array([st.stderr if st.stderr > 0 else 1.0 / st.rounds for st in stats])
    design = np.column_stack([ps, ps**2]) / sigmas[:, None]
    target = rates / sigmas
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    cov = np.linalg.inv(design.T @ design)
    return QuadraticFit(
        linear=float(coef[0]),
        quadratic=float(coef[1]),
        linear_stderr=float(math.sqrt(cov[0, 0])),
        quadratic_stderr=float(math.sqrt(cov[1, 1])),
    )
