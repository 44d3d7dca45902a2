"""Seeded, reproducible experiment runners.

Each runner turns an ExperimentConfig into a Dataset of named, equal-length
columns plus the metadata needed to re-run it identically (modulo the
timestamp and, for timing runs, the measured milliseconds).
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field
from enum import Enum

from .cloud_sim import StepOutcome, run_attack
from .propagation import (
    BoostConfig,
    BoostVariant,
    boosted_profile,
    transmission_profile,
)
from .randomized_seeds import (
    NAIVE_MAX_N,
    GammaMode,
    GammaPolicy,
    closed_form_trajectory,
    draw_gamma,
    naive_lucas_timed,
    rglsa_lucas_trajectory,
)

__all__ = [
    "ExperimentKind",
    "ExperimentConfig",
    "Dataset",
    "run_experiment",
    "exp_growth",
    "exp_probability",
    "exp_tailboost",
    "exp_timing",
    "exp_fullsim",
    "config_from_metadata",
    "TIMING_REPEATS",
]

TIMING_REPEATS = 3


class ExperimentKind(Enum):
    GROWTH = "growth"
    PROBABILITY = "probability"
    TAILBOOST = "tailboost"
    TIMING = "timing"
    FULLSIM = "fullsim"


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run and under which policy.

    `n_values` must be strictly increasing.  `j` is the dummy-tail length
    (TAILBOOST requires it >= 1; FULLSIM injects j dummies at `inject_at`
    when j > 0).  TIMING caps n at the naive evaluator guard.
    """

    kind: ExperimentKind
    n_values: tuple[int, ...]
    policy: GammaPolicy
    j: int = 0
    boost: BoostConfig | None = None
    output_path: str | None = None
    closed_form: bool = False
    inject_at: int = 2
    max_steps: int = 10_000
    epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(n < 1 for n in self.n_values):
            raise ValueError(f"every n must be >= 1, got {self.n_values}")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError(f"n_values must be strictly increasing, got {self.n_values}")
        if self.j < 0:
            raise ValueError(f"j must be >= 0, got {self.j}")
        if self.kind is ExperimentKind.TIMING and self.n_values[-1] > NAIVE_MAX_N:
            raise ValueError(
                f"timing runs cap n at {NAIVE_MAX_N}, got {self.n_values[-1]}"
            )
        if self.kind is ExperimentKind.TAILBOOST and self.j < 1:
            raise ValueError("tailboost needs j >= 1")
        if self.closed_form and (
            self.policy.gamma is None and self.policy.mode is not GammaMode.DETERMINISTIC
        ):
            raise ValueError("closed_form runs need a pinned gamma or DETERMINISTIC mode")


@dataclass
class Dataset:
    """Named equal-length columns plus run metadata."""

    columns: dict[str, list[float]]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns must have equal lengths, got {lengths}")

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0


def _base_metadata(config: ExperimentConfig) -> dict[str, str]:
    p = config.policy
    md = {
        "kind": config.kind.value,
        "n_values": ",".join(str(n) for n in config.n_values),
        "j": str(config.j),
        "gamma_mode": p.mode.value,
        "gamma_lower": repr(p.lower),
        "gamma_upper": repr(p.upper),
        "rng_seed": str(p.rng_seed),
        "gamma_pinned": "none" if p.gamma is None else repr(p.gamma),
        "boost_variant": "none" if config.boost is None else config.boost.variant.value,
        "boost_j": "0" if config.boost is None else str(config.boost.j),
        "boost_alpha_add": "0.0" if config.boost is None else repr(config.boost.alpha_add),
        "closed_form": "1" if config.closed_form else "0",
        "inject_at": str(config.inject_at),
        "max_steps": str(config.max_steps),
        "epsilon": repr(config.epsilon),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    return md


def config_from_metadata(metadata: dict[str, str]) -> ExperimentConfig:
    """Rebuild the generating config from a dataset's metadata echo."""
    policy = GammaPolicy(
        mode=GammaMode(metadata["gamma_mode"]),
        lower=float(metadata["gamma_lower"]),
        upper=float(metadata["gamma_upper"]),
        rng_seed=int(metadata["rng_seed"]),
        gamma=None
        if metadata["gamma_pinned"] == "none"
        else float(metadata["gamma_pinned"]),
    )
    boost: BoostConfig | None = None
    if metadata["boost_variant"] == BoostVariant.RATIO.value:
        boost = BoostConfig.ratio(int(metadata["boost_j"]))
    elif metadata["boost_variant"] == BoostVariant.ADDITIVE.value:
        boost = BoostConfig.additive(float(metadata["boost_alpha_add"]))
    return ExperimentConfig(
        kind=ExperimentKind(metadata["kind"]),
        n_values=tuple(int(s) for s in metadata["n_values"].split(",")),
        policy=policy,
        j=int(metadata["j"]),
        boost=boost,
        closed_form=metadata.get("closed_form", "0") == "1",
        inject_at=int(metadata["inject_at"]),
        max_steps=int(metadata["max_steps"]),
        epsilon=float(metadata["epsilon"]),
    )


def _fresh_trajectory(n: int, config: ExperimentConfig):
    # one independent stream per n so each row set is self-contained
    if config.closed_form:
        gamma = 1.0 if config.policy.gamma is None else config.policy.gamma
        return closed_form_trajectory(n, gamma)
    return rglsa_lucas_trajectory(n, config.policy, rng=random.Random(config.policy.rng_seed))


def exp_growth(config: ExperimentConfig) -> Dataset:
    """Columns (n, log_lucas, lucas): terminal seed count per horizon.

    `log_lucas` is the natural log; `lucas` is the linear value, +inf once
    it leaves float64 range.
    """
    cols: dict[str, list[float]] = {"n": [], "log_lucas": [], "lucas": []}
    for n in config.n_values:
        traj = _fresh_trajectory(n, config)
        top = traj.lucas[n]
        cols["n"].append(float(n))
        cols["log_lucas"].append(top.log_value)
        cols["lucas"].append(top.to_float())
    return Dataset(columns=cols, metadata=_base_metadata(config))


def exp_probability(config: ExperimentConfig) -> Dataset:
    """Columns (n, i, p): plain transmission profile per horizon."""
    cols: dict[str, list[float]] = {"n": [], "i": [], "p": []}
    for n in config.n_values:
        profile = transmission_profile(_fresh_trajectory(n, config))
        for i in range(1, n + 1):
            cols["n"].append(float(n))
            cols["i"].append(float(i))
            cols["p"].append(profile.probability_for(i))
    return Dataset(columns=cols, metadata=_base_metadata(config))


def exp_tailboost(config: ExperimentConfig) -> Dataset:
    """Columns (n, i, p_plain, p_boosted) over the extended horizon n+j.

    `p_plain` is L_i / L_{n+j}; `p_boosted` applies the configured boost
    (ratio boost with tail j by default).  Only the original indices
    i = 1..n are reported.
    """
    boost = config.boost or BoostConfig.ratio(config.j)
    cols: dict[str, list[float]] = {"n": [], "i": [], "p_plain": [], "p_boosted": []}
    for n in config.n_values:
        traj = _fresh_trajectory(n + config.j, config)
        boosted = boosted_profile(traj, boost)
        for i in range(1, n + 1):
            cols["n"].append(float(n))
            cols["i"].append(float(i))
            cols["p_plain"].append(min(traj.lucas_ratio(i, traj.n), 1.0))
            cols["p_boosted"].append(boosted.probability_for(i))
    return Dataset(columns=cols, metadata=_base_metadata(config))


def exp_timing(config: ExperimentConfig) -> Dataset:
    """Columns (n, elapsed_ms): median of repeated naive evaluations.

    alpha comes from one policy draw (1 in DETERMINISTIC mode); the value
    is discarded, only the wall-clock shape matters.
    """
    rng = random.Random(config.policy.rng_seed)
    alpha = 1.0 / draw_gamma(config.policy, rng)
    cols: dict[str, list[float]] = {"n": [], "elapsed_ms": []}
    for n in config.n_values:
        samples = [naive_lucas_timed(n, alpha)[1] for _ in range(TIMING_REPEATS)]
        cols["n"].append(float(n))
        cols["elapsed_ms"].append(statistics.median(samples))
    return Dataset(columns=cols, metadata=_base_metadata(config))


def exp_fullsim(config: ExperimentConfig) -> Dataset:
    """Columns (step, target_vm, p_used, hit, infected_total): full attack
    trace at the largest configured horizon, with j dummies injected at
    `inject_at` when j > 0.  The termination reason lands in metadata."""
    n = config.n_values[-1]
    schedule = ((config.inject_at, config.j),) if config.j > 0 else ()
    run = run_attack(
        n,
        config.policy,
        boost=config.boost,
        dummy_schedule=schedule,
        max_steps=config.max_steps,
        epsilon=config.epsilon,
    )
    cols: dict[str, list[float]] = {
        "step": [],
        "target_vm": [],
        "p_used": [],
        "hit": [],
        "infected_total": [],
    }
    for rec in run.steps:
        cols["step"].append(float(rec.step))
        cols["target_vm"].append(float(rec.target_vm))
        cols["p_used"].append(rec.p_used)
        cols["hit"].append(1.0 if rec.outcome is StepOutcome.HIT else 0.0)
        cols["infected_total"].append(float(rec.infected_total))
    md = _base_metadata(config)
    md["terminated"] = run.terminated.value
    md["n_final"] = str(run.n_final)
    return Dataset(columns=cols, metadata=md)


_RUNNERS = {
    ExperimentKind.GROWTH: exp_growth,
    ExperimentKind.PROBABILITY: exp_probability,
    ExperimentKind.TAILBOOST: exp_tailboost,
    ExperimentKind.TIMING: exp_timing,
    ExperimentKind.FULLSIM: exp_fullsim,
}


def run_experiment(config: ExperimentConfig) -> Dataset:
    """Dispatch `config` to its runner."""
    return _RUNNERS[config.kind](config)
