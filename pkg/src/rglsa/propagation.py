"""Transmission probabilities derived from seed trajectories.

The plain profile assigns VM index i the probability p_i = L_i / L_n.
Tail boosting evaluates the same ratio against a trajectory extended by j
dummy positions: the boosted form (L_i + L_j) / L_{n+j} raises every
original index while the longer denominator drags the whole curve down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .randomized_seeds import (
    GammaPolicy,
    Magnitude,
    SeedTrajectory,
    rglsa_lucas_trajectory,
)

__all__ = [
    "BoostVariant",
    "BoostConfig",
    "TransmissionProfile",
    "transmission_profile",
    "ratio_boost",
    "additive_boost",
    "boosted_profile",
    "decay_curve",
]


class BoostVariant(Enum):
    RATIO = "ratio"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class BoostConfig:
    """Tail-boost parameters: RATIO carries the dummy-tail length j,
    ADDITIVE carries the constant numerator bump alpha_add."""

    variant: BoostVariant
    j: int = 0
    alpha_add: float = 0.0

    def __post_init__(self) -> None:
        if self.variant is BoostVariant.RATIO and self.j < 1:
            raise ValueError(f"ratio boost needs j >= 1, got {self.j}")
        if self.variant is BoostVariant.ADDITIVE and not 0.0 < self.alpha_add < 0.5:
            raise ValueError(
                f"additive boost needs alpha_add in (0, 0.5), got {self.alpha_add}"
            )

    @classmethod
    def ratio(cls, j: int) -> "BoostConfig":
        return cls(variant=BoostVariant.RATIO, j=j)

    @classmethod
    def additive(cls, alpha_add: float) -> "BoostConfig":
        return cls(variant=BoostVariant.ADDITIVE, alpha_add=alpha_add)


@dataclass(frozen=True)
class TransmissionProfile:
    """Per-index attack probabilities p_1..p_n, with clamp bookkeeping.

    ``clamped[i-1]`` marks indices whose raw ratio exceeded 1 and was cut
    back (possible when gamma is redrawn per index); ``boost`` records the
    boost that produced the profile, if any.
    """

    probabilities: tuple[float, ...]
    clamped: tuple[bool, ...]
    boost: BoostConfig | None = None

    def __post_init__(self) -> None:
        if len(self.probabilities) != len(self.clamped):
            raise ValueError("probabilities and clamp flags must align")
        for p in self.probabilities:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability out of [0, 1]: {p}")

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def probability_for(self, i: int) -> float:
        """p_i with 1-based index i."""
        if not 1 <= i <= self.n:
            raise IndexError(f"index must be in [1, {self.n}], got {i}")
        return self.probabilities[i - 1]


def _clamp(raw: float) -> tuple[float, bool]:
    if raw > 1.0:
        return 1.0, True
    return raw, False


def transmission_profile(traj: SeedTrajectory) -> TransmissionProfile:
    """Plain profile p_i = L_i / L_n for i = 1..n, clamped into [0, 1].

    In DETERMINISTIC and FIXED_PER_RUN modes the sequence is increasing,
    so nothing clamps and p_n == 1 exactly.
    """
    top = traj.lucas[traj.n]
    probs: list[float] = []
    flags: list[bool] = []
    for i in range(1, traj.n + 1):
        p, flag = _clamp(traj.lucas[i].ratio(top))
        probs.append(p)
        flags.append(flag)
    return TransmissionProfile(
        probabilities=tuple(probs), clamped=tuple(flags), boost=None
    )


def ratio_boost(traj: SeedTrajectory, i: int, j: int) -> float:
    """Tail-boosted ratio (L_i + L_j) / L_{n+j} over an extended trajectory.

    `traj` must already cover the extended range: its top index is treated
    as n + j.  When the boosted ratio exceeds 1 the boost is abandoned for
    that index (not clamped): the plain ratio L_i / L_{n+j} is returned
    instead, itself cut at 1 for pathological hand-built trajectories.
    """
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    if traj.n <= j:
        raise ValueError(
            f"trajectory top index {traj.n} must exceed j={j} (it represents n+j)"
        )
    if not 1 <= i <= traj.n:
        raise IndexError(f"i must be in [1, {traj.n}], got {i}")
    top = traj.lucas[traj.n]
    boosted = (traj.lucas[i] + traj.lucas[j]).ratio(top)
    if boosted > 1.0:
        return min(traj.lucas[i].ratio(top), 1.0)
    return boosted


def additive_boost(traj: SeedTrajectory, i: int, alpha_add: float) -> float:
    """Additive boost (L_i + alpha_add) / L_n, clamped to 1."""
    if not 0.0 < alpha_add < 0.5:
        raise ValueError(f"alpha_add must be in (0, 0.5), got {alpha_add}")
    if not 1 <= i <= traj.n:
        raise IndexError(f"i must be in [1, {traj.n}], got {i}")
    bumped = traj.lucas[i] + Magnitude.from_float(alpha_add)
    p, _ = _clamp(bumped.ratio(traj.lucas[traj.n]))
    return p


def boosted_profile(traj: SeedTrajectory, boost: BoostConfig) -> TransmissionProfile:
    """Profile with `boost` applied at every index 1..n of `traj`.

    For RATIO the trajectory must already include the dummy tail (top
    index = n + j) and the fallback rule applies per index; for ADDITIVE
    the plain trajectory is used and clamping is recorded per index.
    """
    probs: list[float] = []
    flags: list[bool] = []
    if boost.variant is BoostVariant.RATIO:
        for i in range(1, traj.n + 1):
            probs.append(ratio_boost(traj, i, boost.j))
            flags.append(False)
    else:
        top = traj.lucas[traj.n]
        bump = Magnitude.from_float(boost.alpha_add)
        for i in range(1, traj.n + 1):
            p, flag = _clamp((traj.lucas[i] + bump).ratio(top))
            probs.append(p)
            flags.append(flag)
    return TransmissionProfile(
        probabilities=tuple(probs), clamped=tuple(flags), boost=boost
    )


def decay_curve(
    i: int, n_values: Sequence[int], policy: GammaPolicy
) -> list[float]:
    """p_i = L_i / L_n evaluated at each n in `n_values` (fresh trajectory
    per n, same policy seed), showing how a fixed index decays as the
    sequence horizon grows."""
    if i < 1:
        raise ValueError(f"i must be >= 1, got {i}")
    out: list[float] = []
    for n in n_values:
        if n < i:
            raise ValueError(f"every n must be >= i={i}, got {n}")
        traj = rglsa_lucas_trajectory(n, policy, rng=random.Random(policy.rng_seed))
        p, _ = _clamp(traj.lucas_ratio(i, n))
        out.append(p)
    return out
