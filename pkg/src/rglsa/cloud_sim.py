"""Seed-driven attack simulation over an ordered cloud of virtual machines.

VM_1 starts infected and is the attack source.  Each step the scan pointer
advances to the next uninfected VM in sequence order (wrapping past the
end), which is attacked with its profile probability via a Bernoulli draw;
misses leave the VM clean and the scan moves on.  Dummy VMs injected
mid-run are attackable decoys: they carry no seed identity and never
propagate, but they stretch the trajectory to n+j, which dilutes every
probability.  A run ends when every VM is infected, when every remaining
probability has fallen below epsilon (the attack is starved out), or at
the step cap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .propagation import (
    BoostConfig,
    BoostVariant,
    TransmissionProfile,
    boosted_profile,
    transmission_profile,
)
from .randomized_seeds import (
    GammaPolicy,
    Magnitude,
    SeedTrajectory,
    extend_trajectory,
    rglsa_lucas_trajectory,
)

__all__ = [
    "VmKind",
    "Vm",
    "Cloud",
    "SeedVmMapping",
    "StepOutcome",
    "Termination",
    "StepRecord",
    "AttackRun",
    "AttackState",
    "build_cloud",
    "inject_dummies",
    "step_attack",
    "run_attack",
]


class VmKind(Enum):
    REAL = "real"
    DUMMY = "dummy"


@dataclass
class Vm:
    """One machine: integer id, kind, and an infection flag that only ever
    rises 0 -> 1."""

    ident: int
    kind: VmKind
    flag: int = 0

    def infect(self) -> None:
        self.flag = 1


@dataclass
class Cloud:
    """Ordered VM collection.  `multiplicity` is the per-edge parallel-seed
    cap: the most VMs a single step may attack."""

    vms: list[Vm]
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")

    @property
    def size(self) -> int:
        return len(self.vms)

    def infected_count(self) -> int:
        return sum(vm.flag for vm in self.vms)

    def all_infected(self) -> bool:
        return all(vm.flag == 1 for vm in self.vms)

    def uninfected_ids(self) -> list[int]:
        return [vm.ident for vm in self.vms if vm.flag == 0]


@dataclass(frozen=True)
class SeedVmMapping:
    """Bijection between seed indices and the ORIGINAL VMs: seed k-1 <-> VM_k.

    Dummies never enter the mapping; they only rescale the trajectory
    horizon.  The pairing is identity bookkeeping (no seed is lost or
    duplicated), not the probability lookup.
    """

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def for_cloud(cls, n: int) -> "SeedVmMapping":
        return cls(pairs=tuple((k - 1, k) for k in range(1, n + 1)))

    def vm_for_seed(self, seed_index: int) -> int:
        for s, v in self.pairs:
            if s == seed_index:
                return v
        raise KeyError(f"no VM mapped to seed index {seed_index}")

    def seed_for_vm(self, vm_id: int) -> int:
        for s, v in self.pairs:
            if v == vm_id:
                return s
        raise KeyError(f"no seed mapped to VM {vm_id}")

    def is_bijection_over(self, vm_ids: Sequence[int]) -> bool:
        seeds = [s for s, _ in self.pairs]
        vms = [v for _, v in self.pairs]
        return (
            len(set(seeds)) == len(seeds)
            and len(set(vms)) == len(vms)
            and sorted(vms) == sorted(vm_ids)
        )


class StepOutcome(Enum):
    HIT = "hit"
    MISS = "miss"


class Termination(Enum):
    ALL_INFECTED = "all_infected"
    NULLIFIED = "nullified"
    MAX_STEPS = "max_steps"


@dataclass(frozen=True)
class StepRecord:
    """One attack attempt.  Steps with multiplicity > 1 produce several
    records sharing a step number."""

    step: int
    seed_count: Magnitude
    target_vm: int
    p_used: float
    outcome: StepOutcome
    infected_total: int


@dataclass(frozen=True)
class AttackRun:
    """Full attack trace plus how it ended."""

    steps: tuple[StepRecord, ...]
    terminated: Termination
    n_initial: int
    n_final: int
    infected_final: int

    @property
    def step_count(self) -> int:
        return self.steps[-1].step if self.steps else 0


@dataclass
class AttackState:
    """Mutable per-run state threaded through step_attack."""

    cloud: Cloud
    mapping: SeedVmMapping
    trajectory: SeedTrajectory
    profile: TransmissionProfile
    step_no: int = 0
    scan_pos: int = 0  # list index where the next scan starts
    records: list[StepRecord] = field(default_factory=list)


def build_cloud(n: int) -> tuple[Cloud, SeedVmMapping]:
    """n real VMs with ids 1..n; VM_1 is flagged infected (the source)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    vms = [Vm(ident=k, kind=VmKind.REAL) for k in range(1, n + 1)]
    vms[0].infect()
    return Cloud(vms=vms), SeedVmMapping.for_cloud(n)


def inject_dummies(cloud: Cloud, j: int, at_step: int) -> Cloud:
    """Append j dummy VMs (fresh ids past the current maximum).

    Returns a new Cloud sharing the existing Vm objects; already recorded
    steps are untouched.  `at_step` is the 1-based step the injection
    lands on and must be positive (run_attack applies it at the start of
    that step).
    """
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    if at_step < 1:
        raise ValueError(f"at_step must be >= 1, got {at_step}")
    next_id = max(vm.ident for vm in cloud.vms) + 1
    dummies = [Vm(ident=next_id + k, kind=VmKind.DUMMY) for k in range(j)]
    return Cloud(vms=[*cloud.vms, *dummies], multiplicity=cloud.multiplicity)


def _next_uninfected(cloud: Cloud, start: int) -> int | None:
    """List index of the first uninfected VM at or after `start`, wrapping."""
    size = cloud.size
    for off in range(size):
        idx = (start + off) % size
        if cloud.vms[idx].flag == 0:
            return idx
    return None


def step_attack(state: AttackState, rng: random.Random) -> list[StepRecord]:
    """Advance one step: attack up to min(multiplicity, floor(seed count),
    remaining) uninfected VMs in scan order, one Bernoulli draw each.

    The step's seed count is the trajectory value at the step index
    (saturating at the trajectory top).  Returns the records appended for
    this step.
    """
    state.step_no += 1
    t = state.step_no
    traj = state.trajectory
    seed_count = traj.lucas[min(t, traj.n)]

    remaining = len(state.cloud.uninfected_ids())
    attempts = min(state.cloud.multiplicity, seed_count.floor_capped(remaining))
    new_records: list[StepRecord] = []
    for _ in range(attempts):
        idx = _next_uninfected(state.cloud, state.scan_pos)
        if idx is None:
            break
        vm = state.cloud.vms[idx]
        state.scan_pos = (idx + 1) % state.cloud.size
        p = state.profile.probability_for(vm.ident)
        hit = rng.random() < p
        if hit:
            vm.infect()
        new_records.append(
            StepRecord(
                step=t,
                seed_count=seed_count,
                target_vm=vm.ident,
                p_used=p,
                outcome=StepOutcome.HIT if hit else StepOutcome.MISS,
                infected_total=state.cloud.infected_count(),
            )
        )
    state.records.extend(new_records)
    return new_records


def _profile_for(
    traj: SeedTrajectory, boost: BoostConfig | None, injected: int
) -> TransmissionProfile:
    if boost is None:
        return transmission_profile(traj)
    if boost.variant is BoostVariant.RATIO:
        if injected < 1:
            # ratio boost keys off the dummy tail; nothing to key off yet
            return transmission_profile(traj)
        return boosted_profile(traj, BoostConfig.ratio(injected))
    return boosted_profile(traj, boost)


def run_attack(
    n: int,
    policy: GammaPolicy,
    boost: BoostConfig | None = None,
    dummy_schedule: Sequence[tuple[int, int]] = (),
    max_steps: int = 10_000,
    epsilon: float = 1e-6,
    rng_seed: int | None = None,
    profile_override: TransmissionProfile | None = None,
) -> AttackRun:
    """Simulate a full attack on n VMs under `policy`.

    `dummy_schedule` lists (at_step, j) injection events, applied at the
    start of their step; each extends the trajectory in place and rebuilds
    the profile over the new horizon (with `boost` keyed to the cumulative
    dummy count for the RATIO variant).  Termination: ALL_INFECTED, or
    NULLIFIED once every remaining probability is below `epsilon` (checked
    at step start), or MAX_STEPS.  Attack Bernoulli draws come from
    `rng_seed` (defaults to the policy seed); trajectory draws come from
    the policy stream.  `profile_override` replaces every computed profile
    (stub runs for testing termination behavior).

    Identical arguments reproduce the identical AttackRun.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    schedule = sorted(dummy_schedule)
    for at_step, j in schedule:
        if at_step < 1 or j < 1:
            raise ValueError(f"bad injection event (at_step={at_step}, j={j})")

    traj_rng = random.Random(policy.rng_seed)
    attack_rng = random.Random(policy.rng_seed if rng_seed is None else rng_seed)

    cloud, mapping = build_cloud(n)
    trajectory = rglsa_lucas_trajectory(n, policy, rng=traj_rng)
    profile = profile_override or _profile_for(trajectory, boost, injected=0)
    state = AttackState(
        cloud=cloud, mapping=mapping, trajectory=trajectory, profile=profile
    )
    injected = 0

    def finish(reason: Termination) -> AttackRun:
        return AttackRun(
            steps=tuple(state.records),
            terminated=reason,
            n_initial=n,
            n_final=state.cloud.size,
            infected_final=state.cloud.infected_count(),
        )

    if state.cloud.all_infected():  # n == 1: the source is the whole cloud
        return finish(Termination.ALL_INFECTED)

    for t in range(1, max_steps + 1):
        for at_step, j in schedule:
            if at_step == t:
                state.cloud = inject_dummies(state.cloud, j, at_step)
                state.trajectory = extend_trajectory(state.trajectory, j, rng=traj_rng)
                injected += j
                state.profile = profile_override or _profile_for(
                    state.trajectory, boost, injected
                )
        remaining = state.cloud.uninfected_ids()
        if all(state.profile.probability_for(v) < epsilon for v in remaining):
            return finish(Termination.NULLIFIED)
        step_attack(state, attack_rng)
        if state.cloud.all_infected():
            return finish(Termination.ALL_INFECTED)
    return finish(Termination.MAX_STEPS)
