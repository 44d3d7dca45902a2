"""Randomized alpha-scaled seed recurrences.

Each recurrence step multiplies by alpha = 1/gamma >= 1 with gamma drawn
from (0, 1/2] by default, so linear values explode like (alpha*phi)^n.
Sequence values therefore live in log domain as `Magnitude` objects and
only become floats on demand; ratios of two magnitudes are formed by
subtracting logs, which stays finite far past float overflow (n = 10^4 is
routine).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from enum import Enum

from .sequence_core import GOLDEN

__all__ = [
    "GammaMode",
    "GammaPolicy",
    "Magnitude",
    "SeedTrajectory",
    "draw_gamma",
    "rglsa_fib",
    "rglsa_lucas_trajectory",
    "extend_trajectory",
    "closed_form_trajectory",
    "naive_lucas_timed",
    "NAIVE_MAX_N",
]

# math.exp overflows just past this; used to saturate linear conversions.
_EXP_OVERFLOW = 709.0

# The doubly-recursive evaluator needs ~2 * F(n+2) calls; past 45 a single
# evaluation stops being an experiment and becomes a hang.
NAIVE_MAX_N = 45


class GammaMode(Enum):
    """How the gamma scale factor is produced for a trajectory."""

    DETERMINISTIC = "deterministic"  # gamma = 1: classical sequences
    FIXED_PER_RUN = "fixed"  # one draw, reused at every index
    REDRAWN_PER_INDEX = "redrawn"  # fresh draw at every recurrence index


@dataclass(frozen=True)
class GammaPolicy:
    """Sampling band and mode for the gamma scale factor.

    Draws land in (lower, upper]; the default band (0, 0.5] keeps
    alpha = 1/gamma >= 2.  A pinned ``gamma`` skips sampling entirely
    (useful for hand-checkable runs); it is ignored in DETERMINISTIC mode
    and rejected in REDRAWN_PER_INDEX mode, where pinning would contradict
    per-index redrawing.
    """

    mode: GammaMode = GammaMode.FIXED_PER_RUN
    lower: float = 0.0  # exclusive
    upper: float = 0.5  # inclusive
    rng_seed: int = 0
    gamma: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower < self.upper <= 1.0:
            raise ValueError(
                f"need 0 <= lower < upper <= 1, got ({self.lower}, {self.upper}]"
            )
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be a nonnegative integer, got {self.rng_seed}")
        if self.gamma is not None:
            if self.mode is GammaMode.REDRAWN_PER_INDEX:
                raise ValueError("cannot pin gamma when redrawing per index")
            if not 0.0 < self.gamma <= 1.0:
                raise ValueError(f"pinned gamma must be in (0, 1], got {self.gamma}")


def draw_gamma(policy: GammaPolicy, rng: random.Random) -> float:
    """One gamma draw under `policy`, strictly inside (lower, upper].

    DETERMINISTIC mode always yields 1.0 and consumes no randomness; a
    pinned policy gamma likewise bypasses the generator.
    """
    if policy.mode is GammaMode.DETERMINISTIC:
        return 1.0
    if policy.gamma is not None:
        return policy.gamma
    while True:
        # rng.random() is in [0, 1), so 1-u is in (0, 1] and the draw can
        # reach the upper bound but never the lower one.
        g = policy.lower + (policy.upper - policy.lower) * (1.0 - rng.random())
        if g > policy.lower:  # guards the open end against rounding
            return g


@dataclass(frozen=True, order=True)
class Magnitude:
    """A nonnegative real stored as log(value), with exact zero allowed.

    Ordering compares log values (zero sorts below everything).  Addition
    is log-sum-exp; `scaled` multiplies by a positive factor.  Conversions
    to linear floats saturate at +inf instead of overflowing.
    """

    log_value: float
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "Magnitude":
        return cls(log_value=-math.inf, is_zero=True)

    @classmethod
    def from_float(cls, value: float | int) -> "Magnitude":
        if value < 0:
            raise ValueError(f"magnitudes are nonnegative, got {value}")
        if value == 0:
            return cls.zero()
        # math.log accepts arbitrarily large Python ints, so exact integer
        # inputs never need to round-trip through float64.
        return cls(log_value=math.log(value))

    @classmethod
    def from_log(cls, log_value: float) -> "Magnitude":
        if log_value == -math.inf:
            return cls.zero()
        return cls(log_value=log_value)

    def __add__(self, other: "Magnitude") -> "Magnitude":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi = max(self.log_value, other.log_value)
        lo = min(self.log_value, other.log_value)
        return Magnitude(log_value=hi + math.log1p(math.exp(lo - hi)))

    def scaled(self, factor: float) -> "Magnitude":
        if factor <= 0.0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        if self.is_zero:
            return self
        return Magnitude(log_value=self.log_value + math.log(factor))

    def ratio(self, other: "Magnitude") -> float:
        """self / other as a linear float (inf if it overflows float64)."""
        if other.is_zero:
            raise ZeroDivisionError("ratio denominator is zero")
        if self.is_zero:
            return 0.0
        diff = self.log_value - other.log_value
        if diff > _EXP_OVERFLOW:
            return math.inf
        return math.exp(diff)

    def to_float(self) -> float:
        if self.is_zero:
            return 0.0
        if self.log_value > _EXP_OVERFLOW:
            return math.inf
        return math.exp(self.log_value)

    def floor_capped(self, cap: int) -> int:
        """floor(linear value), saturated at `cap`.

        The tiny slack absorbs log-domain rounding so integer-valued
        magnitudes (e.g. 3 stored as log 3) do not floor to 2.
        """
        if cap < 0:
            raise ValueError(f"cap must be >= 0, got {cap}")
        if self.is_zero or cap == 0:
            return 0
        if self.log_value >= math.log(cap + 1):
            return cap
        return min(cap, math.floor(math.exp(self.log_value) + 1e-9))


@dataclass(frozen=True)
class SeedTrajectory:
    """One realized seed sequence.

    ``lucas`` holds L_0..L_n and ``fib`` the helper sequence a_0..a_{n+1}
    that the combination step L_k = alpha_k * (a_{k-1} + a_{k+1}) reads
    from.  ``gammas`` records every draw actually consumed, in consumption
    order; ``policy`` is None for analytically constructed trajectories.
    """

    n: int
    lucas: tuple[Magnitude, ...]
    fib: tuple[Magnitude, ...]
    gammas: tuple[float, ...]
    policy: GammaPolicy | None

    def __post_init__(self) -> None:
        if len(self.lucas) != self.n + 1:
            raise ValueError(f"lucas must hold n+1 values, got {len(self.lucas)}")
        if len(self.fib) != self.n + 2:
            raise ValueError(f"fib must hold n+2 values, got {len(self.fib)}")

    def lucas_float(self) -> list[float]:
        return [m.to_float() for m in self.lucas]

    def lucas_ratio(self, i: int, k: int) -> float:
        """L_i / L_k in linear units."""
        return self.lucas[i].ratio(self.lucas[k])


def rglsa_fib(n: int, alpha: float) -> list[Magnitude]:
    """Scaled helper sequence a_0 = 0, a_1 = 1, a_k = alpha*(a_{k-1} + a_{k-2}).

    Returns indices 0..n; alpha = 1 collapses to classical Fibonacci.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    seq = [Magnitude.zero(), Magnitude.from_float(1.0)]
    for _ in range(n - 1):
        seq.append((seq[-1] + seq[-2]).scaled(alpha))
    return seq


def rglsa_lucas_trajectory(
    n: int, policy: GammaPolicy, rng: random.Random | None = None
) -> SeedTrajectory:
    """Realize L_0..L_n under `policy`.

    L_0 = 2 and L_1 = 1 by convention; for k >= 2,
    L_k = alpha_k * (a_{k-1} + a_{k+1}) over the shared helper sequence.
    FIXED_PER_RUN consumes one draw for everything; REDRAWN_PER_INDEX
    consumes draws first for helper indices 2..n+1, then for combination
    indices 2..n, all from the same stream.  Identical (n, policy) pairs
    reproduce bit-identical trajectories.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1 (L_1 needs a_0 and a_2), got {n}")
    if rng is None:
        rng = random.Random(policy.rng_seed)
    gammas: list[float] = []
    lucas = [Magnitude.from_float(2.0), Magnitude.from_float(1.0)]

    if policy.mode is GammaMode.REDRAWN_PER_INDEX:
        fib = [Magnitude.zero(), Magnitude.from_float(1.0)]
        for _ in range(n):  # helper indices 2..n+1
            g = draw_gamma(policy, rng)
            gammas.append(g)
            fib.append((fib[-1] + fib[-2]).scaled(1.0 / g))
        for k in range(2, n + 1):
            g = draw_gamma(policy, rng)
            gammas.append(g)
            lucas.append((fib[k - 1] + fib[k + 1]).scaled(1.0 / g))
    else:
        g = draw_gamma(policy, rng)
        if policy.mode is not GammaMode.DETERMINISTIC:
            gammas.append(g)
        alpha = 1.0 / g
        fib = rglsa_fib(n + 1, alpha)
        for k in range(2, n + 1):
            lucas.append((fib[k - 1] + fib[k + 1]).scaled(alpha))

    return SeedTrajectory(
        n=n, lucas=tuple(lucas), fib=tuple(fib), gammas=tuple(gammas), policy=policy
    )


def extend_trajectory(
    traj: SeedTrajectory, extra: int, rng: random.Random | None = None
) -> SeedTrajectory:
    """Continue `traj` to n + extra, preserving the existing prefix exactly.

    New indices consume fresh draws.  Pass the live generator when the
    trajectory is part of a larger seeded run; with rng=None the policy
    stream is replayed from its seed, skipping the draws already recorded.
    """
    if extra < 1:
        raise ValueError(f"extra must be >= 1, got {extra}")
    if traj.policy is None:
        raise ValueError("cannot extend an analytic trajectory; rebuild it instead")
    policy = traj.policy
    if rng is None:
        rng = random.Random(policy.rng_seed)
        for _ in range(len(traj.gammas)):
            rng.random()

    m = traj.n + extra
    gammas = list(traj.gammas)
    fib = list(traj.fib)
    lucas = list(traj.lucas)

    if policy.mode is GammaMode.REDRAWN_PER_INDEX:
        for _ in range(extra):  # helper indices n+2..m+1
            g = draw_gamma(policy, rng)
            gammas.append(g)
            fib.append((fib[-1] + fib[-2]).scaled(1.0 / g))
        for k in range(traj.n + 1, m + 1):
            g = draw_gamma(policy, rng)
            gammas.append(g)
            lucas.append((fib[k - 1] + fib[k + 1]).scaled(1.0 / g))
    else:
        alpha = 1.0 if policy.mode is GammaMode.DETERMINISTIC else 1.0 / traj.gammas[0]
        for _ in range(extra):
            fib.append((fib[-1] + fib[-2]).scaled(alpha))
        for k in range(traj.n + 1, m + 1):
            lucas.append((fib[k - 1] + fib[k + 1]).scaled(alpha))

    return SeedTrajectory(
        n=m, lucas=tuple(lucas), fib=tuple(fib), gammas=tuple(gammas), policy=policy
    )


def closed_form_trajectory(n: int, gamma: float) -> SeedTrajectory:
    """Analytic trajectory L_k = gamma * (phi^k + psi^k).

    Equals gamma times the classical Lucas numbers, with initials 2*gamma
    and gamma; gamma cancels in every ratio, so transmission profiles built
    from this are gamma-invariant.  The helper side uses the matching
    scaled Binet form (gamma/sqrt5) * (phi^k - psi^k).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    log_gamma = math.log(gamma)
    log_phi = math.log(GOLDEN.phi)
    q = GOLDEN.psi / GOLDEN.phi  # in (-1, 0): alternating, |q|^k -> 0

    lucas = tuple(
        Magnitude.from_log(log_gamma + k * log_phi + math.log1p(q**k))
        for k in range(n + 1)
    )
    fib = tuple(
        Magnitude.zero()
        if k == 0
        else Magnitude.from_log(
            log_gamma - math.log(GOLDEN.sqrt5) + k * log_phi + math.log1p(-(q**k))
        )
        for k in range(n + 2)
    )
    return SeedTrajectory(n=n, lucas=lucas, fib=fib, gammas=(gamma,), policy=None)


def _naive_fib_plain(k: int) -> float:
    if k < 2:
        return float(k)
    return _naive_fib_plain(k - 1) + _naive_fib_plain(k - 2)


def _naive_fib_scaled(k: int, alpha: float) -> float:
    if k < 2:
        return float(k)
    return alpha * (_naive_fib_scaled(k - 1, alpha) + _naive_fib_scaled(k - 2, alpha))


def naive_lucas_timed(n: int, alpha: float = 1.0) -> tuple[Magnitude, float]:
    """Evaluate L_n by unmemoized binary recursion and time it.

    Returns (value, elapsed wall-clock milliseconds).  Cost grows like
    phi^n — that exponential shape is the point — so n is capped at
    NAIVE_MAX_N.  alpha = 1 dispatches to an unscaled recursion with the
    same call tree (one float multiply less per call).
    """
    if not 0 <= n <= NAIVE_MAX_N:
        raise ValueError(f"n must be in [0, {NAIVE_MAX_N}], got {n}")
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    t0 = time.perf_counter()
    if n == 0:
        value = 2.0
    elif n == 1:
        value = 1.0
    elif alpha == 1.0:
        value = _naive_fib_plain(n - 1) + _naive_fib_plain(n + 1)
    else:
        value = alpha * (
            _naive_fib_scaled(n - 1, alpha) + _naive_fib_scaled(n + 1, alpha)
        )
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return Magnitude.from_float(value), elapsed_ms
