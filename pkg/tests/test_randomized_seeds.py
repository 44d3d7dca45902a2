"""Gamma sampling, log-domain magnitudes and randomized trajectories."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rglsa.randomized_seeds import (
    NAIVE_MAX_N,
    GammaMode,
    GammaPolicy,
    Magnitude,
    closed_form_trajectory,
    draw_gamma,
    extend_trajectory,
    naive_lucas_timed,
    rglsa_fib,
    rglsa_lucas_trajectory,
)
from rglsa.sequence_core import GOLDEN, lucas_iter

LOG_PHI = math.log(GOLDEN.phi)


# ---------------------------------------------------------------- policy


def test_policy_defaults():
    p = GammaPolicy()
    assert p.mode is GammaMode.FIXED_PER_RUN
    assert (p.lower, p.upper) == (0.0, 0.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"lower": 0.5, "upper": 0.5},
        {"lower": -0.1, "upper": 0.5},
        {"lower": 0.0, "upper": 1.5},
        {"rng_seed": -3},
        {"gamma": 0.0},
        {"gamma": 1.5},
        {"mode": GammaMode.REDRAWN_PER_INDEX, "gamma": 0.25},
    ],
)
def test_policy_rejects_bad_config(kwargs):
    with pytest.raises(ValueError):
        GammaPolicy(**kwargs)


def test_draw_gamma_deterministic_is_one():
    rng = random.Random(1)
    policy = GammaPolicy(mode=GammaMode.DETERMINISTIC)
    assert all(draw_gamma(policy, rng) == 1.0 for _ in range(10))


def test_draw_gamma_pinned_bypasses_rng():
    policy = GammaPolicy(gamma=0.5)
    a = draw_gamma(policy, random.Random(0))
    b = draw_gamma(policy, random.Random(99))
    assert a == b == 0.5


@given(st.integers(min_value=0, max_value=10_000))
def test_draw_gamma_stays_in_half_open_band(seed):
    rng = random.Random(seed)
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, lower=0.0, upper=0.5)
    for _ in range(20):
        g = draw_gamma(policy, rng)
        assert 0.0 < g <= 0.5


def test_draw_gamma_reproducible():
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX)
    a = [draw_gamma(policy, random.Random(7)) for _ in range(5)]
    b = [draw_gamma(policy, random.Random(7)) for _ in range(5)]
    assert a == b


# ------------------------------------------------------------- magnitude


def test_magnitude_zero_roundtrip():
    z = Magnitude.zero()
    assert z.is_zero
    assert z.to_float() == 0.0
    assert Magnitude.from_float(0) == z


def test_magnitude_rejects_negative():
    with pytest.raises(ValueError):
        Magnitude.from_float(-1.0)


def test_magnitude_add_matches_linear():
    three = Magnitude.from_float(3.0)
    four = Magnitude.from_float(4.0)
    assert (three + four).to_float() == pytest.approx(7.0, rel=1e-12)
    assert (three + Magnitude.zero()).to_float() == pytest.approx(3.0, rel=1e-15)


def test_magnitude_accepts_huge_exact_ints():
    big = Magnitude.from_float(10**400)
    assert big.log_value == pytest.approx(400 * math.log(10), rel=1e-12)
    assert big.to_float() == math.inf  # saturates instead of raising


def test_magnitude_ordering():
    values = [Magnitude.from_float(v) for v in (5.0, 1.0, 3.0)]
    assert sorted(values)[0].to_float() == pytest.approx(1.0)
    assert Magnitude.zero() < Magnitude.from_float(1e-300)


def test_magnitude_ratio():
    three = Magnitude.from_float(3.0)
    four = Magnitude.from_float(4.0)
    assert three.ratio(four) == pytest.approx(0.75, rel=1e-12)
    assert Magnitude.zero().ratio(four) == 0.0
    with pytest.raises(ZeroDivisionError):
        four.ratio(Magnitude.zero())


def test_magnitude_ratio_saturates():
    huge = Magnitude.from_log(1e6)
    assert huge.ratio(Magnitude.from_float(1.0)) == math.inf


def test_magnitude_floor_capped():
    three = Magnitude.from_float(3.0)
    assert three.floor_capped(10) == 3  # log round-trip must not floor to 2
    assert three.floor_capped(2) == 2
    assert three.floor_capped(0) == 0
    assert Magnitude.zero().floor_capped(5) == 0
    assert Magnitude.from_log(1e6).floor_capped(7) == 7


@given(st.floats(min_value=1e-6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
def test_magnitude_add_commutes(a, b):
    x, y = Magnitude.from_float(a), Magnitude.from_float(b)
    assert (x + y).log_value == pytest.approx((y + x).log_value, rel=1e-15)
    assert (x + y).to_float() == pytest.approx(a + b, rel=1e-12)


# ------------------------------------------------------------ trajectories


def test_rglsa_fib_alpha_two_prefix():
    seq = [m.to_float() for m in rglsa_fib(5, alpha=2.0)]
    assert seq == pytest.approx([0.0, 1.0, 2.0, 6.0, 16.0, 44.0], rel=1e-12)


def test_rglsa_fib_alpha_one_is_classical():
    seq = [m.to_float() for m in rglsa_fib(12, alpha=1.0)]
    assert seq == pytest.approx(
        [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144], rel=1e-9
    )


def test_rglsa_fib_guards():
    with pytest.raises(ValueError):
        rglsa_fib(0, alpha=2.0)
    with pytest.raises(ValueError):
        rglsa_fib(4, alpha=0.0)


def test_pinned_half_gamma_trajectory():
    policy = GammaPolicy(mode=GammaMode.FIXED_PER_RUN, gamma=0.5)
    traj = rglsa_lucas_trajectory(4, policy)
    assert traj.lucas_float() == pytest.approx([2.0, 1.0, 14.0, 36.0, 100.0], rel=1e-12)
    assert traj.gammas == (0.5,)


def test_deterministic_trajectory_matches_classical_lucas():
    policy = GammaPolicy(mode=GammaMode.DETERMINISTIC)
    traj = rglsa_lucas_trajectory(200, policy)
    for k in (0, 1, 2, 7, 20, 90, 200):
        exact = Magnitude.from_float(lucas_iter(k))
        assert traj.lucas[k].ratio(exact) == pytest.approx(1.0, rel=1e-9)
    assert traj.gammas == ()


def test_trajectory_initials_are_fixed():
    for mode in GammaMode:
        traj = rglsa_lucas_trajectory(3, GammaPolicy(mode=mode, rng_seed=11))
        assert traj.lucas[0].to_float() == pytest.approx(2.0, rel=1e-15)
        assert traj.lucas[1].to_float() == pytest.approx(1.0, rel=1e-15)


def test_trajectory_rejects_n_zero():
    with pytest.raises(ValueError):
        rglsa_lucas_trajectory(0, GammaPolicy())


def test_trajectory_reproducible_per_seed():
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=31)
    assert rglsa_lucas_trajectory(9, policy) == rglsa_lucas_trajectory(9, policy)
    other = rglsa_lucas_trajectory(
        9, GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=32)
    )
    assert other != rglsa_lucas_trajectory(9, policy)


def test_redrawn_trajectory_draw_accounting():
    n = 9
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=5)
    traj = rglsa_lucas_trajectory(n, policy)
    # helper indices 2..n+1 then combination indices 2..n
    assert len(traj.gammas) == n + (n - 1)
    assert all(0.0 < g <= 0.5 for g in traj.gammas)


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=2_000_000))
def test_fixed_mode_growth_rate_dominates_phi(seed):
    # alpha >= 2 makes every step at least phi times the classical one
    n = 24
    policy = GammaPolicy(mode=GammaMode.FIXED_PER_RUN, rng_seed=seed)
    traj = rglsa_lucas_trajectory(n, policy)
    slope = (traj.lucas[n].log_value - traj.lucas[2].log_value) / (n - 2)
    assert slope >= LOG_PHI - 1e-9


def test_huge_n_never_overflows():
    policy = GammaPolicy(mode=GammaMode.FIXED_PER_RUN, gamma=0.01)
    traj = rglsa_lucas_trajectory(5_000, policy)
    assert math.isfinite(traj.lucas[5_000].log_value)
    assert traj.lucas[5_000].to_float() == math.inf


def test_extend_preserves_prefix_exactly():
    for mode in GammaMode:
        policy = GammaPolicy(mode=mode, rng_seed=13)
        base = rglsa_lucas_trajectory(6, policy)
        longer = extend_trajectory(base, 5)
        assert longer.n == 11
        assert longer.lucas[:7] == base.lucas
        assert longer.fib[:8] == base.fib
        assert longer.gammas[: len(base.gammas)] == base.gammas


def test_extend_replay_is_deterministic():
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=21)
    base = rglsa_lucas_trajectory(5, policy)
    assert extend_trajectory(base, 4) == extend_trajectory(base, 4)


def test_extend_guards():
    base = rglsa_lucas_trajectory(4, GammaPolicy())
    with pytest.raises(ValueError):
        extend_trajectory(base, 0)
    with pytest.raises(ValueError):
        extend_trajectory(closed_form_trajectory(4, 0.5), 2)


def test_closed_form_trajectory_values():
    traj = closed_form_trajectory(4, 1.0)
    assert traj.lucas_float() == pytest.approx([2.0, 1.0, 3.0, 4.0, 7.0], rel=1e-9)
    half = closed_form_trajectory(4, 0.5)
    assert half.lucas_float() == pytest.approx([1.0, 0.5, 1.5, 2.0, 3.5], rel=1e-9)
    assert half.policy is None


def test_closed_form_trajectory_gamma_guard():
    for bad in (0.0, -1.0, 1.2):
        with pytest.raises(ValueError):
            closed_form_trajectory(4, bad)


@given(st.integers(min_value=1, max_value=60))
def test_closed_form_ratios_are_gamma_free(n):
    a = closed_form_trajectory(max(n, 2), 0.07)
    b = closed_form_trajectory(max(n, 2), 0.93)
    k = max(n, 2)
    assert a.lucas_ratio(1, k) == pytest.approx(b.lucas_ratio(1, k), rel=1e-12)


# ---------------------------------------------------------- naive timing


def test_naive_matches_iterative_small_n():
    for n in range(0, 21):
        value, _ = naive_lucas_timed(n, alpha=1.0)
        assert value.to_float() == pytest.approx(lucas_iter(n), rel=1e-9)


def test_naive_scaled_matches_trajectory():
    policy = GammaPolicy(mode=GammaMode.FIXED_PER_RUN, gamma=0.5)
    traj = rglsa_lucas_trajectory(10, policy)
    value, elapsed = naive_lucas_timed(10, alpha=2.0)
    assert value.ratio(traj.lucas[10]) == pytest.approx(1.0, rel=1e-9)
    assert elapsed >= 0.0


def test_naive_guards():
    with pytest.raises(ValueError):
        naive_lucas_timed(NAIVE_MAX_N + 1)
    with pytest.raises(ValueError):
        naive_lucas_timed(10, alpha=-1.0)
