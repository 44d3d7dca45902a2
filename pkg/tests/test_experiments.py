"""Experiment runners: datasets, metadata echo and regeneration."""

import math

import pytest

from rglsa.experiments import (
    TIMING_REPEATS,
    Dataset,
    ExperimentConfig,
    ExperimentKind,
    config_from_metadata,
    exp_growth,
    exp_probability,
    exp_tailboost,
    exp_timing,
    run_experiment,
)
from rglsa.randomized_seeds import GammaMode, GammaPolicy
from rglsa.sequence_core import lucas_iter

DET = GammaPolicy(mode=GammaMode.DETERMINISTIC, rng_seed=42)


def cfg(kind, n_values, policy=DET, **kwargs):
    return ExperimentConfig(kind=kind, n_values=tuple(n_values), policy=policy, **kwargs)


# ------------------------------------------------------------------ config


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": ExperimentKind.GROWTH, "n_values": ()},
        {"kind": ExperimentKind.GROWTH, "n_values": (0, 4)},
        {"kind": ExperimentKind.GROWTH, "n_values": (4, 4)},
        {"kind": ExperimentKind.GROWTH, "n_values": (8, 4)},
        {"kind": ExperimentKind.GROWTH, "n_values": (4,), "j": -1},
        {"kind": ExperimentKind.TIMING, "n_values": (46,)},
        {"kind": ExperimentKind.TAILBOOST, "n_values": (4,), "j": 0},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(policy=DET, **kwargs)


def test_config_closed_form_needs_fixed_gamma():
    redrawn = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX)
    with pytest.raises(ValueError):
        cfg(ExperimentKind.PROBABILITY, (4,), policy=redrawn, closed_form=True)
    # but pinned and deterministic policies are fine
    cfg(ExperimentKind.PROBABILITY, (4,), policy=GammaPolicy(gamma=0.3), closed_form=True)
    cfg(ExperimentKind.PROBABILITY, (4,), closed_form=True)


def test_dataset_rejects_ragged_columns():
    with pytest.raises(ValueError):
        Dataset(columns={"a": [1.0, 2.0], "b": [1.0]})


def test_dataset_row_count():
    ds = Dataset(columns={"a": [1.0, 2.0], "b": [3.0, 4.0]})
    assert ds.n_rows == 2
    assert Dataset(columns={}).n_rows == 0


# ------------------------------------------------------------------ growth


def test_growth_deterministic_values():
    ds = exp_growth(cfg(ExperimentKind.GROWTH, (4, 8, 10, 12)))
    assert ds.columns["n"] == [4.0, 8.0, 10.0, 12.0]
    assert ds.columns["lucas"] == pytest.approx([7.0, 47.0, 123.0, 322.0], rel=1e-9)
    expected_logs = [math.log(lucas_iter(n)) for n in (4, 8, 10, 12)]
    assert ds.columns["log_lucas"] == pytest.approx(expected_logs, rel=1e-9)


def test_growth_saturates_beyond_float_range():
    ds = exp_growth(
        cfg(ExperimentKind.GROWTH, (2000,), policy=GammaPolicy(gamma=0.25))
    )
    assert ds.columns["lucas"] == [math.inf]
    assert math.isfinite(ds.columns["log_lucas"][0])


# ------------------------------------------------------------- probability


def test_probability_deterministic_profile():
    ds = exp_probability(cfg(ExperimentKind.PROBABILITY, (4,)))
    assert ds.columns["i"] == [1.0, 2.0, 3.0, 4.0]
    assert ds.columns["p"] == pytest.approx([1 / 7, 3 / 7, 4 / 7, 1.0], rel=1e-9)


def test_probability_rows_stack_per_horizon():
    ds = exp_probability(cfg(ExperimentKind.PROBABILITY, (3, 5)))
    assert ds.n_rows == 3 + 5
    assert ds.columns["n"][:3] == [3.0, 3.0, 3.0]
    assert ds.columns["p"][2] == 1.0 and ds.columns["p"][-1] == 1.0


def test_probability_closed_form_is_gamma_invariant():
    datasets = [
        exp_probability(
            cfg(
                ExperimentKind.PROBABILITY,
                (4, 12, 20),
                policy=GammaPolicy(gamma=g),
                closed_form=True,
            )
        )
        for g in (0.1, 0.4)
    ]
    diffs = [abs(a - b) for a, b in zip(datasets[0].columns["p"], datasets[1].columns["p"])]
    assert max(diffs) <= 1e-12


# --------------------------------------------------------------- tailboost


def test_tailboost_boosted_dominates_plain():
    ds = exp_tailboost(cfg(ExperimentKind.TAILBOOST, (4, 8, 10, 12), j=8))
    assert ds.n_rows == 4 + 8 + 10 + 12
    for plain, boosted in zip(ds.columns["p_plain"], ds.columns["p_boosted"]):
        assert boosted > plain
        assert 0.0 <= plain <= 1.0 and 0.0 <= boosted <= 1.0


def test_tailboost_plain_column_uses_extended_denominator():
    ds = exp_tailboost(cfg(ExperimentKind.TAILBOOST, (4,), j=2))
    # L_1 / L_6 = 1/18 and L_4 / L_6 = 7/18
    assert ds.columns["p_plain"][0] == pytest.approx(1 / 18, rel=1e-9)
    assert ds.columns["p_plain"][3] == pytest.approx(7 / 18, rel=1e-9)


# ------------------------------------------------------------------ timing


def test_timing_shape_and_bounds():
    ds = exp_timing(cfg(ExperimentKind.TIMING, (4, 6, 8)))
    assert ds.columns["n"] == [4.0, 6.0, 8.0]
    assert all(t >= 0.0 for t in ds.columns["elapsed_ms"])
    assert all(t < 50.0 for t in ds.columns["elapsed_ms"])  # tiny trees are fast
    assert TIMING_REPEATS == 3


# ----------------------------------------------------------------- fullsim


def test_fullsim_trace_and_metadata():
    ds = run_experiment(cfg(ExperimentKind.FULLSIM, (12,), max_steps=200))
    assert set(ds.columns) == {"step", "target_vm", "p_used", "hit", "infected_total"}
    assert ds.metadata["terminated"] == "all_infected"
    assert ds.metadata["n_final"] == "12"
    assert set(ds.columns["hit"]) <= {0.0, 1.0}
    assert ds.columns["infected_total"][-1] == 12.0


def test_fullsim_uses_largest_horizon():
    ds = run_experiment(cfg(ExperimentKind.FULLSIM, (4, 12), max_steps=200))
    assert ds.metadata["n_values"] == "4,12"
    assert ds.metadata["n_final"] == "12"


def test_fullsim_dummy_injection_changes_outcome():
    ds = run_experiment(
        cfg(ExperimentKind.FULLSIM, (12,), j=8, inject_at=2, epsilon=1e-3, max_steps=40_000)
    )
    assert ds.metadata["terminated"] == "nullified"
    assert ds.metadata["n_final"] == "20"


# ------------------------------------------------------------ regeneration


def test_metadata_round_trips_to_config():
    original = cfg(
        ExperimentKind.TAILBOOST,
        (4, 8),
        policy=GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=7),
        j=3,
    )
    ds = run_experiment(original)
    rebuilt = config_from_metadata(ds.metadata)
    assert rebuilt.kind == original.kind
    assert rebuilt.n_values == original.n_values
    assert rebuilt.policy == original.policy
    assert rebuilt.j == original.j
    assert rebuilt.closed_form == original.closed_form


@pytest.mark.parametrize(
    "kind,extra",
    [
        (ExperimentKind.GROWTH, {}),
        (ExperimentKind.PROBABILITY, {}),
        (ExperimentKind.TAILBOOST, {"j": 3}),
        (ExperimentKind.FULLSIM, {"max_steps": 300}),
    ],
)
def test_datasets_regenerate_identically(kind, extra):
    policy = GammaPolicy(mode=GammaMode.REDRAWN_PER_INDEX, rng_seed=11)
    config = cfg(kind, (4, 9), policy=policy, **extra)
    first = run_experiment(config)
    again = run_experiment(config_from_metadata(first.metadata))
    assert first.columns == again.columns


def test_timing_metadata_regenerates_grid_not_times():
    config = cfg(ExperimentKind.TIMING, (4, 6))
    first = run_experiment(config)
    again = run_experiment(config_from_metadata(first.metadata))
    assert first.columns["n"] == again.columns["n"]  # measured times may differ
