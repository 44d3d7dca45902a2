"""Randomized Lucas-seed malware propagation toolkit.

Modules:

- ``sequence_core``     exact Fibonacci/Lucas recurrences, closed forms, verifiers
- ``randomized_seeds``  gamma-scaled randomized recurrences in log domain
- ``propagation``       transmission profiles and tail boosting
- ``cloud_sim``         seed-driven attack simulation over ordered VMs
- ``experiments``       seeded experiment runners producing datasets
- ``cli_io``            console front end, formats, and dataset files
"""

__version__ = "0.1.0"

from .cloud_sim import (
    AttackRun,
    AttackState,
    Cloud,
    SeedVmMapping,
    StepOutcome,
    StepRecord,
    Termination,
    Vm,
    VmKind,
    build_cloud,
    inject_dummies,
    run_attack,
    step_attack,
)
from .experiments import (
    Dataset,
    ExperimentConfig,
    ExperimentKind,
    exp_fullsim,
    exp_growth,
    exp_probability,
    exp_tailboost,
    exp_timing,
    run_experiment,
)
from .propagation import (
    BoostConfig,
    BoostVariant,
    TransmissionProfile,
    additive_boost,
    boosted_profile,
    decay_curve,
    ratio_boost,
    transmission_profile,
)
from .randomized_seeds import (
    GammaMode,
    GammaPolicy,
    Magnitude,
    SeedTrajectory,
    closed_form_trajectory,
    draw_gamma,
    extend_trajectory,
    naive_lucas_timed,
    rglsa_fib,
    rglsa_lucas_trajectory,
)
from .sequence_core import (
    GOLDEN,
    GoldenConstants,
    RecurrenceReport,
    fib_binet,
    fib_closed_scaled,
    fib_iter,
    lucas_closed_scaled,
    lucas_from_fib,
    lucas_iter,
    verify_plain_recurrence,
    verify_scaled_recurrence,
    verify_sum_of_squares,
)
