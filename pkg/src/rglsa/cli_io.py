"""Console front end and dataset file IO.

Console contract: timing lines are `Total time in milliseconds:<t>` with
integer t; probability lines print one float each, in uppercase-E
scientific notation below 1e-3 and shortest round-trip decimal otherwise.
Dataset files are whitespace-delimited columns under `#` header lines that
embed the run manifest; writes are temp-then-rename and values round-trip
losslessly through their printed form.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
import tempfile
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .experiments import (
    Dataset,
    ExperimentConfig,
    ExperimentKind,
    run_experiment,
)
from .randomized_seeds import (
    NAIVE_MAX_N,
    GammaMode,
    GammaPolicy,
    draw_gamma,
    naive_lucas_timed,
    rglsa_lucas_trajectory,
)

__all__ = [
    "CliOptions",
    "RunManifest",
    "PromptError",
    "BadInputError",
    "DatasetIOError",
    "DatasetFormatError",
    "PROMPT_N",
    "PROMPT_EXTRA",
    "DEFAULT_SEED",
    "SEED_ENV_VAR",
    "format_probability",
    "emit_probability_lines",
    "emit_timing_lines",
    "prompt_inputs",
    "render_dataset",
    "write_dataset",
    "read_dataset",
    "run_combined_session",
    "main",
]

PROMPT_N = "Enter the value of n: "
PROMPT_EXTRA = "Enter the number of additional virtual machines"
PROMPT_ATTEMPTS = 3

SEED_ENV_VAR = "RGLSA_SEED"
DEFAULT_SEED = 42

_GAMMA_MODES = {
    "deterministic": GammaMode.DETERMINISTIC,
    "fixed": GammaMode.FIXED_PER_RUN,
    "redrawn": GammaMode.REDRAWN_PER_INDEX,
}

_MODES = ("growth", "probability", "tailboost", "timing", "fullsim", "combined")


class PromptError(Exception):
    """Interactive input could not produce a value."""


class BadInputError(Exception):
    """Invalid option combination or value (exit code 2)."""


class DatasetIOError(Exception):
    """Dataset could not be read or written (exit code 3)."""


class DatasetFormatError(DatasetIOError):
    """Dataset file exists but does not parse."""


# ---------------------------------------------------------------------------
# value formatting


def format_probability(value: float) -> str:
    """Shortest round-trip decimal; uppercase-E scientific below 1e-3.

    Mirrors the classic Java Double.toString style: `1.0`, `0.0`,
    `0.0040030029387403045`, `6.306585098022473E-4`,
    `6.446398514416795E-11`.  Exponents carry no plus sign and no leading
    zeros.
    """
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"probability must be finite, got {value}")
    if value == 0.0:
        return "0.0"
    if abs(value) >= 1e-3:
        return repr(value)
    sign = "-" if value < 0 else ""
    s = repr(abs(value))
    if "e" in s:
        mantissa, _, exp = s.partition("e")
        if "." not in mantissa:
            mantissa += ".0"
        return f"{sign}{mantissa}E{int(exp)}"
    # plain repr below 1e-3 only happens down to 1e-4; shift it manually
    digits = s[2:]  # strip "0."
    zeros = len(digits) - len(digits.lstrip("0"))
    significant = digits[zeros:]
    mantissa = significant[0] + "." + (significant[1:] or "0")
    return f"{sign}{mantissa}E{-(zeros + 1)}"


def emit_probability_lines(values: Iterable[float], stream: IO[str]) -> None:
    """One formatted probability per line."""
    for v in values:
        stream.write(format_probability(v) + "\n")


def emit_timing_lines(times_ms: Iterable[float], stream: IO[str]) -> None:
    """One `Total time in milliseconds:<t>` line per measurement."""
    for t in times_ms:
        stream.write(f"Total time in milliseconds:{int(round(t))}\n")


# ---------------------------------------------------------------------------
# interactive prompts


def _read_int(
    prompt: str, stream_in: IO[str], stream_out: IO[str], attempts: int
) -> int:
    for _ in range(attempts):
        stream_out.write(prompt)
        stream_out.flush()
        line = stream_in.readline()
        if line == "":
            raise PromptError("input ended before a value was provided")
        try:
            return int(line.strip())
        except ValueError:
            continue
    raise PromptError(f"no valid integer after {attempts} attempts")


def prompt_inputs(
    stream_in: IO[str] | None = None,
    stream_out: IO[str] | None = None,
    attempts: int = PROMPT_ATTEMPTS,
) -> tuple[int, int]:
    """Prompt for n and the number of additional VMs.

    Non-integer input re-prompts, up to `attempts` tries per value; EOF or
    exhausted retries raise PromptError.
    """
    stream_in = sys.stdin if stream_in is None else stream_in
    stream_out = sys.stdout if stream_out is None else stream_out
    n = _read_int(PROMPT_N, stream_in, stream_out, attempts)
    extra = _read_int(PROMPT_EXTRA, stream_in, stream_out, attempts)
    return n, extra


# ---------------------------------------------------------------------------
# run manifest and dataset files


@dataclass(frozen=True)
class RunManifest:
    """Key-value identity of a run, embedded in every dataset header."""

    seed: int
    gamma_mode: str
    n: int
    j: int
    boost_variant: str
    tool_version: str

    _KEYS = ("seed", "gamma_mode", "n", "j", "boost_variant", "tool_version")

    def render(self) -> str:
        return "\n".join(
            [
                f"seed={self.seed}",
                f"gamma_mode={self.gamma_mode}",
                f"n={self.n}",
                f"j={self.j}",
                f"boost_variant={self.boost_variant}",
                f"tool_version={self.tool_version}",
            ]
        )

    @classmethod
    def parse(cls, text: str) -> "RunManifest":
        fields: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"manifest line is not key=value: {raw!r}")
            if key in fields:
                raise ValueError(f"duplicate manifest key: {key}")
            fields[key] = value
        missing = [k for k in cls._KEYS if k not in fields]
        if missing:
            raise ValueError(f"manifest missing keys: {missing}")
        unknown = [k for k in fields if k not in cls._KEYS]
        if unknown:
            raise ValueError(f"manifest has unknown keys: {unknown}")
        return cls(
            seed=int(fields["seed"]),
            gamma_mode=fields["gamma_mode"],
            n=int(fields["n"]),
            j=int(fields["j"]),
            boost_variant=fields["boost_variant"],
            tool_version=fields["tool_version"],
        )


def _tool_version() -> str:
    from . import __version__

    return __version__


def manifest_for_dataset(dataset: Dataset) -> RunManifest:
    """Identity manifest from a dataset's metadata echo."""
    md = dataset.metadata
    n_values = md.get("n_values", "0")
    return RunManifest(
        seed=int(md.get("rng_seed", "0")),
        gamma_mode=md.get("gamma_mode", "deterministic"),
        n=int(n_values.split(",")[-1]),
        j=int(md.get("j", "0")),
        boost_variant=md.get("boost_variant", "none"),
        tool_version=_tool_version(),
    )


def _format_cell(v: float) -> str:
    # integers print bare; everything else as shortest round-trip repr
    if v == v and abs(v) != math.inf and float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def render_dataset(dataset: Dataset) -> str:
    """Serialize to the on-disk text form (header + whitespace rows).

    The volatile timestamp never enters the serialized form, so identical
    runs produce identical bytes.
    """
    manifest = manifest_for_dataset(dataset)
    lines = ["# rglsa dataset"]
    lines.extend(f"# {ln}" for ln in manifest.render().splitlines())
    for key in sorted(dataset.metadata):
        if key == "timestamp":
            continue
        lines.append(f"# meta {key}={dataset.metadata[key]}")
    names = list(dataset.columns)
    lines.append("# columns: " + " ".join(names))
    cols = [dataset.columns[name] for name in names]
    for row in zip(*cols):
        lines.append(" ".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_dataset(dataset: Dataset, path: str) -> None:
    """Atomically write `dataset` to `path` (temp file, then rename)."""
    text = render_dataset(dataset)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            os.unlink(tmp_path)
            raise
    except OSError as exc:
        raise DatasetIOError(f"cannot write dataset to {path}: {exc}") from exc


def read_dataset(path: str) -> Dataset:
    """Parse a dataset file back into columns + metadata.

    Raises DatasetFormatError naming the offending line on malformed
    content, DatasetIOError if the file cannot be read at all.
    """
    try:
        with open(path, "r") as handle:
            raw_lines = handle.read().splitlines()
    except OSError as exc:
        raise DatasetIOError(f"cannot read dataset from {path}: {exc}") from exc

    manifest_lines: list[str] = []
    metadata: dict[str, str] = {}
    names: list[str] | None = None
    rows: list[list[float]] = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body == "rglsa dataset":
                continue
            if body.startswith("meta "):
                key, sep, value = body[len("meta "):].partition("=")
                if not sep:
                    raise DatasetFormatError(
                        f"{path}:{lineno}: malformed meta line: {line!r}"
                    )
                metadata[key] = value
            elif body.startswith("columns:"):
                names = body[len("columns:"):].split()
                if not names:
                    raise DatasetFormatError(f"{path}:{lineno}: empty column list")
            else:
                manifest_lines.append(body)
            continue
        if names is None:
            raise DatasetFormatError(
                f"{path}:{lineno}: data row before '# columns:' header"
            )
        tokens = line.split()
        if len(tokens) != len(names):
            raise DatasetFormatError(
                f"{path}:{lineno}: expected {len(names)} fields, got {len(tokens)}"
            )
        try:
            rows.append([float(tok) for tok in tokens])
        except ValueError as exc:
            raise DatasetFormatError(f"{path}:{lineno}: {exc}") from exc

    try:
        RunManifest.parse("\n".join(manifest_lines))
    except ValueError as exc:
        raise DatasetFormatError(f"{path}: bad manifest: {exc}") from exc
    if names is None:
        raise DatasetFormatError(f"{path}: missing '# columns:' header")
    columns: dict[str, list[float]] = {name: [] for name in names}
    for row in rows:
        for name, value in zip(names, row):
            columns[name].append(value)
    return Dataset(columns=columns, metadata=metadata)


# ---------------------------------------------------------------------------
# command line


@dataclass(frozen=True)
class CliOptions:
    """Resolved command-line options."""

    mode: str
    n_values: tuple[int, ...]
    extra_vms: int | None
    gamma_mode: str
    seed: int
    out: str | None
    interactive: bool


def resolve_seed(cli_seed: int | None) -> int:
    """--seed wins; else the RGLSA_SEED env var; else the default."""
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise BadInputError(
                f"{SEED_ENV_VAR} must be an integer, got {env!r}"
            ) from None
    return DEFAULT_SEED


def _parse_n_values(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in raw.split(","))
    except ValueError:
        raise BadInputError(f"--n must be an integer or comma list, got {raw!r}") from None
    return values


def _policy_for(options: CliOptions) -> GammaPolicy:
    return GammaPolicy(mode=_GAMMA_MODES[options.gamma_mode], rng_seed=options.seed)


def run_combined_session(
    n: int, extra: int, policy: GammaPolicy, stream: IO[str]
) -> None:
    """The interactive console session: timing lines, then probabilities.

    Times the naive evaluator at every index the extended helper sequence
    touches (0..n+extra+1), then prints p_i = L_i / L_{n+extra} for
    i = 0..n+extra-1, with p_0 = p_1 = 1 by convention.
    """
    top = n + extra
    if top + 1 > NAIVE_MAX_N:
        raise BadInputError(
            f"n + extra VMs must stay <= {NAIVE_MAX_N - 1} "
            f"(the naive evaluator is exponential), got {top}"
        )
    alpha_rng = random.Random(policy.rng_seed)
    if policy.mode is GammaMode.REDRAWN_PER_INDEX:
        alphas = [1.0 / draw_gamma(policy, alpha_rng) for _ in range(top + 2)]
    else:
        alphas = [1.0 / draw_gamma(policy, alpha_rng)] * (top + 2)
    times = [naive_lucas_timed(i, alphas[i])[1] for i in range(top + 2)]
    emit_timing_lines(times, stream)

    trajectory = rglsa_lucas_trajectory(top, policy)
    probabilities = [1.0, 1.0] + [
        min(trajectory.lucas_ratio(i, top), 1.0) for i in range(2, top)
    ]
    emit_probability_lines(probabilities[:top], stream)


def _experiment_config(options: CliOptions) -> ExperimentConfig:
    kind = ExperimentKind(options.mode)
    policy = _policy_for(options)
    j = options.extra_vms or 0
    if kind is ExperimentKind.TAILBOOST and j < 1:
        raise BadInputError("--mode tailboost requires --extra-vms >= 1")
    if kind is ExperimentKind.FULLSIM and len(options.n_values) != 1:
        raise BadInputError("--mode fullsim takes a single --n")
    try:
        return ExperimentConfig(
            kind=kind, n_values=options.n_values, policy=policy, j=j
        )
    except ValueError as exc:
        raise BadInputError(str(exc)) from None


_PLOT_SNIPPETS = {
    "growth": 'plot "growth.dat" using 1:2 with linespoints title "log L_n"\n',
    "probability": 'plot "probability.dat" using 2:3 with linespoints title "p_i"\n',
    "tailboost": (
        'plot "tailboost.dat" using 2:3 with linespoints title "plain", \\\n'
        '     "tailboost.dat" using 2:4 with linespoints title "boosted"\n'
    ),
    "timing": 'plot "timing.dat" using 1:2 with linespoints title "elapsed ms"\n',
    "fullsim": 'plot "fullsim.dat" using 1:5 with steps title "infected"\n',
}


def _write_outputs(dataset: Dataset, options: CliOptions) -> None:
    out_dir = options.out
    assert out_dir is not None
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise DatasetIOError(f"cannot create output directory {out_dir}: {exc}") from exc
    data_path = os.path.join(out_dir, f"{options.mode}.dat")
    write_dataset(dataset, data_path)
    script_path = os.path.join(out_dir, f"{options.mode}.gp")
    script = (
        f"# gnuplot commands for {options.mode}.dat\n"
        'set datafile commentschars "#"\n' + _PLOT_SNIPPETS[options.mode]
    )
    try:
        with open(script_path, "w") as handle:
            handle.write(script)
    except OSError as exc:
        raise DatasetIOError(f"cannot write plot script to {script_path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rglsa",
        description=(
            "Randomized Lucas-seed toolkit: sequence growth, transmission "
            "profiles, tail boosting, timing curves, and attack simulation."
        ),
    )
    parser.add_argument("--n", help="sequence horizon; comma list for sweeps")
    parser.add_argument(
        "--extra-vms", type=int, default=None, help="dummy VMs appended to the tail"
    )
    parser.add_argument("--mode", choices=_MODES, default="combined")
    parser.add_argument(
        "--gamma-mode",
        choices=tuple(_GAMMA_MODES),
        default="redrawn",
        help="how the gamma scale factor is drawn",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"rng seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})",
    )
    parser.add_argument("--out", default=None, help="directory for dataset files")
    parser.add_argument(
        "--interactive", action="store_true", help="prompt for n and extra VMs"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)

    try:
        seed = resolve_seed(args.seed)
        if args.interactive:
            n, extra = prompt_inputs()
            n_values: tuple[int, ...] = (n,)
        else:
            if args.n is None:
                raise BadInputError("--n is required unless --interactive is given")
            n_values = _parse_n_values(args.n)
            extra = args.extra_vms
        options = CliOptions(
            mode=args.mode,
            n_values=n_values,
            extra_vms=extra,
            gamma_mode=args.gamma_mode,
            seed=seed,
            out=args.out,
            interactive=args.interactive,
        )

        if options.mode == "combined":
            if len(options.n_values) != 1:
                raise BadInputError("--mode combined takes a single --n")
            if options.extra_vms is None:
                raise BadInputError(
                    "--mode combined requires --extra-vms (or --interactive)"
                )
            if options.n_values[0] < 1 or options.extra_vms < 0:
                raise BadInputError("need n >= 1 and extra VMs >= 0")
            run_combined_session(
                options.n_values[0], options.extra_vms, _policy_for(options), sys.stdout
            )
            return 0

        dataset = run_experiment(_experiment_config(options))
        if options.mode == "probability":
            emit_probability_lines(dataset.columns["p"], sys.stdout)
        elif options.mode == "timing":
            emit_timing_lines(dataset.columns["elapsed_ms"], sys.stdout)
        elif options.out is None:
            sys.stdout.write(render_dataset(dataset))
        if options.out is not None:
            _write_outputs(dataset, options)
        return 0
    except PromptError as exc:
        print(f"rglsa: {exc}", file=sys.stderr)
        return 2
    except BadInputError as exc:
        print(f"rglsa: {exc}", file=sys.stderr)
        return 2
    except DatasetIOError as exc:
        print(f"rglsa: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
