"""Command line interface."""

from __future__ import annotations

import argparse
from collections.abc import Callable
from collections.abc import Sequence
import dataclasses
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

from qpolar.core.code import Q1Code
from qpolar.core.code import construct
from qpolar.core.code import min_distance
from qpolar.core.code import prep_bit_sequence
from qpolar.core.gf2 import polar_matrix
from qpolar.core.gf2 import polar_transform
from qpolar.core.oracle import apply_polar_encoding
from qpolar.core.oracle import fidelity
from qpolar.core.oracle import shor_logical_state
from qpolar.core.oracle import simulate_measurement_prep
from qpolar.core.prep import NoiseModel
from qpolar.core.prep import estimate_prep_rate
from qpolar.core.prep import prepare_batch
from qpolar.core.prep import prepare_noisy
from qpolar.core.reliability import DePopulation
from qpolar.core.reliability import ReliabilityProfile
from qpolar.core.reliability import q1_position_ler
from qpolar.core.reliability import reliability_profile
from qpolar.core.steane import ec_trials
from qpolar.core.steane import estimate_ler_de
from qpolar.core.steane import estimate_ler_mc
from qpolar.core.steane import pseudothreshold
from qpolar.core.tables import FORMATS
from qpolar.core.tables import format_table
from qpolar.core.tables import write_table
from qpolar.core.utils import CHANNELS
from qpolar.core.utils import FAMILIES
from qpolar.core.utils import MODES
from qpolar.core.utils import ResourceBoundError
from qpolar.core.utils import check_option
from qpolar.core.utils import log2_length


logger = logging.getLogger(__name__)

COMMANDS = ["construct", "prep-rate", "ler", "selftest"]
r"""Subcommands of the ``qpolar`` tool."""

ESTIMATORS = ["mc", "de", "both"]
r"""Logical error rate estimators of the ``ler`` command."""

RUNTIME_FIELDS = ["out", "format", "threads", "progress"]
r"""Config fields that do not change results.

They are not echoed into output files,
so results are identical across thread counts.

"""

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_SELFTEST = 3


@dataclasses.dataclass
class ExperimentConfig:
    r"""Parameters of a command.

    Values are merged from the defaults,
    a JSON config file,
    and command line flags,
    in that order.
    Every output file echoes the config
    without :data:`RUNTIME_FIELDS`,
    which is enough to reproduce it.

    Args:
        command: see :data:`COMMANDS`
        n: recursion depths
        i: information position,
            if ``None`` the code is constructed
        family: code family, see :data:`qpolar.core.utils.FAMILIES`,
            ``construct`` evaluates both families if ``None``
        channel: construction channel,
            see :data:`qpolar.core.utils.CHANNELS`
        mode: construction mode, see :data:`qpolar.core.utils.MODES`
        construct_p: error or erasure probability
            used to construct codes for ``prep-rate`` and ``ler``
        p_grid: physical error probabilities
        seed: master seed
        trials: preparation attempts of ``prep-rate``
            or maximum trials per side of ``ler``
        failures: failure target of Monte-Carlo estimates
        runs: preparation attempts of density evolution estimates,
            default ``ceil(100 / p)``
        de_pop: population size of population density evolution
        de_method: density evolution method,
            see :data:`qpolar.core.reliability.METHODS`
        estimator: see :data:`ESTIMATORS`
        targets: preparation targets of ``prep-rate``
        corrupt_transform: replace the polar transform
            by a broken one in ``selftest``
        out: output file
        format: output format, see :data:`qpolar.core.tables.FORMATS`,
            inferred from the extension of ``out`` if ``None``
        threads: number of parallel jobs
        progress: show progress bars

    """

    command: str
    n: list[int] = dataclasses.field(default_factory=lambda: [4])
    i: int | None = None
    family: str | None = None
    channel: str = "depolarizing"
    mode: str = "ignore-corr"
    construct_p: float = 1e-3
    p_grid: list[float] = dataclasses.field(default_factory=lambda: [1e-3])
    seed: int = 1
    trials: int | None = None
    failures: int = 100
    runs: int | None = None
    de_pop: int = 10**6
    de_method: str = "lattice"
    estimator: str = "both"
    targets: list[str] = dataclasses.field(default_factory=lambda: ["zero", "plus"])
    corrupt_transform: bool = False
    out: str | None = None
    format: str | None = None
    threads: int = dataclasses.field(default_factory=lambda: os.cpu_count() or 1)
    progress: bool = False

    def __post_init__(self):
        check_option("command", self.command, COMMANDS)
        self.n = parse_depths(self.n)
        self.p_grid = parse_grid(self.p_grid)
        if self.family is not None:
            check_option("family", self.family, FAMILIES)
        check_option("channel", self.channel, CHANNELS)
        check_option("mode", self.mode, MODES)
        check_option("estimator", self.estimator, ESTIMATORS)
        if self.format is not None:
            check_option("format", self.format, FORMATS)
        if self.failures < 1:
            raise ValueError(f"'failures' has to be at least 1, not {self.failures}.")

    def echo(self) -> dict:
        r"""Config entries that determine the results."""
        entries = dataclasses.asdict(self)
        for field in RUNTIME_FIELDS:
            entries.pop(field)
        return entries

    @classmethod
    def from_dict(cls, entries: dict) -> ExperimentConfig:
        r"""Create config from dictionary.

        Keys may use dashes instead of underscores.

        Raises:
            ValueError: if a key is unknown

        """
        fields = {f.name for f in dataclasses.fields(cls)}
        entries = {key.replace("-", "_"): value for key, value in entries.items()}
        unknown = sorted(set(entries) - fields)
        if unknown:
            raise ValueError(f"Unknown config entries: {unknown}.")
        return cls(**entries)


def cmd_construct(config: ExperimentConfig) -> pd.DataFrame:
    r"""Best information positions.

    For every depth and error probability of the grid
    the Q1 and Shor-Q1 codes with the lowest
    logical error probability are constructed.

    Args:
        config: experiment config

    Returns:
        table with columns
        ``n``, ``N``, ``channel``, ``mode``, ``p``,
        ``family``, ``i``, ``min_distance``, ``p_e_l``

    Raises:
        ValueError: if the config is invalid

    """
    families = FAMILIES if config.family is None else [config.family]
    mode = config.mode if config.channel == "depolarizing" else ""
    rows = []
    for n in config.n:
        for p in config.p_grid:
            profile = _profile(config, n, p)
            for family in families:
                code = construct(
                    n,
                    profile,
                    family,
                    channel=config.channel,
                    p=p,
                    mode=config.mode,
                )
                rows.append(
                    {
                        "n": n,
                        "N": code.length,
                        "channel": config.channel,
                        "mode": mode,
                        "p": p,
                        "family": family,
                        "i": code.i,
                        "min_distance": min_distance(code),
                        "p_e_l": q1_position_ler(profile, code.i),
                    }
                )
            logger.info("Constructed codes for n=%d, p=%g", n, p)
    columns = [
        "n",
        "N",
        "channel",
        "mode",
        "p",
        "family",
        "i",
        "min_distance",
        "p_e_l",
    ]
    return pd.DataFrame(rows, columns=columns)


def cmd_ler(config: ExperimentConfig) -> pd.DataFrame:
    r"""Logical error rates of Steane error correction.

    Runs the Monte-Carlo and/or density evolution estimators
    over the error probabilities of the grid.
    The ``pseudothreshold`` column holds the crossing point
    of every (code, method) series with the diagonal,
    or is empty if the series does not cross.

    Args:
        config: experiment config

    Returns:
        table with columns
        ``n``, ``N``, ``i``, ``p``, ``method``,
        ``p_x_l``, ``p_z_l``, ``p_e_l``,
        ``trials_x``, ``trials_z``, ``failures_x``, ``failures_z``,
        ``censored``, ``pseudothreshold``

    Raises:
        ValueError: if the config is invalid

    """
    methods = ["mc", "de"] if config.estimator == "both" else [config.estimator]
    rows = []
    for code in _codes(config):
        for method in methods:
            series = []
            for p in config.p_grid:
                noise = NoiseModel(p)
                if method == "mc":
                    estimate = estimate_ler_mc(
                        code,
                        noise,
                        config.failures,
                        config.trials or 10**6,
                        config.seed,
                        num_workers=config.threads,
                    )
                else:
                    estimate = estimate_ler_de(
                        code,
                        noise,
                        config.runs,
                        config.seed,
                        num_workers=config.threads,
                    )
                series.append(
                    {
                        "n": code.n,
                        "N": code.length,
                        "i": code.i,
                        "p": p,
                        "method": method,
                        "p_x_l": estimate.p_x_l,
                        "p_z_l": estimate.p_z_l,
                        "p_e_l": estimate.p_e_l,
                        "trials_x": estimate.trials_x,
                        "trials_z": estimate.trials_z,
                        "failures_x": estimate.failures_x,
                        "failures_z": estimate.failures_z,
                        "censored": estimate.censored,
                    }
                )
            crossing = pseudothreshold(
                [row["p"] for row in series],
                [row["p_e_l"] for row in series],
            )
            for row in series:
                row["pseudothreshold"] = crossing
            rows.extend(series)
    columns = [
        "n",
        "N",
        "i",
        "p",
        "method",
        "p_x_l",
        "p_z_l",
        "p_e_l",
        "trials_x",
        "trials_z",
        "failures_x",
        "failures_z",
        "censored",
        "pseudothreshold",
    ]
    return pd.DataFrame(rows, columns=columns)


def cmd_prep_rate(config: ExperimentConfig) -> pd.DataFrame:
    r"""Preparation rates.

    Args:
        config: experiment config

    Returns:
        table with columns
        ``n``, ``N``, ``i``, ``target``, ``p``,
        ``p_prep``, ``ci_low``, ``ci_high``,
        ``accepted``, ``attempts``,
        ``mean_weight_x``, ``mean_weight_z``

    Raises:
        ValueError: if the config is invalid

    """
    rows = []
    for code in _codes(config):
        for target in config.targets:
            for p in config.p_grid:
                rate = estimate_prep_rate(
                    code,
                    target,
                    NoiseModel(p),
                    config.trials or 10**5,
                    config.seed,
                    num_workers=config.threads,
                    verbose=config.progress,
                )
                rows.append(
                    {
                        "n": code.n,
                        "N": code.length,
                        "i": code.i,
                        "target": target,
                        "p": p,
                        **dataclasses.asdict(rate),
                    }
                )
    columns = [
        "n",
        "N",
        "i",
        "target",
        "p",
        "p_prep",
        "ci_low",
        "ci_high",
        "accepted",
        "attempts",
        "mean_weight_x",
        "mean_weight_z",
    ]
    return pd.DataFrame(rows, columns=columns)


def cmd_selftest(config: ExperimentConfig) -> pd.DataFrame:
    r"""Run the invariant checks.

    Checks the polar transform,
    noiseless preparation against the statevector oracle,
    the Shor product form,
    the weight bound of noisy frames,
    zero-noise preparation and error correction,
    and determinism of written tables.

    Args:
        config: experiment config,
            ``corrupt_transform`` swaps in a broken transform

    Returns:
        table with columns ``check``, ``passed``, ``message``

    """
    if config.corrupt_transform:
        transform = _corrupt_transform
    else:
        transform = polar_transform
    checks = [
        ("involution", lambda: _check_involution(transform, config.seed)),
        ("oracle-equivalence", lambda: _check_oracle(config.seed)),
        ("shor-product-form", _check_shor),
        ("weight-bound", lambda: _check_weight_bound(config.seed)),
        ("zero-noise", lambda: _check_zero_noise(config.seed)),
        ("determinism", lambda: _check_determinism(config.seed)),
    ]
    rows = []
    for name, check in checks:
        try:
            check()
            rows.append({"check": name, "passed": True, "message": ""})
        except AssertionError as ex:
            rows.append({"check": name, "passed": False, "message": str(ex)})
        except Exception as ex:
            # Crashing checks fail without stopping the remaining ones
            message = f"{type(ex).__name__}: {ex}"
            rows.append({"check": name, "passed": False, "message": message})
        logger.info("Check %s: %s", name, "pass" if rows[-1]["passed"] else "FAIL")
    return pd.DataFrame(rows, columns=["check", "passed", "message"])


def load_config(
    command: str,
    path: str = None,
    overrides: dict = None,
) -> ExperimentConfig:
    r"""Merge defaults, config file and flags.

    Args:
        command: see :data:`COMMANDS`
        path: JSON config file,
            its keys mirror the command line flags
        overrides: values given on the command line,
            ``None`` values are ignored

    Returns:
        config

    Raises:
        ValueError: if the config is invalid

    """
    entries = {}
    if path is not None:
        with open(path) as fp:
            entries.update(json.load(fp))
    entries.pop("command", None)
    for key, value in (overrides or {}).items():
        if value is not None:
            entries[key.replace("-", "_")] = value
    return ExperimentConfig.from_dict({"command": command, **entries})


def main(argv: Sequence[str] = None) -> int:
    r"""Entry point of the ``qpolar`` tool.

    Args:
        argv: command line arguments

    Returns:
        exit code,
        0 on success,
        1 on usage errors,
        2 if a resource bound is exceeded,
        3 if a self-test check failed

    """
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return EXIT_SUCCESS if ex.code == 0 else EXIT_USAGE
    _setup_logging(args.verbose, args.quiet)
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ["command", "config", "verbose", "quiet", "length"]
    }
    try:
        if args.length is not None:
            overrides["n"] = [log2_length(length) for length in args.length]
        config = load_config(args.command, args.config, overrides)
        table = COMMAND_FUNCTIONS[config.command](config)
    except ResourceBoundError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    if config.out is None:
        format = config.format or "csv"
        print(format_table(table, config.echo(), format=format), end="")
    else:
        path = write_table(table, config.out, config.echo(), format=config.format)
        logger.info("Wrote %d rows to %s", len(table), path)
    if config.command == "selftest" and not table["passed"].all():
        return EXIT_SELFTEST
    return EXIT_SUCCESS


def parse_depths(value: str | int | Sequence[int]) -> list[int]:
    r"""Parse recursion depths.

    Accepts ``"a:b"`` for the range from ``a`` to ``b``,
    comma separated values,
    a single value,
    or a list.
    The empty string gives no depths.

    Raises:
        ValueError: if a value is not a non-negative integer

    Examples:
        >>> parse_depths("3:6")
        [3, 4, 5, 6]
        >>> parse_depths("4,6")
        [4, 6]

    """
    if isinstance(value, str):
        value = value.strip()
        if not value:
            return []
        if ":" in value:
            start, stop = (int(v) for v in value.split(":"))
            value = list(range(start, stop + 1))
        else:
            value = [int(v) for v in value.split(",")]
    elif isinstance(value, (int, np.integer)):
        value = [value]
    depths = [int(v) for v in value]
    if any(n < 0 for n in depths):
        raise ValueError(f"Depths have to be non-negative, not {depths}.")
    return depths


def parse_grid(value: str | float | Sequence[float]) -> list[float]:
    r"""Parse a grid of probabilities.

    Accepts ``"a:b:steps"`` for ``steps`` log-spaced values
    from ``a`` to ``b``,
    comma separated values,
    a single value,
    or a list.
    The empty string gives an empty grid.

    Raises:
        ValueError: if a value is not a probability
            or a log-spaced grid does not start above 0

    Examples:
        >>> parse_grid("1e-3:1e-1:3")
        [0.001, 0.01, 0.1]
        >>> parse_grid("0,0.01")
        [0.0, 0.01]

    """
    if isinstance(value, str):
        value = value.strip()
        if not value:
            return []
        if ":" in value:
            parts = value.split(":")
            if len(parts) != 3:
                raise ValueError(f"Grid has to be 'a:b:steps', not '{value}'.")
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if start <= 0 or stop <= 0:
                raise ValueError("Log-spaced grids have to start above 0.")
            grid = np.logspace(np.log10(start), np.log10(stop), steps)
            value = [float(f"{p:.6g}") for p in grid]
        else:
            value = [float(v) for v in value.split(",")]
    elif isinstance(value, (int, float)):
        value = [value]
    grid = [float(v) for v in value]
    if any(not 0 <= p <= 1 for p in grid):
        raise ValueError(f"Probabilities have to be in [0, 1], not {grid}.")
    return grid


def _check_determinism(seed: int):
    config = ExperimentConfig("prep-rate", n=[2], i=2, p_grid=[0.05], trials=200)
    config.seed = seed
    first = format_table(cmd_prep_rate(config), config.echo())
    config.threads = 2
    second = format_table(cmd_prep_rate(config), config.echo())
    assert first == second, "Tables of equal seeds differ"


def _check_involution(transform: Callable[[np.ndarray], np.ndarray], seed: int):
    rng = np.random.default_rng(seed)
    for n in range(13):
        v = rng.integers(0, 2, (16, 2**n), dtype=np.uint8)
        assert np.array_equal(transform(transform(v)), v), (
            f"Transform is not an involution for N={2**n}"
        )
        if n <= 6:
            dense = (v.astype(int) @ polar_matrix(n).T.astype(int)) % 2
            assert np.array_equal(transform(v), dense), (
                f"Transform differs from dense matrix for N={2**n}"
            )


def _check_oracle(seed: int):
    rng = np.random.default_rng(seed)
    for n in [1, 2, 3]:
        for i in range(1, 2**n + 1):
            code = Q1Code(n, i)
            bits = prep_bit_sequence(code, "generic")
            for _ in range(3):
                state, outcomes = simulate_measurement_prep(n, bits, rng)
                outcome = prepare_noisy(
                    code,
                    "generic",
                    NoiseModel(0.0),
                    rng,
                    outcomes=outcomes,
                    skip_levels=False,
                )
                expected = apply_polar_encoding(n, outcome.u, outcome.v)
                assert fidelity(state, expected) >= 1 - 1e-9, (
                    f"Oracle state differs for N={2**n}, i={i}"
                )


def _check_shor():
    for n, k in [(2, 1), (3, 1), (3, 2)]:
        i = 2**k
        for value in [0, 1]:
            u = np.zeros(i, dtype=np.uint8)
            u[-1] = value
            encoded = apply_polar_encoding(n, u, np.zeros(2**n - i, dtype=np.uint8))
            product = shor_logical_state(n, k, value)
            assert fidelity(encoded, product) >= 1 - 1e-9, (
                f"Shor product form fails for n={n}, k={k}"
            )


def _check_weight_bound(seed: int):
    rng = np.random.default_rng(seed)
    for n, i in [(4, 7), (4, 8), (3, 3)]:
        for target in ["zero", "plus"]:
            prepare_batch(
                Q1Code(n, i),
                target,
                NoiseModel(1e-2),
                500,
                rng,
                check_bound=True,
            )


def _check_zero_noise(seed: int):
    code = Q1Code(4, 7)
    for target in ["zero", "plus"]:
        rate = estimate_prep_rate(code, target, NoiseModel(0.0), 100, seed)
        assert rate.p_prep == 1, f"Noiseless {target} preparation was rejected"
    for basis in ["x", "z"]:
        trials = ec_trials(code, NoiseModel(0.0), 100, seed, basis)
        assert not trials.logical_error.any(), (
            f"Noiseless {basis} error correction failed"
        )


def _codes(config: ExperimentConfig) -> list[Q1Code]:
    r"""Codes given by ``i`` or constructed for ``construct_p``."""
    codes = []
    for n in config.n:
        if config.i is not None:
            codes.append(Q1Code(n, config.i))
            continue
        profile = _profile(config, n, config.construct_p)
        codes.append(
            construct(
                n,
                profile,
                config.family or "q1",
                channel=config.channel,
                p=config.construct_p,
                mode=config.mode,
            )
        )
    return codes


def _corrupt_transform(v: np.ndarray) -> np.ndarray:
    return np.roll(polar_transform(v), 1, axis=-1)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpolar",
        description="Q1 quantum polar code experiments.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for command, description in [
        ("construct", "best information positions"),
        ("prep-rate", "preparation rates"),
        ("ler", "logical error rates of Steane error correction"),
        ("selftest", "invariant checks"),
    ]:
        sub = commands.add_parser(command, help=description)
        sub.add_argument("--config", help="JSON config file")
        depth = sub.add_mutually_exclusive_group()
        depth.add_argument("--n", help="recursion depths, e.g. 3:12 or 4,6")
        depth.add_argument(
            "--N",
            dest="length",
            type=lambda v: [int(x) for x in v.split(",")],
            help="code lengths, e.g. 16,64",
        )
        code = sub.add_mutually_exclusive_group()
        code.add_argument("--i", type=int, help="information position")
        code.add_argument("--family", choices=FAMILIES, help="code family")
        sub.add_argument("--channel", choices=CHANNELS)
        sub.add_argument("--mode", choices=MODES)
        sub.add_argument("--construct-p", type=float)
        sub.add_argument("--p-grid", help="a:b:steps (log) or comma list")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--trials", type=int)
        sub.add_argument("--failures", type=int)
        sub.add_argument("--runs", type=int)
        sub.add_argument("--de-pop", type=int)
        sub.add_argument("--de-method", choices=["lattice", "population"])
        sub.add_argument("--estimator", choices=ESTIMATORS)
        sub.add_argument(
            "--targets",
            type=lambda v: v.split(","),
            help="comma list of preparation targets",
        )
        sub.add_argument(
            "--corrupt-transform",
            action="store_const",
            const=True,
            help=argparse.SUPPRESS,
        )
        sub.add_argument("--out", help="output file")
        sub.add_argument("--format", choices=FORMATS)
        sub.add_argument("--threads", type=int)
        sub.add_argument("--progress", action="store_const", const=True)
        sub.add_argument("-v", "--verbose", action="count", default=0)
        sub.add_argument("-q", "--quiet", action="store_true")
    return parser


def _profile(config: ExperimentConfig, n: int, p: float) -> ReliabilityProfile:
    return reliability_profile(
        n,
        config.channel,
        p,
        mode=config.mode,
        method=config.de_method,
        population=DePopulation(config.de_pop, config.seed),
        num_workers=config.threads,
    )


def _setup_logging(verbose: int, quiet: bool):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


COMMAND_FUNCTIONS = {
    "construct": cmd_construct,
    "prep-rate": cmd_prep_rate,
    "ler": cmd_ler,
    "selftest": cmd_selftest,
}
