"""Batch command-line front end.

Subcommands emit one row per grid point as CSV (17 significant digits) or JSON.
Exit codes: 0 success, 1 usage or row error, 2 bound violation, 3 resource guard.
Flags can also come from a ``--params`` JSON file or ``QSAMPLE_*`` variables.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import acceptance, bounds, info, learners
from .codes import GeneratorMatrix, find_good_code
from .ensembles import (
    AgnosticEnsembleParams,
    CodewordEnsembleParams,
    NoisyPacEnsembleParams,
    PacEnsembleParams,
    ensemble_states,
    gram_profile,
    uniform_probabilities,
)
from .errors import InvalidArgumentError, ResourceError
from .fourier import fourier_coefficients, hardness_profile, popcount
from .pgm import pgm_success_generic, pgm_success_xor

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_RESOURCE = 0, 1, 2, 3
DENSE_MAX_K = 8
ENV_PREFIX = "QSAMPLE_"


class UsageError(Exception):
    pass


def parse_range(text: str | int | float | Sequence, kind: Callable = float) -> list:
    """``"a:b:s"`` (inclusive stop), ``"a:b"`` (step 1), ``"x,y,z"`` or a single value."""
    if isinstance(text, (list, tuple)):
        values = [kind(v) for v in text]
    elif isinstance(text, (int, float)):
        values = [kind(text)]
    elif ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"bad range {text!r}; expected start:stop[:step]")
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise UsageError(f"range step must be positive in {text!r}")
        count = math.floor((stop - start) / step + 1e-9) + 1
        values = [kind(round(start + i * step, 12)) for i in range(max(count, 0))]
    else:
        values = [kind(v) for v in text.split(",") if v.strip()]
    if not values:
        raise UsageError(f"range {text!r} is empty")
    return values


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    columns: list[str] = []
    for row in rows:
        columns += [c for c in row if c not in columns]
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _task(base: dict, compute: Callable[[], dict]) -> Callable[[], dict]:
    """A row that keeps its parameters and records an error instead of raising."""

    def run() -> dict:
        try:
            return {**base, **compute()}
        except InvalidArgumentError as exc:
            return {**base, "error": str(exc)}

    return run


def _run_rows(tasks: list[Callable[[], dict]], jobs: int) -> list[dict]:
    if jobs <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: t(), tasks))


# subcommands


def _load_code(args, n: int, k: int | None) -> GeneratorMatrix:
    if args.code:
        with open(args.code) as fh:
            code = GeneratorMatrix.from_json(fh.read())
        if code.n != n:
            raise InvalidArgumentError(f"code file has n={code.n}, expected {n}")
        return code
    if k is None or (16 <= n <= 96 and k == math.ceil(n / 4)):
        return find_good_code(n, args.seed)[0]
    return acceptance.random_full_rank(np.random.default_rng(args.seed), n, k)


def _pgm_params(kind: str, d: int, eps: float, T: int, eta: float, code: GeneratorMatrix):
    if kind == "pac":
        return PacEnsembleParams(d, eps, T, code)
    if kind == "agnostic":
        return AgnosticEnsembleParams(d, eps, T, code)
    if kind == "noisy":
        return NoisyPacEnsembleParams(d, eps, T, code, eta)
    return CodewordEnsembleParams(code, T)


def _pgm_bound(kind: str, d: int, k: int, T: int, eps: float, eta: float) -> tuple[float, bool]:
    """Bound value and whether ``T`` lies in the range where it is proven."""
    if kind == "pac":
        return bounds.pgm_pac_bound(d, k, T, eps, strict=False), T <= d / (20 * math.e**3 * eps)
    if kind == "agnostic":
        return bounds.pgm_agnostic_bound(d, k, T, eps, strict=False), T <= d / (100 * math.e**3 * eps**2)
    if kind == "noisy":
        beta = bounds.noisy_beta(eps, eta)
        return bounds.pgm_noisy_bound(d, k, T, eps, eta, strict=False), T <= d / (math.e**3 * beta)
    return bounds.codeword_bound(d, k, T, strict=False), T <= d


def cmd_pgm(args) -> list[Callable[[], dict]]:
    d = args.d
    code = _load_code(args, d, args.k)
    k = code.k
    eps_values = [None] if args.kind == "codeword" else parse_range(args.epsilon, float)
    tasks = []
    for eps in eps_values:
        for T in parse_range(args.T, int):

            def row(eps=eps, T=T) -> dict:
                params = _pgm_params(args.kind, d, eps, T, args.eta, code)
                exact = pgm_success_xor(gram_profile(params)).success_probability
                dense = None
                if k <= DENSE_MAX_K:
                    N = 1 << k
                    dense = pgm_success_generic(ensemble_states(params), uniform_probabilities(N), T).success_probability
                bound, in_range = _pgm_bound(args.kind, d, k, T, eps, args.eta)
                return {
                    "exact_fourier": exact,
                    "exact_dense": dense,
                    "bound": bound,
                    "in_range": in_range,
                    "satisfied": bounds.report(bound, exact).satisfied,
                }

            eta = args.eta if args.kind == "noisy" else None
            tasks.append(_task({"kind": args.kind, "d": d, "k": k, "t": T, "epsilon": eps, "eta": eta}, row))
    return tasks


def cmd_info(args) -> list[Callable[[], dict]]:
    tasks = []
    for d in parse_range(args.d, int):
        for eps in parse_range(args.epsilon, float):

            def row(d=d, eps=eps) -> dict:
                density = (
                    info.reduced_pac_example_density if args.setting == "pac" else info.reduced_agnostic_example_density
                )(d, eps)
                S = info.von_neumann_entropy(density)
                bound = info.quantum_per_example_info_bound(args.setting, d, eps, strict=False)
                return {
                    "classical": info.classical_per_example_info(args.setting, eps),
                    "quantum_entropy": S,
                    "quantum_bound": bound,
                    "satisfied": bounds.report(bound, S).satisfied,
                }

            tasks.append(_task({"setting": args.setting, "d": d, "epsilon": eps}, row))
    return tasks


def cmd_fourier(args) -> list[Callable[[], dict]]:
    beta, m, T = args.beta, args.m, args.T
    coeffs = fourier_coefficients(hardness_profile(beta, m, T)).coefficients
    weights = popcount(np.arange(1 << m, dtype=np.uint64))
    in_range = 1 <= T <= bounds.fourier_t_max(m, beta)
    tasks = []
    for q in parse_range(args.q, int):

        def row(q=q) -> dict:
            if not 0 <= q <= m:
                raise InvalidArgumentError(f"q must lie in [0, {m}], got {q}")
            top = float(coeffs[weights == q].max())
            bound = bounds.fourier_coeff_bound(q, m, T, beta, strict=False)
            return {
                "max_coefficient": top,
                "bound": bound,
                "in_range": in_range,
                "satisfied": bounds.report(bound, top).satisfied,
            }

        tasks.append(_task({"beta": beta, "m": m, "t": T, "q": q}, row))
    return tasks


def cmd_learn(args) -> list[Callable[[], dict]]:
    exp = args.experiment
    if exp == "bv":
        return [_task({"experiment": "bv"}, lambda: learners.bv_trials(args.n, args.trials, args.seed).to_dict())]
    if exp == "erm":
        d = parse_range(args.d, int)[0]
        eps = parse_range(args.epsilon, float)[0]
        tasks = []
        for T in parse_range(args.T, int):

            def row(T=T) -> dict:
                return {"success_rate": learners.erm_success_rate(args.setting, d, eps, T, args.trials, args.seed)}

            base = {"experiment": "erm", "setting": args.setting, "d": d, "epsilon": eps, "t": T}
            tasks.append(_task({**base, "trials": args.trials, "seed": args.seed}, row))
        return tasks
    if exp == "sample-complexity":
        tasks = []
        for d in parse_range(args.d, int):
            for eps in parse_range(args.epsilon, float):

                def row(d=d, eps=eps) -> dict:
                    T = learners.empirical_sample_complexity(args.setting, d, eps, args.delta, args.trials, args.seed)
                    return {"t_star": T, "reference": bounds.sample_bounds(args.setting, d, eps, args.delta)}

                base = {"experiment": "sample-complexity", "setting": args.setting, "d": d, "epsilon": eps}
                tasks.append(_task({**base, "delta": args.delta, "trials": args.trials, "seed": args.seed}, row))
        return tasks

    d = parse_range(args.d, int)[0]
    eps = parse_range(args.epsilon, float)[0]
    T = parse_range(args.T, int)[0]
    code = _load_code(args, d, args.k)
    params = _pgm_params(args.kind, d, eps, T, args.eta, code)

    def pgm_row() -> dict:
        return learners.pgm_identification_experiment(params, args.trials, args.seed).to_dict()

    return [_task({"experiment": "pgm", "epsilon": None if args.kind == "codeword" else eps}, pgm_row)]


def cmd_code(args) -> str:
    M, spec = find_good_code(args.n, args.seed, budget=args.budget)
    out = M.to_dict()
    out.update(min_distance=spec.min_distance, seed=args.seed)
    return json.dumps(out, indent=2) + "\n"


def cmd_verify(args) -> tuple[str, bool]:
    numbers = sorted(acceptance.CRITERIA)
    if args.skip_determinism:
        numbers.remove(14)
    if args.only:
        numbers = parse_range(args.only, int)
    results = acceptance.run_criteria(args.seed, numbers)
    lines = [acceptance.format_result(r) for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"summary: {passed}/{len(results)} criteria passed (seed {args.seed})")
    return "\n".join(lines) + "\n", passed == len(results)


# argument handling


def _env(name: str, default):
    value = os.environ.get(ENV_PREFIX + name)
    if value is None:
        return default
    return type(default)(value) if default is not None else value


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; here 2 means a bound violation."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit RNG seed (env QSAMPLE_SEED)")
    common.add_argument("--out", default=None, help="output path, '-' for stdout (env QSAMPLE_OUT)")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="env QSAMPLE_FORMAT")
    common.add_argument("--params", default=None, help="JSON file with option values")
    common.add_argument("--jobs", type=int, default=None, help="worker threads for sweeps (env QSAMPLE_JOBS)")

    parser = _Parser(prog="qsample", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pgm", parents=[common], help="exact PGM success vs analytic bound")
    p.add_argument("--kind", choices=("pac", "agnostic", "noisy", "codeword"), default=None)
    p.add_argument("--d", type=int, default=None, help="number of points, or code length n")
    p.add_argument("--k", type=int, default=None, help="code dimension (default ceil(d/4))")
    p.add_argument("--epsilon", default=None, help="value or range")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--T", default=None, help="value or range, e.g. 1:50")
    p.add_argument("--code", default=None, help="generator matrix JSON file")

    p = sub.add_parser("info", parents=[common], help="per-example information quantities")
    p.add_argument("--setting", choices=info.SETTINGS, default=None)
    p.add_argument("--d", default=None, help="value or range")
    p.add_argument("--epsilon", default=None, help="value or range")

    p = sub.add_parser("code", parents=[common], help="random search for a good linear code")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("learn", parents=[common], help="learner experiments")
    p.add_argument("experiment", choices=("bv", "erm", "sample-complexity", "pgm"))
    p.add_argument("--n", type=int, default=None, help="BV input length")
    p.add_argument("--setting", choices=learners.ERM_SETTINGS, default=None)
    p.add_argument("--kind", choices=("pac", "agnostic", "noisy", "codeword"), default=None)
    p.add_argument("--d", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--epsilon", default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--T", default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--code", default=None)

    p = sub.add_parser("fourier", parents=[common], help="hardness-profile coefficients vs bound")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--q", default=None, help="value or range (default 0:m)")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", default=None, help="criterion numbers, e.g. 1,3,5")
    p.add_argument("--skip-determinism", action="store_true", help="leave out the rerun-and-compare criterion")
    return parser


DEFAULTS = {
    "kind": "pac",
    "d": 16,
    "epsilon": "0.04",
    "eta": 0.0,
    "T": "1:50",
    "setting": "pac",
    "n": 32,
    "budget": 10_000,
    "beta": 1.0,
    "m": 12,
    "trials": 1000,
    "delta": 0.1,
}


COMMAND_DEFAULTS = {
    "learn": {"n": 8, "T": "20", "d": "8", "epsilon": "0.1"},
    "fourier": {"T": 1},
    "info": {"d": "8", "epsilon": "0.05"},
}


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from ``--params``, then ``QSAMPLE_*``, then built-in defaults."""
    if args.params:
        try:
            with open(args.params) as fh:
                extra = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read params file: {exc}") from None
        if not isinstance(extra, dict):
            raise UsageError("params file must hold a JSON object")
        for key, value in extra.items():
            key = key.replace("-", "_")
            if not hasattr(args, key):
                raise UsageError(f"unknown option {key!r} in params file")
            if getattr(args, key) is None:
                setattr(args, key, value)
    args.seed = args.seed if args.seed is not None else _env("SEED", acceptance.DEFAULT_SEED)
    args.format = args.format or _env("FORMAT", "csv")
    args.jobs = args.jobs if args.jobs is not None else _env("JOBS", 1)
    args.out = args.out or _env("OUT", "-")
    if args.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {args.format!r}")
    if not 0 <= args.seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    for key, value in COMMAND_DEFAULTS.get(args.command, {}).items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    if args.command == "fourier" and args.q is None:
        args.q = f"0:{args.m}"
    return args


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = resolve(args)
        if args.command == "code":
            _write(cmd_code(args), args.out)
            return EXIT_OK
        if args.command == "verify":
            text, ok = cmd_verify(args)
            _write(text, args.out)
            return EXIT_OK if ok else EXIT_VIOLATION
        builder = {"pgm": cmd_pgm, "info": cmd_info, "fourier": cmd_fourier, "learn": cmd_learn}[args.command]
        rows = _run_rows(builder(args), args.jobs)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"qsample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"qsample: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _write(render(rows, args.format), args.out)
    if any("error" in r for r in rows):
        return EXIT_USAGE
    if any(r.get("satisfied") is False for r in rows):
        return EXIT_VIOLATION
    return EXIT_OK
