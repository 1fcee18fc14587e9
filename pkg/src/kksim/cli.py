"""Command-line surface: codebook tools, simulation runs, sweeps, oracles.

Option precedence is command line > config file > preset > built-in
defaults.  Config files hold ``key = value`` lines with ``#`` comments and
the same names as the long options.  Exit code 0 on success, 2 on a
contract violation (one-line diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

from .bitlinalg import BitMatrix
from .experiment import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ExperimentSpec,
    PRESETS,
    emit_csv,
    run_experiment,
)
from .kkcode import (
    generate_codebook,
    load_reference_codeword,
    params_containing,
    standard_params,
    verify_fixture,
)
from .oracles import OracleResult, routing_failure_exact, singular_probability
from .receivers import SCHEMES

_CONFIG_KEYS = {
    "schemes", "p", "errors", "trials", "seed", "m", "message", "workers",
    "preset", "var", "values", "out", "plot", "plot_metric",
}


def _load_config(path: str) -> dict[str, str]:
    config: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in _CONFIG_KEYS:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                config[key] = value
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    return config


def _parse_schemes(text: str) -> tuple[str, ...]:
    schemes = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = set(schemes) - set(SCHEMES)
    if unknown:
        raise ValueError(f"unknown schemes: {sorted(unknown)}")
    return schemes


def _pick(args: argparse.Namespace, config: dict[str, str], name: str, cast):
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    if name in config:
        return cast(config[name])
    return None


def _build_spec(args: argparse.Namespace, config: dict[str, str]) -> ExperimentSpec:
    preset_name = _pick(args, config, "preset", str)
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise ValueError(f"unknown preset {preset_name!r}")
        spec = PRESETS[preset_name]()
    else:
        spec = ExperimentSpec()

    var = _pick(args, config, "var", str)
    values_text = _pick(args, config, "values", str)
    if preset_name is None and getattr(args, "command", "") == "sweep":
        if var is None or values_text is None:
            raise ValueError("sweep needs either --preset or both --var and --values")
    if var is not None:
        spec = replace(spec, sweep_var=var)
    if values_text is not None:
        if isinstance(values_text, str):
            parts = [v.strip() for v in values_text.split(",") if v.strip()]
        else:
            parts = list(values_text)
        if spec.sweep_var == "errors":
            values = tuple(int(v) for v in parts)
        else:
            values = tuple(float(v) for v in parts)
        spec = replace(spec, sweep_values=values)

    overrides = {}
    schemes = _pick(args, config, "schemes", _parse_schemes)
    if schemes is not None:
        overrides["schemes"] = _parse_schemes(schemes) if isinstance(schemes, str) else schemes
    for name, field, cast in (
        ("p", "p", float),
        ("errors", "t_errors", int),
        ("trials", "trials", int),
        ("seed", "master_seed", int),
        ("m", "m_channels", int),
        ("message", "message", int),
        ("workers", "workers", int),
    ):
        value = _pick(args, config, name, cast)
        if value is not None:
            overrides[field] = value
    return replace(spec, **overrides)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--schemes", type=_parse_schemes,
                        help="comma-separated subset of routing,rlnc,subspace")
    parser.add_argument("--p", type=float, help="interference probability")
    parser.add_argument("--errors", type=int, help="bit flips per trial")
    parser.add_argument("--trials", type=int, help=f"trials per sweep point (default {DEFAULT_TRIALS})")
    parser.add_argument("--seed", type=int, help=f"master seed (default {DEFAULT_SEED})")
    parser.add_argument("--m", type=int, help="number of source-destination pairs (default 8)")
    parser.add_argument("--message", type=int,
                        help="codeword to transmit, 0-255 (default: bundled reference word)")
    parser.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--out", help="CSV output path (default results.csv)")
    parser.add_argument("--plot", help="also render the curves to this file (.svg recommended)")
    parser.add_argument("--plot-metric", dest="plot_metric",
                        choices=("per_destination", "system"),
                        help="plotted metric (default per_destination)")


def _run_and_emit(args: argparse.Namespace, spec: ExperimentSpec,
                  config: dict[str, str]) -> int:
    rows = run_experiment(spec)
    out = _pick(args, config, "out", str) or "results.csv"
    emit_csv(rows, out)
    print(f"wrote {len(rows)} rows to {out}")
    plot = _pick(args, config, "plot", str)
    if plot:
        from .plotting import emit_plot

        metric = _pick(args, config, "plot_metric", str) or "per_destination"
        column = (
            "failure_rate_system"
            if metric == "system"
            else "failure_rate_per_destination"
        )
        emit_plot(rows, plot, metric=column)
        print(f"wrote plot to {plot}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config) if args.config else {}
    base = _build_spec(args, config)
    p = base.p if _pick(args, config, "p", float) is not None else 0.0
    spec = replace(base, sweep_var="p", sweep_values=(p,))
    return _run_and_emit(args, spec, config)


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args.config) if args.config else {}
    spec = _build_spec(args, config)
    return _run_and_emit(args, spec, config)


def _chosen_params(basis: str):
    if basis == "reference":
        return params_containing(load_reference_codeword())
    return standard_params()


def _cmd_code(args: argparse.Namespace) -> int:
    params = _chosen_params(args.basis)
    if args.action == "generate":
        book = generate_codebook(params)
        from .bitlinalg import subspace_distance

        dmin = min(
            subspace_distance(a.subspace, b.subspace)
            for i, a in enumerate(book.words)
            for b in book.words[i + 1:]
        )
        pairs = len(book.words) * (len(book.words) - 1) // 2
        print(
            f"codebook: {len(book.words)} words, dimension {params.k_dim} in "
            f"F_2^{params.n_ambient}, minimum pairwise distance {dmin} "
            f"(exhaustive over {pairs} pairs)"
        )
        return 0
    if args.action == "export":
        book = generate_codebook(params)
        blocks = "\n\n".join(w.matrix.to_text() for w in book.words) + "\n"
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(blocks)
            print(f"wrote {len(book.words)} codewords to {args.out}")
        else:
            sys.stdout.write(blocks)
        return 0
    # verify
    if args.fixture:
        with open(args.fixture) as fh:
            fix = BitMatrix.from_text(fh.read())
    else:
        fix = load_reference_codeword()
    report = verify_fixture(fix, params)
    for line in report.lines():
        print(line)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write("\n".join(report.lines()) + "\n")
    print(f"structural checks: {'pass' if report.structural_ok else 'FAIL'}")
    return 0 if report.structural_ok else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    results: list[tuple[str, OracleResult]] = []
    if args.which == "routing":
        per_dest, system = routing_failure_exact(args.p, args.m)
        results.append(("routing_per_destination", OracleResult(
            per_dest, "closed_form", "1 - (1-p)^(m-1)")))
        results.append(("routing_system", OracleResult(
            system, "closed_form", "1 - (1-p)^(m(m-1))")))
    else:
        results.append(("singular", singular_probability(
            args.p, args.m, trials=args.trials, master_seed=args.seed)))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["which", "p", "m", "value", "stderr", "method", "detail"])
    for name, res in results:
        writer.writerow([
            name, f"{args.p:g}", args.m, f"{res.value:.9f}",
            "" if res.stderr is None else f"{res.stderr:.9f}",
            res.method, res.detail,
        ])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kksim",
        description="GF(2) interference-channel simulator with subspace coding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    code = sub.add_parser("code", help="codebook tools")
    code.add_argument("action", choices=("generate", "export", "verify"))
    code.add_argument("--out", help="output path")
    code.add_argument("--fixture", help="verify this matrix file instead of the bundled one")
    code.add_argument("--basis", choices=("standard", "reference"), default="standard",
                      help="evaluation points: powers of x, or rows of the bundled codeword")
    code.set_defaults(func=_cmd_code)

    simulate = sub.add_parser("simulate", help="single-point run")
    _add_run_options(simulate)
    simulate.set_defaults(func=_cmd_simulate)

    sweep = sub.add_parser("sweep", help="sweep p or the flip count")
    sweep.add_argument("--preset", choices=tuple(PRESETS),
                       help="a canned experiment definition")
    sweep.add_argument("--var", choices=("p", "errors"), help="sweep variable")
    sweep.add_argument("--values", help="comma-separated sweep values")
    _add_run_options(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    oracle = sub.add_parser("oracle", help="closed-form / enumerated ground truth")
    oracle.add_argument("--which", choices=("routing", "singular"), required=True)
    oracle.add_argument("--p", type=float, required=True)
    oracle.add_argument("--m", type=int, default=8)
    oracle.add_argument("--trials", type=int, default=200_000,
                        help="draws for the Monte Carlo fallback (m > 5)")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
