"""Command-line interface.

Thin client over the library: every subcommand parses flags, delegates to
the core modules, and prints machine-readable output.  Identical invocations
produce byte-identical stdout.  Exit codes: 0 success, 1 a property check
found a violation (verify/dpi), 2 usage or validation error.
"""

from __future__ import annotations

import functools
import os
import sys

import click
import numpy as np

from . import bivariate, circle, conditional, io, markov, multivariate, rand
from .bivariate import ConvexPhi
from .errors import DepmeterError
from .model import ProbVector

ORDER_MAP = {"numeric": "numeric", "lex": "lex", "given": "given"}


def _seed_option(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("DEPMETER_SEED")
    return int(env) if env else 0


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DepmeterError as exc:
            _fail(str(exc))
        except OSError as exc:
            _fail(f"cannot read input: {exc}")

    return wrapper


@click.group()
def main() -> None:
    """Nonsymmetric dependence measures for discrete data."""


def _emit_reports(reports: list[dict], fmt: str) -> None:
    if fmt == "json":
        click.echo(io.json_dumps(reports))
    elif fmt == "csv":
        cols = ["measure", "alpha", "value", "upper_bound", "normalized"]
        click.echo(",".join(cols))
        for r in reports:
            row = []
            for c in cols:
                v = r.get(c)
                if v is None:
                    row.append("")
                elif isinstance(v, float):
                    row.append(io.format_float(v))
                else:
                    row.append(str(v))
            click.echo(",".join(row))
    else:
        for r in reports:
            parts = [r["measure"]]
            if "alpha" in r:
                parts.append(f"alpha={r['alpha']:g}")
            parts.append(f"value={io.format_float(r['value'])}")
            if "upper_bound" in r:
                parts.append(f"bound={io.format_float(r['upper_bound'])}")
            if "normalized" in r:
                parts.append(f"normalized={io.format_float(r['normalized'])}")
            click.echo("  ".join(parts))


@main.command()
@click.argument("input_path", type=click.Path())
@click.option(
    "--input-format",
    type=click.Choice(["samples", "table", "multi", "triple"]),
    default="samples",
    show_default=True,
)
@click.option("--measure", "measures", multiple=True, required=True)
@click.option("--alpha", "alphas", multiple=True, type=float)
@click.option("--phi", "phi_spec", default="square", show_default=True)
@click.option(
    "--order",
    type=click.Choice(list(ORDER_MAP)),
    default="numeric",
    show_default=True,
)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="table"
)
@click.option("--x-col", default=None)
@click.option("--y-col", default=None)
@click.option("--z-col", default=None)
@click.option("--x-cols", default=None, help="comma list of X columns (multi)")
@click.option("--y-cols", default=None, help="comma list of Y columns (multi)")
@handle_errors
def compute(
    input_path,
    input_format,
    measures,
    alphas,
    phi_spec,
    order,
    fmt,
    x_col,
    y_col,
    z_col,
    x_cols,
    y_cols,
) -> None:
    """Compute measures on one input file."""
    ordering = ORDER_MAP[order]
    phi = ConvexPhi.parse(phi_spec)
    alphas = list(alphas) or [None]

    reports: list[dict] = []
    if input_format in ("samples", "table"):
        if input_format == "samples":
            records = io.read_samples_csv(input_path, x_col, y_col, ordering)
            t = io.samples_to_table(records, ordering)
        else:
            t = io.read_table_csv(input_path, ordering)
        for m in measures:
            if m in ("renyi", "tsallis"):
                for a in alphas:
                    if a is None:
                        _fail(f"measure {m!r} requires --alpha")
                    reports.append(bivariate.compute(t, m, a, phi).to_dict())
            else:
                reports.append(bivariate.compute(t, m, None, phi).to_dict())
    elif input_format == "multi":
        if not x_cols or not y_cols:
            _fail("multi input requires --x-cols and --y-cols")
        mt = io.read_multi_csv(
            input_path, x_cols.split(","), y_cols.split(","), ordering
        )
        for m in measures:
            if m in ("renyi", "tsallis"):
                for a in alphas:
                    if a is None:
                        _fail(f"measure {m!r} requires --alpha")
                    reports.append(multivariate.compute_mv(mt, m, a, phi).to_dict())
            else:
                reports.append(multivariate.compute_mv(mt, m, None, phi).to_dict())
    else:
        tt = io.read_triple_csv(input_path, x_col, y_col, z_col, ordering)
        for m in measures:
            if m != "tau2":
                _fail("triple input supports only the tau2 conditional measure")
            reports.append(conditional.tau_conditional_squared(tt).to_dict())
    _emit_reports(reports, fmt)


@main.command()
@click.option("--n", "n_spec", required=True, help="comma list of sizes, e.g. 2,3,5")
@click.option("--tolerance", default=1e-12, show_default=True)
@handle_errors
def verify(n_spec, tolerance) -> None:
    """Check computed circle-example measures against their closed forms."""
    try:
        sizes = [int(s) for s in n_spec.split(",")]
    except ValueError:
        _fail(f"bad --n list {n_spec!r}")
    failures = 0
    for n in sizes:
        orc = circle.oracle(n)
        inst = circle.generate(n)
        checks = [
            ("I(X,Y)", bivariate.mutual_information(inst.table("xy")), orc.mi_xy),
            ("I(X,Z)", bivariate.mutual_information(inst.table("xz")), orc.mi_xz),
            ("S(X,Y)", bivariate.bhm_distance(inst.table("xy")), orc.bhm_xy),
            ("S(X,Z)", bivariate.bhm_distance(inst.table("xz")), orc.bhm_xz),
            ("tau2(Y,X)", bivariate.tau_squared(inst.table("yx")).value, orc.tau2_yx),
            ("tau2(X,Y)", bivariate.tau_squared(inst.table("xy")).value, orc.tau2_xy),
            ("tau2(X,Z)", bivariate.tau_squared(inst.table("xz")).value, orc.tau2_xz),
        ]
        for name, got, want in checks:
            err = abs(got - want) / (abs(want) if want != 0 else 1.0)
            ok = err <= tolerance
            if not ok:
                failures += 1
            click.echo(
                f"n={n} {name}: computed={io.format_float(got)} "
                f"oracle={io.format_float(want)} relerr={err:.3e} "
                f"{'pass' if ok else 'FAIL'}"
            )
    if failures:
        click.echo(f"{failures} check(s) failed", err=True)
        sys.exit(1)


@main.command()
@click.option("--random", "count", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--phi", "phi_spec", default="square", show_default=True)
@click.option("--max-size", default=8, show_default=True)
@click.option("--marginal", type=click.Path(), default=None)
@click.option("--mxy", type=click.Path(), default=None)
@click.option("--myz", type=click.Path(), default=None)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="table"
)
@handle_errors
def dpi(count, seed, phi_spec, max_size, marginal, mxy, myz, fmt) -> None:
    """Data Processing Inequality checks on explicit or random chains."""
    phi = ConvexPhi.parse(phi_spec)
    reports = []
    if count is not None:
        rng = np.random.default_rng(np.uint64(_seed_option(seed)))
        for _ in range(count):
            m, n, l = (int(v) for v in rng.integers(2, max_size + 1, size=3))
            chain = rand.random_chain(rng, m, n, l)
            reports.append(markov.check_dpi(chain, phi))
    elif marginal and mxy and myz:
        px = io.read_matrix_csv(marginal).ravel()
        a = io.read_matrix_csv(mxy)
        b = io.read_matrix_csv(myz)
        src = ProbVector(px, rand.numeric_support(px.size))
        chain = markov.MarkovChain3(
            src,
            markov.TransitionMatrix(
                a, rand.numeric_support(a.shape[0]), rand.numeric_support(a.shape[1])
            ),
            markov.TransitionMatrix(
                b, rand.numeric_support(b.shape[0]), rand.numeric_support(b.shape[1])
            ),
        )
        reports.append(markov.check_dpi(chain, phi))
    else:
        _fail("provide --random COUNT or all of --marginal/--mxy/--myz")
    violations = sum(
        1 for r in reports if not (r.holds and r.reverse_holds)
    )
    if fmt == "json":
        click.echo(
            io.json_dumps(
                {
                    "chains": len(reports),
                    "violations": violations,
                    "reports": [r.to_dict() for r in reports],
                }
            )
        )
    else:
        for r in reports:
            click.echo(
                f"tau_xz={io.format_float(r.tau_xz)} "
                f"tau_yz={io.format_float(r.tau_yz)} slack={io.format_float(r.slack)} "
                f"{'ok' if r.holds and r.reverse_holds else 'VIOLATION'}"
            )
        click.echo(f"{len(reports)} chain(s), {violations} violation(s)")
    if violations:
        sys.exit(1)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--out-dir", type=click.Path(), default=None)
@handle_errors
def example(n, out_dir) -> None:
    """Emit the circle fixture: tables as CSV, closed-form record as JSON."""
    orc = circle.oracle(n)
    if out_dir is not None:
        import pathlib

        out = pathlib.Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        inst = circle.generate(n)
        for pair in circle.PAIRS:
            io.write_table_csv(inst.table(pair), out / f"{pair}.csv")
        (out / "oracle.json").write_text(io.json_dumps(orc.to_dict()) + "\n")
    click.echo(io.json_dumps(orc.to_dict()))


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--measure", required=True)
@click.option("--alpha", type=float, default=None)
@click.option("--permutations", default=200, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--x-col", default=None)
@click.option("--y-col", default=None)
@click.option(
    "--order", type=click.Choice(list(ORDER_MAP)), default="numeric"
)
@handle_errors
def ptest(input_path, measure, alpha, permutations, seed, x_col, y_col, order) -> None:
    """Permutation p-value for a measure on a samples CSV."""
    records = io.read_samples_csv(input_path, x_col, y_col, ORDER_MAP[order])
    p = bivariate.permutation_pvalue(
        records, measure, permutations, _seed_option(seed), alpha
    )
    click.echo(io.json_dumps({"measure": measure, "p_value": p}))


if __name__ == "__main__":
    main()
