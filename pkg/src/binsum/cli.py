"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 arithmetic overflow (reserved; the
arbitrary-precision core cannot overflow), 3 resource budget exceeded,
4 no representation found (decompose only).
"""
from __future__ import annotations

import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from ._version import __version__
from .cache import ResultCache
from .errors import NoRepresentationError, ResourceBudgetError
from .experiments import run_experiment, summary_line
from .records import (
    SurveyRecord,
    _atomic_write_text,
    dump_records_csv,
    dump_records_json,
    encode_value,
)
from .represent import (
    Representation,
    SearchMode,
    decompose_k2,
    decompose_k3,
    greedy_chain,
    minimal_representation,
)

CACHE_ENV_VAR = "BINSUM_CACHE_DIR"


def _output_options(f):
    f = click.option(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: all cores). Never changes results.",
    )(f)
    f = click.option(
        "--cache-dir",
        type=click.Path(path_type=Path),
        default=None,
        envvar=CACHE_ENV_VAR,
        help=f"Record cache directory (or set {CACHE_ENV_VAR}).",
    )(f)
    f = click.option(
        "--out",
        type=click.Path(path_type=Path),
        default=None,
        help="Write the record(s) to this file.",
    )(f)
    f = click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
        help="Export format for --out.",
    )(f)
    return f


def _mode_option(f):
    return click.option(
        "--mode",
        type=click.Choice(["repeats", "distinct"]),
        default="repeats",
        show_default=True,
        help="Whether summands may repeat.",
    )(f)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise click.UsageError("--threads must be >= 1")
    return threads


def _resolve_cache(cache_dir: Path | None) -> ResultCache | None:
    return None if cache_dir is None else ResultCache(cache_dir)


def _export(records: list[SurveyRecord], fmt: str, out: Path | None) -> None:
    if out is None:
        return
    if fmt == "csv":
        dump_records_csv(records, out)
    else:
        dump_records_json(records, out)
    click.echo(f"wrote {out}")


def _run_and_report(kind, params, fmt, out, cache_dir, threads,
                    chunk_size=None, memory_budget=None):
    record, hit = run_experiment(
        kind,
        params,
        threads=_resolve_threads(threads),
        chunk_size=chunk_size,
        memory_budget=memory_budget,
        cache=_resolve_cache(cache_dir),
    )
    click.echo(summary_line(record) + (" [cached]" if hit else ""))
    _export([record], fmt, out)
    return record


@click.group()
@click.version_option(__version__)
def cli() -> None:
    """Sums of binomial coefficients C(n, k): decompositions,
    minimal-summand surveys, and additive-energy diagnostics."""


@cli.command()
@click.option("--k", type=int, required=True, help="Order of the sequence.")
@click.option("--n", "target", type=int, required=True, help="Integer to decompose.")
@click.option(
    "--algorithm",
    type=click.Choice(["greedy", "exact", "telescoping"]),
    default="greedy",
    show_default=True,
    help="greedy: constructive route; exact: fewest terms up to --h-max; "
    "telescoping: the order-3 constructive route explicitly.",
)
@click.option("--h-max", type=int, default=8, show_default=True,
              help="Term budget for --algorithm exact.")
@_mode_option
@_output_options
def decompose(k, target, algorithm, h_max, mode, fmt, out, cache_dir, threads):
    """Write N as a sum of values C(n, k)."""
    if k < 1:
        raise click.UsageError("--k must be >= 1")
    if target < 1:
        raise click.UsageError("--n must be >= 1")
    search_mode = SearchMode(mode)
    distinct_word = "distinct " if search_mode is SearchMode.DISTINCT else ""

    if algorithm == "telescoping" and k != 3:
        raise click.UsageError("--algorithm telescoping requires --k 3")

    if algorithm == "exact":
        rep = minimal_representation(target, k, h_max, search_mode)
        cap_text = f"{h_max} {distinct_word}terms"
    elif k == 1:
        rep = Representation(target, 1, (target,))
        cap_text = "1 term"
    elif k == 2:
        rep = decompose_k2(target, search_mode)
        cap_text = f"3 {distinct_word}terms"
    elif k == 3:
        if search_mode is SearchMode.DISTINCT:
            rep = minimal_representation(target, 3, 7, search_mode)
        else:
            rep = decompose_k3(target)
        cap_text = f"7 {distinct_word}terms"
    else:
        if search_mode is SearchMode.DISTINCT:
            raise click.UsageError(
                "distinct-mode greedy is only defined for k in {1, 2, 3}; "
                "use --algorithm exact"
            )
        chain = greedy_chain(target, k)
        assert chain is not None  # no cap, so the chain always finishes
        rep = Representation(target, k, tuple(chain))
        cap_text = "unbounded terms"

    if rep is None:
        raise NoRepresentationError(
            f"no representation of {target} with <= {cap_text} (k={k})"
        )
    click.echo(f"{target} = " + " + ".join(str(v) for v in rep.values))
    click.echo(f"indices (n, descending): {list(rep.indices)}")
    if out is not None:
        payload = {
            "k": k,
            "n": target,
            "algorithm": algorithm,
            "mode": mode,
            "indices": list(rep.indices),
            "values": list(rep.values),
            "terms": len(rep),
            "distinct": rep.distinct,
        }
        if fmt == "csv":
            import csv
            import io

            from .records import _cell

            buffer = io.StringIO()
            writer = csv.writer(buffer)
            writer.writerow(list(payload))
            writer.writerow([_cell(encode_value(value)) for value in payload.values()])
            _atomic_write_text(out, buffer.getvalue())
        else:
            import json

            _atomic_write_text(
                out, json.dumps(encode_value(payload), indent=2, sort_keys=True) + "\n"
            )
        click.echo(f"wrote {out}")


@cli.command("min-rep")
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True, help="Target integer.")
@click.option("--h-max", type=int, default=8, show_default=True)
@_mode_option
@_output_options
def min_rep(k, n, h_max, mode, fmt, out, cache_dir, threads):
    """Fewest summands for one target, or report that h-max is exceeded."""
    _run_and_report(
        "min-rep",
        {"k": k, "n": n, "h_max": h_max, "mode": mode},
        fmt, out, cache_dir, threads,
    )


@cli.command()
@click.option("--kind", type=click.Choice([
    "min-rep", "survey-H", "energy", "restricted-sums",
    "coverage-threshold", "exponent-fit", "asymptotic-ratio",
]), required=True)
@click.option("--k", type=int, required=True)
@click.option("--h", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--h-max", type=int, default=None)
@click.option("--n-min", type=int, default=None)
@click.option("--max", "n_max", type=int, default=None, help="Survey range end.")
@click.option("--cap", type=int, default=None, help="Survey table term cap.")
@click.option("--max-witnesses", type=int, default=None)
@click.option("--chunk-size", type=int, default=None,
              help="Survey scan chunk size (results are identical regardless).")
@click.option("--index-bound", type=int, default=None)
@click.option("--x", "xs", type=int, multiple=True,
              help="Value bound; repeat for exponent fits.")
@click.option("--convention", type=click.Choice(["value", "index"]), default=None)
@click.option("--c", "fraction", type=str, default=None,
              help="Per-term budget fraction, e.g. 1/2.")
@click.option("--sequence", type=click.Choice(["binomial", "power"]), default=None)
@click.option("--top", type=int, default=None, help="Report the top-T multiplicities.")
@click.option("--r-max", type=int, default=None)
@click.option("--memory-budget", type=int, default=None,
              help="Abort (exit 3) if the working set would exceed this many bytes.")
@_mode_option
@_output_options
def survey(kind, k, h, n, h_max, n_min, n_max, cap, max_witnesses, chunk_size,
           index_bound, xs, convention, fraction, sequence, top, r_max,
           memory_budget, mode, fmt, out, cache_dir, threads):
    """Run any experiment kind and export its record."""
    params: dict = {"k": k}
    if kind == "min-rep":
        params.update({"n": n, "h_max": h_max, "mode": mode})
    elif kind == "survey-H":
        params.update({
            "n_min": n_min, "n_max": n_max, "mode": mode, "cap": cap,
            "max_witnesses": max_witnesses,
        })
    elif kind == "energy":
        params.update({
            "h": h, "index_bound": index_bound,
            "x": xs[0] if xs else None, "convention": convention,
            "sequence": sequence, "top": top,
        })
    elif kind == "restricted-sums":
        params.update({
            "h": h, "x": xs[0] if xs else None,
            "c": Fraction(fraction) if fraction else None, "sequence": sequence,
        })
    elif kind == "coverage-threshold":
        params.update({"r_max": r_max})
    elif kind == "exponent-fit":
        params.update({"h": h, "bounds": list(xs), "sequence": sequence})
    else:  # asymptotic-ratio
        params.update({"x": xs[0] if xs else None})
    try:
        _run_and_report(kind, params, fmt, out, cache_dir, threads,
                        chunk_size, memory_budget)
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc)) from exc


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--index-bound", type=int, default=None)
@click.option("--x", type=int, default=None)
@click.option("--convention", type=click.Choice(["value", "index"]), default=None)
@click.option("--c", "fraction", type=str, default=None,
              help="Run the restricted (per-term capped) variant; needs --x.")
@click.option("--sequence", type=click.Choice(["binomial", "power"]), default="binomial",
              show_default=True)
@click.option("--top", type=int, default=0, show_default=True)
@_mode_option
@_output_options
def energy(k, h, index_bound, x, convention, fraction, sequence, top, mode,
           fmt, out, cache_dir, threads):
    """Multiplicity statistics for h-fold sums."""
    try:
        if fraction is not None:
            if x is None:
                raise click.UsageError("--c needs --x (the sum budget)")
            _run_and_report(
                "restricted-sums",
                {"k": k, "h": h, "x": x, "c": Fraction(fraction), "sequence": sequence},
                fmt, out, cache_dir, threads,
            )
        else:
            _run_and_report(
                "energy",
                {"k": k, "h": h, "index_bound": index_bound, "x": x,
                 "convention": convention, "sequence": sequence, "top": top},
                fmt, out, cache_dir, threads,
            )
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc)) from exc


@cli.command()
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--r-max", type=int, required=True)
@click.option("--memory-budget", type=int, default=None,
              help="Abort (exit 3) if the working set would exceed this many bytes.")
@_mode_option
@_output_options
def coverage(k, r_max, memory_budget, mode, fmt, out, cache_dir, threads):
    """Largest R <= r-max where [R/2, R] misses a two-triangular sum.

    Both admission modes are computed and recorded; --mode picks which one
    the summary highlights.
    """
    try:
        record = _run_and_report(
            "coverage-threshold", {"k": k, "r_max": r_max},
            fmt, out, cache_dir, threads, memory_budget=memory_budget,
        )
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc)) from exc
    key = "repeats_threshold" if mode == "repeats" else "distinct_threshold"
    click.echo(f"{mode} threshold: {record.results[key]}")


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--x", "xs", type=int, multiple=True, required=True,
              help="Value bounds; give at least three.")
@click.option("--sequence", type=click.Choice(["binomial", "power"]), default="binomial",
              show_default=True)
@_mode_option
@_output_options
def fit(k, h, xs, sequence, mode, fmt, out, cache_dir, threads):
    """Fit the growth exponent of the h-fold energy across value bounds."""
    try:
        _run_and_report(
            "exponent-fit",
            {"k": k, "h": h, "bounds": list(xs), "sequence": sequence},
            fmt, out, cache_dir, threads,
        )
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc)) from exc


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--x", "xs", type=int, multiple=True, required=True,
              help="Value bound; may repeat for a multi-row table.")
@_mode_option
@_output_options
def table(k, xs, mode, fmt, out, cache_dir, threads):
    """Counts of sequence values up to X and their ratio to leading order."""
    records = []
    try:
        for x in xs:
            records.append(
                _run_and_report("asymptotic-ratio", {"k": k, "x": x},
                                fmt, None, cache_dir, threads)
            )
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc)) from exc
    _export(records, fmt, out)


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except NoRepresentationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 4
    except ResourceBudgetError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except OverflowError as exc:
        click.echo(f"error: arithmetic overflow: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
