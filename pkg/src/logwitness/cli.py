"""``logwitness`` command line.

Exit codes: 0 success, 1 usage or validation error, 2 prime windows
exhausted, 3 oracle unresolved, 4 resource cap exceeded.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import click

from . import cayley, intmat, oracle, pipeline
from .errors import LogWitnessError, ParseError, ResourceError, WindowExhaustedError
from .primes import is_prime
from .words import parse_const_word

EXIT_OK, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_UNRESOLVED, EXIT_RESOURCE = 0, 1, 2, 3, 4


def load_schema(name: str) -> dict:
    """One of the shipped JSON schemas, e.g. ``"witness_report"``."""
    text = resources.files("logwitness").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LOGWITNESS_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def _generators(preset, matrix_file):
    if matrix_file:
        return intmat.load_generators(matrix_file)
    if preset == "sanov":
        return intmat.sanov_generators()
    m = re.fullmatch(r"elementary-(\d+)", preset or "")
    if m and int(m.group(1)) >= 2:
        return intmat.elementary_generators(int(m.group(1)))
    raise click.BadParameter(f"unknown preset {preset!r}", param_hint="--preset")


def _int_list(text, what):
    if text is None or not str(text).strip():
        return []
    try:
        return [int(v) for v in re.split(r"[,\s]+", str(text).strip())]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of integers, got {text!r}", param_hint=what)


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _json_text(data):
    return json.dumps(data, indent=2) + "\n"


def _csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _pipeline_config(c0, cap_elements, cap_bits, seed=0):
    kwargs = {"seed": seed or 0}
    if c0 is not None:
        kwargs["C0"] = c0
        kwargs["C0_max"] = max(c0, pipeline.PipelineConfig.C0_max)
    if cap_elements is not None:
        kwargs["element_cap"] = cap_elements
    if cap_bits is not None:
        kwargs["bit_cap"] = cap_bits
    return pipeline.PipelineConfig(**kwargs)


def generator_options(f):
    f = click.option("--matrix-file", type=click.Path(exists=True, dir_okay=False), help="JSON list of generator matrices.")(f)
    f = click.option("--preset", default="sanov", show_default=True, help="'sanov' or 'elementary-<d>'.")(f)
    return f


def output_options(f):
    f = click.option("--timings/--no-timings", default=False, help="Include wall-clock fields (breaks byte-reproducibility).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)(f)
    f = click.option("--out", type=click.Path(dir_okay=False), help="Write here instead of stdout.")(f)
    return f


def cap_options(f):
    f = click.option("--cap-bits", type=int, help="Entry-size cap for exact matrices, in bits.")(f)
    f = click.option("--cap-elements", type=int, help="Element cap for Cayley-graph searches.")(f)
    f = click.option("--c0", type=int, help="Initial prime-window constant.")(f)
    return f


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), help="JSON file supplying default flag values.")
@click.pass_context
def cli(ctx, config):
    """Short non-solutions of word equations with constants."""
    if config:
        with open(config) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise click.BadParameter("config must be a JSON object", param_hint="--config")
        shared = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
        ctx.default_map = {}
        for name in cli.commands:
            section = {k.replace("-", "_"): v for k, v in data.get(name, {}).items()} if isinstance(data.get(name), dict) else {}
            ctx.default_map[name] = {**shared, **section}


@cli.command()
@click.option("--word", required=True, help="Word with constants, e.g. 'a x a^-1 x^-1'.")
@generator_options
@cap_options
@output_options
def witness(word, preset, matrix_file, c0, cap_elements, cap_bits, out, fmt, timings):
    """Find a short non-solution of WORD and verify it exactly."""
    _json_only(fmt)
    gens = _generators(preset, matrix_file)
    w = parse_const_word(word, gens.names)
    report = pipeline.find_witness(w, gens, _pipeline_config(c0, cap_elements, cap_bits))
    _emit(_json_text(report.to_dict(include_timings=timings)), out)
    return EXIT_OK


@cli.command()
@click.option("--word", required=True)
@click.option("--radius", type=int, default=4, show_default=True, help="Search radius r_max.")
@generator_options
@output_options
def complexity(word, radius, preset, matrix_file, out, fmt, timings):
    """Exact complexity of WORD by free-ball enumeration."""
    _json_only(fmt)
    if radius < 0:
        raise click.BadParameter("radius must be nonnegative", param_hint="--radius")
    gens = _generators(preset, matrix_file)
    w = parse_const_word(word, gens.names)
    record = oracle.exact_complexity(w, radius, gens.names)
    _emit(_json_text(record.to_dict(gens.names)), out)
    return EXIT_OK if record.resolved else EXIT_UNRESOLVED


@cli.command()
@click.option("--n", "n_list", required=True, help="Comma-separated word lengths.")
@click.option("--samples", type=int, default=10, show_default=True)
@click.option("--seed", type=int, help="64-bit seed (required).")
@click.option("--radius", type=int, default=2, show_default=True, help="Oracle search radius.")
@generator_options
@cap_options
@output_options
def growth(n_list, samples, seed, radius, preset, matrix_file, c0, cap_elements, cap_bits, out, fmt, timings):
    """Sampled growth experiment over word lengths."""
    if seed is None:
        raise click.UsageError("--seed is required for sampling subcommands")
    ns = _int_list(n_list, "--n")
    if any(n < 1 for n in ns) or samples < 1:
        raise click.BadParameter("lengths and sample counts must be positive")
    gens = _generators(preset, matrix_file)
    rows = pipeline.growth_experiment(
        ns, samples, gens, _pipeline_config(c0, cap_elements, cap_bits, seed), seed, radius
    )
    for row in rows:
        if not timings:
            row["seconds"] = ""
    _emit_table(pipeline.GROWTH_COLUMNS, rows, fmt, out)
    return EXIT_OK


def _sweep(primes, preset, matrix_file, cap_elements, out, fmt, timings, want_diameter):
    ps = _int_list(primes, "--primes")
    for p in ps:
        if not is_prime(p):
            raise click.BadParameter(f"{p} is not prime", param_hint="--primes")
    gens = _generators(preset, matrix_file)
    cap = cap_elements or cayley.DEFAULT_ELEMENT_CAP
    rows = _ordered_map(_SweepJob(gens, want_diameter, cap), ps)
    for row in rows:
        if not timings:
            row["seconds"] = ""
    _emit_table(cayley.SWEEP_COLUMNS, rows, fmt, out)
    return EXIT_OK


class _SweepJob:
    # picklable for the process pool
    def __init__(self, gens, want_diameter, cap):
        self.gens, self.want_diameter, self.cap = gens, want_diameter, cap

    def __call__(self, p):
        return cayley.sweep_row(p, self.gens, self.want_diameter, not self.want_diameter, self.cap)


@cli.command()
@click.option("--primes", default="", help="Comma-separated primes.")
@generator_options
@click.option("--cap-elements", type=int)
@output_options
def diameter(primes, preset, matrix_file, cap_elements, out, fmt, timings):
    """Exact Cayley-graph diameters of SL_d(p)."""
    return _sweep(primes, preset, matrix_file, cap_elements, out, fmt, timings, True)


@cli.command()
@click.option("--primes", default="", help="Comma-separated primes.")
@generator_options
@click.option("--cap-elements", type=int)
@output_options
def injrad(primes, preset, matrix_file, cap_elements, out, fmt, timings):
    """Injectivity radius of reduction mod p on the free ball."""
    return _sweep(primes, preset, matrix_file, cap_elements, out, fmt, timings, False)


@cli.command()
@click.option("--group", required=True, help="'psl2-<p>', 'c<m>', or a table file.")
@click.option("--max-length", type=int, default=3, show_default=True)
@output_options
def mifcheck(group, max_length, out, fmt, timings):
    """Exhaustive search for short mixed identities in a finite group."""
    _json_only(fmt)
    if max_length < 0:
        raise click.BadParameter("max length must be nonnegative", param_hint="--max-length")
    G = oracle.load_group(group)
    found = oracle.mixed_identity_search(G, max_length)
    _emit(_json_text([w.render(G) for w in found]), out)
    return EXIT_OK


def _json_only(fmt):
    if fmt not in (None, "json"):
        raise click.BadParameter("this subcommand only emits JSON", param_hint="--format")


def _emit_table(columns, rows, fmt, out):
    if fmt == "json":
        _emit(_json_text([{c: row.get(c, "") for c in columns} for row in rows]), out)
    else:
        _emit(_csv_text(columns, rows), out)


def main(argv=None) -> int:
    try:
        code = cli.main(args=argv, prog_name="logwitness", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        code = EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        code = EXIT_USAGE
    except WindowExhaustedError as exc:
        click.echo(f"error: {exc}", err=True)
        click.echo(json.dumps({"diagnostics": exc.diagnostics}), err=True)
        code = EXIT_EXHAUSTED
    except ResourceError as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_RESOURCE
    except ParseError as exc:
        msg = str(exc)
        if "trivial" in msg:
            msg = f"trivial word: {msg}"
        click.echo(f"error: {msg}", err=True)
        code = EXIT_USAGE
    except (LogWitnessError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_USAGE
    if code is None:
        code = EXIT_OK
    return code


def entry() -> None:
    sys.exit(main())
