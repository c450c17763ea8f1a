"""Command-line front end: algebra validation, graph enumeration, verification campaigns.

Exit codes: 0 pass, 1 I/O error, 2 validation failure, 3 budget exceeded,
4 a check failed or raised.
"""
import json
import os
import sys

import click

from .errors import BudgetError, InputError

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3, 4


def _load(source):
    """A bundled algebra name or a JSON path -> (algebra, sigma)."""
    from .liealg import load_algebra, load_algebra_file
    if not os.path.exists(source) and os.sep not in source and not source.endswith(".json"):
        try:
            return load_algebra(source)
        except FileNotFoundError:
            raise OSError(f"no bundled algebra or file named {source!r}")
    return load_algebra_file(source)


def _fail(code, msg):
    click.echo(msg, err=True)
    sys.exit(code)


@click.group()
def main():
    """Exact Lie-algebra tools and Monte-Carlo graph-weight checks."""


@main.command("lie-check")
@click.argument("path")
def lie_check(path):
    """Validate an algebra JSON file (or bundled name): Jacobi, involution, Cartan split."""
    from .liealg import cartan_decompose, check_jacobi
    try:
        alg, sigma = _load(path)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        _fail(EXIT_IO, f"error: cannot read {path}: {exc}")
    except InputError as exc:
        _fail(EXIT_INVALID, f"invalid: {exc}")
    click.echo(f"dim: {alg.dim}")
    click.echo(f"jacobi: {'ok' if check_jacobi(alg.c) else 'FAIL'}")
    if sigma is None:
        click.echo("involution: none given")
        return
    try:
        pair = cartan_decompose(alg, sigma)
    except InputError as exc:
        _fail(EXIT_INVALID, f"involution: FAIL ({exc})")
    click.echo("involution: ok")
    click.echo(f"cartan: dim k = {len(pair.k_vectors)}, dim p = {len(pair.p_vectors)}")


def _parse_type(text):
    parts = [int(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip()]
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return tuple(parts)
    raise click.BadParameter("type is m (half-plane) or k,l (quadrant)")


@main.command("graphs-enum")
@click.argument("n", type=int)
@click.option("--type", "gtype", default="2", help="m for the half-plane, k,l for the quadrant.")
@click.option("--marked/--unmarked", default=False, help="Last second-type vertex is the corner.")
@click.option("--multi-edges/--no-multi-edges", default=True)
@click.option("--short-loops/--no-short-loops", default=True)
@click.option("--phantom-budget", type=int, default=None)
def graphs_enum(n, gtype, marked, multi_edges, short_loops, phantom_budget):
    """List admissible graphs with N aerial vertices as JSON."""
    from .graphs import canonical_id, classify_graph, enumerate_graphs, symmetry_factor
    second = _parse_type(gtype)
    m = sum(second) if isinstance(second, tuple) else second
    corner = n + m - 1 if marked else None
    try:
        gs = enumerate_graphs(n, second, multi_edges=multi_edges, short_loops=short_loops,
                              phantom_budget=phantom_budget, corner=corner)
    except BudgetError as exc:
        _fail(EXIT_BUDGET, f"budget: {exc}")
    except InputError as exc:
        _fail(EXIT_INVALID, f"invalid: {exc}")
    out = [{"id": canonical_id(g), "graph": g.to_json(), "class": classify_graph(g),
            "symmetryFactor": str(symmetry_factor(g))} for g in gs]
    click.echo(json.dumps(out, indent=1))


def _parse_tolerances(items):
    out = {}
    for item in items:
        try:
            key, value = item.split("=", 1)
            check, field = key.split(".", 1)
            out.setdefault(check, {})[field] = json.loads(value)
        except ValueError:
            raise click.BadParameter(f"expected CHECK.FIELD=VALUE, got {item!r}")
    return out


@main.command("verify")
@click.option("--algebra", default="sl2", help="Bundled name or JSON path, validated first.")
@click.option("--checks", default=None, help="Comma-separated check names (default: all).")
@click.option("--samples", type=int, default=None, help="Override Monte-Carlo sample counts.")
@click.option("--seed", type=int, default=0)
@click.option("--order", type=int, default=None, help="Override degree / truncation order.")
@click.option("--out", default=None, help="Report path (default: stdout).")
@click.option("--cache", default=None, help="Weight cache file.")
@click.option("--tolerance", multiple=True, help="Override as CHECK.FIELD=VALUE.")
def verify(algebra, checks, samples, seed, order, out, cache, tolerance):
    """Run a verification campaign and write a JSON report."""
    from .checks import CHECKS, run_check
    from .liealg import check_jacobi
    from .weights import WeightCache
    names = list(CHECKS) if checks is None else [c.strip() for c in checks.split(",") if c.strip()]
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        _fail(EXIT_INVALID, f"unknown checks: {', '.join(unknown)}")
    if samples is not None and samples < 2:
        _fail(EXIT_INVALID, "samples must be at least 2")
    overrides = _parse_tolerances(tolerance)
    try:
        alg, _ = _load(algebra)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_IO, f"error: cannot read {algebra}: {exc}")
    except InputError as exc:
        _fail(EXIT_INVALID, f"invalid algebra: {exc}")
    if not check_jacobi(alg.c):
        _fail(EXIT_INVALID, "invalid algebra: Jacobi fails")
    try:
        wc = WeightCache.load(cache) if cache else None
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        _fail(EXIT_IO, f"error: cannot read cache {cache}: {exc}")
    results = []
    for name in names:
        res = run_check(name, samples=samples, seed=seed, order=order, cache=wc,
                        tolerance=overrides.get(name))
        results.append(res)
        click.echo(f"{res.status.upper():5} {name}", err=True)
    report = {"algebra": algebra, "checks": [r.to_json() for r in results]}
    text = json.dumps(report, indent=1, sort_keys=True, default=str)
    try:
        if wc is not None:
            wc.save()
        if out:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        else:
            click.echo(text)
    except OSError as exc:
        _fail(EXIT_IO, f"error: cannot write: {exc}")
    sys.exit(EXIT_OK if all(r.passed for r in results) else EXIT_CHECK)


if __name__ == "__main__":
    main()
