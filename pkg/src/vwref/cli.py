"""Command-line entry point: run scenarios, print series tables, check goldens."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import click

from . import lambdaring
from .errors import VWRefError
from .scalar import quantum_integer, substitute_tr
from .scenarios import CheckReport, Registry, RunResult, default_registry


def _registry(scenario_dir: Optional[str]) -> Registry:
    if scenario_dir:
        return Registry.from_directory(Path(scenario_dir))
    return default_registry()


def _parse_binds(binds: Iterable[str]) -> Dict[str, str]:
    out = {}
    for b in binds:
        if "=" not in b:
            raise click.BadParameter(f"expected k=v, got {b!r}", param_hint="--bind")
        k, v = b.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=False))


def _show_run(res: RunResult, as_json: bool, quiet: bool) -> None:
    if quiet:
        verdict = "PASS" if res.passed else "FAIL"
        click.echo(f"{verdict} {res.scenario} {res.bindings}")
        return
    if as_json:
        _emit(res.to_json())
        return
    click.echo(f"{res.scenario}  {res.bindings}  [{res.status}]")
    if isinstance(res.result_canonical, dict):
        for k, v in res.result_canonical.items():
            t1 = res.t1_value.get(k) if isinstance(res.t1_value, dict) else None
            click.echo(f"  q^{k}: {v}" + (f"    (t=1: {t1})" if t1 is not None else ""))
    else:
        click.echo(f"  result: {res.result_canonical}")
        if res.t1_value is not None:
            click.echo(f"  t=1:    {res.t1_value}")
    if res.symmetric is not None:
        click.echo(f"  symmetric: {res.symmetric}")
    if res.golden_match is not None:
        click.echo(f"  golden_match: {res.golden_match}")
    bad = res.failed_checks()
    click.echo(f"  checks: {len(res.checks) - len(bad)}/{len(res.checks)} pass" + (f"; failed: {', '.join(bad)}" if bad else ""))


def _fail(exc: Exception) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(2)


@click.group()
@click.option("--scenario-dir", type=click.Path(exists=True, file_okay=False), default=None, help="Load scenarios from this directory instead of the built-in set.")
@click.pass_context
def main(ctx, scenario_dir):
    """Exact refined Vafa-Witten calculus."""
    ctx.obj = {"scenario_dir": scenario_dir}


@main.command("list")
@click.pass_context
def list_cmd(ctx):
    """List registered scenarios."""
    reg = _registry(ctx.obj["scenario_dir"])
    for name in reg.names():
        scn = reg.get(name)
        req = ",".join(scn.requires) or "-"
        click.echo(f"{name:28s} {scn.kind:10s} needs {req:8s} {scn.anchor}")


@main.command()
@click.argument("name")
@click.option("--bind", "binds", multiple=True, metavar="K=V", help="Integer or parameter binding; repeatable.")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
@click.option("--quiet", is_flag=True, help="Verdict only.")
@click.pass_context
def run(ctx, name, binds, as_json, quiet):
    """Run one scenario with the given bindings."""
    try:
        res = _registry(ctx.obj["scenario_dir"]).run(name, _parse_binds(binds))
    except VWRefError as exc:
        _fail(exc)
    _show_run(res, as_json, quiet)
    sys.exit(0 if res.passed else 1)


@main.command()
@click.argument("name")
@click.option("--order", type=int, required=True, help="Highest q-power to compute.")
@click.option("--bind", "binds", multiple=True, metavar="K=V")
@click.option("--json", "as_json", is_flag=True)
@click.option("--quiet", is_flag=True)
@click.pass_context
def series(ctx, name, order, binds, as_json, quiet):
    """Coefficient table of a series scenario through q^ORDER."""
    reg = _registry(ctx.obj["scenario_dir"])
    try:
        scn = reg.get(name)
        if scn.kind != "series":
            raise click.UsageError(f"{name} is a {scn.kind} scenario, not a series")
        b = _parse_binds(binds)
        b["order"] = str(order)
        res = reg.run(name, b)
    except VWRefError as exc:
        _fail(exc)
    _show_run(res, as_json, quiet)
    sys.exit(0 if res.passed else 1)


def _report_lines(rep: CheckReport) -> List[str]:
    verdict = "PASS" if rep.passed else "FAIL"
    lines = [f"{verdict} {rep.scenario}  ({rep.anchor})"]
    if rep.error:
        lines.append(f"    error: {rep.error}")
    for r in rep.runs:
        bad = r.failed_checks()
        if bad:
            lines.append(f"    {r.bindings}: failed {', '.join(bad)}")
    return lines


@main.command()
@click.option("--filter", "pattern", default=None, help="Glob or substring on scenario names.")
@click.option("--json", "as_json", is_flag=True)
@click.option("--quiet", is_flag=True)
@click.pass_context
def check(ctx, pattern, as_json, quiet):
    """Run every scenario over its default bindings and compare with goldens."""
    reports = _registry(ctx.obj["scenario_dir"]).check_all(pattern)
    ok = all(r.passed for r in reports)
    if as_json:
        _emit({"passed": ok, "reports": [r.to_json() for r in reports]})
    elif quiet:
        click.echo("PASS" if ok else "FAIL")
    else:
        for rep in reports:
            for line in _report_lines(rep):
                click.echo(line)
        n_bad = sum(not r.passed for r in reports)
        click.echo(f"{len(reports) - n_bad}/{len(reports)} scenarios pass")
    sys.exit(0 if ok else 1)


def _identity_checks(which: str, r0: int, r1: int, rank: int, top: int) -> Dict[str, bool]:
    if which == "eagon-northcott":
        return {f"{k}_{r0}_{r1}": v for k, v in lambdaring.eagon_northcott_report(r0, r1).items()}
    if which == "corollary":
        return {f"{k}_rank{rank}": v for k, v in lambdaring.corollary_check(rank).items()}
    if which == "duality":
        return {f"duality_rank{rank}": lambdaring.duality_check(rank)}
    out = {}
    for chi in range(1, top + 1):
        for r in range(1, top + 1):
            out[f"qint_tr_{chi}_{r}"] = substitute_tr(quantum_integer(chi), r) * quantum_integer(r) == quantum_integer(r * chi)
        out[f"qint_t2_{chi}"] = substitute_tr(quantum_integer(chi), 2) == quantum_integer(2 * chi) / quantum_integer(2)
    return out


@main.command()
@click.argument("which", type=click.Choice(["eagon-northcott", "corollary", "duality", "quantum"]))
@click.option("--r0", type=int, default=1, show_default=True)
@click.option("--r1", type=int, default=2, show_default=True)
@click.option("--rank", type=int, default=2, show_default=True)
@click.option("--max", "top", type=int, default=12, show_default=True, help="Range for the quantum-integer identities.")
@click.option("--json", "as_json", is_flag=True)
@click.option("--quiet", is_flag=True)
def identity(which, r0, r1, rank, top, as_json, quiet):
    """Check a lambda-ring or quantum-integer identity family."""
    try:
        checks = _identity_checks(which, r0, r1, rank, top)
    except VWRefError as exc:
        _fail(exc)
    ok = all(checks.values())
    if as_json:
        _emit({"identity": which, "checks": checks, "passed": ok})
    elif quiet:
        click.echo("PASS" if ok else "FAIL")
    else:
        for k, v in checks.items():
            click.echo(f"{'PASS' if v else 'FAIL'} {k}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
