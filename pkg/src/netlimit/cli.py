"""Command-line front end: ``netlimit limit|certify|riemann|axioms``.

Exit codes: 0 converges / certified / all axioms pass; 1 bad input or
failed axiom check; 2 divergent or oscillating; 3 inconclusive;
4 evaluation failure; 5 certification failure.
"""

from __future__ import annotations

import json
import math
import sys

import click

from netlimit.axioms import default_operators, reports_passed, run_all
from netlimit.directions import PartitionsOf, TAG_RULES, mesh, parse_dirspec, riemann_stieltjes_net
from netlimit.envelope import (
    Converges,
    EstimateConfig,
    Inconclusive,
    Oscillates,
    epsilon_delta_certificate,
    estimate_limit,
    verdict_to_dict,
)
from netlimit.errors import CertificationFailure, EvaluationError, ParamError, ParseError
from netlimit.expr import compile_expr

EXIT_OK, EXIT_INPUT, EXIT_EXTENDED, EXIT_INCONCLUSIVE, EXIT_EVAL, EXIT_CERT = range(6)
DEFAULT_DIRS = "left:0,right:0,both:0,inf,-inf,seq"


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dump(doc: dict) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False)


def _fail(message: str, code: int):
    click.echo(message, err=True)
    sys.exit(code)


def _compile(text: str):
    try:
        return compile_expr(text)
    except ParseError as exc:
        _fail(f"parse error: {text}\n             {' ' * exc.offset}^ expected {exc.expected}",
              EXIT_INPUT)


def _direction(spec: str, **extra):
    try:
        return parse_dirspec(spec, **extra)
    except ParamError as exc:
        _fail(f"bad --dir {spec!r}: {exc}", EXIT_INPUT)


def _config(tol, steps, ratio, resolution) -> EstimateConfig:
    try:
        return EstimateConfig(tolerance=tol, max_steps=steps, ratio=ratio, resolution=resolution)
    except ParamError as exc:
        _fail(f"bad option: {exc}", EXIT_INPUT)


def _exit_code(verdict) -> int:
    if isinstance(verdict, Converges):
        return EXIT_OK
    if isinstance(verdict, Inconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_EXTENDED


def _sci(x: float) -> str:
    mant, exp = f"{x:.0e}".split("e")
    return f"{mant}e{int(exp)}"


def describe(verdict, tolerance: float = EstimateConfig.tolerance) -> str:
    if isinstance(verdict, Converges):
        err = verdict.error_bound
        bound = f"<{_sci(tolerance)}" if err < tolerance else f"{err:.2g}"
        return f"Converges: {verdict.value:.6f} (±{bound})"
    if isinstance(verdict, Oscillates):
        return f"Oscillates: liminf={verdict.liminf:.3f} limsup={verdict.limsup:.3f}"
    if isinstance(verdict, Inconclusive):
        return f"Inconclusive: {verdict.reason}"
    return {"diverges_to_plus_infinity": "Diverges to +infinity",
            "diverges_to_minus_infinity": "Diverges to -infinity"}[verdict.kind]


def estimate_options(f):
    f = click.option("--resolution", default=EstimateConfig.resolution, show_default=True, type=float,
                     help="Widest envelope accepted as convergence at the sampling horizon.")(f)
    f = click.option("--ratio", default=EstimateConfig.ratio, show_default=True, type=float,
                     help="Chain refinement ratio in (0, 1).")(f)
    f = click.option("--steps", default=EstimateConfig.max_steps, show_default=True, type=int,
                     help="Maximum chain length.")(f)
    f = click.option("--tol", default=EstimateConfig.tolerance, show_default=True, type=float,
                     help="Envelope width that counts as convergence.")(f)
    return f


class _Group(click.Group):
    """Usage errors exit with the input-error code, not click's default 2
    (which here means "divergent or oscillating")."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_INPUT)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_INPUT)


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Limits of real functions along directions, via tail envelopes."""


@main.command(context_settings={"ignore_unknown_options": True})
@click.argument("expression")
@click.option("--dir", "dirspec", required=True,
              help="left:<x0> | right:<x0> | both:<x0> | inf | -inf | seq | riemann:<a>:<b>")
@estimate_options
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON report.")
def limit(expression, dirspec, tol, steps, ratio, resolution, as_json):
    """Estimate the limit of EXPRESSION (in x, or n for sequences)."""
    f = _compile(expression)
    direction = _direction(dirspec)
    cfg = _config(tol, steps, ratio, resolution)
    try:
        verdict, trace = estimate_limit(f, direction, cfg)
    except EvaluationError as exc:
        _fail(f"evaluation failed: {exc}", EXIT_EVAL)
    if as_json:
        doc = {"command": "limit", "expression": expression, "direction": direction.spec(),
               "trace": trace.to_list(direction), "stop_reason": trace.stop_reason,
               "config": cfg.to_dict(), **verdict_to_dict(verdict)}
        click.echo(dump(doc))
    else:
        click.echo(describe(verdict, cfg.tolerance))
    sys.exit(_exit_code(verdict))


def _eps_list(text: str) -> list[float]:
    try:
        eps = [float(e) for e in text.split(",") if e.strip()]
    except ValueError:
        _fail(f"bad --eps {text!r}", EXIT_INPUT)
    if not eps or any(not (e > 0 and math.isfinite(e)) for e in eps):
        _fail("--eps needs a comma list of positive numbers", EXIT_INPUT)
    return eps


@main.command(context_settings={"ignore_unknown_options": True})
@click.argument("expression")
@click.option("--dir", "dirspec", required=True, help="Direction, as for `limit`.")
@click.option("--value", required=True, type=float, help="Claimed limit.")
@click.option("--eps", "eps_text", required=True, help="Comma-separated epsilons, e.g. 0.1,0.01")
@estimate_options
@click.option("--json", "as_json", is_flag=True)
def certify(expression, dirspec, value, eps_text, tol, steps, ratio, resolution, as_json):
    """Find, for each epsilon, a tail on which |f - VALUE| <= epsilon."""
    f = _compile(expression)
    direction = _direction(dirspec)
    cfg = _config(tol, steps, ratio, resolution)
    eps = _eps_list(eps_text)
    if not math.isfinite(value):
        _fail("--value must be finite", EXIT_INPUT)
    doc = {"command": "certify", "expression": expression, "direction": direction.spec(),
           "limit": value}
    try:
        cert = epsilon_delta_certificate(f, direction, value, eps, cfg)
    except EvaluationError as exc:
        _fail(f"evaluation failed: {exc}", EXIT_EVAL)
    except CertificationFailure as exc:
        if as_json:
            click.echo(dump({**doc, "certified": False, "failed_epsilon": exc.epsilon, "entries": []}))
        else:
            click.echo(f"NOT certified: {exc}")
        sys.exit(EXIT_CERT)
    rows = cert.to_dict(direction)["entries"]
    if as_json:
        click.echo(dump({**doc, "certified": True, "entries": rows}))
    else:
        click.echo(f"certified limit {value:.6g} along {direction.spec()}")
        for row, entry in zip(rows, cert.entries):
            label, amount = direction.anchor_report(entry.anchor)
            if label == "N":
                where = f"past N={amount:.6g}"
            elif label == "delta":
                where = f"delta={amount:.6g}"
            else:
                where = f"mesh<={amount:.6g}"
            click.echo(f"  eps={row['epsilon']:g}: {where} ({row['samples']} samples checked)")
    sys.exit(EXIT_OK)


@main.command(context_settings={"ignore_unknown_options": True})
@click.argument("expression")
@click.argument("a", type=float)
@click.argument("b", type=float)
@click.option("-g", "--integrator", default="x", show_default=True, help="Integrator g(x).")
@click.option("--tag", type=click.Choice(TAG_RULES), default="midpoint", show_default=True)
@estimate_options
@click.option("--json", "as_json", is_flag=True)
def riemann(expression, a, b, integrator, tag, tol, steps, ratio, resolution, as_json):
    """Limit of Riemann-Stieltjes sums of EXPRESSION d(integrator) over [A, B]."""
    f = _compile(expression)
    g = _compile(integrator)
    try:
        direction = PartitionsOf(a, b, tag=tag)
    except ParamError as exc:
        _fail(f"bad interval: {exc}", EXIT_INPUT)
    cfg = _config(tol, steps, ratio, resolution)
    try:
        verdict, trace = estimate_limit(riemann_stieltjes_net(f, g, direction), direction, cfg)
    except EvaluationError as exc:
        _fail(f"evaluation failed: {exc}", EXIT_EVAL)
    final_mesh = mesh(trace.final.x)
    if as_json:
        doc = {"command": "riemann", "expression": expression, "integrator": integrator, "tag": tag,
               "direction": direction.spec(), "trace": trace.to_list(direction),
               "stop_reason": trace.stop_reason, "final_mesh": final_mesh,
               "config": cfg.to_dict(), **verdict_to_dict(verdict)}
        click.echo(dump(doc))
    else:
        click.echo(f"{describe(verdict, cfg.tolerance)} mesh={final_mesh:.6g}")
    sys.exit(_exit_code(verdict))


@main.command()
@click.option("--dirs", default=DEFAULT_DIRS, show_default=True, help="Comma-separated directions.")
@click.option("--seed", default=42, show_default=True, type=int, envvar="NETLIMIT_SEED",
              help="Corpus seed (env NETLIMIT_SEED).")
@click.option("--json", "as_json", is_flag=True)
def axioms(dirs, seed, as_json):
    """Check the limit axioms and derived theorems on a seeded corpus."""
    directions = [_direction(s) for s in dirs.split(",") if s.strip()]
    reports = run_all(default_operators(), directions, seed)
    ok = reports_passed(reports)
    if as_json:
        click.echo(dump({"command": "axioms", "seed": seed, "directions": [d.spec() for d in directions],
                         "passed": ok, "axiom_reports": [r.to_dict() for r in reports]}))
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            click.echo(f"{status}  {r.axiom:<19} {r.direction:<12} cases={r.cases:<3} "
                       f"violations={len(r.violations)}")
            for v in r.violations:
                click.echo(f"      {v.function}: expected {v.expected}; observed {v.observed}")
        click.echo("all axioms hold on the corpus" if ok else "axiom violations found")
    sys.exit(EXIT_OK if ok else EXIT_INPUT)


if __name__ == "__main__":
    main()
