"""Command line entry point.

Exit codes: 0 success, 1 verification (or self-test) failure, 2 invalid
input, 3 internal invariant violation.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from ..errors import GeoPierceError, InvalidInput, InvariantViolation, SelfTestFailed
from ..mindisk import TAU_PIERCE

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _run(fn):
    """Map library errors onto the documented exit codes."""
    try:
        code = fn()
    except (InvalidInput, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except InvariantViolation as exc:
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)
    except SelfTestFailed as exc:
        click.echo(f"self-test failed: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    except GeoPierceError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    sys.exit(code or EXIT_OK)


@click.group()
def main():
    """Pierce pairwise intersecting geodesic disks in a simple polygon."""


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), help="Write the points JSON here instead of stdout.")
@click.option("--svg", "svg_out", type=click.Path(dir_okay=False), help="Also render a picture.")
@click.option("--tol", type=float, default=TAU_PIERCE, show_default=True, help="Piercing tolerance.")
def pierce(instance, out, svg_out, tol):
    """Compute at most five piercing points."""

    def go():
        from ..piercing import compute_piercing_set
        from .io import dumps, load_instance
        from .verify import verify_piercing

        inst = load_instance(instance)
        S = compute_piercing_set(inst.polygon, inst.disks)
        text = dumps(S.to_dict())
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
        report = None
        if svg_out:
            from .svg import render_svg

            report = verify_piercing(inst, S, tol)
            Path(svg_out).write_text(render_svg(inst, S.frame, S, report), encoding="utf-8")
        click.echo(f"{len(S.points)} point(s), case {S.case.value}", err=True)
        return EXIT_OK

    _run(go)


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.argument("points", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=TAU_PIERCE, show_default=True)
def verify(instance, points, tol):
    """Check that every disk contains one of the points."""

    def go():
        from .io import load_instance, load_points
        from .verify import verify_piercing

        inst = load_instance(instance)
        pts = load_points(points)
        report = verify_piercing(inst, pts["points"], tol)
        click.echo(report.table())
        return EXIT_OK if report.ok else EXIT_FAIL

    _run(go)


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--vertices", type=int, required=True)
@click.option("--disks", type=int, required=True)
@click.option("--radii", type=click.Choice(["half", "tight"]), default="half", show_default=True,
              help="half: r_i = max_j d_ij/2 (1+rho); tight: shrunk until pairs touch.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen(seed, vertices, disks, radii, out):
    """Generate a random instance."""

    def go():
        from .generate import generate_instance
        from .io import save_instance

        if vertices < 3 or disks < 1:
            raise InvalidInput("need --vertices >= 3 and --disks >= 1")
        save_instance(generate_instance(seed, vertices, disks, radii=radii), out)
        return EXIT_OK

    _run(go)


@main.command()
@click.option("--instances", type=int, default=20, show_default=True, help="Random instances for the invariant run.")
def selftest(instances):
    """Re-evaluate the hand computations and run a short invariant sweep."""

    def go():
        from .selftest import run_invariant_sweep, selftest_paper_numerics

        report = selftest_paper_numerics()
        click.echo(report.text())
        sweep = run_invariant_sweep(instances)
        click.echo(sweep.text())
        ok = report.passed and sweep.passed
        click.echo("self-test " + ("passed" if ok else "FAILED"))
        return EXIT_OK if ok else EXIT_FAIL

    _run(go)


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--points", type=click.Path(dir_okay=False), help="Points JSON to overlay.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def render(instance, points, out):
    """Draw an instance (and optionally a piercing set) as SVG."""

    def go():
        from .io import load_instance, load_points
        from .svg import render_svg
        from .verify import verify_piercing

        inst = load_instance(instance)
        S = report = None
        if points:
            data = load_points(points)
            S = _Points(data["points"], data.get("provenance") or [str(i) for i in range(len(data["points"]))])
            report = verify_piercing(inst, S.points)
        Path(out).write_text(render_svg(inst, None, S, report), encoding="utf-8")
        return EXIT_OK

    _run(go)


class _Points:
    def __init__(self, points, provenance):
        self.points = points
        self.provenance = provenance


if __name__ == "__main__":
    main()
