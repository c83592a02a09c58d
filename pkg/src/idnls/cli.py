"""Command-line interface.

Subcommands: validate, simulate, scatter, asymptote, compare, selftest.
Exit codes: 0 success, 2 config/validation failure, 3 numeric tolerance
failure.  The output directory from the config can be overridden with
the IDNLS_OUTPUT_DIR environment variable.
"""

from __future__ import annotations

import sys

import click

from . import harness, lattice, selftest as selftest_mod
from .errors import ConfigError, NumericsError

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _load(config_path: str) -> harness.RunConfig:
    try:
        return harness.load_config(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


@click.group()
def main() -> None:
    """Lattice simulation, direct scattering, and long-time asymptotics."""


@main.command()
@click.argument("config", type=click.Path())
def validate(config: str) -> None:
    """Validate a config file and report the initial-data norms."""
    cfg = _load(config)
    report = lattice.validate_initial(cfg.initial_state)
    click.echo(f"initial_data ({cfg.initial_kind}): {report}")
    click.echo(f"compare_points: {len(cfg.compare_points)} inside |v| <= {2 - cfg.v0:g}")


@main.command()
@click.argument("config", type=click.Path())
def simulate(config: str) -> None:
    """Integrate the lattice flow and write window snapshots."""
    cfg = _load(config)
    try:
        path = harness.write_simulation_csv(cfg, cfg.output_dir)
    except NumericsError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    click.echo(f"wrote {path}")


@main.command()
@click.argument("config", type=click.Path())
def scatter(config: str) -> None:
    """Emit the time-zero reflection coefficient on the circle grid."""
    cfg = _load(config)
    try:
        path = harness.write_reflection_csv(cfg, cfg.output_dir)
    except NumericsError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    click.echo(f"wrote {path}")


@main.command()
@click.argument("config", type=click.Path())
def asymptote(config: str) -> None:
    """Emit leading-term predictions at the compare points."""
    cfg = _load(config)
    try:
        path = harness.write_predictions_csv(cfg, cfg.output_dir)
    except NumericsError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    click.echo(f"wrote {path}")


@main.command()
@click.argument("config", type=click.Path())
def compare(config: str) -> None:
    """Simulate, predict, and tabulate errors at the compare points."""
    cfg = _load(config)
    try:
        result = harness.run_compare(cfg)
    except NumericsError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    harness.write_compare_csv(result, cfg.output_dir)
    harness.write_error_profile(result, cfg.output_dir)
    harness.write_summary(result, cfg.output_dir)
    harness.write_failures(result, cfg.output_dir)
    for line in result.summary_lines():
        click.echo(line)
    if result.failures:
        sys.exit(EXIT_NUMERIC)


@main.command()
def selftest() -> None:
    """Run the built-in invariant suite; nonzero exit on any failure."""
    results = selftest_mod.run_selftest()
    for res in results:
        click.echo(res.line())
    if not all(res.passed for res in results):
        sys.exit(EXIT_NUMERIC)


if __name__ == "__main__":
    main()
