"""``shell-spectra`` command line entry point."""
from __future__ import annotations

import logging
import sys

import click

from ..errors import ShellSpectraError
from .config import EXPERIMENTS, default_config, load_config
from .experiments import run


def _command(name):
    @click.command(name=name, help=f"Run the {name} experiment.")
    @click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                  help="TOML file overriding the experiment defaults.")
    @click.option("--slow", is_flag=True, help="Full-scale settings (long runs).")
    @click.option("--out", type=click.Path(file_okay=False), help="Output directory.")
    @click.option("-v", "--verbose", is_flag=True)
    def cmd(config_path, slow, out, verbose):
        logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        try:
            cfg = (load_config(config_path, name, slow) if config_path
                   else default_config(name, slow))
            if out:
                cfg = cfg.with_(out=out)
            result = run(cfg)
            paths = result.write(cfg.out)
        except ShellSpectraError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        for key, value in sorted(result.summary.items()):
            click.echo(f"{key} = {value}")
        click.echo(f"wrote {len(paths)} files to {cfg.out}")

    return cmd


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Stochastic shell eigenvalue experiments."""


for _name in EXPERIMENTS:
    main.add_command(_command(_name))
