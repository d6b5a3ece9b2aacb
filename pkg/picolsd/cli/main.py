from functools import partial
from pathlib import Path

import click

from picolsd import logging
from picolsd.logging import logger
from picolsd.session import Session


def print_version(printer):
    import platform

    import numpy

    from picolsd import __version__

    printer("picolsd, version {}".format(__version__))
    printer("Python {}, numpy {}".format(platform.python_version(), numpy.__version__))


def click_print_version(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return

    print_version(click.echo)
    ctx.exit()


@click.group()
@click.option("--debug/--no-debug", default=None)
@click.option("-r", "--root", help="Application data directory.", default=None)
@click.option(
    "--version",
    is_flag=True,
    callback=click_print_version,
    expose_value=False,
    is_eager=True,
)
@click.pass_context
def picolsd_cli(ctx: click.Context, debug, root):
    """picolsd computes optimal Lewenstein-Sanpera decompositions of
    two-qubit states."""
    logging.initialize(debug)

    if debug:
        print_version(logger.debug)

    if root is not None:
        root = Path(root).resolve()

    session_cm = Session.new(root=root, debug=debug)
    session = session_cm.__enter__()
    ctx.call_on_close(partial(session_cm.__exit__, None, None, None))

    ctx.obj = session
