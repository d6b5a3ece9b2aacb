import click

from picolsd.cli.utils import pass_global_config
from picolsd.errors import InvalidParam


def _require_known(cfg, key):
    if key not in cfg.bottom:
        click.echo("Unknown key, known keys are: {}".format(", ".join(cfg.bottom)))
        raise click.exceptions.Exit(1)


@click.group()
def config_cli():
    """Inspect and change the stored solver and verification settings."""
    pass


@config_cli.command()
@pass_global_config
def show(cfg):
    """Print every setting, marking the ones left at their default."""
    for key in sorted(set(cfg.bottom) | set(cfg)):
        if key in cfg:
            click.echo("{}: {}".format(key, cfg[key]))
        else:
            click.echo("[default] {}: {}".format(key, cfg.bottom[key]))


@config_cli.command("set")
@click.argument("key")
@click.argument("value")
@pass_global_config
def _set(cfg, key, value):
    """Store a setting. The value must parse as the type of its default."""
    _require_known(cfg, key)
    try:
        value = cfg.coerce(key, value)
    except InvalidParam as ex:
        click.echo(str(ex))
        raise click.exceptions.Exit(1)
    cfg[key] = value


@config_cli.command()
@click.argument("key")
@pass_global_config
def get(cfg, key):
    """Print one setting."""
    if key not in cfg.bottom and key not in cfg:
        click.echo("No such item.")
        raise click.exceptions.Exit(1)
    click.echo(cfg[key])


@config_cli.command()
@click.argument("key")
@pass_global_config
def delete(cfg, key):
    """Reset a setting to its default."""
    if key not in cfg:
        click.echo("No such item.")
        raise click.exceptions.Exit(1)
    del cfg[key]


def register_config_cli(picolsd_cli):
    picolsd_cli.add_command(config_cli, name="config")
