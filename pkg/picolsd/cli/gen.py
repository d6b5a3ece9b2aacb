import click

from picolsd import generators
from picolsd.cli.utils import dies_on_error
from picolsd.errors import InvalidParam
from picolsd.statefile import dumps, state_document, write_state

KINDS = (
    "werner",
    "random",
    "separable",
    "product",
    "bell",
    "rank3-product-gamma",
    "rank3-entangled-gamma",
)


def make_state(kind, p, terms, rank, seed):
    if kind == "werner":
        if p is None:
            raise InvalidParam("werner needs --p")
        return generators.werner_state(p)
    if kind == "random":
        return generators.random_density(rank, seed)
    if kind == "separable":
        return generators.random_separable(terms, seed)
    if kind == "product":
        return generators.random_product_state(seed)
    if kind == "bell":
        return generators.bell_state()
    if kind == "rank3-product-gamma":
        return generators.random_rank3_product_gamma(seed)
    return generators.random_rank3_entangled_gamma(seed)


@click.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--p", type=float, default=None, help="Werner weight.")
@click.option("--terms", type=int, default=6, show_default=True)
@click.option("--rank", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--label", default=None, help="Label stored in the file.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@dies_on_error
def gen_cli(kind, p, terms, rank, seed, label, output):
    """Generate a test state of the given KIND."""
    rho = make_state(kind, p, terms, rank, seed)
    if label is None:
        label = kind if kind in ("werner", "bell") else "{}-{}".format(kind, seed)
    if output is None:
        click.echo(dumps(state_document(rho, label)), nl=False)
    else:
        write_state(output, rho, label)


def register_gen_cli(picolsd_cli):
    picolsd_cli.add_command(gen_cli, name="gen")
