import click

from picolsd.cli.utils import dies_on_error, pass_session, samples_option, seed_option
from picolsd.decomposition import extract_witness
from picolsd.lsd import CASES
from picolsd.qubits import to_magic
from picolsd.statefile import decompose_file, dumps
from picolsd.utils import die


def format_matrix(a, indent="    "):
    def entry(z):
        return "{:+.6f}{:+.6f}j".format(z.real, z.imag)

    return "\n".join(indent + "  ".join(entry(z) for z in row) for row in a)


def print_pretty(report, dec, basis):
    view = to_magic if basis == "magic" else (lambda a: a)
    wk = dec.residuals
    print("label: {}".format(report["label"]))
    print("case: {}".format(report["case"]))
    print("S: {!r}".format(report["S"]))
    print("entanglement measure: {!r}".format(report["entanglement_measure"]))
    if dec.theta is not None:
        print("theta: {!r}".format(dec.theta))
    print("rho_sep ({} basis):".format(basis))
    print(format_matrix(view(dec.rho_sep)))
    print("rho_pure ({} basis):".format(basis))
    print(format_matrix(view(dec.rho_pure)))
    if dec.pure_vector is not None:
        print("witness ({} basis):".format(basis))
        print(format_matrix(view(extract_witness(dec).w)))
    if report["solver"] is not None:
        s = report["solver"]
        print(
            "solver: {} after {} iterations, gap {:.3e}".format(
                s["status"], s["iterations"], s["gap"]
            )
        )
    print("residuals:")
    for k, v in wk.to_dict().items():
        print("    {}: {}".format(k, v))
    print("timing: {:.1f} ms".format(report["timing_ms"]))


@click.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--tol-gap", type=float, default=None, help="Duality gap tolerance.")
@click.option("--tol-feas", type=float, default=None, help="Dual residual tolerance.")
@click.option("--max-iter", type=int, default=None, help="Solver iteration limit.")
@samples_option
@seed_option
@click.option("--case", type=click.Choice(CASES), default="auto", show_default=True)
@click.option(
    "--output", type=click.Choice(["json", "pretty"]), default="json", show_default=True
)
@click.option(
    "--basis",
    type=click.Choice(["computational", "magic"]),
    default="computational",
    help="Basis of the matrices in pretty output.",
)
@pass_session
@dies_on_error
def decompose_cli(
    session, path, tol_gap, tol_feas, max_iter, samples, seed, case, output, basis
):
    """Decompose the state in PATH and print a report.

    Exits with 2 if the decomposition does not pass verification."""
    if output == "json" and basis != "computational":
        raise click.UsageError("--basis only applies to pretty output")
    cfg = session.solver_config(tol_gap=tol_gap, tol_feas=tol_feas, max_iter=max_iter)
    report, dec = decompose_file(
        path,
        cfg,
        case=case,
        samples=session.setting("verify.samples", samples),
        seed=session.setting("verify.seed", seed),
    )
    if output == "json":
        click.echo(dumps(report), nl=False)
    else:
        print_pretty(report, dec, basis)
    if not dec.residuals.passed:
        die(
            "verification failed: {}".format(
                ", ".join(dec.residuals.failures(dec.case))
            ),
            code=2,
        )


def register_decompose_cli(picolsd_cli):
    picolsd_cli.add_command(decompose_cli, name="decompose")
