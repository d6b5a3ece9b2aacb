import click

from picolsd.cli.utils import dies_on_error, pass_session, samples_option, seed_option
from picolsd.errors import VerificationError
from picolsd.qubits import orthogonal_pure_state
from picolsd.statefile import decomposition_from_report, read_report, read_state
from picolsd.utils import die
from picolsd.verify import certify


@click.command()
@click.argument("state", type=click.Path(dir_okay=False))
@click.argument("report", type=click.Path(dir_okay=False))
@samples_option
@seed_option
@pass_session
@dies_on_error
def verify_cli(session, state, report, samples, seed):
    """Recompute every residual of REPORT against the state in STATE."""
    _, rho = read_state(state)
    data = read_report(report)
    try:
        dec = decomposition_from_report(rho, data)
    except VerificationError as e:
        die("verification failed: {}".format(e), code=2)
    gamma = orthogonal_pure_state(rho) if dec.case.is_rank3 else None
    wk = certify(
        rho,
        dec,
        n_samples=session.setting("verify.samples", samples),
        seed=session.setting("verify.seed", seed),
        gamma=gamma,
    )
    for k, v in wk.to_dict().items():
        print("{}: {}".format(k, v))
    if not wk.passed:
        die("verification failed: {}".format(", ".join(wk.failures(dec.case))), code=2)


def register_verify_cli(picolsd_cli):
    picolsd_cli.add_command(verify_cli, name="verify")
