from pathlib import Path

import click

from picolsd.batch import BatchRunner, summarize
from picolsd.cli.utils import dies_on_error, pass_session, samples_option, seed_option
from picolsd.lsd import CASES
from picolsd.utils import die, state_files


def _fmt(x, spec):
    return "-" if x is None else format(x, spec)


@click.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--out-dir", type=click.Path(file_okay=False), default=None)
@click.option("--case", type=click.Choice(CASES), default="auto", show_default=True)
@samples_option
@seed_option
@pass_session
@dies_on_error
def batch_cli(session, directory, workers, out_dir, case, samples, seed):
    """Decompose every state file in DIRECTORY.

    Files are processed concurrently; rows are printed sorted by file name."""
    runner = BatchRunner(
        state_files(Path(directory)),
        cfg=session.solver_config(),
        case=case,
        samples=session.setting("verify.samples", samples),
        seed=session.setting("verify.seed", seed),
        workers=session.setting("batch.workers", workers),
    )
    results = runner.run(out_dir=out_dir)
    rows = [row for row, _ in results]
    for row in rows:
        if row.error is not None:
            print("{}\tERROR\t{}".format(row.name, row.error))
            continue
        print(
            "{}\t{}\t{}\t{}\t{}\t{}".format(
                row.name,
                row.case,
                _fmt(row.S, ".10f"),
                "pass" if row.passed else "FAIL",
                _fmt(row.wk_max, ".3e"),
                _fmt(row.slackness, ".3e"),
            )
        )
    print(summarize(rows))
    if not all(row.passed for row in rows):
        die("batch had failures", code=2)


def register_batch_cli(picolsd_cli):
    picolsd_cli.add_command(batch_cli, name="batch")
