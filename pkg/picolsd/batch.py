import concurrent.futures
import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

from tqdm import tqdm

import picolsd.logging
from picolsd.errors import PicolsdError
from picolsd.logging import logger
from picolsd.statefile import decompose_file, dumps


class BatchRow(NamedTuple):
    name: str
    label: Optional[str] = None
    case: Optional[str] = None
    S: Optional[float] = None
    passed: bool = False
    wk_max: Optional[float] = None
    slackness: Optional[float] = None
    error: Optional[str] = None


def _row(path, report):
    wk = report["wk_report"]
    return BatchRow(
        name=path.name,
        label=report["label"],
        case=report["case"],
        S=report["S"],
        passed=wk["passed"],
        wk_max=max(wk["wk1_residual"], wk["wk2_residual"]),
        slackness=wk["slackness_residual"],
    )


class BatchRunner:
    """Decompose every state file in `paths` on a thread pool. Rows come back
    in the order of `paths` regardless of completion order."""

    def __init__(self, paths, cfg=None, case="auto", samples=None, seed=0, workers=4):
        self.paths = list(paths)
        self.total = len(self.paths)
        self.cfg = cfg
        self.case = case
        self.samples = samples
        self.seed = seed
        self.workers = max(1, int(workers))
        self.errors = list()
        self.fut_to_path = dict()

    def process(self, i, path):
        logger.debug("Decomposing [{}/{}]: {}".format(i, self.total, path))
        report, _ = decompose_file(
            path, self.cfg, case=self.case, samples=self.samples, seed=self.seed
        )
        return report

    def reap_future(self, future, tq):
        path = self.fut_to_path[future]
        try:
            report = future.result()
        except Exception as ex:
            if not isinstance(ex, PicolsdError):
                logger.debug("Unexpected error on {}".format(path), exc_info=True)
            msg = "Failed on {}: {}".format(path.name, ex)
            self.errors.append(msg)
            return BatchRow(name=path.name, error=str(ex))
        finally:
            tq.update(1)
        return report

    def run(self, out_dir=None):
        """Returns a list of (row, report) pairs; report is None for files that
        failed."""
        logger.debug("Processing {} files.".format(self.total))
        disable_progressbar = picolsd.logging.debug
        results = dict()

        with tqdm(
            total=self.total, disable=disable_progressbar
        ) as tq, ThreadPoolExecutor(max_workers=self.workers) as tpe:
            for i, path in enumerate(self.paths, start=1):
                fut = tpe.submit(self.process, i, path)
                self.fut_to_path[fut] = path
            try:
                for fut in concurrent.futures.as_completed(self.fut_to_path.keys()):
                    results[self.fut_to_path[fut]] = self.reap_future(fut, tq)
            except KeyboardInterrupt as ex:
                tq.close()
                logger.warning("Stopping batch workers.")
                for fut in self.fut_to_path:
                    fut.cancel()
                raise ex from None

        # Report errors after the progress bar is closed.
        for error in self.errors:
            logger.error(error)

        out = []
        for path in self.paths:
            res = results[path]
            if isinstance(res, BatchRow):
                out.append((res, None))
                continue
            out.append((_row(path, res), res))
            if out_dir is not None:
                os.makedirs(out_dir, exist_ok=True)
                dest = os.path.join(out_dir, path.stem + ".report.json")
                with open(dest, "w", encoding="utf-8") as fd:
                    fd.write(dumps(res))
        return out


def summarize(rows):
    n = len(rows)
    passed = sum(1 for r in rows if r.passed)
    errors = sum(1 for r in rows if r.error is not None)
    wk = [r.wk_max for r in rows if r.wk_max is not None]
    slack = [r.slackness for r in rows if r.slackness is not None]
    return (
        "{} files, {} passed, {} failed, {} errors, "
        "max wk residual {:.3e}, max slackness {:.3e}".format(
            n,
            passed,
            n - passed - errors,
            errors,
            max(wk, default=0.0),
            max(slack, default=0.0),
        )
    )
