import json

from picolsd import generators
from picolsd.batch import BatchRow, BatchRunner, summarize
from picolsd.statefile import write_state
from picolsd.utils import state_files


def test_rows_follow_file_order(state_dir, tmp_path):
    write_state(state_dir / "c.json", generators.werner_state(0.9))
    write_state(state_dir / "a.json", generators.random_separable(2, 5))
    (state_dir / "b.json").write_text("[]")
    (state_dir / "notes.txt").write_text("ignored")

    paths = state_files(state_dir)
    assert [p.name for p in paths] == ["a.json", "b.json", "c.json"]

    out = tmp_path / "out"
    runner = BatchRunner(paths, samples=200, workers=3)
    results = runner.run(out_dir=out)
    rows = [row for row, _ in results]
    assert [r.name for r in rows] == ["a.json", "b.json", "c.json"]
    assert rows[0].case == "Separable" and rows[0].passed
    assert rows[1].error is not None and results[1][1] is None
    assert rows[2].case == "FullRank" and rows[2].passed
    assert len(runner.errors) == 1

    written = sorted(p.name for p in out.iterdir())
    assert written == ["a.report.json", "c.report.json"]
    assert json.loads((out / "c.report.json").read_text())["label"] == "c"


def test_summarize():
    rows = [
        BatchRow(name="a", passed=True, wk_max=1e-9, slackness=2e-9),
        BatchRow(name="b", passed=False, wk_max=3e-6, slackness=1e-9),
        BatchRow(name="c", error="parse error"),
    ]
    text = summarize(rows)
    assert text.startswith("3 files, 1 passed, 1 failed, 1 errors")
    assert "max wk residual 3.000e-06" in text
    assert "max slackness 2.000e-09" in text
    assert summarize([]).startswith("0 files, 0 passed")


def test_undecodable_and_crashing_files_become_error_rows(state_dir, monkeypatch):
    write_state(state_dir / "a.json", generators.werner_state(0.8))
    (state_dir / "b.json").write_bytes(b'{"matrix": "\xff\xfe"}')
    write_state(state_dir / "c.json", generators.werner_state(0.9))

    process = BatchRunner.process

    def flaky(self, i, path):
        if path.name == "c.json":
            raise RuntimeError("worker crashed")
        return process(self, i, path)

    monkeypatch.setattr(BatchRunner, "process", flaky)
    runner = BatchRunner(state_files(state_dir), samples=200, workers=2)
    rows = [row for row, _ in runner.run()]
    assert rows[0].passed
    assert rows[1].error.startswith("parse error: not valid UTF-8")
    assert rows[2].error == "worker crashed"
    assert len(runner.errors) == 2
