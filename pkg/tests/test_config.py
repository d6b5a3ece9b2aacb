import json

import pytest

from picolsd.config import ConfigManager, OverlayDict, get_default_config
from picolsd.errors import InvalidParam
from picolsd.session import SOLVER_KEYS, Session


def test_overlay_falls_through_to_bottom():
    d = OverlayDict(bottom={"a": 1, "b": 2}, init={"b": 3})
    assert d["a"] == 1
    assert d["b"] == 3
    assert d.get("c", 4) == 4
    assert "a" not in d


def test_config_is_written_only_when_dirty(tmp_path):
    with ConfigManager(tmp_path) as cm:
        assert cm.global_config["solver.max_iter"] == 200
    assert not (tmp_path / "config.json").exists()

    with ConfigManager(tmp_path) as cm:
        cm.global_config["solver.max_iter"] = 50
    data = json.loads((tmp_path / "config.json").read_text())
    assert data == {"solver.max_iter": 50}

    with ConfigManager(tmp_path) as cm:
        assert cm.global_config["solver.max_iter"] == 50
        assert not cm.global_config.dirty
        del cm.global_config["solver.max_iter"]
        assert cm.global_config["solver.max_iter"] == 200
    assert json.loads((tmp_path / "config.json").read_text()) == {}


def test_typed_coerces_strings(tmp_path):
    with ConfigManager(tmp_path) as cm:
        cfg = cm.global_config
        cfg["solver.tol_gap"] = "1e-7"
        cfg["verify.samples"] = "250"
        assert cfg.typed("solver.tol_gap") == 1e-7
        assert cfg.typed("verify.samples") == 250
        assert cfg.typed("solver.step_fraction") == 0.98
        cfg["batch.workers"] = "many"
        with pytest.raises(InvalidParam):
            cfg.typed("batch.workers")


def test_defaults_are_complete():
    defaults = get_default_config()
    for key in SOLVER_KEYS:
        assert "solver." + key in defaults


def test_session_solver_config(tmp_path):
    with Session.new(root=tmp_path) as session:
        session.global_config["solver.max_iter"] = "30"
        cfg = session.solver_config(tol_gap=1e-6)
        assert cfg.max_iter == 30
        assert cfg.tol_gap == 1e-6
        assert cfg.tol_feas == 1e-9
        assert cfg.tol_slack == 1e-8
        assert session.setting("verify.samples") == 10000
        assert session.setting("verify.samples", 7) == 7


def test_root_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("PICOLSD_ROOT", str(tmp_path))
    with Session.new() as session:
        assert session.root == tmp_path


def test_unknown_keys_are_kept_as_stored(tmp_path):
    (tmp_path / "config.json").write_text(json.dumps({"extra": "1"}))
    with ConfigManager(tmp_path) as cm:
        assert cm.global_config.typed("extra") == "1"
        assert cm.global_config.get("missing") is None
    assert json.loads((tmp_path / "config.json").read_text()) == {"extra": "1"}


def test_coerce_leaves_config_untouched(tmp_path):
    with ConfigManager(tmp_path) as cm:
        cfg = cm.global_config
        assert cfg.coerce("solver.max_iter", "40") == 40
        assert cfg.coerce("solver.tol_slack", "1e-9") == 1e-9
        with pytest.raises(InvalidParam):
            cfg.coerce("batch.workers", "many")
        assert not cfg.dirty
    assert not (tmp_path / "config.json").exists()


def test_undecodable_config_file(tmp_path):
    (tmp_path / "config.json").write_bytes(b'{"solver.max_iter": "\xff"}')
    with pytest.raises(InvalidParam, match="corrupt"):
        with ConfigManager(tmp_path) as cm:
            cm.global_config
