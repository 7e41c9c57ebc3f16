import pytest
from pydantic import ValidationError

from plabic_workbench.config import load_config, load_defaults


def test_shipped_defaults(monkeypatch):
    monkeypatch.delenv("PLABIC_SEED", raising=False)
    monkeypatch.delenv("PLABIC_THREADS", raising=False)
    config = load_config()
    assert config.seed == 0
    assert config.trials == 25
    assert config.samples == 1000
    assert config.output_dir is None
    assert set(load_defaults()) == set(config.model_dump())


def test_environment_then_overrides(monkeypatch):
    monkeypatch.setenv("PLABIC_SEED", "17")
    monkeypatch.setenv("PLABIC_THREADS", "3")
    config = load_config()
    assert config.seed == 17
    assert config.threads == 3
    assert load_config({"seed": 5, "threads": None}).seed == 5
    assert load_config({"seed": 5, "threads": None}).threads == 3


def test_config_file(tmp_path, monkeypatch):
    monkeypatch.delenv("PLABIC_SEED", raising=False)
    path = tmp_path / "run.yaml"
    path.write_text("seed: 9\ntrials: 4\n")
    config = load_config(path=path)
    assert config.seed == 9
    assert config.trials == 4
    assert config.samples == 1000


def test_invalid_values_are_rejected(tmp_path, monkeypatch):
    monkeypatch.delenv("PLABIC_THREADS", raising=False)
    with pytest.raises(ValidationError):
        load_config({"trials": 0})
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ValueError):
        load_config(path=path)
