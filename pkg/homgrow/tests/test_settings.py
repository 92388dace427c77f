import pytest
from pydantic import ValidationError as PydanticValidationError

from homgrow.config.settings import load_settings, reset_settings
from homgrow.infrastructure.schemas import ExperimentConfig, model_dump, parse_model


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("HOMGROW_JOBS", "4")
    monkeypatch.setenv("HOMGROW_SEED", "99")
    monkeypatch.setenv("HOMGROW_CHECK_LAPLACIAN", "no")
    monkeypatch.setenv("HOMGROW_ALPHA_TAIL", "0.01")
    s = load_settings()
    assert s.jobs == 4
    assert s.seed == 99
    assert s.check_laplacian is False
    assert s.alpha_tail == 0.01


def test_settings_fall_back_on_bad_values(monkeypatch):
    monkeypatch.setenv("HOMGROW_JOBS", "-3")
    monkeypatch.setenv("HOMGROW_SEED", "not-a-number")
    monkeypatch.setenv("HOMGROW_TOLERANCE", "-1")
    monkeypatch.setenv("HOMGROW_CHECK_LAPLACIAN", "maybe")
    s = load_settings()
    assert s.jobs == 1
    assert s.seed == 20240611
    assert s.tolerance == 1e-9
    assert s.check_laplacian is True


def test_settings_are_cached_until_reset(monkeypatch):
    first = load_settings()
    monkeypatch.setenv("HOMGROW_SEED", "1234")
    assert load_settings() is first
    reset_settings()
    assert load_settings().seed == 1234


def test_experiment_config_validation():
    config = parse_model(ExperimentConfig, {"command": "tower", "levels": [1, 2], "primes": [2, 3], "jobs": 0})
    assert config.jobs == 1
    assert model_dump(config)["levels"] == [1, 2]
    for bad in (
        {"command": "tower", "primes": [4]},
        {"command": "tower", "levels": [0]},
        {"command": "tower", "format": "xml"},
        {"command": "verify", "threshold_alpha": 0},
        {"command": "verify", "count": -1},
    ):
        with pytest.raises(PydanticValidationError):
            parse_model(ExperimentConfig, bad)


def test_laplacian_check_is_gated_on_chain_rank(monkeypatch):
    monkeypatch.setenv("HOMGROW_LAPLACIAN_MAX_DIM", "16")
    s = load_settings()
    assert s.laplacian_max_dim == 16
    assert s.wants_laplacian_check((16, 16))
    assert not s.wants_laplacian_check((1, 17))
    assert s.wants_laplacian_check(())
