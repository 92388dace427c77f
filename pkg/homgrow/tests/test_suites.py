import pytest

from homgrow.application.suites import DEFAULT_COUNTS, SuiteResult, run_suite, run_suites
from homgrow.config.settings import Settings
from homgrow.domain.enums import Suite


@pytest.fixture
def settings():
    return Settings(
        log_level="WARNING",
        log_file=None,
        jobs=1,
        seed=3,
        minor_budget=4096,
        check_laplacian=True,
        tolerance=1e-9,
        alpha_tail=5e-3,
        torsion_tolerance=1e-4,
    )


def test_every_suite_has_a_default_count():
    assert set(DEFAULT_COUNTS) == set(Suite)


@pytest.mark.parametrize(
    "suite,count",
    [
        (Suite.RHO_IDENTITY, 5),
        (Suite.FK_FACTORIZATION, 10),
        (Suite.SMITH, 10),
        (Suite.GROUP_HOMOLOGY, 4),
        (Suite.FILTRATION, 3),
        (Suite.BASE_CHANGE, 3),
        (Suite.MAPPING_TORUS, 2),
        (Suite.RANK_GRADIENT, 5),
    ],
)
def test_small_suites_pass(suite, count, settings):
    result = run_suite(suite, settings.seed, count, settings)
    assert result.ok, result.failures
    assert result.passed >= count


def test_suites_are_reproducible(settings):
    first = run_suites([Suite.SMITH, Suite.RANK_GRADIENT], 42, 4, settings)
    second = run_suites([Suite.SMITH, Suite.RANK_GRADIENT], 42, 4, settings)
    assert first == second


def test_suite_result_record():
    result = SuiteResult(Suite.SMITH, 4, 1, ("matrix #0: boom",))
    assert not result.ok
    assert result.as_record() == {"suite": "smith", "passed": 4, "failed": 1}
