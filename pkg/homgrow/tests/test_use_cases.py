import json
import math

import pytest

from homgrow.application.use_cases import (
    cmd_export,
    cmd_homology,
    cmd_tower,
    cmd_verify,
    effective_settings,
    parse_levels,
)
from homgrow.config.settings import Settings
from homgrow.domain.enums import Suite
from homgrow.domain.errors import ParseError, ValidationError
from homgrow.domain.value_objects import QuotientSpec
from homgrow.infrastructure.examples import ExampleLibrary
from homgrow.infrastructure.json_codec import loads_complex
from homgrow.infrastructure.report_writer import PandasReportWriter
from homgrow.infrastructure.schemas import ExperimentConfig, parse_model


@pytest.fixture
def settings():
    return Settings(
        log_level="WARNING",
        log_file=None,
        jobs=1,
        seed=7,
        minor_budget=4096,
        check_laplacian=True,
        tolerance=1e-9,
        alpha_tail=5e-3,
        torsion_tolerance=1e-4,
    )


def _config(**data):
    return parse_model(ExperimentConfig, data)


def test_parse_levels_patterns():
    assert parse_levels([1, 2], None, 2) == [QuotientSpec((1, 1)), QuotientSpec((2, 2))]
    assert parse_levels([3], "i,1", 2) == [QuotientSpec((3, 1))]
    assert parse_levels([4], "2,i", 2) == [QuotientSpec((2, 4))]
    with pytest.raises(ValidationError):
        parse_levels([2], "i", 2)
    with pytest.raises(ValidationError):
        parse_levels([2], "i,x", 2)
    with pytest.raises(ValidationError):
        parse_levels([2], "i,0", 2)


def test_effective_settings_applies_only_given_overrides(settings):
    config = _config(command="verify", seed=11, threshold_alpha=0.01)
    merged = effective_settings(config, settings)
    assert merged.seed == 11
    assert merged.alpha_tail == 0.01
    assert merged.jobs == settings.jobs
    assert merged.torsion_tolerance == settings.torsion_tolerance


def test_cmd_homology_of_circle_level(settings):
    config = _config(command="homology", example="circle", levels=[3], primes=[2], format="json")
    dto = cmd_homology(config, ExampleLibrary(), PandasReportWriter(), settings)
    assert [h.betti_q for h in dto.summary] == [1, 1]
    assert dto.identity.lhs == pytest.approx(-math.log(3))
    rows = json.loads(dto.text)
    assert [row["degree"] for row in rows] == [0, 1]
    assert rows[1]["ln_det_alpha"] == pytest.approx(0.5 * math.log(3))
    assert rows[0]["betti_p_2"] == 1
    assert rows[0]["rho_2"] == pytest.approx(math.log(3))


def test_cmd_homology_defaults_to_coinvariants(settings):
    config = _config(command="homology", example="mapping_torus:[[2,1],[1,1]]")
    dto = cmd_homology(config, ExampleLibrary(), PandasReportWriter(), settings)
    assert dto.quotient == QuotientSpec((1,))
    # det(A - I) = -1: the coinvariant complex is acyclic
    assert dto.summary[0].torsion_order == 1 and dto.summary[0].betti_q == 0


def test_cmd_homology_input_errors(settings):
    library, writer = ExampleLibrary(), PandasReportWriter()
    with pytest.raises(ValidationError):
        cmd_homology(_config(command="homology"), library, writer, settings)
    with pytest.raises(ValidationError):
        cmd_homology(_config(command="homology", example="circle", levels=[2, 4]), library, writer, settings)
    with pytest.raises(ParseError):
        cmd_homology(_config(command="homology", example="nope"), library, writer, settings)


def test_cmd_tower_csv(settings):
    config = _config(command="tower", example="circle", levels=[1, 2, 4])
    dto = cmd_tower(config, ExampleLibrary(), PandasReportWriter(), settings)
    assert [level.index for level in dto.report.levels] == [1, 2, 4]
    assert dto.torsion is None
    assert dto.text.splitlines()[0].startswith("level_index,index,degree,betti_q")
    assert len(dto.text.splitlines()) == 1 + 3 * 2


def test_cmd_tower_mapping_torus_reports_torsion_growth(settings):
    config = _config(command="tower", example="mapping_torus:[[2,1],[1,1]]", levels=[1, 2, 3])
    dto = cmd_tower(config, ExampleLibrary(), PandasReportWriter(), settings)
    assert dto.torsion is not None
    assert dto.torsion.rows[1].ln_tors == pytest.approx(math.log(5) / 2)
    assert dto.report.series("ln_tors", 0)[1] == pytest.approx(math.log(5) / 2)


def test_cmd_tower_flags_degenerate_mapping_torus_levels(settings):
    # det(A^2 - I) = 0 for A = -1: level 2 keeps its row and carries the flag
    config = _config(command="tower", example="mapping_torus:[[-1]]", levels=[1, 2, 3])
    dto = cmd_tower(config, ExampleLibrary(), PandasReportWriter(), settings)
    assert [level.index for level in dto.report.levels] == [1, 2, 3]
    assert dto.report.degenerate_levels == (2,)
    lines = dto.text.splitlines()
    assert lines[0].endswith(",degenerate")
    flags = [line.rsplit(",", 1)[1] for line in lines[1:]]
    assert flags == ["False", "False", "True", "True", "False", "False"]

    config = _config(command="tower", example="mapping_torus:[[-1]]", levels=[1, 2, 3], format="json")
    doc = json.loads(cmd_tower(config, ExampleLibrary(), PandasReportWriter(), settings).text)
    assert doc["degenerate_levels"] == [2]
    assert doc["torsion_growth"]["rows"][0]["ln_tors"] == pytest.approx(math.log(2))


def test_cmd_tower_needs_levels(settings):
    with pytest.raises(ValidationError):
        cmd_tower(_config(command="tower", example="circle"), ExampleLibrary(), PandasReportWriter(), settings)


def test_cmd_verify_single_suite(settings):
    config = _config(command="verify", suite="rank-gradient", count=3, format="json")
    dto = cmd_verify(config, PandasReportWriter(), settings)
    assert dto.ok
    assert [r.suite for r in dto.results] == [Suite.RANK_GRADIENT]
    assert json.loads(dto.text) == [{"suite": "rank-gradient", "passed": 3, "failed": 0}]


def test_cmd_verify_unknown_suite(settings):
    with pytest.raises(ValidationError):
        cmd_verify(_config(command="verify", suite="nope"), PandasReportWriter(), settings)


def test_cmd_export_writes_a_loadable_document(tmp_path):
    out = tmp_path / "torus2.json"
    config = _config(command="export", example="torus2", out=str(out))
    dto = cmd_export(config, ExampleLibrary(), PandasReportWriter())
    assert loads_complex(out.read_text(encoding="utf-8")) == dto.chain_complex
    assert dto.chain_complex.dims == (1, 2, 1)
