import dataclasses
import io
import json

import pandas as pd
import pytest

from homgrow.domain.entities.reports import TorsionGrowthReport, TorsionGrowthRow
from homgrow.domain.enums import OutputFormat
from homgrow.domain.services.group_ring import circle_complex
from homgrow.domain.services.growth import default_levels, run_tower
from homgrow.infrastructure.json_codec import loads_complex
from homgrow.infrastructure.report_writer import PandasReportWriter, tower_columns, tower_frame


@pytest.fixture(scope="module")
def circle_report():
    return run_tower(circle_complex(), default_levels(1, 3), primes=(2, 3))


def test_tower_columns_layout():
    cols = tower_columns((2,))
    assert cols[:4] == ["level_index", "index", "degree", "betti_q"]
    assert "betti_p_2" in cols and "betti_p_2_per_index" in cols
    assert cols[-2:] == ["rho_2_per_index", "degenerate"]


def test_tower_frame_has_one_row_per_level_and_degree(circle_report):
    frame = tower_frame(circle_report)
    assert len(frame) == 3 * 2
    assert list(frame.columns) == tower_columns((2, 3))
    last = frame.iloc[-1]
    assert last["index"] == 4
    assert last["betti_q_per_index"] == pytest.approx(0.25)


def test_csv_output_is_deterministic(circle_report):
    writer = PandasReportWriter()
    first = writer.render_tower(circle_report, OutputFormat.CSV)
    second = writer.render_tower(circle_report, OutputFormat.CSV)
    assert first == second
    assert "\r" not in first
    parsed = pd.read_csv(io.StringIO(first))
    assert list(parsed["degree"]) == [0, 1, 0, 1, 0, 1]


def test_json_output_structure(circle_report):
    doc = json.loads(PandasReportWriter().render_tower(circle_report, OutputFormat.JSON))
    assert doc["lambda"] == pytest.approx(8.0)
    assert doc["primes"] == [2, 3]
    assert [level["index"] for level in doc["levels"]] == [1, 2, 4]
    assert doc["levels"][2]["degrees"][1]["betti_mod_p"] == {"2": 1, "3": 1}
    assert {t["quantity"] for t in doc["tails"]} >= {"betti_q", "rho_2"}


def test_write_tower_to_file(tmp_path, circle_report):
    out = tmp_path / "nested" / "tower.csv"
    text = PandasReportWriter().write_tower(circle_report, OutputFormat.CSV, str(out))
    assert out.read_text(encoding="utf-8") == text


def test_write_records_csv_and_json():
    writer = PandasReportWriter()
    records = [{"suite": "smith", "passed": 3, "failed": 0}]
    csv_text = writer.write_records(records, OutputFormat.CSV)
    assert csv_text.splitlines() == ["suite,passed,failed", "smith,3,0"]
    assert json.loads(writer.write_records(records, OutputFormat.JSON)) == records


def test_write_complex_round_trips():
    text = PandasReportWriter().write_complex(circle_complex())
    assert loads_complex(text) == circle_complex()


def test_degenerate_levels_are_flagged_in_band(circle_report):
    torsion = TorsionGrowthReport(
        log_mahler=0.0,
        rows=(TorsionGrowthRow(1, 0.0, 0.0), TorsionGrowthRow(2, None, None, degenerate=True)),
    )
    report = dataclasses.replace(circle_report, torsion=torsion)
    assert report.degenerate_levels == (2,)

    frame = tower_frame(report)
    assert list(frame.loc[frame["index"] == 2, "degenerate"]) == [True, True]
    assert not frame.loc[frame["index"] != 2, "degenerate"].any()

    doc = json.loads(PandasReportWriter().render_tower(report, OutputFormat.JSON))
    assert doc["degenerate_levels"] == [2]
    assert [level["degenerate"] for level in doc["levels"]] == [False, True, False]
    assert doc["torsion_growth"]["rows"][1] == {"level": 2, "ln_tors": None, "ln_oracle": None, "degenerate": True}


def test_plain_tower_has_no_degenerate_levels(circle_report):
    doc = json.loads(PandasReportWriter().render_tower(circle_report, OutputFormat.JSON))
    assert doc["degenerate_levels"] == []
    assert doc["torsion_growth"] is None
    assert not tower_frame(circle_report)["degenerate"].any()
