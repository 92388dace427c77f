"""
Tabular output with pandas: one CSV row per level x degree, or a JSON
document. Output is byte-stable for a fixed report.
"""
from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Mapping, Optional, Sequence

import pandas as pd

from ..domain.entities.laurent import LaurentChainComplex
from ..domain.entities.reports import TowerReport
from ..domain.enums import OutputFormat
from ..utils.logging_utils import get_logger
from .json_codec import dumps_complex

logger = get_logger("report_writer")

FLOAT_FORMAT = "%.12g"

_RAW_COLUMNS = ("d_hn", "ln_tors", "ln_det_c", "ln_det_alpha")


def tower_columns(primes: Sequence[int]) -> List[str]:
    raw = ["betti_q"] + [f"betti_p_{p}" for p in primes] + list(_RAW_COLUMNS) + ["rho_z", "rho_2"]
    return ["level_index", "index", "degree"] + raw + [f"{name}_per_index" for name in raw] + ["degenerate"]


def tower_frame(report: TowerReport) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = []
    for level in report.levels:
        idx = level.index
        for g in level.degrees:
            row: Dict[str, Any] = {
                "level_index": level.level_index,
                "index": idx,
                "degree": g.degree,
                "betti_q": g.betti_q,
            }
            for p in report.primes:
                row[f"betti_p_{p}"] = g.betti_mod_p[p]
            row.update({
                "d_hn": g.d_hn,
                "ln_tors": g.ln_tors,
                "ln_det_c": g.ln_det_c,
                "ln_det_alpha": g.ln_det_alpha,
                "rho_z": level.rho_z,
                "rho_2": level.rho_2,
            })
            for name in list(row)[3:]:
                row[f"{name}_per_index"] = row[name] / idx
            row["degenerate"] = report.is_degenerate(level)
            rows.append(row)
    return pd.DataFrame(rows, columns=tower_columns(report.primes))


def tower_document(report: TowerReport) -> Dict[str, Any]:
    return {
        "lambda": report.lam,
        "max_degree": report.max_degree,
        "primes": list(report.primes),
        "degenerate_levels": list(report.degenerate_levels),
        "torsion_growth": _torsion_document(report),
        "levels": [
            {
                "level_index": level.level_index,
                "moduli": list(level.quotient.moduli),
                "index": level.index,
                "rho_z": level.rho_z,
                "rho_2": level.rho_2,
                "alpha_alternating": level.alpha_alternating,
                "degenerate": report.is_degenerate(level),
                "degrees": [
                    {
                        "degree": g.degree,
                        "betti_q": g.betti_q,
                        "betti_mod_p": {str(p): b for p, b in sorted(g.betti_mod_p.items())},
                        "d_hn": g.d_hn,
                        "ln_tors": g.ln_tors,
                        "ln_det_c": g.ln_det_c,
                        "ln_det_alpha": g.ln_det_alpha,
                    }
                    for g in level.degrees
                ],
            }
            for level in report.levels
        ],
        "tails": [
            {
                "quantity": t.quantity,
                "degree": t.degree,
                "last": t.last,
                "extrapolated": t.extrapolated,
                "cauchy": t.cauchy,
            }
            for t in report.tails
        ],
    }


def _torsion_document(report: TowerReport) -> Optional[Dict[str, Any]]:
    if report.torsion is None:
        return None
    return {
        "log_mahler": report.torsion.log_mahler,
        "rows": [
            {"level": r.level, "ln_tors": r.ln_tors, "ln_oracle": r.ln_oracle, "degenerate": r.degenerate}
            for r in report.torsion.rows
        ],
    }


def _emit(text: str, out: Optional[str]) -> str:
    if out:
        folder = os.path.dirname(out)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        logger.info("wrote %s", out)
    return text


class PandasReportWriter:
    """ReportSink rendering with pandas (CSV) or json (JSON)."""

    def render_tower(self, report: TowerReport, fmt: OutputFormat) -> str:
        if OutputFormat(fmt) is OutputFormat.JSON:
            return json.dumps(tower_document(report), indent=2, sort_keys=True) + "\n"
        return tower_frame(report).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    def write_tower(self, report: TowerReport, fmt: OutputFormat, out: Optional[str] = None) -> str:
        return _emit(self.render_tower(report, fmt), out)

    def write_records(
        self,
        records: Sequence[Mapping[str, object]],
        fmt: OutputFormat,
        out: Optional[str] = None,
    ) -> str:
        if OutputFormat(fmt) is OutputFormat.JSON:
            text = json.dumps([dict(r) for r in records], indent=2, sort_keys=True, default=str) + "\n"
        else:
            frame = pd.DataFrame([dict(r) for r in records])
            text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return _emit(text, out)

    def write_complex(self, complex_: LaurentChainComplex, out: Optional[str] = None) -> str:
        return _emit(dumps_complex(complex_), out)


__all__ = ["PandasReportWriter", "tower_columns", "tower_frame", "tower_document", "FLOAT_FORMAT"]
