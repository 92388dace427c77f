from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from ..config.settings import Settings, load_settings
from ..domain.entities.chain import AlphaData, HomologySummary
from ..domain.entities.laurent import LaurentChainComplex
from ..domain.entities.reports import RhoIdentityReport, TorsionGrowthReport, TowerReport
from ..domain.enums import OutputFormat, Suite
from ..domain.errors import ValidationError
from ..domain.ports import ComplexSource, ReportSink
from ..domain.services.chain_complex import alpha_log_dets, differential_determinants, homology, verify_rho_identity
from ..domain.services.group_ring import base_change
from ..domain.services.growth import probe_torsion_growth, run_tower
from ..domain.value_objects import QuotientSpec
from ..infrastructure.examples import MAPPING_TORUS_PREFIX, parse_matrix_spec
from ..infrastructure.schemas import ExperimentConfig
from ..utils.logging_utils import get_logger
from .suites import SuiteResult, run_suites

__all__ = [
    "parse_levels",
    "effective_settings",
    "HomologyDTO",
    "cmd_homology",
    "TowerDTO",
    "cmd_tower",
    "VerifyDTO",
    "cmd_verify",
    "ExportDTO",
    "cmd_export",
]

logger = get_logger("use_cases")


# ---------- Shared plumbing ----------

def parse_levels(levels: Sequence[int], pattern: Optional[str], m: int) -> List[QuotientSpec]:
    """Expand tower indices through a moduli pattern such as "i,i" or "i,1".

    Every entry of the pattern is either ``i`` (the tower index) or a fixed
    positive integer; the default pattern is ``i`` in all m coordinates.
    """
    tokens = [t.strip() for t in pattern.split(",")] if pattern else ["i"] * m
    if len(tokens) != m:
        raise ValidationError(f"moduli pattern {pattern!r} has {len(tokens)} entries, the complex needs {m}")
    for t in tokens:
        if t != "i" and not (t.isdigit() and int(t) >= 1):
            raise ValidationError(f"moduli pattern entry {t!r} must be 'i' or a positive integer")
    return [QuotientSpec(tuple(i if t == "i" else int(t) for t in tokens)) for i in levels]


def effective_settings(config: ExperimentConfig, settings: Optional[Settings] = None) -> Settings:
    """Settings with the per-run CLI overrides applied."""
    settings = settings or load_settings()
    overrides = {
        "seed": config.seed,
        "jobs": config.jobs,
        "alpha_tail": config.threshold_alpha,
        "torsion_tolerance": config.torsion_tolerance,
    }
    return dataclasses.replace(settings, **{k: v for k, v in overrides.items() if v is not None})


def _load_complex(config: ExperimentConfig, source: ComplexSource) -> LaurentChainComplex:
    if bool(config.input_path) == bool(config.example):
        raise ValidationError("give exactly one of --input and --example")
    if config.input_path:
        return source.load_file(config.input_path)
    return source.load_builtin(config.example)


# ---------- Homology of one level ----------

@dataclass(frozen=True, slots=True)
class HomologyDTO:
    quotient: QuotientSpec
    summary: HomologySummary
    identity: RhoIdentityReport
    alpha: AlphaData
    records: Sequence[Dict[str, object]]
    text: str


def _homology_records(
    quotient: QuotientSpec,
    summary: HomologySummary,
    identity: RhoIdentityReport,
    alpha: AlphaData,
    ln_det_c: Dict[int, float],
    primes: Sequence[int],
) -> List[Dict[str, object]]:
    records = []
    for h in summary:
        row: Dict[str, object] = {
            "moduli": str(quotient),
            "index": quotient.index,
            "degree": h.degree,
            "betti_q": h.betti_q,
        }
        for p in primes:
            row[f"betti_p_{p}"] = h.betti_mod_p[p]
        row.update({
            "invariant_factors": " ".join(str(d) for d in h.invariant_factors),
            "torsion_order": h.torsion_order,
            "d_hn": h.d_hn,
            "ln_tors": h.log_tors,
            "ln_det_c": ln_det_c.get(h.degree, 0.0),
            "ln_det_alpha": alpha.log_det_alpha(h.degree),
            "rho_z": identity.rho_z.log_value,
            "rho_2": identity.rho_2.log_value,
        })
        records.append(row)
    return records


def cmd_homology(
    config: ExperimentConfig,
    source: ComplexSource,
    sink: ReportSink,
    settings: Optional[Settings] = None,
) -> HomologyDTO:
    """
    Homology, rho^Z, rho^(2) and alpha data of a single level C[i].
    Without --levels the coinvariant complex Z (x)_{ZG} C is used.
    """
    settings = effective_settings(config, settings)
    c = _load_complex(config, source)
    if len(config.levels) > 1:
        raise ValidationError("homology works on a single level; use 'tower' for several")
    quotient = parse_levels(config.levels or [1], config.moduli_pattern, c.m)[0]
    cx = base_change(c, quotient).complex

    primes = tuple(config.primes)
    summary = homology(cx, primes)
    alpha = alpha_log_dets(cx)
    determinants = differential_determinants(cx, settings.minor_budget)
    identity = verify_rho_identity(
        cx,
        tolerance=settings.tolerance,
        check_laplacian=settings.wants_laplacian_check(cx.dims),
        budget=settings.minor_budget,
        alpha=alpha,
        dets=determinants,
    )
    dets = {n: d.log_value for n, d in determinants.items()}
    records = _homology_records(quotient, summary, identity, alpha, dets, primes)
    text = sink.write_records(records, OutputFormat(config.format), config.out)
    return HomologyDTO(quotient, summary, identity, alpha, records, text)


# ---------- Tower ----------

@dataclass(frozen=True, slots=True)
class TowerDTO:
    report: TowerReport
    torsion: Optional[TorsionGrowthReport]
    text: str


def cmd_tower(
    config: ExperimentConfig,
    source: ComplexSource,
    sink: ReportSink,
    settings: Optional[Settings] = None,
) -> TowerDTO:
    """
    Runs the tower and serializes it. Builtin mapping tori also get the
    torsion-growth report; degenerate levels there are flagged, not fatal.
    """
    settings = effective_settings(config, settings)
    c = _load_complex(config, source)
    if not config.levels:
        raise ValidationError("a tower needs --levels")
    levels = parse_levels(config.levels, config.moduli_pattern, c.m)
    report = run_tower(
        c,
        levels,
        primes=tuple(config.primes),
        max_degree=config.max_degree,
        jobs=settings.jobs,
        tolerance=settings.tolerance,
        check_laplacian=settings.check_laplacian,
        budget=settings.minor_budget,
        laplacian_max_dim=settings.laplacian_max_dim,
    )

    torsion = None
    example = (config.example or "").strip()
    if example.startswith(MAPPING_TORUS_PREFIX):
        a = parse_matrix_spec(example[len(MAPPING_TORUS_PREFIX):])
        torsion = probe_torsion_growth(a, [q.index for q in levels], tolerance=settings.torsion_tolerance)
        if torsion.skipped:
            logger.warning("det(A^i - I) = 0 at levels %s", list(torsion.skipped))
        logger.info(
            "ln M(A) = %.6f, final ln|tors H_0|/i gap %s", torsion.log_mahler, torsion.mahler_gap
        )
        report = dataclasses.replace(report, torsion=torsion)

    text = sink.write_tower(report, OutputFormat(config.format), config.out)
    return TowerDTO(report, torsion, text)


# ---------- Verification suites ----------

@dataclass(frozen=True, slots=True)
class VerifyDTO:
    results: Sequence[SuiteResult]
    text: str

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def cmd_verify(
    config: ExperimentConfig,
    sink: ReportSink,
    settings: Optional[Settings] = None,
) -> VerifyDTO:
    settings = effective_settings(config, settings)
    try:
        suites = [Suite(config.suite)] if config.suite else list(Suite)
    except ValueError as exc:
        raise ValidationError(f"unknown suite {config.suite!r}") from exc
    results = run_suites(suites, settings.seed, config.count, settings)
    text = sink.write_records([r.as_record() for r in results], OutputFormat(config.format), config.out)
    return VerifyDTO(results, text)


# ---------- Export ----------

@dataclass(frozen=True, slots=True)
class ExportDTO:
    chain_complex: LaurentChainComplex
    text: str


def cmd_export(
    config: ExperimentConfig,
    source: ComplexSource,
    sink: ReportSink,
) -> ExportDTO:
    """Writes a builtin (or re-validated file) as a JSON chain-complex document."""
    c = _load_complex(config, source)
    return ExportDTO(c, sink.write_complex(c, config.out))
