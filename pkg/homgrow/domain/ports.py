from __future__ import annotations

from typing import Mapping, Optional, Protocol, Sequence

from .entities.laurent import LaurentChainComplex
from .entities.reports import TowerReport
from .enums import OutputFormat

__all__ = ["ComplexSource", "ReportSink"]


# ---- inputs

class ComplexSource(Protocol):
    def load_file(self, path: str) -> LaurentChainComplex: ...
    def load_builtin(self, name: str) -> LaurentChainComplex: ...
    def builtin_names(self) -> Sequence[str]: ...


# ---- outputs

class ReportSink(Protocol):
    def write_tower(
        self, report: TowerReport, fmt: OutputFormat, out: Optional[str] = None
    ) -> str: ...

    def write_records(
        self,
        records: Sequence[Mapping[str, object]],
        fmt: OutputFormat,
        out: Optional[str] = None,
    ) -> str: ...

    def write_complex(self, complex_: LaurentChainComplex, out: Optional[str] = None) -> str: ...
