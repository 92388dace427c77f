from .examples import ExampleLibrary, parse_matrix_spec
from .json_codec import dumps_complex, load_complex_file, loads_complex
from .report_writer import PandasReportWriter
from .schemas import ComplexDoc, ExperimentConfig

__all__ = [
    "ExampleLibrary", "parse_matrix_spec",
    "dumps_complex", "loads_complex", "load_complex_file",
    "PandasReportWriter",
    "ComplexDoc", "ExperimentConfig",
]
