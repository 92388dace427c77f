"""
Builtin example library: named Z[Z^m]-chain complexes plus the inline
mapping-torus family ``mapping_torus:[[a,b],[c,d]]``.
"""
from __future__ import annotations

import json
from typing import Callable, Dict, List, Sequence, Tuple

from ..domain.entities.laurent import LaurentChainComplex
from ..domain.entities.matrix import IntMatrix
from ..domain.errors import ParseError
from ..domain.services.group_ring import (
    circle_complex,
    mapping_torus_complex,
    point_complex,
    product_with_circle,
    sphere_complex,
    torus_complex,
)
from .json_codec import load_complex_file

MAPPING_TORUS_PREFIX = "mapping_torus:"

_BUILTINS: Dict[str, Callable[[], LaurentChainComplex]] = {
    "point": point_complex,
    "circle": circle_complex,
    "torus2": lambda: torus_complex(2),
    "torus3": lambda: torus_complex(3),
    "s1_cross": lambda: product_with_circle(sphere_complex(2)),
}


def parse_matrix_spec(text: str) -> IntMatrix:
    """'[[2,1],[1,1]]' -> IntMatrix; ParseError on anything that is not a square integer array."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"mapping torus matrix is not valid JSON: {exc.msg}", field="example") from exc
    if (
        not isinstance(rows, list)
        or not rows
        or not all(isinstance(r, list) and len(r) == len(rows) for r in rows)
        or not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r)
    ):
        raise ParseError("mapping torus matrix must be a non-empty square integer array", field="example")
    return IntMatrix.from_rows(rows)


class ExampleLibrary:
    """ComplexSource over the builtin names and JSON files."""

    def builtin_names(self) -> Sequence[str]:
        return sorted(_BUILTINS) + [MAPPING_TORUS_PREFIX + "[[a,b],[c,d]]"]

    def load_builtin(self, name: str) -> LaurentChainComplex:
        name = name.strip()
        if name.startswith(MAPPING_TORUS_PREFIX):
            return mapping_torus_complex(parse_matrix_spec(name[len(MAPPING_TORUS_PREFIX):]))
        factory = _BUILTINS.get(name)
        if factory is None:
            raise ParseError(
                f"unknown example {name!r}; choose from {', '.join(self.builtin_names())}",
                field="example",
            )
        return factory()

    def load_file(self, path: str) -> LaurentChainComplex:
        return load_complex_file(path)

    def all_builtins(self) -> List[Tuple[str, LaurentChainComplex]]:
        """(name, complex) for every named builtin plus one mapping torus."""
        out = [(name, factory()) for name, factory in sorted(_BUILTINS.items())]
        cat = MAPPING_TORUS_PREFIX + "[[2,1],[1,1]]"
        out.append((cat, self.load_builtin(cat)))
        return out


__all__ = ["ExampleLibrary", "parse_matrix_spec", "MAPPING_TORUS_PREFIX"]
