"""
JSON documents for chain complexes over Z[Z^m].

    {"m": 1, "top_degree": 1, "dims": [1, 1],
     "differentials": [[[[{"exp": [1], "coef": "1"}, {"exp": [0], "coef": "-1"}]]]]}

``differentials[k]`` is c_{k+1} given row by row; every entry is a list of
terms; coefficients are decimal strings so large integers survive.
"""
from __future__ import annotations

import json
from typing import Any, List

from pydantic import ValidationError as PydanticValidationError

from ..domain.entities.laurent import LaurentChainComplex, LaurentMatrix, LaurentPoly
from ..domain.errors import ParseError
from ..utils.logging_utils import get_logger
from .schemas import ComplexDoc, parse_model

logger = get_logger("json_codec")


# ---- encode

def _poly_doc(p: LaurentPoly) -> List[dict]:
    return [{"exp": list(exp), "coef": str(c)} for exp, c in p.terms]


def complex_to_dict(c: LaurentChainComplex) -> dict:
    diffs = []
    for d in c.differentials:
        diffs.append([[_poly_doc(d[i, j]) for j in range(d.cols)] for i in range(d.rows)])
    return {
        "m": c.m,
        "top_degree": c.top_degree,
        "dims": list(c.dims),
        "differentials": diffs,
    }


def dumps_complex(c: LaurentChainComplex) -> str:
    return json.dumps(complex_to_dict(c), indent=2, sort_keys=True) + "\n"


# ---- decode

def _error_field(exc: PydanticValidationError) -> str:
    errors = exc.errors()
    if not errors:
        return ""
    return ".".join(str(x) for x in errors[0]["loc"])


def complex_from_dict(data: Any) -> LaurentChainComplex:
    if not isinstance(data, dict):
        raise ParseError("chain complex document must be a JSON object")
    try:
        doc = parse_model(ComplexDoc, data)
    except PydanticValidationError as exc:
        raise ParseError(f"invalid chain complex document: {exc}", field=_error_field(exc)) from exc

    if doc.top_degree != len(doc.dims) - 1:
        raise ParseError(
            f"top_degree {doc.top_degree} does not match {len(doc.dims)} ranks", field="top_degree"
        )
    if len(doc.differentials) != doc.top_degree:
        raise ParseError(
            f"expected {doc.top_degree} differentials, got {len(doc.differentials)}", field="differentials"
        )

    matrices = []
    for k, rows in enumerate(doc.differentials):
        where = f"differentials.{k}"
        shape = (doc.dims[k], doc.dims[k + 1])
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ParseError(f"c_{k + 1} must have shape {shape}", field=where)
        entries = []
        for i, row in enumerate(rows):
            for j, terms in enumerate(row):
                data_terms = []
                for t in terms:
                    if len(t.exp) != doc.m:
                        raise ParseError(
                            f"exponent {t.exp} needs {doc.m} entries", field=f"{where}.{i}.{j}"
                        )
                    data_terms.append((tuple(t.exp), int(t.coef)))
                entries.append(LaurentPoly(doc.m, tuple(data_terms)))
        matrices.append(LaurentMatrix(shape[0], shape[1], doc.m, tuple(entries)))
    # c_n c_{n+1} = 0 is checked here and raises InvalidComplex with the degree
    return LaurentChainComplex(doc.m, tuple(doc.dims), tuple(matrices))


def loads_complex(text: str) -> LaurentChainComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
    return complex_from_dict(data)


def load_complex_file(path: str) -> LaurentChainComplex:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    logger.debug("loading chain complex from %s", path)
    return loads_complex(text)


__all__ = ["complex_to_dict", "dumps_complex", "complex_from_dict", "loads_complex", "load_complex_file"]
