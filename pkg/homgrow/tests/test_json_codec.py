import json

import pytest

from homgrow.domain.errors import InvalidComplex, ParseError
from homgrow.infrastructure.examples import ExampleLibrary, parse_matrix_spec
from homgrow.infrastructure.json_codec import (
    complex_to_dict,
    dumps_complex,
    load_complex_file,
    loads_complex,
)

CIRCLE_DOC = {
    "m": 1,
    "top_degree": 1,
    "dims": [1, 1],
    "differentials": [[[[{"exp": [1], "coef": "1"}, {"exp": [0], "coef": "-1"}]]]],
}


def test_circle_document_matches_builtin():
    assert loads_complex(json.dumps(CIRCLE_DOC)) == ExampleLibrary().load_builtin("circle")


@pytest.mark.parametrize("name", ["point", "circle", "torus2", "torus3", "s1_cross", "mapping_torus:[[2,1],[1,1]]"])
def test_builtins_survive_a_document_round_trip(name):
    c = ExampleLibrary().load_builtin(name)
    text = dumps_complex(c)
    assert loads_complex(text) == c
    assert dumps_complex(loads_complex(text)) == text


def test_large_coefficients_are_kept_as_strings():
    doc = dict(CIRCLE_DOC)
    big = str(10 ** 40)
    doc["differentials"] = [[[[{"exp": [0], "coef": big}]]]]
    c = loads_complex(json.dumps(doc))
    assert complex_to_dict(c)["differentials"][0][0][0][0]["coef"] == big


def test_malformed_json_reports_the_line():
    with pytest.raises(ParseError) as exc:
        loads_complex('{\n  "m": 1,\n  "dims": [1,\n')
    assert exc.value.line is not None
    assert "line=" in str(exc.value)


def test_missing_field_reports_the_field():
    with pytest.raises(ParseError) as exc:
        loads_complex(json.dumps({"m": 1, "dims": [1]}))
    assert exc.value.field == "top_degree"


def test_shape_and_degree_mismatches():
    doc = dict(CIRCLE_DOC, top_degree=2)
    with pytest.raises(ParseError) as exc:
        loads_complex(json.dumps(doc))
    assert exc.value.field == "top_degree"

    doc = dict(CIRCLE_DOC, dims=[2, 1])
    with pytest.raises(ParseError) as exc:
        loads_complex(json.dumps(doc))
    assert exc.value.field == "differentials.0"

    doc = dict(CIRCLE_DOC, differentials=[[[[{"exp": [1, 0], "coef": "1"}]]]])
    with pytest.raises(ParseError):
        loads_complex(json.dumps(doc))

    with pytest.raises(ParseError):
        loads_complex(json.dumps([1, 2, 3]))


def test_non_integral_coefficient_is_rejected():
    doc = dict(CIRCLE_DOC, differentials=[[[[{"exp": [1], "coef": "1.5"}]]]])
    with pytest.raises(ParseError) as exc:
        loads_complex(json.dumps(doc))
    assert exc.value.field == "differentials.0.0.0.0.coef"


def test_differentials_must_compose_to_zero():
    one = [{"exp": [0], "coef": "1"}]
    doc = {"m": 1, "top_degree": 2, "dims": [1, 1, 1], "differentials": [[[one]], [[one]]]}
    with pytest.raises(InvalidComplex) as exc:
        loads_complex(json.dumps(doc))
    assert exc.value.degree == 1


def test_load_complex_file(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(CIRCLE_DOC), encoding="utf-8")
    assert load_complex_file(str(path)).dims == (1, 1)
    with pytest.raises(ParseError):
        load_complex_file(str(tmp_path / "missing.json"))


def test_example_library_names_and_errors():
    library = ExampleLibrary()
    names = library.builtin_names()
    assert "circle" in names and "torus2" in names
    assert len(library.all_builtins()) == 6
    with pytest.raises(ParseError) as exc:
        library.load_builtin("klein_bottle")
    assert exc.value.field == "example"


def test_parse_matrix_spec():
    assert parse_matrix_spec("[[2,1],[1,1]]").to_rows() == [[2, 1], [1, 1]]
    for bad in ("[[2,1],[1]]", "[[1.5]]", "[]", "[[2,1],", "[[true]]"):
        with pytest.raises(ParseError):
            parse_matrix_spec(bad)
