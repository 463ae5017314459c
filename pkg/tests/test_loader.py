import math

import pytest

from tstruct_lab.core.complexes import cech_tilde, koszul, shift, stalk
from tstruct_lab.core.modules import FinModule
from tstruct_lab.core.tstructures import ThomasonFiltration
from tstruct_lab.errors import ParseError
from tstruct_lab.loaders.json_loader import DocumentLoader


def pointer_of(call, *args):
    with pytest.raises(ParseError) as info:
        call(*args)
    return info.value.pointer


def test_ring_errors_point_at_the_modulus():
    assert pointer_of(DocumentLoader.parse_ring, 1) == ""
    assert pointer_of(DocumentLoader.parse_ring, {"modulus": 1}, "/ring") == "/ring/modulus"
    assert pointer_of(DocumentLoader.parse_ring, {}, "/ring") == "/ring/modulus"
    assert DocumentLoader.parse_ring({"modulus": 12}).modulus == 12


def test_complex_literal(z12):
    doc = {
        "min_degree": -1,
        "modules": [{"factors": [12]}, {"factors": [12]}],
        "differentials": [{"matrix": [[2]]}],
    }
    X = DocumentLoader.parse_complex(z12, doc)
    assert (X.min_degree, X.max_degree) == (-1, 0)
    assert X.is_free
    assert X.diffs[0].matrix == ((2,),)


@pytest.mark.parametrize(
    "doc, pointer",
    [
        (
            {
                "min_degree": 0,
                "modules": [{"factors": [2]}, {"factors": [4]}],
                "differentials": [{"matrix": [[1]]}],
            },
            "/complex/differentials/0/matrix",
        ),
        (
            {
                "min_degree": 0,
                "modules": [{"factors": [12]}, {"factors": [12]}, {"factors": [12]}],
                "differentials": [{"matrix": [[1]]}, {"matrix": [[1]]}],
            },
            "/complex/differentials",
        ),
        ({"min_degree": 0}, "/complex/modules"),
        ({"modules": []}, "/complex/min_degree"),
        ({"min_degree": 0, "modules": [{"factors": [5]}]}, "/complex/modules/0/factors"),
        (
            {"min_degree": 0, "modules": [{"factors": [12]}, {"factors": [12]}]},
            "/complex/differentials",
        ),
    ],
)
def test_complex_error_pointers(z12, doc, pointer):
    assert pointer_of(DocumentLoader.parse_complex, z12, doc, "/complex") == pointer


def test_shorthand(z12, r12):
    assert DocumentLoader.expand_sugar(z12, "stalk(3,[1])") == stalk(
        FinModule.cyclic(z12, 3), 1
    )
    assert DocumentLoader.expand_sugar(z12, "K(2)[-1]") == shift(koszul(z12, [2]), -1)
    assert DocumentLoader.expand_sugar(z12, "koszul(2,3)") == koszul(z12, [2, 3])
    assert DocumentLoader.expand_sugar(z12, "cech(2)") == cech_tilde(z12, [2])
    assert DocumentLoader.expand_sugar(z12, "R[1]").min_degree == -1
    assert DocumentLoader.expand_sugar(z12, "stalk(2)") == stalk(FinModule.cyclic(z12, 2), 0)


@pytest.mark.parametrize("text", ["bogus(2)", "K", "stalk(x)", "K(2)[one]"])
def test_bad_shorthand(z12, text):
    assert pointer_of(DocumentLoader.parse_complex, z12, text, "/complex") == "/complex"


def test_complex_list_forms(z12):
    expected = [shift(koszul(z12, [2]), -1), koszul(z12, [3])]
    assert DocumentLoader.parse_complex_list(z12, "[K(2)[-1], K(3)[0]]") == expected
    assert DocumentLoader.parse_complex_list(z12, ["K(2)[-1]", "K(3)"]) == expected
    assert DocumentLoader.parse_complex_list(z12, "[]") == []
    assert pointer_of(DocumentLoader.parse_complex_list, z12, 7, "/gens") == "/gens"


def test_filtration_forms_agree(z12, phi):
    listed = {"cutoffs": [{"prime": 2, "top": 1}, {"prime": 3, "top": 0}]}
    mapped = {"cutoffs": {"2": 1, "3": 0}}
    jumps = {"jumps": [[0, [2, 3]], [1, [2]]]}
    for doc in (listed, mapped, jumps):
        assert DocumentLoader.parse_filtration(z12, doc) == phi


def test_filtration_with_infinite_tops(z12):
    doc = {"cutoffs": [{"prime": 2, "top": "+inf"}, {"prime": 3, "top": "-inf"}]}
    psi = DocumentLoader.parse_filtration(z12, doc)
    assert psi.cutoff(2) == math.inf
    assert psi.cutoff(3) == -math.inf
    assert DocumentLoader.serialize_filtration(psi) == doc


@pytest.mark.parametrize(
    "doc, pointer",
    [
        ({"cutoffs": [{"top": 1}]}, "/filtration/cutoffs/0/prime"),
        ({"cutoffs": [{"prime": 2}]}, "/filtration/cutoffs/0/top"),
        ({"cutoffs": 3}, "/filtration/cutoffs"),
        ({"cutoffs": {"5": 0}}, "/filtration"),
        ({"cutoffs": {"x": 0}}, "/filtration"),
        ({"jumps": [[0, [2]], [1, [2, 3]]]}, "/filtration"),
        ([1, 2], "/filtration"),
    ],
)
def test_filtration_error_pointers(z12, doc, pointer):
    assert pointer_of(DocumentLoader.parse_filtration, z12, doc, "/filtration") == pointer


def test_serialized_complex_parses_back(z12):
    X = shift(koszul(z12, [2, 3]), 1)
    assert DocumentLoader.parse_complex(z12, DocumentLoader.serialize_complex(X)) == X


def test_serialize_cutoff():
    assert DocumentLoader.serialize_cutoff(3) == 3
    assert DocumentLoader.serialize_cutoff(math.inf) == "+inf"
    assert DocumentLoader.serialize_cutoff(-math.inf) == "-inf"


def test_standard_filtration_serializes(z12):
    psi = ThomasonFiltration(z12, ((2, 0), (3, 0)))
    assert DocumentLoader.serialize_filtration(psi) == {
        "cutoffs": [{"prime": 2, "top": 0}, {"prime": 3, "top": 0}]
    }


def test_invalid_json():
    with pytest.raises(ParseError, match="invalid JSON"):
        DocumentLoader.loads("{not json")


def test_read_from_file(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text('{"ring": 12}')
    assert DocumentLoader.read(str(path)) == {"ring": 12}
    with pytest.raises(ParseError, match="cannot read input"):
        DocumentLoader.read(str(tmp_path / "missing.json"))
