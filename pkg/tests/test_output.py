import json

from dependencies import OutputFormat
from output import flatten, render, render_table


DOCUMENT = {"n": 6, "family": {"family": "HEEGNER", "verdict": "CONGRUENT"}, "factors": [2, 3], "bound": None}


def test_flatten_nested_documents():
    assert flatten(DOCUMENT) == [
        ("n", 6),
        ("family.family", "HEEGNER"),
        ("family.verdict", "CONGRUENT"),
        ("factors", [2, 3]),
        ("bound", None),
    ]


def test_render_formats():
    assert json.loads(render(DOCUMENT, OutputFormat.JSON)) == DOCUMENT
    text = render(DOCUMENT, OutputFormat.TEXT).splitlines()
    assert text[1].split() == ["family.family", "HEEGNER"]
    assert text[3].split() == ["factors", "2", "3"]
    assert text[4].split() == ["bound", "-"]
    csv = render(DOCUMENT, OutputFormat.CSV).splitlines()
    assert csv[0] == "field,value"
    assert csv[4] == 'factors,"[2, 3]"'
    assert csv[5] == "bound,"


def test_render_table_aligns_columns():
    table = render_table(["id", "kind"], [[1, "analysis"], [10, "census"]]).splitlines()
    assert table == ["id  kind", "1   analysis", "10  census"]
