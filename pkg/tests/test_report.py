"""Tests for lmodule_engine.report module."""

import json
from fractions import Fraction

import pytest
from rich.console import Console

from lmodule_engine import __version__
from lmodule_engine.kostant import kostant_cohomology
from lmodule_engine.lmodule_core import build_igstar
from lmodule_engine.microsupport import essential_micro_support, vanishing_bound
from lmodule_engine.parabolics import borel, whole_group
from lmodule_engine.report import (
    SCHEMA_VERSION,
    document,
    input_hash,
    kostant_result,
    microsupport_result,
    render_table,
    to_json,
    vanishing_result,
)
from lmodule_engine.root_data import build_root_system


@pytest.fixture(scope="module")
def a1():
    return build_root_system("A1")


@pytest.fixture
def sample_doc(a1):
    result = kostant_result(kostant_cohomology(borel(a1), whole_group(a1), (1,)), "P=[]", "P=*")
    return document("kostant", {"cartan_type": "A1", "weight": ["1"]}, result, "ok", 0.12345)


class TestDocument:
    def test_envelope(self, sample_doc):
        assert sample_doc["schema"] == SCHEMA_VERSION
        assert sample_doc["engine_version"] == __version__
        assert sample_doc["elapsed_seconds"] == 0.123
        assert sample_doc["input_hash"] == input_hash({"weight": ["1"], "cartan_type": "A1"})

    def test_no_timing_by_default(self):
        assert "elapsed_seconds" not in document("build", {}, {})

    def test_json_is_sorted(self, sample_doc):
        text = to_json(sample_doc)
        assert json.loads(text) == sample_doc
        assert text == to_json(json.loads(text))
        assert list(json.loads(text)) == sorted(sample_doc)


class TestResults:
    def test_kostant(self, sample_doc):
        result = sample_doc["result"]
        assert result["rows"] == [["e", "(1)", 0], ["s0", "(-3)", 1]]
        assert result["summary"] == {"components": 2, "degrees": [0, 1]}

    def test_microsupport(self, a1):
        report = essential_micro_support(build_igstar(a1, (1,)))
        result = microsupport_result(report)
        assert [row[0] for row in result["rows"]] == ["P=[]", "P=*"]
        assert result["rows"][0][5] == "[1, 1]"
        assert result["summary"]["c"] == 1
        assert not result["summary"]["vanishes"]

    def test_vanishing(self, a1):
        bound = vanishing_bound(a1, (1,))
        result = vanishing_result(bound, bound.report)
        assert result["summary"]["half_dim_X"] == 1
        assert result["summary"]["holds"] is True
        json.dumps(result)

    def test_fractions_become_strings(self):
        bound = vanishing_bound(build_root_system("A2"), (1, 1))
        result = vanishing_result(bound)
        assert result["summary"]["half_dim_X"] == "5/2"
        assert isinstance(bound.half_dim_X, Fraction)


class TestRender:
    def test_table(self, sample_doc):
        console = Console(record=True, width=120)
        render_table(sample_doc, console)
        text = console.export_text()
        assert "H(n) for P=[] in P=*" in text
        assert "(-3)" in text
        assert "components" in text

    def test_failed_status(self):
        console = Console(record=True, width=120)
        render_table(document("validate", {}, {"title": "Axiom", "columns": [], "rows": []}, "violation"), console)
        assert "violation" in console.export_text()
