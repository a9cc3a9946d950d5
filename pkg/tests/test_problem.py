"""Tests for lmodule_engine.problem."""

import pytest

from lmodule_engine.config import Caps
from lmodule_engine.errors import ProblemSpecError
from lmodule_engine.problem import ProblemSpec, format_problem, load_problem, parse_problem

EXAMPLE = """\
[group]
type = C2
real_form = split

[coefficient]
lambda = 1,1

[task]
name = microsupport
construction = ic
perversity = lower

[caps]
weyl = 5000
"""


class TestParse:
    def test_example(self):
        spec = parse_problem(EXAMPLE)
        assert spec.cartan_type == "C2"
        assert spec.task == "microsupport"
        assert spec.weight == ("1", "1")
        assert spec.variant == "lower"
        assert spec.caps == {"weyl": "5000"}
        assert spec.resolved_caps(Caps()).weyl == 5000

    def test_defaults(self):
        spec = parse_problem("[group]\ntype = A1\n\n[task]\nname = vanishing\n")
        assert spec.weight is None
        assert spec.variant == "upper"
        assert spec.grid == 2
        assert spec.resolved_caps(Caps()) == Caps()

    def test_wc_profile(self):
        spec = parse_problem("[group]\ntype = A1\n[task]\nname = build\nconstruction = wc\nprofile = lower\n")
        assert spec.variant == "lower"

    def test_igstar_has_no_variant(self):
        spec = parse_problem("[group]\ntype = A1\n[task]\nname = build\nconstruction = igstar\n")
        assert spec.variant is None

    def test_bracketed_weight(self):
        text = EXAMPLE.replace("lambda = 1,1", "lambda = (2, 0)")
        assert parse_problem(text).weight == ("2", "0")

    def test_load(self, tmp_path):
        path = tmp_path / "job.ini"
        path.write_text(EXAMPLE)
        assert load_problem(path) == parse_problem(EXAMPLE)


class TestErrors:
    def test_unknown_key_is_located(self):
        text = "[group]\ntype = C2\n\n[task]\nname = microsupport\ncolour = red\n"
        with pytest.raises(ProblemSpecError) as exc:
            parse_problem(text)
        assert (exc.value.line, exc.value.column) == (6, 1)
        assert "colour" in str(exc.value)

    def test_unknown_section(self):
        with pytest.raises(ProblemSpecError) as exc:
            parse_problem("[group]\ntype = C2\n[extras]\nx = 1\n")
        assert exc.value.line == 3

    def test_key_outside_section(self):
        with pytest.raises(ProblemSpecError) as exc:
            parse_problem("type = C2\n")
        assert exc.value.line == 1

    def test_missing_task(self):
        with pytest.raises(ProblemSpecError):
            parse_problem("[group]\ntype = C2\n")

    def test_unknown_task(self):
        with pytest.raises(ProblemSpecError) as exc:
            parse_problem("[group]\ntype = C2\n[task]\nname = solve\n")
        assert exc.value.line == 4

    @pytest.mark.parametrize(
        "extra",
        ["construction = ih", "perversity = middle", "perversity = upper\nprofile = upper", "grid = lots", "grid = -1"],
    )
    def test_bad_task_values(self, extra):
        with pytest.raises(ProblemSpecError):
            parse_problem(f"[group]\ntype = C2\n[task]\nname = build\n{extra}\n")

    def test_bad_cap(self):
        with pytest.raises(ProblemSpecError):
            parse_problem("[group]\ntype = C2\n[task]\nname = build\n[caps]\nweyl = -1\n")

    def test_table_needs_path(self):
        with pytest.raises(ProblemSpecError):
            parse_problem("[group]\ntype = C2\nreal_form = table\n[task]\nname = build\n")

    def test_duplicate_key(self):
        with pytest.raises(ProblemSpecError):
            parse_problem("[group]\ntype = C2\ntype = A1\n[task]\nname = build\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProblemSpecError):
            load_problem(tmp_path / "absent.ini")


class TestFormat:
    @pytest.mark.parametrize(
        "spec",
        [
            ProblemSpec(cartan_type="C2", task="microsupport", weight=("1", "1"), variant="upper"),
            ProblemSpec(cartan_type="A1xA1", task="build", construction="wc", variant="lower",
                        scales=("1", "2"), output="m.lmod", caps={"weyl": "50"}),
            ProblemSpec(cartan_type="G2", task="kostant", construction="igstar", parabolic="[0]", q="*", grid=3),
        ],
    )
    def test_round_trip(self, spec):
        assert parse_problem(format_problem(spec)) == spec
