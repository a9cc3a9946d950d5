"""Tests for lmodule_engine.microsupport."""

import json
from fractions import Fraction

import pytest

from lmodule_engine.errors import FormatError, OracleModeError, OrderingError
from lmodule_engine.lmodule_core import IC, IGSTAR, WC, Perversity, build, build_igstar, zero_lmodule
from lmodule_engine.microsupport import (
    SPLIT_ORACLE,
    RealFormOracle,
    centralizer_data,
    closed_form_igstar,
    duality_condition,
    eqn_microtypes_check,
    essential_micro_support,
    igstar_matches_closed_form,
    micro_purity_check,
    micro_support,
    sign_parabolics,
    type_v,
    vanishing_bound,
    verify_basic_lemma,
    weight_grid,
)
from lmodule_engine.parabolics import borel, enumerate_parabolics, parabolic, split_levi_data, whole_group
from lmodule_engine.root_data import as_weight, build_root_system, rescaled


@pytest.fixture(scope="module")
def a1():
    return build_root_system("A1")


@pytest.fixture(scope="module")
def c2():
    return build_root_system("C2")


@pytest.fixture
def c2_table(tmp_path, c2):
    records = []
    for p in enumerate_parabolics(c2):
        data = split_levi_data(p)
        records.append({
            "levi": sorted(p.levi),
            "dim_D": data.dim_D,
            "dim_a": data.dim_a,
            "fundamental_compact_dim": data.fundamental_compact_dim,
            "fundamental_split_dim": data.fundamental_split_dim,
            "involution": [[1, 0], [0, 1]],
        })
    path = tmp_path / "c2.json"
    path.write_text(json.dumps({"type": "C2", "records": records}))
    return path


class TestDuality:
    def test_siegel_parabolic(self, c2):
        p = parabolic(c2, [0])
        assert not duality_condition((1, 0), p)
        assert duality_condition((2, 0), p)

    def test_other_maximal_parabolic(self, c2):
        p = parabolic(c2, [1])
        for mu in [(1, 0), (0, 1), (3, 2), (-5, 1)]:
            assert duality_condition(mu, p)

    def test_group(self, c2):
        assert duality_condition((1, 1), whole_group(c2))

    def test_a2_not_self_dual(self):
        a2 = build_root_system("A2")
        assert not duality_condition((1, 0), whole_group(a2))
        assert duality_condition((1, 1), whole_group(a2))


class TestCentralizer:
    @pytest.mark.parametrize("levi, dim_n", [([], 4), ([0], 1), ([1], 1), ([0, 1], 0)])
    def test_dim_n(self, c2, levi, dim_n):
        assert centralizer_data((0, 0), parabolic(c2, levi)).dim_n == dim_n

    def test_regular_weight(self, c2):
        data = centralizer_data((1, 1), whole_group(c2))
        assert data.roots == ()
        assert data.dim_D == 0

    def test_trivial_weight(self, c2):
        data = centralizer_data((0, 0), whole_group(c2))
        assert len(data.roots) == 4
        assert data.dim_D == 6

    def test_orbit_maximization_is_vacuous(self, c2):
        assert centralizer_data((1, 0), whole_group(c2)).ordering_vacuous

    def test_not_equal_rank(self):
        a2 = build_root_system("A2")
        assert not SPLIT_ORACLE.equal_rank(a2)
        assert centralizer_data((0, 0), borel(a2)).dim_n == 0


class TestSignParabolics:
    def test_positive(self, c2):
        b = borel(c2)
        assert sign_parabolics((0, 0), b) == (b, b)

    def test_negative(self, c2):
        p0 = parabolic(c2, [0])
        assert sign_parabolics((-2, 1), borel(c2)) == (p0, p0)

    def test_zero_pairing(self, c2):
        assert sign_parabolics((-1, 0), borel(c2)) == (borel(c2), parabolic(c2, [0]))


class TestMicroSupport:
    def test_zero_module(self, c2):
        report = micro_support(zero_lmodule(c2))
        assert report.elements == []
        assert report.vanishes

    def test_a1_igstar(self, a1):
        report = essential_micro_support(build_igstar(a1, (0,)))
        got = [(e.p, e.weight, e.type_interval) for e in report.elements]
        assert got == [
            (borel(a1), as_weight((-2,)), (1, 1)),
            (whole_group(a1), as_weight((0,)), (0, 0)),
        ]
        assert report.c == 0
        assert report.elements[0].kostant_word == "s0"

    def test_type_v(self, a1):
        span, ranks = type_v(build_igstar(a1, (0,)), borel(a1), (-2,))
        assert span == (1, 1)
        assert ranks == {1: 1}

    def test_degree_bounds(self, a1):
        report = essential_micro_support(build_igstar(a1, (1,)))
        assert [(e.c_tilde, e.d_tilde) for e in report.elements] == [(1, 1), (1, 1)]
        assert (report.c, report.d) == (1, 1)
        assert report.parity_ok

    def test_provenance(self, c2):
        report = micro_support(build_igstar(c2, (1, 1)))
        assert report.provenance["construction"] == IGSTAR
        assert report.provenance["weight"] == "(1,1)"

    def test_every_element_has_a_witness(self, c2):
        report = micro_support(build(c2, (1, 0), IC))
        for e in report.elements:
            assert e.duality
            assert e.q_v.leq(e.q_v_prime)
            assert e.witnesses

    @pytest.mark.parametrize(
        "descriptor, lam",
        [("A1", (0,)), ("A1", (3,)), ("A2", (1, 1)), ("C2", (0, 0)), ("C2", (1, 1)), ("C2", (2, 0))],
    )
    def test_igstar_closed_form(self, descriptor, lam):
        assert igstar_matches_closed_form(build_root_system(descriptor), lam)

    def test_closed_form_lists_lengths(self, c2):
        entries = closed_form_igstar(c2, (1, 1))
        assert entries[-1] == (whole_group(c2), as_weight((1, 1)), 0)
        assert all(n >= 0 for _, _, n in entries)


class TestVanishing:
    def test_c2(self, c2):
        bound = vanishing_bound(c2, (1, 1))
        assert (bound.dim_X, bound.refined, bound.equal_rank) == (6, 3, True)
        assert bound.c == 3
        assert bound.d >= 4
        assert bound.holds

    def test_a1(self, a1):
        bound = vanishing_bound(a1, (1,))
        assert bound.c == 1
        assert bound.half_dim_X == 1
        assert bound.holds

    def test_a2_refined_bound(self):
        bound = vanishing_bound(build_root_system("A2"), (1, 1))
        assert bound.refined == 2
        assert not bound.equal_rank

    @pytest.mark.slow
    def test_g2(self):
        bound = vanishing_bound(build_root_system("G2"), (1, 1))
        assert bound.c == 4
        assert bound.holds


class TestLemmaScan:
    def test_grid(self, c2):
        assert len(weight_grid(c2, 2)) == 9

    @pytest.mark.parametrize("descriptor", ["A1", "A2", "C2"])
    def test_no_violations(self, descriptor):
        assert verify_basic_lemma(build_root_system(descriptor), 2) == []

    def test_explicit_weights(self, c2):
        assert verify_basic_lemma(c2, [(0, 0), (3, 1)]) == []

    @pytest.mark.parametrize("descriptor", ["A3", "B2"])
    def test_other_types(self, descriptor):
        assert verify_basic_lemma(build_root_system(descriptor), 1) == []

    def test_negative_grid(self, c2):
        with pytest.raises(ValueError):
            weight_grid(c2, -1)

    @pytest.mark.slow
    def test_g2(self):
        assert verify_basic_lemma(build_root_system("G2"), 1) == []


class TestPurity:
    @pytest.mark.parametrize("descriptor, lam", [("A1", (2,)), ("A1", (4,)), ("C2", (1, 1))])
    def test_ic_is_micro_pure(self, descriptor, lam):
        result = micro_purity_check(build_root_system(descriptor), lam)
        assert result.hypotheses_ok
        assert result.pure

    def test_self_dual_a2(self):
        assert micro_purity_check(build_root_system("A2"), (1, 1)).pure

    def test_wc_is_micro_pure(self, a1):
        assert micro_purity_check(a1, (2,), WC).pure

    def test_lower_perversity(self, c2):
        assert micro_purity_check(c2, (1, 1), IC, "lower").pure

    def test_hypothesis_flagged(self):
        result = micro_purity_check(build_root_system("A2"), (1, 0))
        assert not result.hypotheses_ok
        assert result.notes

    def test_only_ic_or_wc(self, a1):
        with pytest.raises(ValueError):
            micro_purity_check(a1, (2,), IGSTAR)

    @pytest.mark.slow
    def test_g2(self):
        assert micro_purity_check(build_root_system("G2"), (1, 1)).pure


class TestMicroTypes:
    def test_c2_maximal_parabolic(self, c2):
        result = eqn_microtypes_check(c2, (1, 1), parabolic(c2, [1]))
        assert result.cut == 1
        assert result.matches

    def test_c2_lower(self, c2):
        assert eqn_microtypes_check(c2, (1, 0), parabolic(c2, [0]), Perversity("lower")).matches

    def test_a1(self, a1):
        result = eqn_microtypes_check(a1, (1,), borel(a1))
        assert result.cut == 0
        assert result.matches
        assert set(result.got) == {"P=*", "P=[]"}

    def test_group_is_degenerate(self, c2):
        result = eqn_microtypes_check(c2, (1, 1), whole_group(c2))
        assert result.matches
        assert set(result.expected) == {"P=*"}

    def test_needs_maximal(self, c2):
        with pytest.raises(OrderingError):
            eqn_microtypes_check(c2, (1, 1), borel(c2))


class TestTableOracle:
    def test_levi_data(self, c2, c2_table):
        oracle = RealFormOracle.from_table(c2_table, c2)
        assert oracle.levi_real_data(whole_group(c2)).dim_D == 6
        assert oracle.equal_rank(c2)

    def test_centralizer_refused(self, c2, c2_table):
        oracle = RealFormOracle.from_table(c2_table, c2)
        with pytest.raises(OracleModeError):
            oracle.centralizer((1, 1), whole_group(c2))

    def test_degree_bounds_flagged(self, c2, c2_table):
        oracle = RealFormOracle.from_table(c2_table, c2)
        report = micro_support(build_igstar(c2, (1, 1)), oracle)
        assert report.c is None
        assert any(f.startswith("centralizer unavailable") for f in report.flags)

    def test_wrong_type(self, c2_table):
        with pytest.raises(FormatError):
            RealFormOracle.from_table(c2_table, build_root_system("B2"))

    def test_missing_record(self, c2, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"type": "C2", "records": []}))
        oracle = RealFormOracle.from_table(path, c2)
        with pytest.raises(OracleModeError):
            oracle.levi_real_data(borel(c2))

    def test_bad_involution(self, c2, tmp_path):
        path = tmp_path / "bad.json"
        record = {"levi": [], "dim_D": 0, "dim_a": 2, "fundamental_compact_dim": 0,
                  "fundamental_split_dim": 0, "involution": [[1]]}
        path.write_text(json.dumps({"type": "C2", "records": [record]}))
        with pytest.raises(FormatError):
            RealFormOracle.from_table(path, c2)

    def test_unreadable(self, c2, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{")
        with pytest.raises(FormatError):
            RealFormOracle.from_table(path, c2)

    def test_unknown_mode(self):
        with pytest.raises(OracleModeError):
            RealFormOracle("quasi-split")


def test_half_dimension_is_fraction(a1):
    assert isinstance(vanishing_bound(a1, (1,)).half_dim_X, Fraction)


def test_analyze_entry_point():
    from lmodule_engine import analyze

    report = analyze("A1", (1,), construction="igstar")
    assert (report.c, report.d) == (1, 1)
    assert [e.p.label() for e in report.elements] == ["P=[]", "P=*"]


def _signature(report):
    return [
        (e.p.label(), e.weight, e.xi, e.q_v.label(), e.q_v_prime.label(), e.type_interval, e.c_tilde, e.d_tilde)
        for e in report.elements
    ]


class TestScaling:
    def test_micro_support_ignores_the_inner_product_scale(self, c2):
        other = rescaled(c2, 0, Fraction(5, 3))
        before = micro_support(build(c2, (1, 1), IC))
        after = micro_support(build(other, (1, 1), IC))
        assert _signature(after) == _signature(before)
        assert (after.c, after.d) == (before.c, before.d)
