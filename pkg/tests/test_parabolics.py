"""Tests for lmodule_engine.parabolics."""

from fractions import Fraction

import pytest

from lmodule_engine.config import Caps
from lmodule_engine.errors import CapExceededError, OrderingError
from lmodule_engine.microsupport import SPLIT_ORACLE
from lmodule_engine.parabolics import (
    borel,
    codimension,
    delta_pairings,
    enumerate_parabolics,
    interval,
    levi_roots,
    maximum_strongly_orthogonal_sets,
    nilradical_roots,
    orthogonal_roots,
    parabolic,
    parse_parabolic,
    require_leq,
    split_levi_data,
    strongly_orthogonal,
    whole_group,
    xi_restriction,
)
from lmodule_engine.root_data import as_weight, build_root_system, rho


@pytest.fixture
def c2():
    return build_root_system("C2")


class TestParabolicIndex:
    def test_labels(self, c2):
        assert whole_group(c2).label() == "P=*"
        assert borel(c2).label() == "P=[]"
        assert parabolic(c2, [1]).label() == "P=[1]"

    def test_order(self, c2):
        b, p0, g = borel(c2), parabolic(c2, [0]), whole_group(c2)
        assert b.lt(p0) and p0.leq(g)
        assert not p0.leq(parabolic(c2, [1]))

    def test_outside(self, c2):
        assert parabolic(c2, [1]).outside == (0,)

    @pytest.mark.parametrize("text, levi", [("P=*", {0, 1}), ("*", {0, 1}), ("[]", set()), ("P=[]", set()),
                                            ("0", {0}), ("[0,1]", {0, 1}), ("P=[1]", {1})])
    def test_parse(self, c2, text, levi):
        assert parse_parabolic(c2, text).levi == frozenset(levi)

    @pytest.mark.parametrize("text", ["x", "[0,a]", "5", "[-1]"])
    def test_parse_rejects(self, c2, text):
        with pytest.raises(OrderingError):
            parse_parabolic(c2, text)

    def test_require_leq(self, c2):
        with pytest.raises(OrderingError):
            require_leq(parabolic(c2, [0]), parabolic(c2, [1]))


class TestPoset:
    def test_enumerate(self, c2):
        ps = enumerate_parabolics(c2)
        assert len(ps) == 4
        assert ps[0] == borel(c2)
        assert ps[-1] == whole_group(c2)

    def test_rank_cap(self):
        rs = build_root_system("A3")
        with pytest.raises(CapExceededError):
            enumerate_parabolics(rs, Caps(rank=2))

    def test_interval(self, c2):
        assert len(interval(borel(c2), whole_group(c2))) == 4
        assert interval(parabolic(c2, [0]), whole_group(c2)) == [parabolic(c2, [0]), whole_group(c2)]

    def test_nilradical(self, c2):
        assert len(nilradical_roots(borel(c2), whole_group(c2))) == 4
        assert len(nilradical_roots(parabolic(c2, [0]), whole_group(c2))) == 3
        assert nilradical_roots(borel(c2), parabolic(c2, [1])) == ((0, 1),)
        assert levi_roots(parabolic(c2, [0])) == ((1, 0),)


class TestWeights:
    def test_xi_of_rho(self, c2):
        assert xi_restriction(rho(c2), parabolic(c2, [0])) == as_weight((0, Fraction(3, 2)))

    def test_xi_for_borel_is_identity(self, c2):
        mu = as_weight((3, -1))
        assert xi_restriction(mu, borel(c2)) == mu

    def test_xi_for_group_is_zero(self, c2):
        assert xi_restriction((2, 5), whole_group(c2)) == as_weight((0, 0))

    def test_delta_pairings(self, c2):
        assert delta_pairings((0, 0), parabolic(c2, [0])) == {1: Fraction(3)}

    def test_orthogonal_roots(self, c2):
        roots = levi_roots(whole_group(c2))
        assert orthogonal_roots(c2, roots, (1, 0)) == ((0, 1),)


class TestStrongOrthogonality:
    def test_c2_long_roots(self, c2):
        assert strongly_orthogonal(c2, (0, 1), (2, 1))
        assert not strongly_orthogonal(c2, (1, 0), (1, 1))
        assert not strongly_orthogonal(c2, (1, 0), (1, 0))

    def test_a2_has_none(self):
        a2 = build_root_system("A2")
        assert not strongly_orthogonal(a2, (1, 0), (0, 1))

    def test_maximum_sets(self, c2):
        sets = maximum_strongly_orthogonal_sets(c2, levi_roots(whole_group(c2)))
        assert sets == [((0, 1), (2, 1))]

    def test_empty(self, c2):
        assert maximum_strongly_orthogonal_sets(c2, ()) == [()]


class TestLeviData:
    @pytest.mark.parametrize(
        "descriptor, dim_D, fc, fs",
        [("A1", 2, 1, 0), ("A2", 5, 1, 1), ("C2", 6, 2, 0), ("G2", 8, 2, 0), ("A3", 9, 2, 1)],
    )
    def test_whole_group(self, descriptor, dim_D, fc, fs):
        rs = build_root_system(descriptor)
        data = split_levi_data(whole_group(rs))
        assert (data.dim_D, data.dim_a, data.fundamental_compact_dim, data.fundamental_split_dim) == (
            dim_D, 0, fc, fs,
        )

    def test_borel(self, c2):
        data = split_levi_data(borel(c2))
        assert (data.dim_D, data.dim_a) == (0, 2)

    def test_codimension(self, c2):
        assert codimension(borel(c2), SPLIT_ORACLE) == 6
        assert codimension(parabolic(c2, [0]), SPLIT_ORACLE) == 4
        assert codimension(whole_group(c2), SPLIT_ORACLE) == 0
