"""Tests for lmodule_engine.root_data."""

from fractions import Fraction

import pytest

from lmodule_engine.config import Caps
from lmodule_engine.errors import CapExceededError, CartanTypeError
from lmodule_engine.root_data import (
    act,
    add,
    as_weight,
    build_root_system,
    coroot_pairing,
    dominant_conjugate,
    dot_action,
    format_weight,
    half_sum_positive_roots,
    inversion_count,
    longest_element,
    pairing,
    parse_cartan_type,
    poincare_polynomial,
    poincare_product,
    reduced_word,
    rescaled,
    rho,
    simple_reflection,
    sub,
    weyl_dimension,
    weyl_enumerate,
    weyl_group_order,
)


@pytest.fixture
def a2():
    return build_root_system("A2")


@pytest.fixture
def c2():
    return build_root_system("C2")


class TestParseCartanType:
    def test_single_factor(self):
        assert parse_cartan_type("C2") == (("C", 2),)

    def test_product(self):
        assert parse_cartan_type("A1xA1") == (("A", 1), ("A", 1))

    def test_bc(self):
        assert parse_cartan_type("BC2") == (("BC", 2),)

    def test_rank_outside_table(self):
        with pytest.raises(CartanTypeError, match="ranks 1, 2"):
            parse_cartan_type("A99")

    def test_unparseable_lists_families(self):
        with pytest.raises(CartanTypeError, match="A, B, BC, C"):
            parse_cartan_type("Q2")

    @pytest.mark.parametrize("bad", ["", "Q2", "G3", "E5", "B1", "D2", "C2x"])
    def test_rejects(self, bad):
        with pytest.raises(CartanTypeError):
            parse_cartan_type(bad)


class TestRootSystem:
    @pytest.mark.parametrize(
        "descriptor, count",
        [("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4), ("C2", 4), ("G2", 6), ("B3", 9), ("D4", 12), ("F4", 24)],
    )
    def test_positive_root_counts(self, descriptor, count):
        assert len(build_root_system(descriptor).positive_root_coeffs) == count

    def test_c2_cartan_matrix(self, c2):
        assert c2.cartan_matrix == ((2, -1), (-2, 2))
        assert c2.simple_roots == (as_weight((2, -1)), as_weight((-2, 2)))

    def test_c2_long_root_is_last(self, c2):
        assert c2.root_scale[1] == 2 * c2.root_scale[0]

    def test_g2_short_root_is_first(self):
        g2 = build_root_system("G2")
        assert g2.root_scale == (Fraction(1), Fraction(3))

    def test_gram_is_symmetric(self, c2):
        g = c2.inner_product_matrix
        assert g[0][1] == g[1][0]

    def test_rho_pairs_to_one_with_simple_coroots(self, c2):
        for i in range(2):
            coeffs = tuple(int(i == j) for j in range(2))
            assert coroot_pairing(c2, rho(c2), coeffs) == 1

    def test_rho_is_half_sum_outside_bc(self, c2):
        assert half_sum_positive_roots(c2) == rho(c2)

    def test_bc_half_sum_differs_from_rho(self):
        bc = build_root_system("BC1")
        assert half_sum_positive_roots(bc) != rho(bc)

    def test_inner_product_weyl_invariant(self, a2):
        x, y = as_weight((1, 0)), as_weight((2, 1))
        for i in range(2):
            s = simple_reflection(a2, i)
            assert pairing(a2, act(s, x), act(s, y)) == pairing(a2, x, y)

    def test_bad_scales(self):
        with pytest.raises(CartanTypeError):
            build_root_system("C2", scales=[0])

    def test_rescaled_keeps_cartan_matrix(self, c2):
        other = rescaled(c2, 0, Fraction(5, 3))
        assert other.cartan_matrix == c2.cartan_matrix
        assert other.inner_product_matrix != c2.inner_product_matrix


class TestWeylGroup:
    @pytest.mark.parametrize("descriptor, order", [("A1", 2), ("A2", 6), ("C2", 8), ("G2", 12), ("A3", 24)])
    def test_order(self, descriptor, order):
        rs = build_root_system(descriptor)
        assert len(weyl_enumerate(rs)) == order == weyl_group_order(rs)

    def test_lengths_match_inversions(self, c2):
        for w in weyl_enumerate(c2):
            assert w.length == inversion_count(c2, w)

    def test_reduced_word_is_lex_first(self, a2):
        for w in weyl_enumerate(a2):
            assert reduced_word(a2, w) == w.word

    def test_longest_element_length(self, c2):
        assert longest_element(c2).length == 4

    def test_longest_element_of_levi(self, c2):
        w0 = longest_element(c2, [1])
        assert w0.word == (1,)

    def test_a2_dot_orbit_of_zero(self, a2):
        expected = {
            (): (0, 0),
            (0,): (-2, 1),
            (1,): (1, -2),
            (0, 1): (-3, 0),
            (1, 0): (0, -3),
        }
        for w in weyl_enumerate(a2):
            mu = dot_action(w, (0, 0), a2)
            if w.length == 3:
                assert mu == as_weight((-2, -2))
            else:
                assert mu == as_weight(expected[w.word])

    def test_c2_dot_action(self, c2):
        s0 = simple_reflection(c2, 0)
        assert dot_action(s0, (0, 0), c2) == as_weight((-2, 1))

    def test_poincare_identity(self):
        for descriptor in ("A2", "B3", "C2", "G2", "A1xA1"):
            rs = build_root_system(descriptor)
            assert poincare_polynomial(rs) == poincare_product(rs)

    def test_cap(self):
        rs = build_root_system("A3")
        with pytest.raises(CapExceededError):
            weyl_enumerate(rs, caps=Caps(weyl=10))

    def test_dominant_conjugate(self, c2):
        x, steps = dominant_conjugate(c2, (-1, -1))
        assert all(c >= 0 for c in x)
        assert steps == 4


class TestWeylDimension:
    @pytest.mark.parametrize(
        "descriptor, lam, dim",
        [
            ("A1", (3,), 4),
            ("A2", (1, 0), 3),
            ("A2", (1, 1), 8),
            ("C2", (1, 0), 4),
            ("C2", (0, 1), 5),
            ("G2", (1, 0), 7),
            ("G2", (0, 1), 14),
        ],
    )
    def test_values(self, descriptor, lam, dim):
        assert weyl_dimension(build_root_system(descriptor), lam) == dim

    def test_levi(self, c2):
        assert weyl_dimension(c2, (3, 5), [0]) == 4


def test_format_weight():
    assert format_weight(as_weight(("3/2", 0))) == "(3/2,0)"


class TestWeightArithmetic:
    def test_add_and_sub(self):
        assert add((1, 2), (3, Fraction(1, 2))) == (Fraction(4), Fraction(5, 2))
        assert sub((1, 2), (1, 2)) == (0, 0)

    def test_lengths_must_agree(self):
        with pytest.raises(ValueError):
            add((1,), (1, 1))
        with pytest.raises(ValueError):
            sub((1, 1), (1,))
