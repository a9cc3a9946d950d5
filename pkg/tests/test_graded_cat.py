"""Tests for lmodule_engine.graded_cat."""

import pytest

from lmodule_engine import linalg
from lmodule_engine.errors import InvariantError
from lmodule_engine.graded_cat import (
    LOWER,
    UPPER,
    ComplexObject,
    GradedModule,
    GradedMorphism,
    cohomology,
    cohomology_dims,
    complex_from_module,
    compose,
    cone_shift,
    direct_sum,
    identity_morphism,
    induced_map,
    kept_by_profile,
    normal_form,
    restrict_morphism,
    shift,
    truncate_degree,
    truncate_weight,
    truncation_projection,
    zero_module,
    zero_morphism,
)
from lmodule_engine.parabolics import borel
from lmodule_engine.root_data import as_weight, build_root_system

ZERO = (0,)


@pytest.fixture
def two_term():
    """V(0) in degree 0 mapping injectively into 2V(0) in degree 1."""
    module = GradedModule({(ZERO, 0): ("a",), (ZERO, 1): ("b", "c")})
    d = GradedMorphism(module, module, 1, {(ZERO, 0): ((1,), (0,))})
    return ComplexObject(module, d)


class TestGradedModule:
    def test_accessors(self):
        m = GradedModule({((1,), 0): ("x",), ((0,), 2): ("y", "z")})
        assert m.mult((0,), 2) == 2
        assert m.labels((1,), 0) == ("x",)
        assert m.mult((5,), 0) == 0
        assert m.degrees() == [0, 2]
        assert m.weights() == [as_weight((0,)), as_weight((1,))]

    def test_empty_slots_are_dropped(self):
        assert GradedModule({((1,), 0): ()}).is_zero

    def test_shifted(self):
        m = GradedModule({(ZERO, 1): ("x",)}).shifted(1)
        assert m.mult(ZERO, 0) == 1

    def test_str(self):
        assert str(GradedModule({((-2,), 2): ("x",), (ZERO, 0): ("a", "b")})) == "2V(0)[0] + V(-2)[-2]"
        assert str(zero_module()) == "0"

    def test_shape_equal_ignores_labels(self):
        a = GradedModule({(ZERO, 0): ("x",)})
        assert a.shape_equal(a.relabel("q:"))
        assert a.relabel("q:").labels(ZERO, 0) == ("q:x",)

    def test_direct_sum(self):
        a = GradedModule({(ZERO, 0): ("x",)})
        b = GradedModule({(ZERO, 0): ("y", "z"), ((1,), 1): ("w",)})
        total, offsets = direct_sum([("A", a), ("B", b)])
        assert total.labels(ZERO, 0) == ("A:x", "B:y", "B:z")
        assert offsets["B"][(as_weight(ZERO), 0)] == 1


class TestGradedMorphism:
    def test_wrong_shape(self):
        m = GradedModule({(ZERO, 0): ("x",)})
        with pytest.raises(InvariantError):
            GradedMorphism(m, m, 0, {(ZERO, 0): ((1, 0),)})

    def test_zero_blocks_dropped(self):
        m = GradedModule({(ZERO, 0): ("x",)})
        assert GradedMorphism(m, m, 0, {(ZERO, 0): ((0,),)}).is_zero

    def test_block_defaults_to_zero(self):
        m = GradedModule({(ZERO, 0): ("x", "y")})
        assert zero_morphism(m, m).block(ZERO, 0) == linalg.zeros(2, 2)

    def test_arithmetic(self):
        m = GradedModule({(ZERO, 0): ("x",)})
        one = identity_morphism(m)
        assert (one + -one).is_zero
        assert compose(one, one).block(ZERO, 0) == linalg.identity(1)
        assert one.then(one).degree == 0

    def test_add_checks_degree(self):
        m = GradedModule({(ZERO, 0): ("x",)})
        with pytest.raises(InvariantError):
            identity_morphism(m) + zero_morphism(m, m, 1)


class TestComplexes:
    def test_degree_must_be_one(self):
        m = GradedModule({(ZERO, 0): ("x",)})
        with pytest.raises(InvariantError):
            ComplexObject(m, identity_morphism(m))

    def test_square_zero(self):
        m = GradedModule({(ZERO, 0): ("a",), (ZERO, 1): ("b",), (ZERO, 2): ("c",)})
        d = GradedMorphism(m, m, 1, {(ZERO, 0): ((1,),), (ZERO, 1): ((1,),)})
        with pytest.raises(InvariantError):
            ComplexObject(m, d)

    def test_cohomology(self, two_term):
        assert cohomology_dims(two_term) == {(as_weight(ZERO), 1): 1}
        assert complex_from_module(two_term.module).is_normal

    def test_normalization_splits(self, two_term):
        nf = normal_form(two_term)
        both = compose(nf.projection, nf.section)
        assert both.blocks == identity_morphism(nf.module).blocks

    def test_induced_map_of_identity(self, two_term):
        h = induced_map(identity_morphism(two_term.module), two_term, two_term)
        assert h.block(ZERO, 1) == linalg.identity(1)

    def test_shift(self, two_term):
        shifted = shift(two_term, 1)
        assert shifted.module.mult(ZERO, -1) == 1
        assert shifted.differential.block(ZERO, -1) == linalg.as_matrix(((-1,), (0,)))

    def test_truncation(self, two_term):
        assert truncate_degree(two_term, 0).module.is_zero
        assert truncate_degree(two_term, 0, ">").module.mult(ZERO, 1) == 1
        with pytest.raises(ValueError):
            truncate_degree(two_term, 0, "<")

    def test_truncation_projection(self, two_term):
        upper, proj = truncation_projection(two_term, 0)
        assert upper.module.mult(ZERO, 1) == 1
        assert proj.target == upper.module

    def test_cone_of_identity_is_acyclic(self):
        c = complex_from_module(GradedModule({(ZERO, 0): ("a",)}))
        cone = cone_shift(identity_morphism(c.module), c, c)
        assert cone.module.mult(ZERO, 1) == 1
        assert cohomology(cone).is_zero

    def test_cone_of_zero_map(self):
        c = complex_from_module(GradedModule({(ZERO, 0): ("a",)}))
        cone = cone_shift(zero_morphism(c.module, c.module), c, c)
        assert cohomology_dims(cone) == {(as_weight(ZERO), 0): 1, (as_weight(ZERO), 1): 1}

    def test_cone_needs_degree_zero(self):
        c = complex_from_module(GradedModule({(ZERO, 0): ("a",)}))
        with pytest.raises(InvariantError):
            cone_shift(zero_morphism(c.module, c.module, 1), c, c)


class TestWeightTruncation:
    def test_profiles(self):
        assert kept_by_profile({0: 0}, UPPER)
        assert not kept_by_profile({0: 0}, LOWER)
        assert kept_by_profile({}, LOWER)
        with pytest.raises(ValueError):
            kept_by_profile({0: 1}, "middle")

    def test_truncate_weight(self):
        b = borel(build_root_system("A1"))
        c = complex_from_module(GradedModule({(ZERO, 0): ("a",), ((-1,), 0): ("b",), ((-2,), 0): ("c",)}))
        assert truncate_weight(c, b, UPPER).module.weights() == [as_weight((-1,)), as_weight(ZERO)]
        assert truncate_weight(c, b, LOWER).module.weights() == [as_weight(ZERO)]

    def test_restrict_morphism(self):
        m = GradedModule({(ZERO, 0): ("a",), ((1,), 0): ("b",)})
        sub = m.restrict(lambda mu, d: mu == as_weight(ZERO))
        f = restrict_morphism(identity_morphism(m), sub, sub)
        assert list(f.blocks) == [(as_weight(ZERO), 0)]
