from fractions import Fraction

import pytest

from dgtrace.algebras import (AlgebraIso, enveloping, env_op_iso, opposite,
                              swap_iso, tensor_algebras, validate_algebra)
from dgtrace.errors import AssociativityViolation, UnitViolation

F = Fraction
ONE = F(1)


def test_ground_field_valid(kfield):
    assert kfield.dim == 1
    assert kfield.is_degree_zero()


def test_a2_structure(a2):
    assert a2.dim == 3
    e1, e2, al = (a2.by_label(l) for l in ("e1", "e2", "a"))
    assert (e1 * al) == al
    assert (al * e2) == al
    assert (al * e1).is_zero()
    assert (e2 * al).is_zero()
    assert (al * al).is_zero()


def test_m2_structure(m2):
    E11 = m2.by_label("E11")
    E12 = m2.by_label("E12")
    E21 = m2.by_label("E21")
    assert (E12 * E21) == E11
    assert (E12 * E12).is_zero()


def test_associativity_violation_reported():
    mult = {(0, 1): ((1, ONE),), (1, 0): ((0, ONE),),
            (0, 0): ((0, ONE),), (1, 1): ((0, ONE),)}
    with pytest.raises((AssociativityViolation, UnitViolation)):
        validate_algebra(["u", "v"], [0, 0], mult, [ONE, F(0)])


def test_leibniz_violation_reported():
    # d(x) = y with x odd would need signs; break the rule on purpose
    mult = {(0, 0): ((0, ONE),), (0, 1): ((1, ONE),), (1, 0): ((1, ONE),)}
    diff = {1: ((0, ONE),)}  # d of a degree-1 element landing in degree 0
    with pytest.raises(Exception):
        validate_algebra(["1", "x"], [0, 1], mult, [ONE, F(0)], diff)


def test_opposite_involution(a2, m2, a3):
    for a in (a2, m2, a3):
        assert opposite(opposite(a)).same_structure(a)


def test_opposite_k_is_k(kfield):
    assert opposite(kfield).same_structure(kfield)


def test_opposite_m2_isomorphic_via_transpose(m2):
    op = opposite(m2)
    # transpose E_ij -> E_ji is an isomorphism M2 -> M2^op
    perm = [0, 2, 1, 3]
    AlgebraIso(m2, op, perm).check()


def test_opposite_a2_is_reversed_quiver(a2):
    op = opposite(a2)
    op.validate()
    e1, e2, al = (op.by_label(l) for l in ("e1", "e2", "a"))
    # the arrow now composes on the other side
    assert (e2 * al) == al
    assert (al * e1) == al


def test_tensor_unit_law(a2, kfield):
    t = tensor_algebras(kfield, a2)
    assert t.same_structure(a2)


def test_tensor_dims(a2):
    from dgtrace.catalog import split_pair
    t = tensor_algebras(a2, split_pair())
    assert t.dim == 6
    t.validate()


def test_tensor_m2_a2_valid(m2, a2):
    tensor_algebras(m2, a2).validate()


def test_enveloping_dims(a2, kfield):
    ae, ea = enveloping(a2)
    assert ae.dim == 9 and ea.dim == 9
    ae.validate()
    ea.validate()
    k_ae, k_ea = enveloping(kfield)
    assert k_ae.same_structure(kfield)
    assert k_ea.same_structure(kfield)


def test_swap_iso_between_envelopings(a2):
    ae, ea = enveloping(a2)
    swap_iso(a2, opposite(a2), ae, ea).check()


def test_env_op_iso(a2, m2):
    env_op_iso(a2).check()
    env_op_iso(m2).check()


def test_catalog_all_valid_and_proper(cat):
    for name, ent in cat.items():
        ent.algebra.validate()
        dims = ent.algebra.cohomology_dims()
        assert dims.total_dim() == ent.algebra.dim  # degree 0, zero differential
        assert ent.algebra.is_proper()


def test_catalog_resolutions_validate(cat):
    for name, ent in cat.items():
        ent.resolution.validate()


def test_graded_algebra_accepted():
    # exterior algebra on one odd generator: 1, x with |x| = -1, d = 0
    mult = {(0, 0): ((0, ONE),), (0, 1): ((1, ONE),), (1, 0): ((1, ONE),)}
    a = validate_algebra(["1", "x"], [0, -1], mult, [ONE, F(0)])
    assert not a.is_degree_zero()
    assert a.cohomology_dims().dims == {-1: 1, 0: 1}
    op = opposite(a)
    op.validate()
    # x .op x = -x x = 0 either way; the sign shows on odd pairs
    assert opposite(op).same_structure(a)


def test_dg_algebra_with_differential():
    # two-term dg algebra: unit in degree 0, x in degree -1... use the dual
    # numbers with d(x) = 0 vs a genuine differential: k[x]/(x^2), |x| = -1,
    # d(x) = 1 fails Leibniz/degree; instead take |x| = -1, y = d(x) in 0?
    # Simplest valid: square-zero extension with acyclic generator:
    # basis 1 (deg 0), x (deg -1), y (deg 0); xy = yx = 0, x^2 = 0, y^2 = 0,
    # d(x) = y, d(y) = 0.
    mult = {(0, 0): ((0, ONE),), (0, 1): ((1, ONE),), (1, 0): ((1, ONE),),
            (0, 2): ((2, ONE),), (2, 0): ((2, ONE),)}
    diff = {1: ((2, ONE),)}
    a = validate_algebra(["1", "x", "y"], [0, -1, 0], mult, [ONE, F(0), F(0)],
                         diff)
    assert a.cohomology_dims().dims == {0: 1}
    tensor_algebras(a, a).validate()
