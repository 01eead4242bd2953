from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import full_bar_hh2
from quivdeform.errors import InputError
from quivdeform.fields import Field
from quivdeform.hochschild import (Cochain, cobound_solve, cochain_from_pairs,
                                   differential, extend_to_full,
                                   full_differential, hh_dimension,
                                   hh_summary, is_cocycle, is_full_cocycle)
from quivdeform.quiver import Quiver, compute_basis

Q = Field.rationals()


def the_cocycle(af, basis):
    return cochain_from_pairs(basis, af.cocycle_pairs)


def test_dual_numbers_cocycle(dual_numbers):
    af, basis = dual_numbers
    f = the_cocycle(af, basis)
    # single composable triple (a, a, a): a*e1 - f(0, a) + f(a, 0) - e1*a = 0
    assert differential(f, basis).is_zero()
    assert is_cocycle(f, basis)


def test_two_cycle_cocycle_and_class(two_cycle):
    af, basis = two_cycle
    f = the_cocycle(af, basis)
    assert is_cocycle(f, basis)
    assert cobound_solve(f, basis) is None  # nonzero class
    assert hh_dimension(basis) == 1
    # oracle: full bar complex from raw structure constants
    assert full_bar_hh2(basis.dim, basis.table, basis.field) == 1


def test_triangle_cocycle_and_class(triangle):
    af, basis = triangle
    f = the_cocycle(af, basis)
    assert is_cocycle(f, basis)
    assert hh_dimension(basis) == 1
    assert full_bar_hh2(basis.dim, basis.table, basis.field) == 1


def test_quantum_plane_cocycle(quantum_plane):
    af, basis = quantum_plane
    f = the_cocycle(af, basis)
    assert is_cocycle(f, basis)


def test_corner_violation_rejected(triangle):
    af, basis = triangle
    q = af.quiver
    key = (q.arrow_path("a1"), q.arrow_path("a2"))
    bad = {key: basis.element_from_path(q.trivial_path("1"))}
    with pytest.raises(InputError):
        Cochain(basis, 2, bad)


def test_bad_keys_rejected(two_cycle):
    af, basis = two_cycle
    q = af.quiver
    a1 = q.arrow_path("a1")
    a2 = q.arrow_path("a2")
    with pytest.raises(InputError):  # not composable
        Cochain(basis, 2, {(a2, a2): basis.zero()})
    with pytest.raises(InputError):  # trivial path in key
        Cochain(basis, 2, {(q.trivial_path("1"), a1): basis.zero()})
    with pytest.raises(InputError):  # reducible word is not a basis path
        Cochain(basis, 2, {(q.compose(a1, a2), a1): basis.zero()})
    with pytest.raises(InputError):  # arity
        Cochain(basis, 2, {(a1,): basis.zero()})
    with pytest.raises(InputError):
        Cochain(basis, 4, {})


def test_semisimple_has_no_reduced_cochains():
    q = Quiver(["1"], [])
    basis = compute_basis(q, [], Q, max_degree=5)
    assert hh_summary(basis) == (0, 0, 0)
    assert hh_dimension(basis) == 0


def test_perturbed_cocycle_fails(two_cycle):
    af, basis = two_cycle
    q = af.quiver
    f = the_cocycle(af, basis)
    tweak = Cochain(basis, 2, {(q.arrow_path("a2"), q.arrow_path("a1")):
                               basis.element_from_path(q.trivial_path("2"))})
    assert not is_cocycle(f + tweak, basis)


def test_cobound_solve_requires_cocycle(two_cycle):
    af, basis = two_cycle
    q = af.quiver
    tweak = Cochain(basis, 2, {(q.arrow_path("a2"), q.arrow_path("a1")):
                               basis.element_from_path(q.trivial_path("2"))})
    with pytest.raises(InputError):
        cobound_solve(the_cocycle(af, basis) + tweak, basis)


def test_zero_cochain_solvable(two_cycle):
    af, basis = two_cycle
    zero = Cochain(basis, 2, {})
    g = cobound_solve(zero, basis)
    assert g is not None
    assert differential(g, basis).is_zero()


def _one_cochains(basis, scalars):
    """All degree-1 cochains of the two-cycle algebra, from 4 scalars."""
    q = basis.quiver
    a1 = q.arrow_path("a1")
    a2 = q.arrow_path("a2")
    a2a1 = q.path_from_arrow_names(["a2", "a1"])
    c1, c2, c3, c4 = scalars
    table = {
        (a1,): basis.element_from_path(a1).scale(c1),
        (a2,): basis.element_from_path(a2).scale(c2),
        (a2a1,): basis.element_from_path(q.trivial_path("2")).scale(c3)
        + basis.element_from_path(a2a1).scale(c4),
    }
    return Cochain(basis, 1, table)


fracs = st.fractions(min_value=-8, max_value=8, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.tuples(fracs, fracs, fracs, fracs))
def test_coboundaries_are_cocycles(scalars):
    from conftest import load_basis
    af, basis = load_basis("two_cycle.alg")
    g = _one_cochains(basis, scalars)
    dg = differential(g, basis)
    assert is_cocycle(dg, basis)  # d after d vanishes
    got = cobound_solve(dg, basis)
    assert got is not None
    assert differential(got, basis) == dg


@settings(max_examples=25, deadline=None)
@given(st.tuples(fracs, fracs, fracs, fracs))
def test_extend_commutes_with_differential(scalars):
    from conftest import load_basis
    af, basis = load_basis("two_cycle.alg")
    g = _one_cochains(basis, scalars)
    lhs = extend_to_full(differential(g, basis), basis)
    rhs = full_differential(extend_to_full(g, basis), basis)
    assert lhs == rhs


def test_extend_to_full_dual_numbers(dual_numbers):
    af, basis = dual_numbers
    f = the_cocycle(af, basis)
    F = extend_to_full(f, basis)
    a_idx = basis.index[af.quiver.arrow_path("a")]
    e_idx = basis.index[af.quiver.trivial_path("1")]
    assert F.table == {(a_idx, a_idx): {e_idx: Fraction(1)}}
    assert F.value((e_idx, a_idx)) == {}


def test_extended_cocycle_is_full_cocycle(two_cycle):
    af, basis = two_cycle
    F = extend_to_full(the_cocycle(af, basis), basis)
    assert is_full_cocycle(F, basis)


def test_hh_independent_of_arrow_order():
    text = ("field Q\nvertex 1 2\narrow a2 : 2 -> 1\narrow a1 : 1 -> 2\n"
            "relation a1*a2\n")
    from quivdeform.fileio import parse_algebra_text
    af = parse_algebra_text(text)
    basis = compute_basis(af.quiver, af.relations, af.field, 30)
    assert basis.dim == 5
    assert hh_dimension(basis) == 1


def test_evaluate_is_bilinear(two_cycle):
    af, basis = two_cycle
    q = af.quiver
    f = the_cocycle(af, basis)
    a1 = basis.element_from_path(q.arrow_path("a1"))
    a2 = basis.element_from_path(q.arrow_path("a2"))
    e1 = basis.element_from_path(q.trivial_path("1"))
    lhs = f.evaluate(a1.scale(Fraction(3)) + e1, a2)
    rhs = f.evaluate(a1, a2).scale(Fraction(3))  # e1 slot contributes zero
    assert lhs == rhs
    assert f.evaluate(a1, a2) == e1


def test_hh_unsupported_degree(two_cycle):
    af, basis = two_cycle
    with pytest.raises(InputError):
        hh_dimension(basis, n=3)
