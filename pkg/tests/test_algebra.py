import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittcohom.algebra import (
    Element,
    L,
    UnnormalizedShiftWarning,
    X,
    adjoint_hom_f,
    antisymmetry_window,
    bracket,
    central,
    check_f_equivariance,
    in_derived_algebra,
    jacobi_defect,
    jacobi_window,
    parse_element,
    semidirect_a,
    semidirect_b,
    structure_weight,
    tensor_density,
    witt,
    with_tampered_weight,
)
from wittcohom.errors import ForeignBasisSymbol, MalformedNumber, NoModuleFamily
from wittcohom.scalars import INFINITY

from strategies import elements, specs

F = Fraction


def e(b, c=1):
    return Element.basis(b, c)


@pytest.mark.parametrize(
    "spec, n, m, expected",
    [
        (semidirect_a(1), 2, 0, 8),
        (semidirect_b(1), 3, -3, -15),
        (semidirect_b(INFINITY), 2, -2, -6),
        (semidirect_a(INFINITY), 3, 0, 12),
        (tensor_density(F(1, 2), 3), 2, 1, F(1, 2) + 6 + 1),
    ],
)
def test_structure_weight(spec, n, m, expected):
    assert structure_weight(spec, n, m) == expected


def test_witt_has_no_module():
    with pytest.raises(NoModuleFamily):
        structure_weight(witt(), 1, 1)
    with pytest.raises(ForeignBasisSymbol):
        bracket(witt(), e(L(1)), e(X(1)))


def test_bracket_examples():
    assert bracket(witt(), e(L(1)), e(L(-1))) == e(L(0), -2)
    assert bracket(semidirect_a(3), e(X(2)), e(X(-2))) == 0
    assert bracket(semidirect_a(1), e(X(0)), e(L(2))) == e(X(2), -8)


def test_jacobi_examples():
    assert jacobi_defect(witt(), e(L(0)), e(L(0)), e(L(1))) == 0
    assert jacobi_defect(semidirect_a(F(5, 7)), e(L(2)), e(L(-1)), e(X(3))) == 0
    assert jacobi_defect(semidirect_b(INFINITY), e(L(2)), e(L(-2)), e(X(0))) == 0


def test_adjoint_hom_f():
    assert adjoint_hom_f(2) == e(X(2), 2)
    assert adjoint_hom_f(0) == 0
    assert adjoint_hom_f(-3) == e(X(-3), -3)


@pytest.mark.parametrize("lam", [1, INFINITY, 0, -1])
def test_f_is_equivariant(lam):
    assert check_f_equivariance(lam, 6) == []


def test_f_single_check():
    lhs = structure_weight(semidirect_b(0), 1, 1) * adjoint_hom_f(2)
    rhs = bracket(semidirect_a(0), e(L(1)), adjoint_hom_f(1))
    assert lhs == rhs == e(X(2), 2)


@pytest.mark.parametrize(
    "spec",
    [semidirect_a(0), semidirect_b(-1), tensor_density(F(1, 2), 0), tensor_density(0, 2)],
    ids=str,
)
def test_jacobi_on_window(spec):
    assert jacobi_window(spec, 5, ordered=False) == []
    assert antisymmetry_window(spec, 5) == []


def test_tampered_weight_breaks_jacobi():
    bad = with_tampered_weight(semidirect_a(1))
    assert jacobi_window(bad, 4, ordered=False)


def test_perfectness_witness():
    spec_b = semidirect_b(2)
    assert all(in_derived_algebra(spec_b, b, 7) for n in range(-6, 7) for b in (L(n), X(n)))
    assert not in_derived_algebra(semidirect_a(2), X(0), 7)
    assert in_derived_algebra(semidirect_a(2), X(1), 7)


def test_integer_shift_warns():
    with pytest.warns(UnnormalizedShiftWarning):
        tensor_density(2, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        tensor_density(0, 5)


def test_labels_and_letters():
    assert semidirect_a(F(5, 7)).label() == "W_A(5/7)"
    assert semidirect_b(INFINITY).label() == "W_B(inf)"
    assert tensor_density(0, 1).label() == "W(0,1)"
    assert semidirect_b(1).module_letter == "B"


def test_element_text_round_trip_example():
    x = e(L(0), -2) + e(X(3), F(1, 2)) + e(central("x"), -3)
    text = x.to_text("A")
    assert text == "-2*L[0] + 1/2*A[3] - 3*c[x]"
    assert parse_element(text, "A") == x
    assert parse_element("0") == 0
    with pytest.raises(MalformedNumber):
        parse_element("2*L[1] 3*L[2]")
    with pytest.raises(MalformedNumber):
        parse_element("1*L1")
    with pytest.raises(ForeignBasisSymbol):
        parse_element("2*B[1]", "A")


def test_element_has_no_zero_coefficients():
    x = e(L(1)) - e(L(1)) + e(L(2), 0)
    assert x == 0 and not x.terms


@given(elements())
def test_text_round_trip(x):
    assert parse_element(x.to_text("B"), "B") == x


@given(specs, elements(), elements())
def test_antisymmetry(spec, x, y):
    assert bracket(spec, x, y) + bracket(spec, y, x) == 0
    assert bracket(spec, x, x) == 0


@given(specs, elements(), elements(), elements())
def test_jacobi_on_random_elements(spec, x, y, z):
    assert jacobi_defect(spec, x, y, z) == 0


@given(specs, st.integers(-6, 6), st.integers(-6, 6), st.booleans(), st.booleans())
def test_grading(spec, n, m, left_module, right_module):
    u = X(n) if left_module else L(n)
    v = X(m) if right_module else L(m)
    assert all(b.degree == n + m for b in bracket(spec, e(u), e(v)).support())


@given(elements(), elements(), st.integers(-5, 5))
def test_bracket_bilinear(x, y, k):
    spec = semidirect_a(3)
    assert bracket(spec, x * k, y) == bracket(spec, x, y) * k
    assert bracket(spec, x + y, y) == bracket(spec, x, y)
