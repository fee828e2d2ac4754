from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittcohom.algebra import Element, L, X, bracket, central, semidirect_a, semidirect_b, tensor_density
from wittcohom.cohomology import CocycleId, Component, cocycle_system, named
from wittcohom.errors import DomainMismatch, DuplicateCentralName
from wittcohom.extension import (
    MixingProfile,
    build_central_extension,
    coboundary_trivialization_defects,
    extension_json,
    select,
    verify_extension,
    vir_a,
    vir_b,
    virasoro,
    window_cocycle,
)
from wittcohom.linsolve import in_span, kernel
from wittcohom.scalars import INFINITY

from strategies import rationals

F = Fraction


def e(b, c=1):
    return Element.basis(b, c)


def test_virasoro_bracket():
    assert bracket(virasoro(), e(L(2)), e(L(-2))) == e(L(0), -4) + e(central("vir"), F(1, 2))
    assert bracket(virasoro(), e(L(1)), e(L(-1))) == e(L(0), -2)


def test_vir_b_bracket():
    assert bracket(vir_b(1), e(X(3)), e(X(-3))) == e(central("abB"), 3)
    assert bracket(vir_a(3), e(L(0)), e(X(0))) == e(central("mixA"), 4)


def test_central_elements_commute():
    spec = vir_b(0)
    for name in spec.central_names:
        assert bracket(spec, e(central(name)), e(L(3)) + e(X(-1))) == 0


@pytest.mark.parametrize("lam", [0, 1, INFINITY], ids=str)
def test_vir_b_verifies(lam):
    assert verify_extension(vir_b(lam), 8) == []


def test_vir_a_verifies():
    assert verify_extension(vir_a(F(5, 7)), 8) == []
    assert verify_extension(virasoro(), 8) == []


def test_non_cocycle_rejected():
    bad = build_central_extension(semidirect_a(1), [select(MixingProfile((0, 0, 0, F(1))), "cubic")])
    assert verify_extension(bad, 6)


def test_duplicate_name_rejected():
    with pytest.raises(DuplicateCentralName):
        build_central_extension(virasoro(), [select(named(CocycleId.OMEGA_VIR), "vir")])


def test_foreign_named_cocycle_rejected():
    with pytest.raises(DomainMismatch):
        build_central_extension(semidirect_a(1), [select(named(CocycleId.OMEGA_AB_B), "ab")])
    with pytest.raises(DomainMismatch):
        build_central_extension(semidirect_a(1), [select(object(), "junk")])


def test_iterated_extension():
    spec = build_central_extension(virasoro(), [select(named(CocycleId.OMEGA_VIR), "vir2", 3)])
    assert spec.central_names == ("vir", "vir2")
    assert bracket(spec, e(L(2)), e(L(-2))) == e(L(0), -4) + e(central("vir"), F(1, 2)) + e(central("vir2"), F(3, 2))
    assert verify_extension(spec, 6) == []


@pytest.mark.parametrize("spec", [semidirect_a(2), semidirect_b(INFINITY), tensor_density(F(1, 2), 0)], ids=str)
def test_coboundary_extension_is_trivial(spec):
    for b in (L(0), X(0)):
        if spec.weight(b) == 0:
            assert coboundary_trivialization_defects(spec, b, 6) == []


def test_extension_json():
    doc = extension_json(vir_a(2))
    assert doc["base"] == "W_A(2)"
    assert [c["name"] for c in doc["central"]] == ["vir", "mixA"]
    assert doc["central"][1]["cocycle"] == {"id": "OmegaMixA", "component": "mix", "lambda": "2"}


N_WIN = 5


@settings(max_examples=20)
@given(st.sampled_from([semidirect_a(0), semidirect_b(2), tensor_density(0, 0)]), st.lists(rationals, min_size=3, max_size=3))
def test_kernel_vectors_extend(spec, coeffs):
    space = kernel(cocycle_system(spec, Component.MIX, N_WIN))
    vec: dict = {}
    for c, v in zip(coeffs, space.vectors):
        for var, x in v.items():
            vec[var] = vec.get(var, 0) + c * x
    ext = build_central_extension(spec, [select(window_cocycle(spec, vec, N_WIN), "c")])
    assert verify_extension(ext, N_WIN) == []


@settings(max_examples=20)
@given(st.sampled_from([semidirect_a(1), semidirect_b(1)]), st.dictionaries(st.integers(-N_WIN, N_WIN), rationals, min_size=1))
def test_non_kernel_vectors_fail(spec, raw):
    system = cocycle_system(spec, Component.MIX, N_WIN)
    vec = {("beta", n): c for n, c in raw.items() if c}
    space = kernel(system)
    if not vec or in_span(space, vec):
        return
    ext = build_central_extension(spec, [select(window_cocycle(spec, vec, N_WIN), "c")])
    assert verify_extension(ext, N_WIN)
