from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittcohom.algebra import L, X, semidirect_a, semidirect_b, tensor_density, witt
from wittcohom.cohomology import (
    CocycleId,
    Component,
    Window,
    cochain_variables,
    coboundaries_are_cocycles,
    coboundary_space_h2,
    constraints_abelian,
    constraints_mixing,
    constraints_virasoro,
    eval_named,
    h2_dimensions,
    h2_record,
    is_cocycle,
    named,
    window_vector,
)
from wittcohom.errors import DomainMismatch, WindowTooSmall
from wittcohom.extension import virasoro
from wittcohom.linsolve import in_span, kernel, span
from wittcohom.scalars import INFINITY

from strategies import lambdas, rationals

F = Fraction
GRID = [0, -1, 1, F(5, 7), INFINITY]


def test_window_must_be_positive():
    with pytest.raises(WindowTooSmall):
        Window(0)


@pytest.mark.parametrize("N", [3, 8])
def test_virasoro_kernel(N):
    assert kernel(constraints_virasoro(N)).dim == 2


def test_virasoro_cocycle_solves_rows():
    vec = window_vector(named(CocycleId.OMEGA_VIR), witt(), 8)
    assert constraints_virasoro(8).is_solution(vec)


def test_virasoro_needs_three_degrees():
    with pytest.raises(WindowTooSmall):
        constraints_virasoro(2)


def test_abelian_kernels():
    assert kernel(constraints_abelian(semidirect_a(F(5, 7)), 6)).dim == 0
    space = kernel(constraints_abelian(semidirect_b(1), 6))
    assert space.dim == 1
    iota = window_vector(named(CocycleId.IOTA, component=Component.AB), semidirect_b(1), 6)
    assert in_span(space, iota)
    assert kernel(constraints_abelian(semidirect_b(INFINITY), 4)).dim == 1


def test_mixing_kernels():
    spec = semidirect_a(0)
    space = kernel(constraints_mixing(spec, 6))
    assert space.dim == 2
    named_vecs = [window_vector(named(c), spec, 6) for c in (CocycleId.BETA_LAMBDA, CocycleId.IOTA)]
    assert span(named_vecs, space.variables).vectors == space.vectors
    assert kernel(constraints_mixing(semidirect_a(F(5, 7)), 6)).dim == 1
    assert kernel(constraints_mixing(semidirect_b(2), 6)).dim == 2


@pytest.mark.parametrize("lam", [-1, 1, F(5, 7), INFINITY, 3])
def test_mixing_kernel_is_beta(lam):
    spec = semidirect_a(lam)
    space = kernel(constraints_mixing(spec, 6))
    beta = window_vector(named(CocycleId.BETA_LAMBDA), spec, 6)
    assert space.vectors == span([beta], space.variables).vectors


def test_mixing_coboundaries():
    assert coboundary_space_h2(semidirect_a(1), 6)[Component.MIX].dim == 0
    mix_b = coboundary_space_h2(semidirect_b(2), 6)[Component.MIX]
    assert mix_b.dim == 1
    assert named(CocycleId.ETA_LAMBDA, 2).function(2) == 14
    assert in_span(mix_b, window_vector(named(CocycleId.ETA_LAMBDA), semidirect_b(2), 6))
    eta_inf = window_vector(named(CocycleId.ETA_LAMBDA), semidirect_b(INFINITY), 6)
    assert eta_inf[("beta", 3)] == 3 + 9
    assert in_span(coboundary_space_h2(semidirect_b(INFINITY), 6)[Component.MIX], eta_inf)


@pytest.mark.parametrize(
    "spec, dims",
    [
        (semidirect_a(0), (1, 0, 2, 3)),
        (semidirect_a(-1), (1, 0, 1, 2)),
        (semidirect_b(INFINITY), (1, 1, 1, 3)),
        (tensor_density(0, 1), (1, 0, 2, 3)),
        (tensor_density(F(1, 2), 0), (1, 1, 0, 2)),
    ],
    ids=lambda v: v.label() if hasattr(v, "label") else None,
)
def test_h2_dimensions(spec, dims):
    got = h2_dimensions(spec, 8)
    assert (got["vir"], got["ab"], got["mix"], got["total"]) == dims


@pytest.mark.parametrize("spec", [semidirect_a(0), semidirect_b(1), tensor_density(0, -1)], ids=str)
def test_h2_stable_in_window_range(spec):
    assert len({h2_dimensions(spec, N)["total"] for N in range(5, 11)}) == 1


def test_h2_below_threshold_refused():
    with pytest.raises(WindowTooSmall):
        h2_dimensions(semidirect_a(0), 3)


def test_h2_refused_on_extensions():
    with pytest.raises(DomainMismatch):
        h2_dimensions(virasoro(), 6)


def test_eval_named_examples():
    assert eval_named(named(CocycleId.OMEGA_VIR), (L(2), L(-2))) == F(1, 2)
    assert eval_named(named(CocycleId.OMEGA_MIX_A, 3), (L(0), X(0))) == 4
    assert eval_named(named(CocycleId.OMEGA_AB_B), (X(3), X(-3))) == 3
    with pytest.raises(DomainMismatch):
        eval_named(named(CocycleId.OMEGA_VIR), (L(1), X(-1)))


def test_is_cocycle_examples():
    assert is_cocycle(semidirect_a(7), named(CocycleId.OMEGA_MIX_A), 8) == []
    assert is_cocycle(semidirect_b(0), named(CocycleId.OMEGA_MIX_B), 8) == []
    assert is_cocycle(semidirect_b(1), named(CocycleId.IOTA), 4) == []
    assert is_cocycle(semidirect_a(1), named(CocycleId.OMEGA_0A), 6)
    with pytest.raises(DomainMismatch):
        is_cocycle(semidirect_a(1), named(CocycleId.OMEGA_AB_B), 6)


@pytest.mark.parametrize("lam", GRID, ids=str)
def test_named_cocycles_on_home_algebras(lam):
    spec_a, spec_b = semidirect_a(lam), semidirect_b(lam)
    assert is_cocycle(spec_a, named(CocycleId.OMEGA_VIR), 10) == []
    assert is_cocycle(spec_a, named(CocycleId.OMEGA_MIX_A), 10) == []
    assert is_cocycle(spec_a, named(CocycleId.OMEGA_0A), 10) == [] or lam != 0
    assert is_cocycle(spec_b, named(CocycleId.OMEGA_AB_B), 10) == []
    assert is_cocycle(spec_b, named(CocycleId.OMEGA_MIX_B), 10) == []


def test_antisymmetry_baked_into_variables():
    vars_ = cochain_variables(semidirect_a(1), Component.AB, Window(4))
    assert all(v[1] > 0 for v in vars_ if v[0] == "alpha")
    assert ("v", 0) not in cochain_variables(witt(), Component.VIR, Window(4))
    assert ("beta", 0) in cochain_variables(semidirect_a(1), Component.MIX, Window(4))


def test_h2_record_shape():
    rec = h2_record(semidirect_b(0), 6)
    assert rec["dims"] == {"vir": 1, "ab": 1, "mix": 1, "total": 3}
    assert set(rec["basis"]) == {"vir", "ab", "mix"}
    assert rec["lambda"] == "0" and rec["N"] == 6


@given(lambdas, st.booleans())
def test_coboundaries_lie_in_cocycle_kernel(lam, use_b):
    spec = semidirect_b(lam) if use_b else semidirect_a(lam)
    assert coboundaries_are_cocycles(spec, 5)


@given(rationals, rationals)
def test_coboundaries_lie_in_kernel_wab(a, b):
    assert coboundaries_are_cocycles(tensor_density(a, b), 5)


@given(lambdas)
def test_random_lambda_mixing_cocycles(lam):
    assert is_cocycle(semidirect_a(lam), named(CocycleId.OMEGA_MIX_A), 5) == []
    assert is_cocycle(semidirect_b(lam), named(CocycleId.GAMMA2), 5) == []
