"""Leibniz 2-cocycles, symmetric invariant forms and HL².

Leibniz cochains carry no symmetry, so the unknowns are ordered pairs
``chi(u, v)`` of total weight zero.  They are labelled by the family pair
and the degree of the first argument: ``("LX", n)`` is χ(L_n, X_{-n}) for
W_X(λ).  Invariant forms use unordered pairs labelled the same way with
the smaller basis symbol first.

Coboundaries follow the same convention as the Lie case,
dφ(x, y) = -φ([x, y]) with φ dual to a weight-0 basis vector.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .algebra import AlgebraSpec, Basis, Family, X, bracket_basis, window_basis
from .cohomology import (
    Component,
    Window,
    as_window,
    cochain_variables,
    degree0_triples,
    h2_dimensions,
    pair_coordinate,
    weight_zero_basis,
)
from .errors import NoModuleFamily, WindowTooSmall
from .linsolve import LinearSystem, SubspaceBasis, in_span, kernel, quotient_dim, rank, span

_TAG = {Family.L: "L", Family.M: "X"}


def _require_module(spec: AlgebraSpec) -> None:
    if not spec.has_module:
        raise NoModuleFamily(f"{spec.label()} has no module family")


def _pairs(spec: AlgebraSpec, w: Window) -> list[tuple[Basis, Basis]]:
    basis = window_basis(spec, w.N, include_central=False)
    out = [(u, v) for u in basis for v in basis if spec.weight(u) + spec.weight(v) == 0]
    out.sort(key=lambda p: (p[0].family, p[1].family, p[0].degree))
    return out


def ordered_label(u: Basis, v: Basis) -> tuple:
    return (_TAG[u.family] + _TAG[v.family], u.degree)


def symmetric_label(u: Basis, v: Basis) -> tuple:
    if v < u:
        u, v = v, u
    return (_TAG[u.family] + _TAG[v.family], u.degree)


def leibniz_variables(spec: AlgebraSpec, w: Window | int) -> list[tuple]:
    return [ordered_label(u, v) for u, v in _pairs(spec, as_window(w))]


def symmetric_variables(spec: AlgebraSpec, w: Window | int) -> list[tuple]:
    seen, out = set(), []
    for u, v in _pairs(spec, as_window(w)):
        label = symmetric_label(u, v)
        if label not in seen:
            seen.add(label)
            out.append(label)
    return out


def _row(spec: AlgebraSpec, label_fn, identity: list[tuple[int, Basis, Basis, Basis, str]]) -> dict:
    row: dict = defaultdict(Fraction)
    for sign, p, q, r, where in identity:
        if where == "left":
            for t, c in bracket_basis(spec, p, q):
                row[label_fn(t, r)] += sign * c
        else:
            for t, c in bracket_basis(spec, q, r):
                row[label_fn(p, t)] += sign * c
    return row


def constraints_leibniz(spec: AlgebraSpec, w: Window | int) -> LinearSystem:
    """α([x,y],z) - α(x,[y,z]) - α([x,z],y) = 0 on admissible ordered triples."""
    w = as_window(w)
    _require_module(spec)
    system = LinearSystem(leibniz_variables(spec, w))
    for x, y, z in degree0_triples(spec, w, ordered=True):
        system.add_row(
            _row(spec, ordered_label, [(1, x, y, z, "left"), (-1, x, y, z, "right"), (-1, x, z, y, "left")])
        )
    return system


def constraints_invariant_form(spec: AlgebraSpec, w: Window | int) -> LinearSystem:
    """θ([x,y],z) - θ(x,[y,z]) = 0 for symmetric θ on admissible ordered triples."""
    w = as_window(w)
    _require_module(spec)
    system = LinearSystem(symmetric_variables(spec, w))
    for x, y, z in degree0_triples(spec, w, ordered=True):
        system.add_row(_row(spec, symmetric_label, [(1, x, y, z, "left"), (-1, x, y, z, "right")]))
    return system


def leibniz_coboundaries(spec: AlgebraSpec, w: Window | int) -> SubspaceBasis:
    w = as_window(w)
    variables = leibniz_variables(spec, w)
    vectors = []
    for e in weight_zero_basis(spec, w):
        vec = {}
        for u, v in _pairs(spec, w):
            coeff = dict(bracket_basis(spec, u, v)).get(e)
            if coeff:
                vec[ordered_label(u, v)] = -coeff
        if vec:
            vectors.append(vec)
    return span(vectors, variables)


def hl2_dimension(spec: AlgebraSpec, w: Window | int) -> int:
    w = as_window(w)
    if w.N < 5:
        raise WindowTooSmall("HL² needs N ≥ 5")
    return quotient_dim(kernel(constraints_leibniz(spec, w)), leibniz_coboundaries(spec, w))


def inv_dimension(spec: AlgebraSpec, w: Window | int) -> int:
    return kernel(constraints_invariant_form(spec, w)).dim


def symmetrize(spec: AlgebraSpec, chi: dict, w: Window | int) -> dict:
    """φ(χ)(x, y) = χ(x, y) + χ(y, x), in symmetric-pair unknowns."""
    out: dict = defaultdict(Fraction)
    for u, v in _pairs(spec, as_window(w)):
        value = chi.get(ordered_label(u, v))
        if value:
            out[symmetric_label(u, v)] += 2 * value if u == v else value
    return {k: c for k, c in out.items() if c}


def theta_a() -> dict:
    """θ_A(A_0, A_0) = 1 as a Leibniz cochain (W_A only)."""
    return {ordered_label(X(0), X(0)): Fraction(1)}


def lie_to_leibniz(spec: AlgebraSpec, comp: Component, vec: dict, w: Window | int) -> dict:
    """Spread an antisymmetric cochain over ordered-pair unknowns."""
    out = {}
    known = set(cochain_variables(spec, comp, as_window(w)))
    for u, v in _pairs(spec, as_window(w)):
        coord = pair_coordinate(spec, u, v)
        if coord is None or coord[0] not in known:
            continue
        var, sign = coord
        if vec.get(var):
            out[ordered_label(u, v)] = sign * vec[var]
    return out


def exact_sequence_data(spec: AlgebraSpec, w: Window | int) -> dict:
    w = as_window(w)
    h2 = h2_dimensions(spec, w)["total"]
    leib = kernel(constraints_leibniz(spec, w))
    cob = leibniz_coboundaries(spec, w)
    hl2 = quotient_dim(leib, cob)
    inv = kernel(constraints_invariant_form(spec, w))
    images = [symmetrize(spec, chi, w) for chi in leib.vectors]
    image_rank = rank(images, inv.variables)
    inside = all(in_span(inv, img) for img in images)
    ok = hl2 - h2 <= inv.dim and image_rank == hl2 - h2 and inside
    return {
        "algebra": spec.label(),
        "lambda": None if spec.root.lam is None else str(spec.root.lam),
        "N": w.N,
        "h2": h2,
        "hl2": hl2,
        "inv": inv.dim,
        "crosscheck": ok,
    }


def exact_sequence_crosscheck(spec: AlgebraSpec, w: Window | int) -> bool:
    return exact_sequence_data(spec, w)["crosscheck"]
