"""Central extensions ĝ = g ⊕ span{c_i} with [x,y]ĝ = [x,y] + Σ Ω_i(x,y) c_i."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraSpec,
    Attachment,
    Basis,
    Element,
    Family,
    Kind,
    bracket_basis,
    central,
    iter_window_triples,
    basis_jacobi_defect,
    semidirect_a,
    semidirect_b,
    window_basis,
    witt,
)
from .cohomology import (
    CocycleId,
    Component,
    NamedCocycle,
    Window,
    _check_home,
    as_window,
    defining_pair,
    pair_component,
)
from .errors import DomainMismatch, DuplicateCentralName
from .scalars import LambdaParam, RationalLike, as_rational, format_rational


@dataclass(frozen=True)
class WindowCocycle:
    """A cocycle known only on a window, stored as values on defining pairs."""

    values: tuple[tuple[tuple[Basis, Basis], Fraction], ...]
    N: int

    def evaluate(self, u: Basis, v: Basis) -> Fraction:
        for (p, q), value in self.values:
            if (p, q) == (u, v):
                return value
            if (q, p) == (u, v):
                return -value
        return Fraction(0)

    def to_json(self) -> dict:
        return {"window": self.N, "values": [[str(p), str(q), format_rational(c)] for (p, q), c in self.values]}


def window_cocycle(spec: AlgebraSpec, vector: dict, w: Window | int) -> WindowCocycle:
    """Wrap a solver vector (v/alpha/beta unknowns) as an attachable cocycle."""
    w = as_window(w)
    values = tuple(sorted((defining_pair(spec, var), Fraction(c)) for var, c in vector.items() if c))
    return WindowCocycle(values, w.N)


@dataclass(frozen=True)
class MixingProfile:
    """Ω(L_n, X_m) = p(n) δ_{n+m,0} for a polynomial p; need not be a cocycle."""

    coefficients: tuple[Fraction, ...]

    def evaluate(self, u: Basis, v: Basis) -> Fraction:
        if pair_component(u, v) is not Component.MIX or u.degree + v.degree != 0:
            return Fraction(0)
        n, sign = (u.degree, 1) if u.family is Family.L else (v.degree, -1)
        return sign * sum((c * n**k for k, c in enumerate(self.coefficients)), Fraction(0))

    def to_json(self) -> dict:
        return {"mixing_polynomial": [format_rational(c) for c in self.coefficients]}


@dataclass(frozen=True)
class Coboundary:
    """dψ for ψ dual to basis vector ``e``: Ω(u, v) = -(coefficient of e in [u, v])."""

    spec: AlgebraSpec
    e: Basis

    def evaluate(self, u: Basis, v: Basis) -> Fraction:
        return -dict(bracket_basis(self.spec, u, v)).get(self.e, Fraction(0))

    def to_json(self) -> dict:
        return {"coboundary_of": {"family": self.e.family.name, "degree": self.e.degree}}


@dataclass(frozen=True)
class Selection:
    cocycle: object
    name: str
    coefficient: Fraction = Fraction(1)


def select(cocycle, name: str, coefficient: RationalLike = 1) -> Selection:
    return Selection(cocycle, name, as_rational(coefficient))


def build_central_extension(base: AlgebraSpec, sel: Sequence[Selection]) -> AlgebraSpec:
    names = list(base.central_names)
    attached = []
    for entry in sel:
        if entry.name in names:
            raise DuplicateCentralName(f"central name {entry.name!r} already used")
        names.append(entry.name)
        cocycle = entry.cocycle
        if isinstance(cocycle, NamedCocycle):
            _check_home(base.root, cocycle)
            cocycle = cocycle.bind(base.root)
        elif not hasattr(cocycle, "evaluate"):
            raise DomainMismatch("a cocycle must provide evaluate(u, v)")
        attached.append(Attachment(cocycle, entry.name, entry.coefficient))
    return AlgebraSpec(Kind.EXTENDED, base=base, attached=tuple(attached))


def _window_limit(spec: AlgebraSpec) -> int | None:
    limits = [att.cocycle.N for att in spec.all_attachments() if isinstance(att.cocycle, WindowCocycle)]
    return min(limits) if limits else None


def verify_extension(spec: AlgebraSpec, w: Window | int) -> list[tuple[Basis, Basis, Basis, Element]]:
    """Jacobi defects on window triples, plus any non-central attached generator.

    Windowed cocycles only see pairs inside their window, so with one of
    those attached the triples are restricted to brackets that stay inside.
    """
    w = as_window(w)
    limit = _window_limit(spec)
    N = w.N if limit is None else min(w.N, limit)
    basis = window_basis(spec, N)
    defects: list[tuple[Basis, Basis, Basis, Element]] = []
    for name in spec.central_names:
        c = central(name)
        for b in basis:
            if bracket_basis(spec, c, b) or bracket_basis(spec, b, c):
                defects.append((c, b, c, Element(bracket_basis(spec, c, b))))
    for x, y, z in iter_window_triples(basis, ordered=False):
        if limit is not None and not all(
            abs(t.degree) <= N for p, q in ((x, y), (y, z), (z, x)) for t, _ in bracket_basis(spec, p, q)
        ):
            continue
        d = basis_jacobi_defect(spec, x, y, z)
        if d:
            defects.append((x, y, z, d))
    return defects


def coboundary_trivialization_defects(base: AlgebraSpec, e: Basis, w: Window | int) -> list[tuple[Basis, Basis]]:
    """Check that x ↦ x + ψ(x)c maps the extension by dψ onto base ⊕ Cc.

    ψ is dual to ``e``, so only ``e`` itself picks up a central shift.
    """
    w = as_window(w)
    ext = build_central_extension(base, [select(Coboundary(base, e), "triv")])
    c = central("triv")

    def theta(x: Element) -> Element:
        # x + t·c ↦ x + (t + ψ(x))·c
        return x + Element.basis(c, x.coefficient(e))

    bad = []
    basis = window_basis(base, w.N, include_central=False)
    for u in basis:
        for v in basis:
            # theta(u), theta(v) differ from u, v by central terms, which bracket to zero
            if theta(Element(bracket_basis(ext, u, v))) != Element(bracket_basis(base, u, v)):
                bad.append((u, v))
    return bad


def virasoro() -> AlgebraSpec:
    return build_central_extension(witt(), [select(NamedCocycle(CocycleId.OMEGA_VIR), "vir")])


def vir_a(lam: LambdaParam | RationalLike) -> AlgebraSpec:
    base = semidirect_a(lam)
    return build_central_extension(
        base,
        [select(NamedCocycle(CocycleId.OMEGA_VIR), "vir"), select(NamedCocycle(CocycleId.OMEGA_MIX_A), "mixA")],
    )


def vir_b(lam: LambdaParam | RationalLike) -> AlgebraSpec:
    base = semidirect_b(lam)
    return build_central_extension(
        base,
        [
            select(NamedCocycle(CocycleId.OMEGA_VIR), "vir"),
            select(NamedCocycle(CocycleId.OMEGA_AB_B), "abB"),
            select(NamedCocycle(CocycleId.OMEGA_MIX_B), "mixB"),
        ],
    )


def extension_json(spec: AlgebraSpec) -> dict:
    return {
        "base": spec.root.label(),
        "central": [
            {"name": att.name, "coefficient": format_rational(att.coefficient), "cocycle": att.cocycle.to_json()}  # type: ignore[attr-defined]
            for att in spec.all_attachments()
        ],
    }
