"""Degree-0 2-cochains, their cocycle systems, coboundaries and H² dimensions.

A cochain is only ever evaluated on pairs of total L_0-weight zero.  For
W_A(λ) and W_B(λ) this is the familiar "n + m = 0"; for W(a,b) the module
vector I_m has weight a + m, so the admissible pairs shift with a.

Unknowns per component:

* Vir: ``v(n) = Ω(L_n, L_{-n})`` for 1 ≤ n ≤ N.
* Ab: ``alpha(i) = Ω(X_i, X_j)`` where X_i, X_j have opposite weight and i > j.
* Mix: ``beta(n) = Ω(L_n, X_m)`` where X_m has weight -n.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .algebra import (
    AlgebraSpec,
    Basis,
    Family,
    Kind,
    L,
    X,
    bracket_basis,
    window_basis,
    witt,
)
from .errors import DomainMismatch, NoModuleFamily, WindowTooSmall
from .linsolve import LinearSystem, SubspaceBasis, format_var, in_span, kernel, quotient_dim, span
from .scalars import LambdaParam, RationalLike, as_lambda, format_rational


@dataclass(frozen=True)
class Window:
    N: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise WindowTooSmall("window size must be positive")

    def contains(self, b: Basis) -> bool:
        return abs(b.degree) <= self.N


def as_window(w: Window | int) -> Window:
    return w if isinstance(w, Window) else Window(w)


class Component(Enum):
    VIR = "vir"
    AB = "ab"
    MIX = "mix"


def pair_component(u: Basis, v: Basis) -> Component | None:
    if u.family is Family.C or v.family is Family.C:
        return None
    if u.family is Family.L and v.family is Family.L:
        return Component.VIR
    if u.family is Family.M and v.family is Family.M:
        return Component.AB
    return Component.MIX


def _integral(q: Fraction) -> int | None:
    return q.numerator if q.denominator == 1 else None


def pair_coordinate(spec: AlgebraSpec, u: Basis, v: Basis) -> tuple[tuple, int] | None:
    """Express Ω(u, v) as ``sign * var`` for an antisymmetric degree-0 cochain.

    Returns None when the value is forced to zero (nonzero weight, or the
    diagonal of an antisymmetric form).
    """
    if spec.weight(u) + spec.weight(v) != 0:
        return None
    comp = pair_component(u, v)
    if comp is Component.VIR:
        if u.degree == 0:
            return None
        return (("v", u.degree), 1) if u.degree > 0 else (("v", v.degree), -1)
    if comp is Component.AB:
        if u.degree == v.degree:
            return None
        return (("alpha", u.degree), 1) if u.degree > v.degree else (("alpha", v.degree), -1)
    if comp is Component.MIX:
        return (("beta", u.degree), 1) if u.family is Family.L else (("beta", v.degree), -1)
    return None


def cochain_variables(spec: AlgebraSpec, comp: Component, w: Window) -> list[tuple]:
    """Ordered unknowns of ``comp`` whose defining pair lies in the window."""
    N = w.N
    if comp is Component.VIR:
        return [("v", n) for n in range(1, N + 1)]
    shift = spec.module_shift
    if comp is Component.AB:
        twice = _integral(2 * shift)
        if twice is None:
            return []
        # X_i and X_j with i + j = -2·shift and i > j
        return [("alpha", i) for i in range(-N, N + 1) if abs(-twice - i) <= N and i > -twice - i]
    s = _integral(shift)
    if s is None:
        return []
    return [("beta", n) for n in range(-N, N + 1) if abs(-n - s) <= N]


def defining_pair(spec: AlgebraSpec, var: tuple) -> tuple[Basis, Basis]:
    tag, n = var
    if tag == "v":
        return L(n), L(-n)
    if tag == "alpha":
        return X(n), X(-_integral(2 * spec.module_shift) - n)  # type: ignore[operator]
    return L(n), X(-n - _integral(spec.module_shift))  # type: ignore[operator]


def _inside(terms, N: int) -> bool:
    return all(abs(b.degree) <= N for b, _ in terms)


def degree0_triples(spec: AlgebraSpec, w: Window, ordered: bool = False) -> Iterator[tuple[Basis, Basis, Basis]]:
    """Basis triples of total weight 0 whose pairwise brackets stay in the window.

    Unordered mode yields strictly increasing triples only, which is enough
    for alternating identities.
    """
    N = w.N
    basis = window_basis(spec, N, include_central=False)
    position = {b: i for i, b in enumerate(basis)}
    by_weight: dict[Fraction, list[Basis]] = defaultdict(list)
    for b in basis:
        by_weight[spec.weight(b)].append(b)
    for i, x in enumerate(basis):
        for y in basis if ordered else basis[i + 1:]:
            for z in by_weight.get(-(spec.weight(x) + spec.weight(y)), ()):
                if not ordered and position[z] <= position[y]:
                    continue
                if all(
                    _inside(bracket_basis(spec, p, q), N)
                    for p, q in ((x, y), (y, z), (z, x))
                ):
                    yield x, y, z


def _require_plain(spec: AlgebraSpec) -> None:
    if spec.kind is Kind.EXTENDED:
        raise DomainMismatch("cohomology of an extended algebra is not computed")


def cocycle_system(spec: AlgebraSpec, comp: Component, w: Window | int) -> LinearSystem:
    """Cyclic-sum identity for a cochain supported on one component."""
    w = as_window(w)
    _require_plain(spec)
    if comp is not Component.VIR and not spec.has_module:
        raise NoModuleFamily(f"{spec.label()} has no module family")
    variables = cochain_variables(spec, comp, w)
    system = LinearSystem(variables)
    known = set(variables)
    for x, y, z in degree0_triples(spec, w):
        row: dict[tuple, Fraction] = defaultdict(Fraction)
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for t, coeff in bracket_basis(spec, b, c):
                if pair_component(a, t) is not comp:
                    continue
                coord = pair_coordinate(spec, a, t)
                if coord is None:
                    continue
                var, sign = coord
                if var not in known:
                    raise AssertionError(f"admissible triple references {var} outside the window")
                row[var] += sign * coeff
        system.add_row(row)
    return system


def constraints_virasoro(w: Window | int) -> LinearSystem:
    w = as_window(w)
    if w.N < 3:
        raise WindowTooSmall("the Virasoro system needs N ≥ 3")
    return cocycle_system(witt(), Component.VIR, w)


def constraints_abelian(spec: AlgebraSpec, w: Window | int) -> LinearSystem:
    return cocycle_system(spec, Component.AB, w)


def constraints_mixing(spec: AlgebraSpec, w: Window | int) -> LinearSystem:
    return cocycle_system(spec, Component.MIX, w)


def weight_zero_basis(spec: AlgebraSpec, w: Window) -> list[Basis]:
    return [b for b in window_basis(spec, w.N, include_central=False) if spec.weight(b) == 0]


def coboundary_vectors(spec: AlgebraSpec, comp: Component, w: Window) -> list[dict]:
    """dψ(u, v) = -ψ([u, v]) for ψ dual to each weight-0 basis vector."""
    variables = cochain_variables(spec, comp, w)
    vectors = []
    for e in weight_zero_basis(spec, w):
        vec = {}
        for var in variables:
            u, v = defining_pair(spec, var)
            coeff = dict(bracket_basis(spec, u, v)).get(e, Fraction(0))
            if coeff:
                vec[var] = -coeff
        if vec:
            vectors.append(vec)
    return vectors


def coboundary_space(spec: AlgebraSpec, comp: Component, w: Window | int) -> SubspaceBasis:
    w = as_window(w)
    _require_plain(spec)
    if comp is not Component.VIR and not spec.has_module:
        raise NoModuleFamily(f"{spec.label()} has no module family")
    return span(coboundary_vectors(spec, comp, w), cochain_variables(spec, comp, w))


def coboundary_space_h2(spec: AlgebraSpec, w: Window | int) -> dict[Component, SubspaceBasis]:
    if not spec.has_module:
        raise NoModuleFamily(f"{spec.label()} has no module family")
    return {comp: coboundary_space(spec, comp, w) for comp in Component}


@dataclass(frozen=True)
class ComponentResult:
    cocycles: SubspaceBasis
    coboundaries: SubspaceBasis

    @property
    def dim(self) -> int:
        return quotient_dim(self.cocycles, self.coboundaries)


def h2_components(spec: AlgebraSpec, w: Window | int) -> dict[Component, ComponentResult]:
    w = as_window(w)
    _require_plain(spec)
    comps = list(Component) if spec.has_module else [Component.VIR]
    out = {}
    for comp in comps:
        out[comp] = ComponentResult(kernel(cocycle_system(spec, comp, w)), coboundary_space(spec, comp, w))
    return out


def h2_dimensions(spec: AlgebraSpec, w: Window | int) -> dict[str, int]:
    w = as_window(w)
    if w.N < 4:
        raise WindowTooSmall("H² dimensions need N ≥ 4")
    parts = h2_components(spec, w)
    dims = {comp.value: (parts[comp].dim if comp in parts else 0) for comp in Component}
    dims["total"] = sum(dims.values())
    return dims


class CocycleId(Enum):
    OMEGA_VIR = "OmegaVir"
    OMEGA_0A = "Omega0A"
    OMEGA_MIX_A = "OmegaMixA"
    OMEGA_AB_B = "OmegaAbB"
    OMEGA_MIX_B = "OmegaMixB"
    IOTA = "Iota"
    BETA_LAMBDA = "BetaLambda"
    GAMMA1 = "Gamma1"
    GAMMA2 = "Gamma2"
    ETA_LAMBDA = "EtaLambda"


_DEFAULT_COMPONENT = {
    CocycleId.OMEGA_VIR: Component.VIR,
    CocycleId.OMEGA_AB_B: Component.AB,
}
_NEEDS_LAMBDA = {CocycleId.OMEGA_MIX_A, CocycleId.OMEGA_MIX_B, CocycleId.BETA_LAMBDA, CocycleId.ETA_LAMBDA}
_HOME_KIND = {
    CocycleId.OMEGA_0A: Kind.SEMIDIRECT_A,
    CocycleId.OMEGA_MIX_A: Kind.SEMIDIRECT_A,
    CocycleId.OMEGA_AB_B: Kind.SEMIDIRECT_B,
    CocycleId.OMEGA_MIX_B: Kind.SEMIDIRECT_B,
}


@dataclass(frozen=True)
class NamedCocycle:
    """Closed-form degree-0 cocycle, valid at every integer degree.

    Function-type ids (ι, β_λ, γ₁, γ₂, η_λ) act on the mixing component by
    default; pass ``component=Component.AB`` to use ι as an abelian cocycle.
    """

    id: CocycleId
    lam: LambdaParam | None = None
    component: Component | None = None

    @property
    def home_component(self) -> Component:
        if self.component is not None:
            return self.component
        return _DEFAULT_COMPONENT.get(self.id, Component.MIX)

    def bind(self, spec: AlgebraSpec) -> "NamedCocycle":
        if self.lam is None and self.id in _NEEDS_LAMBDA and spec.root.lam is not None:
            return NamedCocycle(self.id, spec.root.lam, self.component)
        return self

    def function(self, n: int) -> Fraction:
        """The scalar profile f with Ω(u_n, v_{-n}) = f(n)."""
        i = self.id
        if i is CocycleId.OMEGA_VIR:
            return Fraction(n * (n * n - 1), 12)
        if i in (CocycleId.OMEGA_0A, CocycleId.IOTA, CocycleId.GAMMA1, CocycleId.OMEGA_AB_B):
            return Fraction(n)
        if i is CocycleId.GAMMA2:
            return Fraction(n * n)
        lam = self.lam
        if lam is None:
            raise DomainMismatch(f"{i.value} needs a value of λ")
        if i in (CocycleId.OMEGA_MIX_A, CocycleId.BETA_LAMBDA):
            if lam.is_infinite or n != 0:
                return Fraction(1)
            return lam.value + 1  # type: ignore[operator]
        if i is CocycleId.OMEGA_MIX_B:
            return Fraction(n * n) if lam.is_value(0) else Fraction(n)
        if lam.is_infinite:
            return Fraction(n + n * n)
        return n + n * (n + 1) * lam.value  # type: ignore[operator]

    def evaluate(self, u: Basis, v: Basis) -> Fraction:
        """Value on an arbitrary basis pair; zero off the home component."""
        comp = pair_component(u, v)
        if comp is not self.home_component or u.degree + v.degree != 0:
            return Fraction(0)
        if comp is Component.MIX and u.family is Family.M:
            return -self.function(v.degree)
        return self.function(u.degree)

    def to_json(self) -> dict:
        out: dict = {"id": self.id.value, "component": self.home_component.value}
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        return out


def named(id_: CocycleId | str, lam: LambdaParam | RationalLike | None = None, component: Component | None = None) -> NamedCocycle:
    cid = id_ if isinstance(id_, CocycleId) else CocycleId(id_)
    return NamedCocycle(cid, None if lam is None else as_lambda(lam), component)


def eval_named(c: NamedCocycle, pair: tuple[Basis, Basis]) -> Fraction:
    u, v = pair
    if pair_component(u, v) is not c.home_component:
        raise DomainMismatch(f"{c.id.value} is not defined on ({u}, {v})")
    return c.evaluate(u, v)


def _check_home(spec: AlgebraSpec, c: NamedCocycle) -> None:
    if c.home_component is not Component.VIR and not spec.has_module:
        raise DomainMismatch(f"{c.id.value} needs a module family")
    home = _HOME_KIND.get(c.id)
    root = spec.root.kind
    if home is not None and root is not home:
        raise DomainMismatch(f"{c.id.value} lives on {home.value}, not {spec.label()}")
    if home is None and c.home_component is not Component.VIR and root not in (Kind.SEMIDIRECT_A, Kind.SEMIDIRECT_B):
        raise DomainMismatch(f"{c.id.value} is defined for W_A and W_B only")


def is_cocycle(spec: AlgebraSpec, c: NamedCocycle, w: Window | int) -> list[tuple[Basis, Basis, Basis, Fraction]]:
    """Triples in the window where the cyclic sum of ``c`` is nonzero."""
    w = as_window(w)
    _check_home(spec, c)
    c = c.bind(spec)
    defects = []
    basis = window_basis(spec, w.N, include_central=False)
    by_weight: dict[Fraction, list[Basis]] = defaultdict(list)
    for b in basis:
        by_weight[spec.weight(b)].append(b)
    for i, x in enumerate(basis):
        for j in range(i, len(basis)):
            y = basis[j]
            for z in by_weight.get(-(spec.weight(x) + spec.weight(y)), ()):
                total = Fraction(0)
                for a, b, d in ((x, y, z), (y, z, x), (z, x, y)):
                    for t, coeff in bracket_basis(spec, b, d):
                        total += coeff * c.evaluate(a, t)
                if total:
                    defects.append((x, y, z, total))
    return defects


def window_vector(c: NamedCocycle, spec: AlgebraSpec, w: Window | int) -> dict:
    """Restriction of ``c`` to the unknowns of its home component."""
    w = as_window(w)
    c = c.bind(spec)
    vec = {}
    for var in cochain_variables(spec, c.home_component, w):
        value = c.evaluate(*defining_pair(spec, var))
        if value:
            vec[var] = value
    return vec


def vector_json(vec: dict, variables) -> dict:
    return {format_var(v): format_rational(vec[v]) for v in variables if vec.get(v)}


def h2_record(spec: AlgebraSpec, w: Window | int) -> dict:
    """JSON-ready H² record with reduced bases of each quotient representative set."""
    w = as_window(w)
    parts = h2_components(spec, w)
    dims = h2_dimensions(spec, w)
    basis = {}
    for comp, res in parts.items():
        basis[comp.value] = {
            "cocycles": [vector_json(v, res.cocycles.variables) for v in res.cocycles.vectors],
            "coboundaries": [vector_json(v, res.coboundaries.variables) for v in res.coboundaries.vectors],
        }
    return {
        "algebra": spec.label(),
        "lambda": None if spec.root.lam is None else str(spec.root.lam),
        "N": w.N,
        "dims": dims,
        "basis": basis,
    }


def coboundaries_are_cocycles(spec: AlgebraSpec, w: Window | int) -> bool:
    for res in h2_components(spec, w).values():
        if not all(in_span(res.cocycles, v) for v in res.coboundaries.vectors):
            return False
    return True
