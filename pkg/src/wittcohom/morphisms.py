"""Automorphisms and derivations of W_A(λ) and W_B(λ), and H¹(g; g).

An automorphism is stored by its parameters

    inner ∘ τ^k ∘ φ_a ∘ ψ_b ∘ σ_α ∘ μ_ξ

where ``inner`` is the product of exp(c·ad X_i) over the stored (i, c)
pairs.  Maps are applied rightmost factor first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable

from .algebra import (
    AlgebraSpec,
    Basis,
    Element,
    Family,
    Kind,
    L,
    X,
    bracket,
    bracket_basis,
    window_basis,
    semidirect_a,
)
from .cohomology import Window, as_window, weight_zero_basis
from .errors import DomainMismatch, InvalidAutForAlgebra, InvalidDerForAlgebra, NoModuleFamily, WindowTooSmall
from .linsolve import LinearSystem, in_span, kernel, quotient_dim, rank, span
from .scalars import LambdaParam, RationalLike, as_lambda, as_rational, format_rational

BasisMap = Callable[[Basis], Element]


def _linear(fn: BasisMap, x: Element) -> Element:
    acc: list[tuple[Basis, Fraction]] = []
    for b, c in x.items():
        acc.extend((t, c * ct) for t, ct in fn(b).items())
    return Element(acc)


def _normalize_inner(pairs: Iterable[tuple[int, RationalLike]], drop_zero_index: bool = False) -> tuple[tuple[int, Fraction], ...]:
    acc: dict[int, Fraction] = {}
    for i, c in pairs:
        acc[int(i)] = acc.get(int(i), Fraction(0)) + as_rational(c)
    return tuple(sorted((i, c) for i, c in acc.items() if c and not (drop_zero_index and i == 0)))


@dataclass(frozen=True)
class AutSpec:
    k: int = 0
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    alpha: Fraction = Fraction(1)
    xi: Fraction = Fraction(1)
    inner: tuple[tuple[int, Fraction], ...] = ()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "alpha": format_rational(self.alpha),
            "xi": format_rational(self.xi),
            "inner": [[i, format_rational(c)] for i, c in self.inner],
        }


def aut(
    k: int = 0,
    a: RationalLike = 0,
    b: RationalLike = 0,
    alpha: RationalLike = 1,
    xi: RationalLike = 1,
    inner: Iterable[tuple[int, RationalLike]] = (),
) -> AutSpec:
    return AutSpec(k % 2, as_rational(a), as_rational(b), as_rational(alpha), as_rational(xi), _normalize_inner(inner))


IDENTITY = AutSpec()


def psi_form(k: int, a: RationalLike, alpha: RationalLike, xi: RationalLike, lam: LambdaParam | RationalLike) -> AutSpec:
    """The restricted family on W_A(λ): only ψ_a for λ ≠ 0, only φ_a at λ = 0."""
    if as_lambda(lam).is_value(0):
        return aut(k, a, 0, alpha, xi)
    return aut(k, 0, a, alpha, xi)


def _lam(spec: AlgebraSpec) -> LambdaParam:
    lam = spec.lam
    assert lam is not None
    return lam


def validate_aut(s: AutSpec, spec: AlgebraSpec) -> AutSpec:
    """Check the invariants of ``s`` for ``spec`` and return it normalised."""
    if spec.kind not in (Kind.SEMIDIRECT_A, Kind.SEMIDIRECT_B):
        raise InvalidAutForAlgebra(f"automorphism families are defined for W_A and W_B, not {spec.label()}")
    lam = _lam(spec)
    if s.alpha == 0 or s.xi == 0:
        raise InvalidAutForAlgebra("alpha and xi must be nonzero")
    if s.k not in (0, 1):
        raise InvalidAutForAlgebra("k must be 0 or 1")
    if s.k == 1 and not (lam.is_value(0) or lam.is_value(-1)):
        raise InvalidAutForAlgebra(f"the flip exists only for λ ∈ {{0, -1}}, not λ = {lam}")
    is_b = spec.kind is Kind.SEMIDIRECT_B
    if is_b and s.b != 0 and not lam.is_value(0):
        raise InvalidAutForAlgebra("ψ^B is only defined for λ = 0")
    if is_b and any(i == 0 for i, _ in s.inner):
        return AutSpec(s.k, s.a, s.b, s.alpha, s.xi, _normalize_inner(s.inner, drop_zero_index=True))
    return s


def _mu(xi: Fraction) -> BasisMap:
    return lambda u: Element.basis(u, xi if u.family is Family.M else 1)


def _sigma(alpha: Fraction) -> BasisMap:
    return lambda u: Element.basis(u, alpha ** u.degree)


def _shear(profile: Callable[[int], Fraction]) -> BasisMap:
    """L_n ↦ L_n + profile(n) X_n, module fixed."""

    def fn(u: Basis) -> Element:
        if u.family is Family.L:
            return Element({u: 1, X(u.degree): profile(u.degree)})
        return Element.basis(u)

    return fn


def phi_profile(spec: AlgebraSpec, a: Fraction) -> Callable[[int], Fraction]:
    lam = _lam(spec)
    if spec.kind is Kind.SEMIDIRECT_A:
        return lambda n: a * n * n
    if lam.is_infinite:
        return lambda n: a
    return lambda n: (lam.value + 1) * a if n == 0 else a  # type: ignore[operator]


def psi_profile(spec: AlgebraSpec, b: Fraction) -> Callable[[int], Fraction]:
    if spec.kind is Kind.SEMIDIRECT_B and not _lam(spec).is_value(0):
        return lambda n: Fraction(0)
    return lambda n: b * n


def _tau(spec: AlgebraSpec) -> BasisMap:
    minus_one = _lam(spec).is_value(-1)

    def fn(u: Basis) -> Element:
        if u.family is Family.L:
            return Element.basis(L(-u.degree), -1)
        if u.family is Family.M:
            return Element.basis(X(-u.degree), -1 if (minus_one and u.degree == 0) else 1)
        return Element.basis(u)

    return fn


def _inner_map(spec: AlgebraSpec, pairs) -> Callable[[Element], Element]:
    # ad X_i ad X_j = 0 on the whole algebra, so the exponential is 1 + Σ c_i ad X_i
    def fn(x: Element) -> Element:
        out = x
        for i, c in pairs:
            out = out + c * bracket(spec, Element.basis(X(i)), x)
        return out

    return fn


def apply_aut(s: AutSpec, spec: AlgebraSpec, x: Element) -> Element:
    s = validate_aut(s, spec)
    y = _linear(_mu(s.xi), x)
    y = _linear(_sigma(s.alpha), y)
    y = _linear(_shear(psi_profile(spec, s.b)), y)
    y = _linear(_shear(phi_profile(spec, s.a)), y)
    if s.k:
        y = _linear(_tau(spec), y)
    return _inner_map(spec, s.inner)(y)


def check_aut(s: AutSpec, spec: AlgebraSpec, w: Window | int) -> list[tuple[Basis, Basis]]:
    """Basis pairs in the window where ``s`` fails to preserve the bracket."""
    w = as_window(w)
    s = validate_aut(s, spec)
    basis = window_basis(spec, w.N, include_central=False)
    image = {u: apply_aut(s, spec, Element.basis(u)) for u in basis}
    bad = []
    for i, u in enumerate(basis):
        for v in basis[i + 1:]:
            lhs = apply_aut(s, spec, Element(bracket_basis(spec, u, v)))
            if lhs != bracket(spec, image[u], image[v]):
                bad.append((u, v))
    return bad


def _inner_sign(spec: AlgebraSpec, k: int, i: int) -> int:
    return -1 if (k == 1 and _lam(spec).is_value(-1) and i == 0) else 1


def compose_auts(s1: AutSpec, s2: AutSpec, spec: AlgebraSpec) -> AutSpec:
    """Parameters of s1 ∘ s2."""
    s1, s2 = validate_aut(s1, spec), validate_aut(s2, spec)
    eps1 = -1 if s1.k else 1
    eps2 = -1 if s2.k else 1
    inner = list(s1.inner)
    for j, z in s2.inner:
        i = eps1 * j
        inner.append((i, _inner_sign(spec, s1.k, j) * s1.alpha ** j * s1.xi * z))
    result = AutSpec(
        (s1.k + s2.k) % 2,
        eps2 * s1.a + s1.xi * s2.a,
        s1.b + s1.xi * s2.b,
        s1.alpha ** eps2 * s2.alpha,
        s1.xi * s2.xi,
        _normalize_inner(inner, drop_zero_index=spec.kind is Kind.SEMIDIRECT_B),
    )
    return validate_aut(result, spec)


def inverse_aut(s: AutSpec, spec: AlgebraSpec) -> AutSpec:
    """The unique t with compose_auts(s, t) = identity."""
    s = validate_aut(s, spec)
    eps = -1 if s.k else 1
    inner = []
    for i, y in s.inner:
        j = eps * i
        inner.append((j, -y / (_inner_sign(spec, s.k, i) * s.alpha ** j * s.xi)))
    return validate_aut(
        AutSpec(s.k, -eps * s.a / s.xi, -s.b / s.xi, s.alpha ** (-eps), 1 / s.xi, _normalize_inner(inner)),
        spec,
    )


def pointwise_composition_defects(s1: AutSpec, s2: AutSpec, spec: AlgebraSpec, N: int) -> list[Basis]:
    composite = compose_auts(s1, s2, spec)
    bad = []
    for u in window_basis(spec, N, include_central=False):
        e = Element.basis(u)
        if apply_aut(composite, spec, e) != apply_aut(s1, spec, apply_aut(s2, spec, e)):
            bad.append(u)
    return bad


def _small_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if q or not nonzero:
            return q


def random_aut(spec: AlgebraSpec, rng: random.Random) -> AutSpec:
    """A random valid parameter tuple for ``spec`` (small rationals, short inner part)."""
    lam = _lam(spec)
    flips = lam.is_value(0) or lam.is_value(-1)
    has_b = spec.kind is Kind.SEMIDIRECT_A or lam.is_value(0)
    inner = [(rng.randint(-4, 4), _small_rational(rng)) for _ in range(rng.randint(0, 3))]
    s = AutSpec(
        rng.randint(0, 1) if flips else 0,
        _small_rational(rng),
        _small_rational(rng) if has_b else Fraction(0),
        _small_rational(rng, nonzero=True),
        _small_rational(rng, nonzero=True),
        _normalize_inner(inner),
    )
    return validate_aut(s, spec)


def inner_identity_check(lam: LambdaParam | RationalLike, w: Window | int, samples: Iterable[RationalLike] = (1, 3, Fraction(-2, 5))) -> bool:
    """exp(-a·ad A_0) versus the stated combination of φ_a and ψ_a on W_A(λ)."""
    w = as_window(w)
    lam = as_lambda(lam)
    spec = semidirect_a(lam)
    for sample in samples:
        a = as_rational(sample)
        inner = aut(inner=[(0, -a)])
        phi, psi = aut(a=a), aut(b=a)
        if lam.is_infinite:
            wphi, wpsi = Fraction(1), Fraction(1)
        else:
            wphi, wpsi = lam.value, lam.value + 1  # type: ignore[operator]
        for u in window_basis(spec, w.N, include_central=False):
            e = Element.basis(u)
            combo = e + wphi * (apply_aut(phi, spec, e) - e) + wpsi * (apply_aut(psi, spec, e) - e)
            if apply_aut(inner, spec, e) != combo:
                return False
    return True


class DerTag(Enum):
    AD_INNER = "AdInner"
    D_AB = "DAb"
    DELTA_A = "DeltaA"
    PARTIAL_A = "PartialA"
    D_B = "DB"
    PARTIAL_B0 = "PartialB0"


@dataclass(frozen=True)
class DerTerm:
    tag: DerTag
    coeff: Fraction = Fraction(1)
    element: Element | None = None


@dataclass(frozen=True)
class DerSpec:
    terms: tuple[DerTerm, ...] = ()

    def __add__(self, other: "DerSpec") -> "DerSpec":
        return DerSpec(self.terms + other.terms)

    def __rmul__(self, scalar: RationalLike) -> "DerSpec":
        q = as_rational(scalar)
        return DerSpec(tuple(DerTerm(t.tag, q * t.coeff, t.element) for t in self.terms))

    def to_json(self, letter: str = "X") -> dict:
        out = []
        for t in self.terms:
            item: list = [t.tag.value, format_rational(t.coeff)]
            if t.element is not None:
                item.append(t.element.to_text(letter))
            out.append(item)
        return {"terms": out}


def der(tag: DerTag | str, coeff: RationalLike = 1) -> DerSpec:
    t = tag if isinstance(tag, DerTag) else DerTag(tag)
    if t is DerTag.AD_INNER:
        raise ValueError("use ad_inner() for inner derivations")
    return DerSpec((DerTerm(t, as_rational(coeff)),))


def ad_inner(x: Element, coeff: RationalLike = 1) -> DerSpec:
    return DerSpec((DerTerm(DerTag.AD_INNER, as_rational(coeff), x),))


def d_a(lam: LambdaParam | RationalLike) -> DerSpec:
    """d^A_λ: δ^A away from λ = 0, ∂^A at λ = 0."""
    return der(DerTag.PARTIAL_A if as_lambda(lam).is_value(0) else DerTag.DELTA_A)


def validate_der(d: DerSpec, spec: AlgebraSpec) -> None:
    kind = spec.root.kind
    for t in d.terms:
        if t.tag is DerTag.AD_INNER:
            continue
        if t.tag is DerTag.D_AB and not spec.has_module:
            raise InvalidDerForAlgebra("d_Ab needs a module family")
        if t.tag in (DerTag.DELTA_A, DerTag.PARTIAL_A) and kind is not Kind.SEMIDIRECT_A:
            raise InvalidDerForAlgebra(f"{t.tag.value} is defined on W_A only")
        if t.tag is DerTag.D_B and kind is not Kind.SEMIDIRECT_B:
            raise InvalidDerForAlgebra("d^B is defined on W_B only")
        if t.tag is DerTag.PARTIAL_B0 and not (kind is Kind.SEMIDIRECT_B and spec.root.lam.is_value(0)):  # type: ignore[union-attr]
            raise InvalidDerForAlgebra("∂^B_0 is defined on W_B(0) only")


def _der_on_basis(t: DerTerm, spec: AlgebraSpec, u: Basis) -> Element:
    if t.tag is DerTag.AD_INNER:
        return bracket(spec, t.element, Element.basis(u))  # type: ignore[arg-type]
    if t.tag is DerTag.D_AB:
        return Element.basis(u) if u.family is Family.M else Element()
    if u.family is not Family.L:
        return Element()
    n = u.degree
    if t.tag is DerTag.DELTA_A:
        return Element.basis(X(n), n)
    if t.tag is DerTag.PARTIAL_A:
        return Element.basis(X(n), n * n)
    if t.tag is DerTag.PARTIAL_B0:
        return Element.basis(X(n), n)
    lam = spec.root.lam
    assert lam is not None
    if n == 0 and not lam.is_infinite:
        return Element.basis(X(0), lam.value + 1)  # type: ignore[operator]
    return Element.basis(X(n))


def apply_der(d: DerSpec, spec: AlgebraSpec, x: Element) -> Element:
    validate_der(d, spec)
    out = Element()
    for t in d.terms:
        out = out + t.coeff * _linear(lambda u: _der_on_basis(t, spec, u), x)
    return out


def check_der(d: DerSpec, spec: AlgebraSpec, w: Window | int) -> list[tuple[Basis, Basis]]:
    """Basis pairs in the window violating d[x,y] = [dx,y] + [x,dy]."""
    w = as_window(w)
    validate_der(d, spec)
    basis = window_basis(spec, w.N, include_central=False)
    image = {u: apply_der(d, spec, Element.basis(u)) for u in basis}
    bad = []
    for i, u in enumerate(basis):
        for v in basis[i:]:
            lhs = apply_der(d, spec, Element(bracket_basis(spec, u, v)))
            rhs = bracket(spec, image[u], Element.basis(v)) + bracket(spec, Element.basis(u), image[v])
            if lhs != rhs:
                bad.append((u, v))
    return bad


# Degree-0 derivation solver.  d(L_n) = alpha_n L_n + beta_n X_., d(X_m) = eta_m L_. + theta_m X_m,
# where the partner has the same L_0-weight.


def _partner(spec: AlgebraSpec, u: Basis) -> Basis | None:
    shift = spec.module_shift
    if shift.denominator != 1:
        return None
    s = shift.numerator
    return X(u.degree - s) if u.family is Family.L else L(u.degree + s)


def _derivation_unknowns(spec: AlgebraSpec, w: Window) -> dict[Basis, list[tuple[tuple, Basis]]]:
    """For each complete basis vector u, the (variable, target) pairs of d(u)."""
    out: dict[Basis, list[tuple[tuple, Basis]]] = {}
    for u in window_basis(spec, w.N, include_central=False):
        partner = _partner(spec, u)
        if partner is not None and abs(partner.degree) > w.N:
            continue
        if u.family is Family.L:
            entries = [(("alpha", u.degree), u)]
            if partner is not None:
                entries.append((("beta", u.degree), partner))
        else:
            entries = [(("theta", u.degree), u)]
            if partner is not None:
                entries.insert(0, (("eta", u.degree), partner))
        out[u] = entries
    return out


_VAR_ORDER = {"alpha": 0, "beta": 1, "eta": 2, "theta": 3}


def derivation_variables(spec: AlgebraSpec, w: Window | int) -> list[tuple]:
    unknowns = _derivation_unknowns(spec, as_window(w))
    labels = [var for entries in unknowns.values() for var, _ in entries]
    return sorted(labels, key=lambda v: (_VAR_ORDER[v[0]], v[1]))


def derivation_system(spec: AlgebraSpec, w: Window | int) -> LinearSystem:
    w = as_window(w)
    if spec.kind is Kind.EXTENDED:
        raise DomainMismatch("derivations of extended algebras are not computed")
    if not spec.has_module:
        raise NoModuleFamily(f"{spec.label()} has no module family")
    unknowns = _derivation_unknowns(spec, w)
    system = LinearSystem(derivation_variables(spec, w))
    complete = list(unknowns)
    for i, x in enumerate(complete):
        for y in complete[i + 1:]:
            xy = bracket_basis(spec, x, y)
            if any(t not in unknowns for t, _ in xy):
                continue
            rows: dict[Basis, dict] = {}

            def add(out: Basis, var: tuple, coeff: Fraction) -> None:
                row = rows.setdefault(out, {})
                row[var] = row.get(var, Fraction(0)) + coeff

            for t, c in xy:
                for var, target in unknowns[t]:
                    add(target, var, c)
            for var, target in unknowns[x]:
                for out, c in bracket_basis(spec, target, y):
                    add(out, var, -c)
            for var, target in unknowns[y]:
                for out, c in bracket_basis(spec, x, target):
                    add(out, var, -c)
            for out in sorted(rows):
                system.add_row(rows[out])
    return system


def derivation_vector(d: DerSpec, spec: AlgebraSpec, w: Window | int) -> dict:
    """Window restriction of ``d`` in the solver's unknowns."""
    w = as_window(w)
    vec = {}
    for u, entries in _derivation_unknowns(spec, w).items():
        image = apply_der(d, spec, Element.basis(u))
        for var, target in entries:
            c = image.coefficient(target)
            if c:
                vec[var] = c
    return vec


def inner_derivations(spec: AlgebraSpec, w: Window | int) -> list[DerSpec]:
    w = as_window(w)
    return [ad_inner(Element.basis(e)) for e in weight_zero_basis(spec, w)]


def named_derivations(spec: AlgebraSpec) -> list[DerSpec]:
    """Outer generators: d_Ab plus d^A_λ, or d_Ab plus d^B_λ (and ∂^B_0 at λ = 0)."""
    kind = spec.root.kind
    lam = spec.root.lam
    if kind is Kind.SEMIDIRECT_A:
        return [der(DerTag.D_AB), d_a(lam)]  # type: ignore[arg-type]
    if kind is Kind.SEMIDIRECT_B:
        out = [der(DerTag.D_AB), der(DerTag.D_B)]
        if lam is not None and lam.is_value(0):
            out.append(der(DerTag.PARTIAL_B0))
        return out
    return []


def h1_data(spec: AlgebraSpec, w: Window | int) -> dict:
    w = as_window(w)
    if w.N < 5:
        raise WindowTooSmall("H¹ needs N ≥ 5")
    system = derivation_system(spec, w)
    ker = kernel(system)
    inner_vecs = [derivation_vector(d, spec, w) for d in inner_derivations(spec, w)]
    inner_space = span(inner_vecs, system.variables)
    dim = quotient_dim(ker, inner_space)
    named = [derivation_vector(d, spec, w) for d in named_derivations(spec)]
    eta_zero = all(not c for vec in ker.vectors for var, c in vec.items() if var[0] == "eta")
    named_match = None
    if named:
        named_match = all(in_span(ker, v) for v in named) and rank(
            list(inner_space.vectors) + named, system.variables
        ) == ker.dim
    return {
        "algebra": spec.label(),
        "lambda": None if spec.root.lam is None else str(spec.root.lam),
        "N": w.N,
        "der": ker.dim,
        "inner": inner_space.dim,
        "h1": dim,
        "eta_zero": eta_zero,
        "named_span": named_match,
        "kernel": ker,
    }


def h1_adjoint_dimension(spec: AlgebraSpec, w: Window | int) -> int:
    return h1_data(spec, w)["h1"]


# One-parameter families and the derivations they differentiate to.


def one_parameter_families(spec: AlgebraSpec) -> list[tuple[str, Callable[[Fraction], AutSpec], DerSpec]]:
    kind = spec.kind
    lam = spec.lam
    out: list[tuple[str, Callable[[Fraction], AutSpec], DerSpec]] = [
        ("mu", lambda t: aut(xi=1 + t), der(DerTag.D_AB)),
    ]
    if kind is Kind.SEMIDIRECT_A:
        out.append(("psi", lambda t: aut(b=t), der(DerTag.DELTA_A)))
        out.append(("phi", lambda t: aut(a=t), der(DerTag.PARTIAL_A)))
    else:
        out.append(("phi", lambda t: aut(a=t), der(DerTag.D_B)))
        if lam is not None and lam.is_value(0):
            out.append(("psi", lambda t: aut(b=t), der(DerTag.PARTIAL_B0)))
    return out


def differentiation_defects(spec: AlgebraSpec, w: Window | int, t0: RationalLike = Fraction(1, 3), t1: RationalLike = 2) -> list[tuple[str, Basis]]:
    """Families whose t-coefficient, read off at two rational t, differs from the derivation.

    Each family is affine in t on every basis vector; the coefficient is
    (f(t1) - f(t0)) / (t1 - t0), and affinity is confirmed at t = 0.
    """
    w = as_window(w)
    q0, q1 = as_rational(t0), as_rational(t1)
    bad = []
    for name, family, d in one_parameter_families(spec):
        for u in window_basis(spec, w.N, include_central=False):
            e = Element.basis(u)
            f0, f1 = apply_aut(family(q0), spec, e), apply_aut(family(q1), spec, e)
            slope = (f1 - f0) * (1 / (q1 - q0))
            at_zero = f0 - q0 * slope
            if slope != apply_der(d, spec, e) or at_zero != e:
                bad.append((name, u))
    return bad
