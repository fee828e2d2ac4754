"""Basis symbols, elements and the graded Lie algebras W, W(a,b), W_A(λ), W_B(λ).

Every algebra here has basis ``L_n`` (the Witt part) and, except for W
itself, a module family ``X_n`` that is printed as ``I``, ``A`` or ``B``.
Central extensions add named central generators ``c[name]``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple, Protocol

from .errors import ForeignBasisSymbol, MalformedNumber, NoModuleFamily
from .linsolve import in_span, span
from .scalars import LambdaParam, RationalLike, as_lambda, as_rational, format_rational, parse_rational


class Family(IntEnum):
    L = 0
    M = 1
    C = 2


class Basis(NamedTuple):
    family: Family
    degree: int
    name: str = ""


def L(n: int) -> Basis:
    return Basis(Family.L, n)


def X(n: int) -> Basis:
    """Module basis vector; printed as I, A or B depending on the algebra."""
    return Basis(Family.M, n)


def central(name: str) -> Basis:
    return Basis(Family.C, 0, name)


class Element:
    """Finitely supported rational combination of basis symbols."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Basis, RationalLike] | Iterable[tuple[Basis, RationalLike]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Basis, Fraction] = {}
        for basis, coeff in items:
            value = acc.get(basis, Fraction(0)) + as_rational(coeff)
            if value:
                acc[basis] = value
            else:
                acc.pop(basis, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def basis(cls, b: Basis, coeff: RationalLike = 1) -> "Element":
        return cls({b: coeff})

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @property
    def terms(self) -> dict[Basis, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Basis, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, b: Basis) -> Fraction:
        return self._terms.get(b, Fraction(0))

    def support(self) -> list[Basis]:
        return sorted(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Element):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return Element(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "Element":
        return Element({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: RationalLike) -> "Element":
        s = as_rational(scalar)
        return Element({b: s * c for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Element({self.to_text()!r})"

    def to_text(self, letter: str = "X") -> str:
        """Canonical text, e.g. ``-2*L[0] + 1/2*A[3] + 1*c[vir]``."""
        if not self._terms:
            return "0"
        out = []
        for i, (b, c) in enumerate(self.items()):
            symbol = _symbol(b, letter)
            if i == 0:
                out.append(f"{format_rational(c)}*{symbol}")
            elif c < 0:
                out.append(f" - {format_rational(-c)}*{symbol}")
            else:
                out.append(f" + {format_rational(c)}*{symbol}")
        return "".join(out)


def _symbol(b: Basis, letter: str) -> str:
    if b.family is Family.L:
        return f"L[{b.degree}]"
    if b.family is Family.M:
        return f"{letter}[{b.degree}]"
    return f"c[{b.name}]"


_TERM_RE = re.compile(r"\s*([+-])?\s*([+-]?\d+(?:/\d+)?)\s*\*\s*([A-Za-z])\[([^\]]+)\]\s*")


def parse_element(text: str, letter: str = "X") -> Element:
    """Inverse of :meth:`Element.to_text`."""
    if text.strip() == "0":
        return Element()
    pos, terms = 0, []
    while pos < len(text):
        match = _TERM_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise MalformedNumber(f"cannot parse element near {text[pos:]!r}")
        sign, coeff, sym, idx = match.groups()
        if sign is None and terms:
            raise MalformedNumber("missing operator between terms")
        value = parse_rational(coeff)
        if sign == "-":
            value = -value
        if sym == "L":
            b = L(int(idx))
        elif sym == "c":
            b = central(idx)
        elif sym in (letter, "X"):
            b = X(int(idx))
        else:
            raise ForeignBasisSymbol(f"unknown symbol {sym}[{idx}]")
        terms.append((b, value))
        pos = match.end()
    return Element(terms)


class Kind(Enum):
    WITT = "witt"
    TENSOR_DENSITY = "wab"
    SEMIDIRECT_A = "wa"
    SEMIDIRECT_B = "wb"
    EXTENDED = "extended"


class BilinearForm(Protocol):
    """Anything that can be attached as a central cocycle."""

    def evaluate(self, u: Basis, v: Basis) -> Fraction: ...


@dataclass(frozen=True)
class Attachment:
    cocycle: BilinearForm
    name: str
    coefficient: Fraction = Fraction(1)


class UnnormalizedShiftWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    kind: Kind
    a: Fraction | None = None
    b: Fraction | None = None
    lam: LambdaParam | None = None
    base: "AlgebraSpec | None" = None
    attached: tuple[Attachment, ...] = ()
    # negative-control hook: (n, m, delta) adds delta to ω(n, m)
    tamper: tuple[int, int, Fraction] | None = None

    @property
    def root(self) -> "AlgebraSpec":
        spec = self
        while spec.kind is Kind.EXTENDED:
            assert spec.base is not None
            spec = spec.base
        return spec

    @property
    def has_module(self) -> bool:
        return self.root.kind is not Kind.WITT

    @property
    def module_letter(self) -> str:
        return {Kind.TENSOR_DENSITY: "I", Kind.SEMIDIRECT_A: "A", Kind.SEMIDIRECT_B: "B"}.get(self.root.kind, "X")

    @property
    def module_shift(self) -> Fraction:
        """L_0-eigenvalue of X_0; X_m then has eigenvalue m + shift."""
        root = self.root
        if root.kind is Kind.TENSOR_DENSITY:
            assert root.a is not None
            return root.a
        return Fraction(0)

    @property
    def central_names(self) -> tuple[str, ...]:
        names: list[str] = []
        spec = self
        while spec.kind is Kind.EXTENDED:
            names = [att.name for att in spec.attached] + names
            spec = spec.base  # type: ignore[assignment]
        return tuple(names)

    def all_attachments(self) -> tuple[Attachment, ...]:
        out: list[Attachment] = []
        spec = self
        while spec.kind is Kind.EXTENDED:
            out = list(spec.attached) + out
            spec = spec.base  # type: ignore[assignment]
        return tuple(out)

    def label(self) -> str:
        if self.kind is Kind.WITT:
            return "W"
        if self.kind is Kind.TENSOR_DENSITY:
            return f"W({format_rational(self.a)},{format_rational(self.b)})"  # type: ignore[arg-type]
        if self.kind is Kind.SEMIDIRECT_A:
            return f"W_A({self.lam})"
        if self.kind is Kind.SEMIDIRECT_B:
            return f"W_B({self.lam})"
        assert self.base is not None
        return f"{self.base.label()}+[{','.join(att.name for att in self.attached)}]"

    def weight(self, b: Basis) -> Fraction:
        """Eigenvalue of ad L_0 on ``b``."""
        if b.family is Family.L:
            return Fraction(b.degree)
        if b.family is Family.M:
            return b.degree + self.module_shift
        return Fraction(0)

    def omega(self, n: int, m: int) -> Fraction:
        return structure_weight(self, n, m)

    def validate(self, b: Basis) -> None:
        if b.family is Family.M and not self.has_module:
            raise ForeignBasisSymbol(f"{self.label()} has no module family")
        if b.family is Family.C and b.name not in self.central_names:
            raise ForeignBasisSymbol(f"central generator c[{b.name}] not attached to {self.label()}")

    def text(self, x: Element) -> str:
        return x.to_text(self.module_letter)


def witt() -> AlgebraSpec:
    return AlgebraSpec(Kind.WITT)


def tensor_density(a: RationalLike, b: RationalLike) -> AlgebraSpec:
    """W(a,b) = W ⋉ I(a,b).  Integer a is kept as given (no shift to 0)."""
    qa, qb = as_rational(a), as_rational(b)
    if qa.denominator == 1 and qa != 0:
        warnings.warn(
            f"W({format_rational(qa)},{format_rational(qb)}): integer a is not normalized to 0",
            UnnormalizedShiftWarning,
            stacklevel=2,
        )
    return AlgebraSpec(Kind.TENSOR_DENSITY, a=qa, b=qb)


def semidirect_a(lam: LambdaParam | RationalLike) -> AlgebraSpec:
    return AlgebraSpec(Kind.SEMIDIRECT_A, lam=as_lambda(lam))


def semidirect_b(lam: LambdaParam | RationalLike) -> AlgebraSpec:
    return AlgebraSpec(Kind.SEMIDIRECT_B, lam=as_lambda(lam))


def with_tampered_weight(spec: AlgebraSpec, n: int = 1, m: int = 1, delta: RationalLike = 1) -> AlgebraSpec:
    """Copy of ``spec`` whose ω(n, m) is off by ``delta``; used as a negative control."""
    from dataclasses import replace

    return replace(spec, tamper=(n, m, as_rational(delta)))


def structure_weight(spec: AlgebraSpec, n: int, m: int) -> Fraction:
    """Coefficient ω(n, m) of X_{n+m} in [L_n, X_m]."""
    root = spec.root
    kind = root.kind
    if kind is Kind.WITT:
        raise NoModuleFamily("the Witt algebra has no module family")
    if kind is Kind.TENSOR_DENSITY:
        value = root.a + root.b * n + m  # type: ignore[operator]
    else:
        lam = root.lam
        assert lam is not None
        quad = Fraction(n * n) if lam.is_infinite else n * (n + 1) * lam.value  # type: ignore[operator]
        if kind is Kind.SEMIDIRECT_A:
            value = Fraction(n + m) + (quad if m == 0 else 0)
        else:
            value = Fraction(m) - (quad if n + m == 0 else 0)
    tamper = spec.tamper or root.tamper
    if tamper is not None and (n, m) == tamper[:2]:
        value += tamper[2]
    return value


Terms = tuple[tuple[Basis, Fraction], ...]


@lru_cache(maxsize=1 << 20)
def bracket_basis(spec: AlgebraSpec, u: Basis, v: Basis) -> Terms:
    """[u, v] for two basis symbols, as sorted (basis, coefficient) pairs."""
    spec.validate(u)
    spec.validate(v)
    if u.family is Family.C or v.family is Family.C:
        return ()
    out: dict[Basis, Fraction] = {}
    if u.family is Family.L and v.family is Family.L:
        coeff = Fraction(v.degree - u.degree)
        if coeff:
            out[L(u.degree + v.degree)] = coeff
    elif u.family is Family.L:
        coeff = structure_weight(spec, u.degree, v.degree)
        if coeff:
            out[X(u.degree + v.degree)] = coeff
    elif v.family is Family.L:
        coeff = -structure_weight(spec, v.degree, u.degree)
        if coeff:
            out[X(u.degree + v.degree)] = coeff
    for att in spec.all_attachments():
        value = att.coefficient * att.cocycle.evaluate(u, v)
        if value:
            out[central(att.name)] = value
    return tuple(sorted(out.items()))


def bracket(spec: AlgebraSpec, x: Element, y: Element) -> Element:
    acc: dict[Basis, Fraction] = {}
    for u, cu in x._terms.items():
        for v, cv in y._terms.items():
            for w, cw in bracket_basis(spec, u, v):
                acc[w] = acc.get(w, Fraction(0)) + cu * cv * cw
    return Element(acc)


def jacobi_defect(spec: AlgebraSpec, x: Element, y: Element, z: Element) -> Element:
    """[[x,y],z] + [[y,z],x] + [[z,x],y]."""
    return (
        bracket(spec, bracket(spec, x, y), z)
        + bracket(spec, bracket(spec, y, z), x)
        + bracket(spec, bracket(spec, z, x), y)
    )


def window_basis(spec: AlgebraSpec, N: int, include_central: bool = True) -> list[Basis]:
    basis = [L(n) for n in range(-N, N + 1)]
    if spec.has_module:
        basis += [X(n) for n in range(-N, N + 1)]
    if include_central:
        basis += [central(name) for name in spec.central_names]
    return basis


def _nested(spec: AlgebraSpec, u: Basis, v: Basis, w: Basis, acc: dict) -> None:
    for p, cp in bracket_basis(spec, u, v):
        for q, cq in bracket_basis(spec, p, w):
            acc[q] = acc.get(q, Fraction(0)) + cp * cq


def basis_jacobi_defect(spec: AlgebraSpec, u: Basis, v: Basis, w: Basis) -> Element:
    acc: dict[Basis, Fraction] = {}
    _nested(spec, u, v, w, acc)
    _nested(spec, v, w, u, acc)
    _nested(spec, w, u, v, acc)
    return Element(acc)


def iter_window_triples(basis: list[Basis], ordered: bool) -> Iterator[tuple[Basis, Basis, Basis]]:
    if ordered:
        yield from product(basis, repeat=3)
        return
    size = len(basis)
    for i in range(size):
        for j in range(i + 1, size):
            for k in range(j + 1, size):
                yield basis[i], basis[j], basis[k]


def jacobi_window(spec: AlgebraSpec, N: int, ordered: bool = True) -> list[tuple[Basis, Basis, Basis, Element]]:
    """All basis triples with degrees in [-N, N] whose Jacobi sum is nonzero.

    With ``ordered=False`` only strictly increasing triples are tested,
    which suffices once antisymmetry holds (see :func:`antisymmetry_window`).
    """
    defects = []
    for u, v, w in iter_window_triples(window_basis(spec, N), ordered):
        d = basis_jacobi_defect(spec, u, v, w)
        if d:
            defects.append((u, v, w, d))
    return defects


def antisymmetry_window(spec: AlgebraSpec, N: int) -> list[tuple[Basis, Basis]]:
    basis = window_basis(spec, N)
    bad = []
    for u in basis:
        for v in basis:
            s = Element(list(bracket_basis(spec, u, v)) + list(bracket_basis(spec, v, u)))
            if s:
                bad.append((u, v))
    return bad


def adjoint_hom_f(n: int) -> Element:
    """f: B(λ) → A(λ), B_n ↦ n A_n."""
    return Element.basis(X(n), n)


def check_f_equivariance(lam: LambdaParam | RationalLike, N: int) -> list[tuple[int, int, Element]]:
    """Defects of f(L_n·B_m) = L_n·f(B_m) for |n|, |m|, |n+m| ≤ N."""
    spec_a, spec_b = semidirect_a(lam), semidirect_b(lam)
    defects = []
    for n in range(-N, N + 1):
        for m in range(-N, N + 1):
            if abs(n + m) > N:
                continue
            lhs = structure_weight(spec_b, n, m) * adjoint_hom_f(n + m)
            rhs = bracket(spec_a, Element.basis(L(n)), adjoint_hom_f(m))
            if lhs != rhs:
                defects.append((n, m, lhs - rhs))
    return defects


def in_derived_algebra(spec: AlgebraSpec, target: Basis, N: int) -> bool:
    """Whether ``target`` is a combination of brackets of basis vectors of degree ≤ N."""
    basis = window_basis(spec, N, include_central=False)
    images = []
    for u in basis:
        for v in basis:
            terms = bracket_basis(spec, u, v)
            if any(b == target for b, _ in terms):
                images.append(dict(terms))
    variables = sorted({b for img in images for b in img} | {target})
    return in_span(span(images, variables), {target: Fraction(1)})
