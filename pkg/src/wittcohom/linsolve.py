"""Exact sparse linear algebra over Q.

Vectors and rows are plain dicts mapping a hashable variable label to a
Fraction.  A system carries its own variable order; every pivot choice
follows that order, so the reduced forms are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import NotASubspace
from .scalars import format_rational

Var = Hashable
Vector = dict


def format_var(var: Var) -> str:
    if isinstance(var, tuple) and var and isinstance(var[0], str):
        return f"{var[0]}({','.join(str(part) for part in var[1:])})"
    return str(var)


@dataclass
class LinearSystem:
    """Homogeneous system: each row asserts sum(coeff * var) == 0."""

    variables: tuple
    rows: list = field(default_factory=list)

    def __post_init__(self) -> None:
        self.variables = tuple(self.variables)
        self._known = set(self.variables)
        if len(self._known) != len(self.variables):
            raise ValueError("duplicate variable labels")

    def add_row(self, row: Mapping[Var, Fraction]) -> None:
        clean = {}
        for var, coeff in row.items():
            if var not in self._known:
                raise KeyError(f"unknown variable {var!r}")
            if coeff:
                clean[var] = Fraction(clean.get(var, 0) + coeff)
                if not clean[var]:
                    del clean[var]
        if clean:
            self.rows.append(clean)

    def residual(self, vector: Mapping[Var, Fraction]) -> list[Fraction]:
        """Row-by-row values of the system evaluated at ``vector``."""
        return [sum((c * vector.get(v, 0) for v, c in row.items()), Fraction(0)) for row in self.rows]

    def is_solution(self, vector: Mapping[Var, Fraction]) -> bool:
        return not any(self.residual(vector))

    def dump(self) -> str:
        lines = [" ".join(format_var(v) for v in self.variables)]
        for row in self.rows:
            lines.append(_dump_vector(row, self.variables))
        return "\n".join(lines)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace given by its reduced echelon basis."""

    variables: tuple
    vectors: tuple

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def leading(self) -> list:
        return [_leading(vec, self.variables) for vec in self.vectors]

    def dump(self) -> str:
        return "\n".join(_dump_vector(vec, self.variables) for vec in self.vectors)


def _dump_vector(vec: Mapping[Var, Fraction], order: Sequence[Var]) -> str:
    return " ".join(f"{format_var(v)} {format_rational(vec[v])}" for v in order if vec.get(v))


def _leading(vec: Mapping[Var, Fraction], order: Sequence[Var]) -> Var:
    for var in order:
        if vec.get(var):
            return var
    raise ValueError("zero vector has no leading variable")


def _rref(rows: Iterable[Mapping[Var, Fraction]], order: Sequence[Var]) -> list[dict]:
    """Reduced row echelon form of a set of sparse rows.

    Rows are normalised (leading coefficient 1) and deduplicated before
    elimination.  The result is sorted by pivot position.
    """
    position = {var: i for i, var in enumerate(order)}
    unique: dict[frozenset, dict] = {}
    for row in rows:
        items = {position[v]: Fraction(c) for v, c in row.items() if c}
        if not items:
            continue
        lead = items[min(items)]
        normal = {k: c / lead for k, c in items.items()}
        unique.setdefault(frozenset(normal.items()), normal)

    pivots: dict[int, dict] = {}
    for row in unique.values():
        row = dict(row)
        for col in sorted(k for k in row if k in pivots):
            coeff = row.get(col)
            if coeff:
                for k, c in pivots[col].items():
                    value = row.get(k, 0) - coeff * c
                    if value:
                        row[k] = value
                    else:
                        row.pop(k, None)
        if not row:
            continue
        col = min(row)
        lead = row[col]
        row = {k: c / lead for k, c in row.items()}
        for other in pivots.values():
            coeff = other.get(col)
            if coeff:
                for k, c in row.items():
                    value = other.get(k, 0) - coeff * c
                    if value:
                        other[k] = value
                    else:
                        other.pop(k, None)
        pivots[col] = row
    return [
        {order[k]: c for k, c in sorted(pivots[col].items())}
        for col in sorted(pivots)
    ]


def span(vectors: Iterable[Mapping[Var, Fraction]], variables: Sequence[Var]) -> SubspaceBasis:
    """Canonical reduced basis of the span of ``vectors``."""
    variables = tuple(variables)
    return SubspaceBasis(variables, tuple(_rref(vectors, variables)))


def rank(rows: Iterable[Mapping[Var, Fraction]], variables: Sequence[Var]) -> int:
    return len(_rref(rows, tuple(variables)))


def kernel(system: LinearSystem) -> SubspaceBasis:
    """Reduced basis of the solution space of ``system``."""
    order = system.variables
    reduced = _rref(system.rows, order)
    pivot_vars = {_leading(row, order): row for row in reduced}
    solutions = []
    for free in order:
        if free in pivot_vars:
            continue
        vec = {free: Fraction(1)}
        for pvar, row in pivot_vars.items():
            coeff = row.get(free)
            if coeff:
                vec[pvar] = -coeff
        solutions.append(vec)
    return span(solutions, order)


def in_span(space: SubspaceBasis, vector: Mapping[Var, Fraction]) -> bool:
    rest = {v: Fraction(c) for v, c in vector.items() if c}
    for vec in space.vectors:
        lead = _leading(vec, space.variables)
        coeff = rest.get(lead)
        if not coeff:
            continue
        for var, c in vec.items():
            value = rest.get(var, 0) - coeff * c
            if value:
                rest[var] = value
            else:
                rest.pop(var, None)
    return not rest


def quotient_dim(space: SubspaceBasis, sub: SubspaceBasis) -> int:
    """dim(space / sub), after checking that sub really lies in space."""
    for vec in sub.vectors:
        if not in_span(space, vec):
            raise NotASubspace("a vector of the subspace is not in the ambient span")
    return space.dim - sub.dim


def restrict(vector: Mapping[Var, Fraction], variables: Iterable[Var]) -> dict:
    keep = set(variables)
    return {v: Fraction(c) for v, c in vector.items() if v in keep and c}
