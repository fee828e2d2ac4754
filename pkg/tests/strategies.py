from fractions import Fraction

from hypothesis import strategies as st

from wittcohom.algebra import L, X, Element, semidirect_a, semidirect_b, tensor_density
from wittcohom.scalars import INFINITY, LambdaParam

rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
nonzero_rationals = rationals.filter(bool)
lambdas = st.one_of(st.just(INFINITY), rationals.map(LambdaParam.finite))

specs = st.one_of(
    lambdas.map(semidirect_a),
    lambdas.map(semidirect_b),
    st.tuples(rationals, rationals).map(lambda ab: tensor_density(*ab)),
)


def elements(max_degree: int = 4, module: bool = True) -> st.SearchStrategy[Element]:
    symbol = st.builds(L, st.integers(-max_degree, max_degree))
    if module:
        symbol = st.one_of(symbol, st.builds(X, st.integers(-max_degree, max_degree)))
    return st.lists(st.tuples(symbol, rationals), max_size=4).map(Element)
