"""Shared symbols and random-expression strategies for the tests."""

from fractions import Fraction

from hypothesis import strategies as st

from anisogup.tensor_core import DELTA, P, ScalarAtom, TensorExpr, const, radial, tensor, term

ALPHA = tensor("alpha", 1)
BETA = tensor("beta", 2, symmetric=True)
GAM = tensor("gam", 2)  # no symmetry
U = radial("u")


def pbp() -> TensorExpr:
    return term(P, "a") * term(BETA, "a", "b") * term(P, "b")


def ap() -> TensorExpr:
    return term(ALPHA, "a") * term(P, "a")


S_ATOM = ScalarAtom("S", const(1) + pbp())

# scalar building blocks; each is a (name, expression) pair without free indices
SCALARS = [
    lambda: const(1),
    lambda: ap(),
    lambda: pbp(),
    lambda: term(P, "a") * term(P, "a"),
    lambda: term(U),
    lambda: term(P, "a") * term(GAM, "a", "b") * term(P, "b"),
    lambda: S_ATOM.inverse(),
]

# vector building blocks with free index "i"
VECTORS = [
    lambda: term(P, "i"),
    lambda: term(ALPHA, "i"),
    lambda: term(BETA, "i", "a") * term(P, "a"),
    lambda: term(GAM, "a", "i") * term(P, "a"),
]

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def scalar_exprs(draw, max_terms=3, max_factors=2):
    out = const(0)
    for _ in range(draw(st.integers(1, max_terms))):
        e = const(draw(rationals.filter(bool)))
        for _ in range(draw(st.integers(0, max_factors))):
            e = e * SCALARS[draw(st.integers(0, len(SCALARS) - 1))]()
        out = out + e
    return out


@st.composite
def vector_exprs(draw):
    out = TensorExpr({}, {"i"})
    for _ in range(draw(st.integers(1, 2))):
        s = draw(scalar_exprs(max_terms=1, max_factors=1))
        out = out + s * VECTORS[draw(st.integers(0, len(VECTORS) - 1))]()
    return out


def F_of(f, g=None, h=None):
    """F_ij = f delta_ij + g_i p_j + p_i h_j."""
    F = f * term(DELTA, "i", "j")
    if g is not None:
        F = F + g * term(P, "j")
    if h is not None:
        F = F + term(P, "i") * h.rename({"i": "j"})
    return F


half = Fraction(1, 2)


def q_parts():
    from anisogup.tensor_core import Q

    return [
        lambda: const(1),
        lambda: term(ALPHA, "a") * term(Q, "a"),
        lambda: term(P, "a") * term(Q, "a"),
        lambda: term(BETA, "a", "b") * term(P, "a") * term(Q, "b"),
        lambda: term(BETA, "a", "b") * term(Q, "a") * term(Q, "b"),
    ]


@st.composite
def scalar_operators(draw, max_terms=2):
    """Random scalar operators of q-degree at most 2."""
    from anisogup.operator_algebra import OperatorExpr

    parts = q_parts()
    out = const(0)
    for _ in range(draw(st.integers(1, max_terms))):
        coeff = draw(scalar_exprs(max_terms=1, max_factors=1))
        out = out + coeff * parts[draw(st.integers(0, len(parts) - 1))]()
    return OperatorExpr(out)
