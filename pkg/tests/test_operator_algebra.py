from fractions import Fraction

import pytest
from hypothesis import given

from anisogup.library import get, library
from anisogup.numeric_oracle import cross_check, instantiate
from anisogup.operator_algebra import (
    OperatorExpr,
    apply_transform,
    build_position,
    coefficient_of,
    commutator,
    op_mul,
    p_op,
    q_op,
    q_degree,
    reorder_position,
)
from anisogup.tensor_core import DELTA, P, Q, TensorError, TensorExpr, const, derive, ihbar, term

from helpers import ALPHA, BETA, U, scalar_operators

Q_I = q_op("i")
HALF = Fraction(1, 2)


def pp():
    return term(P, "a") * term(P, "a")


def op(e):
    return OperatorExpr(e)


# products and commutators ----------------------------------------------------


def test_q_times_p():
    assert op_mul(q_op("i"), p_op("j")) == op(
        term(P, "j") * term(Q, "i") + ihbar() * term(DELTA, "i", "j")
    )


def test_q_times_one():
    assert op_mul(Q_I, op(1)) == Q_I


def test_q_times_pp():
    got = op_mul(Q_I, op(pp()))
    assert got == op(pp() * term(Q, "i") + 2 * ihbar() * term(P, "i"))
    assert cross_check(Q_I, op(pp()), instantiate(seed=0), trials=3)


def test_product_index_collision():
    with pytest.raises(TensorError):
        op_mul(q_op("i"), p_op("i"))


def test_canonical_pair():
    assert commutator(q_op("i"), p_op("j")) == op(ihbar() * term(DELTA, "i", "j"))


def test_self_commutator_vanishes():
    x = build_position(get("kempf-aniso"))
    scalar = op_mul(p_op("i"), x, contract=True)
    assert not commutator(scalar, scalar)


def test_radial_f_position_bracket():
    f = term(U)
    xi = build_position(f * term(DELTA, "i", "j"))
    xj = xi.rename({"i": "j"})
    lhs = commutator(xi, xj)
    rhs = op_mul(op(derive(f, "i")), xj) - op_mul(op(derive(f, "j")), xi)
    assert lhs.equals(rhs.expr * ihbar())


# position operators ----------------------------------------------------------


def test_position_for_identity_F():
    assert build_position(get("baseline")) == Q_I


def test_position_general_f():
    f = get("f-only-general").f
    x = build_position(get("f-only-general"))
    assert x.equals(f * term(Q, "i") + ihbar() * derive(f, "i").scale(HALF))


def test_position_g_model_coefficient():
    # g_i = gam_iab p_a p_b, a rank-3 anisotropy: coefficient (3+2)/2
    m = get("g-only-single")
    g = m.g
    pq = term(P, "b") * term(Q, "b")
    expected = term(Q, "i") + g * (pq + ihbar().scale(Fraction(5, 2)))
    assert OperatorExpr(m.pin(build_position(m).expr)).equals(expected)


def test_transform_of_q():
    L = term(ALPHA, "j") + term(BETA, "j", "a") * term(P, "a")
    assert apply_transform(Q_I, L) == op(term(Q, "i") - ihbar() * L.rename({"j": "i"}))


def test_transform_leaves_p():
    L = term(ALPHA, "j")
    assert apply_transform(p_op("i"), L) == p_op("i")


def _library_pairs():
    for m in library():
        for ans in m.ansatze.values():
            yield m, ans


@pytest.mark.parametrize("model,ans", list(_library_pairs()), ids=lambda v: getattr(v, "name", None))
def test_transform_of_position_is_transformed_position(model, ans):
    L = ans.log_derivative("j")
    assert apply_transform(build_position(model), L).equals(build_position(model, L))


@given(scalar_operators(), scalar_operators())
def test_transform_is_morphism(A, B):
    # a gradient: d_j (alpha.p + U(p.p)) with U' = u
    L = term(ALPHA, "j") + 2 * term(U) * term(P, "j")
    lhs = apply_transform(op_mul(A, B), L)
    rhs = op_mul(apply_transform(A, L), apply_transform(B, L))
    assert lhs.equals(rhs)


# reordering ------------------------------------------------------------------


@pytest.mark.parametrize("name", ["f-only-single", "kempf-aniso", "h-constant-c", "g-only-single"])
def test_canonical_placement_is_plain_position(name):
    m = get(name)
    assert reorder_position(m, "canonical").equals(build_position(m))


def test_left_placement_for_f_model():
    m = get("f-only-general")
    extra = ihbar() * derive(m.f, "i")
    assert reorder_position(m, "swap").equals(build_position(m).expr + extra)


def test_isotropic_split_power():
    # F = (p.p)^(m+n) delta with q between the two factors p.p^m | p.p^n:
    # the result differs from the right placement by i hbar (p.p)^m d_i (p.p)^n
    m, n = 1, 2
    F = pp() ** (m + n) * term(DELTA, "i", "j")
    depth = {0: 2 * m}  # momentum factors to the left of q
    got = reorder_position(F, depth)
    diff = got.expr - build_position(F).expr
    expected = ihbar() * pp() ** m * derive(pp() ** n, "i")
    assert OperatorExpr(diff).equals(expected)


def test_depth_out_of_range():
    with pytest.raises(TensorError):
        reorder_position(get("f-only-single"), {0: 9})
    with pytest.raises(TensorError):
        reorder_position(get("f-only-single"), -1)


# plumbing --------------------------------------------------------------------


def test_q_degree():
    assert q_degree(build_position(get("kempf-aniso"))) == 1
    assert q_degree(op(pp())) == 0
    x = build_position(get("kempf-aniso"))
    assert q_degree(op_mul(x, x.rename({"i": "j"}))) == 2


def test_coefficient_of_q():
    m = get("f-only-general")
    c = coefficient_of(build_position(m), ("j",))
    assert c == m.f * term(DELTA, "i", "j")


# properties ------------------------------------------------------------------


@given(scalar_operators(), scalar_operators())
def test_antisymmetry(A, B):
    assert (commutator(A, B) + commutator(B, A)).is_zero()


@given(scalar_operators(), scalar_operators(), scalar_operators())
def test_jacobi(A, B, C):
    total = (
        commutator(A, commutator(B, C))
        + commutator(B, commutator(C, A))
        + commutator(C, commutator(A, B))
    )
    assert total.is_zero()


@pytest.mark.parametrize("model", library(), ids=lambda m: m.name)
def test_position_momentum_bracket_all_transforms(model):
    F = model.F("i", "j")
    transforms = [None] + [a.log_derivative("k") for a in model.ansatze.values()]
    for L in transforms:
        x = build_position(model, L)
        got = commutator(x, p_op("j"))
        assert got.equals(ihbar() * F), (model.name, L)


def test_empty_operator_is_zero():
    assert op(TensorExpr({}, {"i"})).is_zero()
    assert op(const(0)) == op(0)


def test_placement_ignores_factor_storage_order():
    # g_i p_j with distinguishable factors: depth r is the average over which
    # r momentum units sit left of q, i.e. (n - r)/n of the full swap term
    m = get("kempf-aniso")
    swap = reorder_position(m, "swap").expr - build_position(m).expr
    half = reorder_position(m, 1).expr - build_position(m).expr
    assert OperatorExpr(half).equals(swap.scale(HALF))
