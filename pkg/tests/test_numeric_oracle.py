import random
from fractions import Fraction

import pytest

from anisogup import numeric_oracle as no
from anisogup.criteria import check_commutativity, check_xx_invariance
from anisogup.library import get
from anisogup.model import EXACT
from anisogup.operator_algebra import OperatorExpr, build_position, commutator, p_op, q_op
from anisogup.tensor_core import P, term

from helpers import BETA


def pp():
    return term(P, "a") * term(P, "a")


def test_same_seed_same_instance():
    m = get("kempf-aniso-c")
    a, b = no.instantiate(m, seed=7), no.instantiate(m, seed=7)
    assert (a.tensors["beta"] == b.tensors["beta"]).all()
    assert (a.tensors["c"] == b.tensors["c"]).all()
    c = no.instantiate(m, seed=8)
    assert not (a.tensors["c"] == c.tensors["c"]).all()


def test_symmetric_tensor_is_symmetric():
    inst = no.instantiate(get("kempf-aniso"), seed=3)
    beta = inst.tensors["beta"]
    assert (beta == beta.T).all()


def test_component_range():
    inst = no.instantiate(get("g-only-nonsym"), seed=11)
    for v in inst.tensors["bp"].flat:
        v = Fraction(v)
        assert -1 <= v <= 1 and v.denominator <= 16


def test_q_acts_as_derivative():
    inst = no.instantiate(seed=0)
    psi = no.evaluate(pp(), inst, {})
    rng = random.Random(1)
    for i in range(3):
        out = no.apply(q_op("i"), psi, inst, {"i": i})
        for _ in range(4):
            pt = no.random_point(rng)
            assert out.at(pt) == (Fraction(0), 2 * pt[i])


def test_canonical_pair_acts_as_i_delta():
    inst = no.instantiate(seed=0)
    rng = random.Random(2)
    psi = no.random_test_function(rng)
    C = commutator(q_op("i"), p_op("j"))
    for i in range(3):
        for j in range(3):
            out = no.apply(C, psi, inst, {"i": i, "j": j})
            pt = no.random_point(rng)
            expect = psi.as_cfun().at(pt) if i == j else (0, 0)
            re, im = expect
            assert out.at(pt) == (-im, re)


def test_cross_check_simple_pair():
    assert no.cross_check(q_op("i"), p_op("j"), no.instantiate(seed=0), trials=3)


def test_cross_check_anisotropic_positions():
    m = get("kempf-aniso")
    x = build_position(m)
    assert no.cross_check(x, x.rename({"i": "j"}), no.instantiate(m, seed=1), trials=2, points=2)


def test_sign_flip_mutant_is_caught():
    m = get("kempf-aniso")
    x = build_position(m)
    inst = no.instantiate(m, seed=1)

    def mutant(A, B):
        return commutator(A, B).scale(-1)

    assert not no.cross_check(x, x.rename({"i": "j"}), inst, trials=2, points=2, commutator_fn=mutant)
    assert not no.cross_check(q_op("i"), p_op("j"), inst, trials=2, commutator_fn=mutant)


def test_dropped_term_mutant_is_caught():
    inst = no.instantiate(seed=4)

    def lossy(A, B):
        return OperatorExpr(commutator(A, B).expr.scale(0))

    A = OperatorExpr(pp())
    assert not no.cross_check(q_op("i"), A, inst, trials=2, commutator_fn=lossy)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("name", ["kempf-aniso", "f-only-single", "g-only-single", "commutative"])
def test_oracle_checks_pass(name, seed):
    reports = no.oracle_checks(get(name), seed=seed, trials=2)
    assert reports and all(r.ok for r in reports)


def test_failing_residual_is_numerically_nonzero():
    r = check_xx_invariance(get("h-constant-c"), "power", EXACT)
    assert r.status == "fails"
    inst = no.instantiate(get("h-constant-c"), seed=0)
    assert no.nonzero_somewhere(r.residual_expr, inst)
    r = check_commutativity(get("kempf-aniso"))
    assert no.nonzero_somewhere(r.residual_expr, no.instantiate(get("kempf-aniso"), seed=0))


def test_evaluate_at_matches_pointwise_definition():
    inst = no.instantiate(seed=5)
    beta = inst.tensor_components(BETA)
    e = term(P, "a") * term(BETA, "a", "b") * term(P, "b")
    pt = (Fraction(1, 2), Fraction(-1, 3), Fraction(2))
    expected = sum(Fraction(beta[a, b]) * pt[a] * pt[b] for a in range(3) for b in range(3))
    assert no.evaluate_at(e, inst, {}, pt).as_fractions() == (expected, 0)


def test_evaluate_rejects_operators():
    from anisogup.tensor_core import Q, TensorError

    with pytest.raises(TensorError):
        no.evaluate_at(term(Q, "a") * term(P, "a"), no.instantiate(seed=0), {}, (1, 2, 3))
