from fractions import Fraction

import pytest

from anisogup.criteria import (
    check_angular_momentum,
    check_commutativity,
    check_reordering,
    check_summary_models,
    check_symmetricity,
    check_translation_generator,
    check_xx_invariance,
    commutative_g_from_f,
    solve_transform,
    verify_solution,
    xx_closed_form,
    xx_operator_form,
)
from anisogup.library import get, library
from anisogup.model import EXACT, Mode
from anisogup.solver import solve_linear
from anisogup.tensor_core import TensorError, const, is_zero, term, P

from helpers import pbp

O1, O2 = Mode.parse("1"), Mode.parse("2")
MIXED = Mode.parse("mixed")


# criterion (i) ---------------------------------------------------------------


def test_isotropic_radial_transform_keeps_xx():
    assert check_xx_invariance(get("isotropic-radial"), "radial-C").status == "holds"


@pytest.mark.parametrize("ansatz", ["power", "graded"])
def test_h_model_xx_fails_exactly(ansatz):
    r = check_xx_invariance(get("h-constant-c"), ansatz, EXACT)
    assert r.status == "fails"
    assert r.residual != "0"


def test_h_model_xx_at_first_order():
    assert check_xx_invariance(get("h-constant-c"), "graded", O1).status == "holds"
    assert check_xx_invariance(get("h-constant-c"), "power", O1).status == "holds"


def test_two_vector_model_invariance():
    m = get("alpha-alpha-prime")
    assert check_xx_invariance(m, "exp-quadratic").status == "holds"


@pytest.mark.parametrize(
    "name,ansatz",
    [(m.name, a.name) for m in library() for a in m.ansatze.values() if not a.unknowns]
    + [("kempf-aniso", None), ("h-rank-2-d", None)],
)
def test_dual_path_agreement(name, ansatz):
    m = get(name)
    L = m.ansatz(ansatz).log_derivative("n") if ansatz else term(P, "n")
    F = m.F()
    diff = xx_closed_form(F, L) - xx_operator_form(F, L)
    assert is_zero(m.pin(diff))


def test_order_monotonicity():
    m = get("isotropic-radial")
    for mode in (EXACT, O1, O2):
        assert check_xx_invariance(m, "radial-C", mode).status == "holds"
    assert check_reordering(get("f-only-single"), "swap", "inverse", EXACT).status == "holds"
    assert check_reordering(get("f-only-single"), "swap", "inverse", O1).status == "holds"


# criterion (ii) --------------------------------------------------------------


def test_f_model_swap_with_inverse():
    assert check_reordering(get("f-only-single"), "swap", "inverse").status == "holds"
    assert check_reordering(get("f-only-general"), "swap", "inverse").status == "holds"


def test_isotropic_compensator():
    assert check_reordering(get("isotropic-radial"), "swap", "compensator").status == "holds"


@pytest.mark.parametrize("ansatz", ["power", "graded"])
def test_h_model_reorder_fails_exactly(ansatz):
    r = solve_transform(get("h-constant-c"), "reorder", ansatz, EXACT)
    assert r.status == "no-solution"


def test_h_model_reorder_first_order():
    r = solve_transform(get("h-constant-c"), "reorder", "graded", O1)
    assert r.status == "solved" and r.solution["k1"] == -1


@pytest.mark.parametrize(
    "name,placement,n",
    [
        ("f-only-single", "swap", -1),
        ("f-only-single", 1, Fraction(-1, 2)),
        ("f-only-single", 2, 0),
        ("g-only-single", "swap", Fraction(-5, 3)),
        ("g-only-single", 1, Fraction(-10, 9)),
        ("g-only-single", 2, Fraction(-5, 9)),
        ("g-only-single", "canonical", 0),
        ("kempf-aniso", "swap", Fraction(-5, 3)),
        ("kempf-aniso", 1, Fraction(-5, 6)),
        ("kappa-proportional", 1, Fraction(-2, 3)),
        ("kappa-proportional", "swap", Fraction(-4, 3)),
    ],
)
def test_power_exponent_per_placement(name, placement, n):
    r = solve_transform(get(name), "reorder", "power", EXACT, placement)
    assert r.status == "solved"
    assert r.solution == {"n": Fraction(n)}
    assert "solution verified by re-substitution" in r.notes


def test_two_term_f_intermediate_has_no_power_solution():
    m = get("f-only-two-term")
    assert solve_transform(m, "reorder", "power", EXACT, "swap").status == "solved"
    assert solve_transform(m, "reorder", "power", EXACT, 1).status == "no-solution"


def test_nonsymmetric_g_fails():
    assert solve_transform(get("g-only-nonsym"), "reorder", "power").status == "no-solution"


def test_baseline_solves_trivially():
    m = get("h-constant-c")
    m.h = None
    r = solve_transform(m, "reorder", "graded", EXACT)
    assert r.status == "solved"
    assert set(r.solution.values()) == {0}


def test_worked_example_engine_values():
    r = solve_transform(get("kempf-aniso-c"), "reorder", "paper-vi-b2", MIXED)
    assert r.status == "solved"
    assert r.solution == {
        "k1": -1, "k2": -1, "k3": Fraction(1, 2), "k4": Fraction(1, 2)
    }
    m = get("kempf-aniso-c")
    ans = m.ansatz("paper-vi-b2")
    assert is_zero(verify_solution(m, "reorder", ans, r.solution, MIXED))
    # the competing value k3 = -1/2 leaves a residual
    wrong = dict(r.solution, k3=Fraction(-1, 2))
    assert not is_zero(verify_solution(m, "reorder", ans, wrong, MIXED))


def test_worked_example_exact_has_no_solution():
    r = solve_transform(get("kempf-aniso-c"), "reorder", "paper-vi-b2", EXACT)
    assert r.status == "no-solution"


def test_solve_needs_unknowns():
    with pytest.raises(TensorError):
        solve_transform(get("f-only-single"), "reorder", "inverse")


# solver ----------------------------------------------------------------------


def test_linear_solver_consistent_and_free():
    status, values, free = solve_linear([[Fraction(1), Fraction(1), Fraction(2)]], 2)
    assert status == "solved"
    assert values == {0: 2, 1: 0}
    assert free == [1]


def test_linear_solver_inconsistent():
    rows = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(2)]]
    assert solve_linear(rows, 1)[0] == "no-solution"


# symmetric construction ------------------------------------------------------


@pytest.mark.parametrize("name", ["baseline", "kempf-aniso", "f-only-single", "g-only-single"])
def test_symmetric_position(name):
    assert check_symmetricity(get(name)).status == "holds"


def test_symmetric_with_power_transform():
    assert check_symmetricity(get("f-only-single"), "inverse").status == "holds"


def test_trivial_construction_fails():
    r = check_symmetricity(get("f-only-general"), construction="trivial")
    assert r.status == "fails"
    assert check_symmetricity(get("baseline"), construction="trivial").status == "holds"


# commutativity ---------------------------------------------------------------


def test_commutative_model():
    assert check_commutativity(get("commutative")).status == "holds"
    assert check_commutativity(get("isotropic-commutative")).status == "holds"


def test_anisotropic_minimal_length_commutes_to_first_order_only():
    m = get("kempf-aniso")
    assert check_commutativity(m, O1).status == "holds"
    assert check_commutativity(m, EXACT).status == "fails"


def test_g_from_f_formula():
    f = const(1) + pbp()
    g, atom = commutative_g_from_f(f)
    assert atom.definition == const(1) - pbp()
    assert is_zero(g - get("commutative").g)


# angular momentum and translations -------------------------------------------


def test_f_model_angular_momentum():
    r = check_angular_momentum(get("f-only-general"))
    assert r.status == "holds"
    assert "[H,L_ij] (q x p): 0" in r.notes
    assert "x form - q x p: 0" in r.notes


def test_g_model_angular_momentum_forms_differ():
    r = check_angular_momentum(get("g-only-single"))
    assert "[H,L_ij] (q x p): 0" in r.notes
    assert "[H,L_ij] (x form): 0" in r.notes
    diff = [n for n in r.notes if n.startswith("x form - q x p")][0]
    assert not diff.endswith(": 0")


def test_translation_generator():
    m = get("kempf-aniso")
    assert check_translation_generator(m, O1).status == "holds"
    assert check_translation_generator(m, O2).status == "fails"
    assert check_translation_generator(get("baseline"), EXACT).status == "holds"


def test_summary_regressions_hold():
    reports = check_summary_models()
    assert reports
    bad = [(r.model, r.check, r.residual) for r in reports if not r.ok]
    assert not bad
