"""Decision procedures for commutator invariance and ordering independence.

Every check returns a :class:`CheckReport`.  ``holds`` and ``fails`` are
verdicts on a residual with no unknowns left (or, for a family with unknowns,
on whether the residual vanishes for every member).  ``solved`` and
``no-solution`` come from :func:`solve_transform`, whose solutions are always
re-substituted and re-checked before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .model import EXACT, IDENTITY, Mode, ModelSpec, TransformAnsatz, curl
from .operator_algebra import (
    OperatorExpr,
    apply_transform,
    build_position_from_F,
    commutator,
    divergence,
    op_mul,
    p_op,
    q_degree,
    q_op,
    reorder_position,
)
from .render import render_together
from .solver import UnsupportedSystem, coefficient_equations, solve_system
from .tensor_core import (
    DELTA,
    DIM,
    P,
    Q,
    ScalarAtom,
    TensorError,
    TensorExpr,
    const,
    derive,
    ihbar,
    is_zero,
    mul,
    substitute,
    term,
    together,
)

HOLDS, FAILS, SOLVED, NO_SOLUTION = "holds", "fails", "solved", "no-solution"


@dataclass
class CheckReport:
    model: str
    check: str
    mode: str
    status: str
    residual: str
    solution: dict = field(default_factory=dict)  # unknown name -> Fraction
    notes: list = field(default_factory=list)
    residual_expr: object = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status in (HOLDS, SOLVED)


def _verdict(model: ModelSpec, check: str, mode: Mode, residual: TensorExpr, notes=()) -> CheckReport:
    residual = mode.reduce(model.pin(residual), model)
    status = HOLDS if is_zero(residual) else FAILS
    return CheckReport(
        model.name,
        check,
        mode.label(),
        status,
        render_together(residual) if status == FAILS else "0",
        notes=list(notes),
        residual_expr=residual,
    )


def _ansatz(model: ModelSpec, transform) -> TransformAnsatz:
    if transform is None:
        return IDENTITY
    if isinstance(transform, str):
        return model.ansatz(transform)
    if isinstance(transform, TensorExpr):
        return TransformAnsatz("explicit", "explicit", L=transform)
    return transform


# criterion (i) ----------------------------------------------------------------


def xx_closed_form(F: TensorExpr, L: TensorExpr) -> TensorExpr:
    """(F_im d_m F_jn L_n - (i<->j)) + F_im F_jn (d_m L_n - d_n L_m).

    Times hbar^2 this equals [x'_i, x'_j] - [x_i, x_j]; the second bracket
    vanishes when L is a gradient.
    """
    Fim = F.rename({"j": "m"})
    dF = derive(F.rename({"i": "j", "j": "n"}), "m")  # d_m F_jn
    T = mul(mul(Fim, dF, contract=True), L.rename({next(iter(L.free)): "n"}), contract=True)
    Tji = T.rename({"i": "~x", "j": "i"}).rename({"~x": "j"})
    curl_term = mul(
        mul(F.rename({"j": "m"}), F.rename({"i": "j", "j": "n"})),
        curl(L.rename({next(iter(L.free)): "n"}), "m", "n"),
        contract=True,
    )
    return T - Tji + curl_term


def xx_operator_form(F: TensorExpr, L: TensorExpr) -> TensorExpr:
    """([x'_i, x'_j] - [x_i, x_j]) / hbar^2 computed in the operator algebra."""
    Fj = F.rename({"i": "k", "j": "l"})
    x_i = build_position_from_F(F, None, "i", "j")
    x_j = build_position_from_F(Fj, None, "k", "l").rename({"k": "j"})
    y_i = build_position_from_F(F, L, "i", "j")
    y_j = build_position_from_F(Fj, L, "k", "l").rename({"k": "j"})
    diff = commutator(y_i, y_j).expr - commutator(x_i, x_j).expr
    out = TensorExpr({}, diff.free)
    for (h, ip, facs, den), c in diff.items():
        if h < 2:
            raise TensorError("transformation changed [x,x] below order hbar^2")
        out = out + TensorExpr({(h - 2, ip, facs, den): c}, diff.free)
    return out


def check_xx_invariance(model: ModelSpec, transform=None, mode: Mode = EXACT, cross_validate: bool = True) -> CheckReport:
    """Invariance of [x_i, x_j] under C.

    With unknowns in the ansatz the verdict is family-wide: ``holds`` only if
    the residual vanishes for every value of the unknowns.
    """
    ans = _ansatz(model, transform)
    F = model.F()
    L = ans.log_derivative("n")
    residual = xx_closed_form(F, L)
    notes = []
    if not ans.is_integrable():
        notes.append("log-derivative is not a gradient; curl term included")
    if cross_validate:
        direct = xx_operator_form(F, L)
        if not is_zero(model.pin(direct - residual)):
            raise AssertionError("closed-form and operator-level [x',x'] residuals disagree")
        notes.append("closed form agrees with operator-level commutators")
    if ans.unknowns:
        notes.append("verdict over the whole family: " + ", ".join(u.name for u in ans.unknowns))
    return _verdict(model, "xx-invariance", mode, residual, notes)


# criterion (ii) ---------------------------------------------------------------


def reorder_residual(model: ModelSpec, placement, ans: TransformAnsatz) -> TensorExpr:
    """reorder_position - C x C^-1; a pure momentum function."""
    moved = reorder_position(model, placement)
    x = build_position_from_F(model.F(), None)
    xt = apply_transform(x, ans.log_derivative("j"))
    diff = OperatorExpr(moved.expr - xt.expr)
    if q_degree(diff) and not diff.is_zero():
        raise AssertionError("reordering residual retained q dependence")
    return diff.expr


def check_reordering(model: ModelSpec, placement="swap", transform=None, mode: Mode = EXACT) -> CheckReport:
    ans = _ansatz(model, transform)
    if ans.unknowns:
        return solve_transform(model, "reorder", ans, mode, placement=placement)
    report = _verdict(model, "reordering", mode, reorder_residual(model, placement, ans))
    report.notes.append(f"placement {_placement_label(placement)}")
    return report


def _placement_label(placement) -> str:
    if isinstance(placement, str):
        return placement
    if isinstance(placement, int):
        return f"depth={placement}"
    if isinstance(placement, dict):
        return "map " + ",".join(f"{k}:{v}" for k, v in sorted(placement.items()))
    return "custom"


# solving ----------------------------------------------------------------------


def _raw_residual(model: ModelSpec, kind: str, ans: TransformAnsatz, placement) -> TensorExpr:
    if kind in ("reorder", "reordering"):
        return reorder_residual(model, placement, ans)
    if kind in ("xx", "xx-invariance"):
        return xx_closed_form(model.F(), ans.log_derivative("n"))
    raise TensorError(f"unknown check kind {kind!r}")


def solve_transform(model: ModelSpec, kind: str, ansatz=None, mode: Mode = EXACT, placement="swap") -> CheckReport:
    """Find values of the ansatz unknowns that make the residual vanish."""
    ans = _ansatz(model, ansatz)
    if not ans.unknowns:
        raise TensorError(f"ansatz {ans.name!r} has no unknowns to solve for")
    check = "reordering" if kind in ("reorder", "reordering") else "xx-invariance"
    residual = mode.reduce(model.pin(_raw_residual(model, kind, ans, placement)), model)
    numerator, _ = together(residual)
    unknowns = list(ans.unknowns)
    eqs = coefficient_equations(numerator, unknowns)
    try:
        result = solve_system(eqs, len(unknowns))
    except UnsupportedSystem as exc:
        raise TensorError(f"unsupported ansatz {ans.name!r}: {exc}") from None
    notes = [f"ansatz {ans.name} ({ans.kind})", f"{len(eqs)} coefficient equations"]
    if check == "reordering":
        notes.append(f"placement {_placement_label(placement)}")
    if result.status == NO_SOLUTION:
        return CheckReport(
            model.name, check, mode.label(), NO_SOLUTION, render_together(residual), notes=notes,
            residual_expr=residual,
        )
    values = {unknowns[k]: v for k, v in result.values.items()}
    if result.free:
        notes.append("free unknowns set to 0: " + ", ".join(unknowns[k].name for k in result.free))
    solved = ans.substituted(values)
    check_res = mode.reduce(model.pin(_raw_residual(model, kind, solved, placement)), model)
    if not is_zero(check_res):
        raise AssertionError("re-substituted solution leaves a nonzero residual")
    notes.append("solution verified by re-substitution")
    return CheckReport(
        model.name, check, mode.label(), SOLVED, "0",
        solution={u.name: v for u, v in values.items()}, notes=notes, residual_expr=check_res,
    )


def verify_solution(model: ModelSpec, kind: str, ansatz, values: dict, mode: Mode = EXACT, placement="swap") -> TensorExpr:
    """Residual left by a proposed assignment {unknown name: value}."""
    ans = _ansatz(model, ansatz)
    by_name = {u.name: u for u in ans.unknowns}
    solved = ans.substituted({by_name[k]: Fraction(v) for k, v in values.items()})
    return mode.reduce(model.pin(_raw_residual(model, kind, solved, placement)), model)


# symmetricity -----------------------------------------------------------------


def check_symmetricity(model: ModelSpec, transform=None, construction: str = "position") -> CheckReport:
    """C^2 times d_j(F_ij C^-2) - 2 F_i C^-2, i.e. d_j F_ij - 2 F_ij L_j - 2 F_i.

    ``construction="position"`` reads F_i off the momentum-only part of the
    symmetric position operator; ``"trivial"`` uses F_i = 0.
    """
    ans = _ansatz(model, transform)
    if ans.kind == "explicit" and ans is not IDENTITY:
        raise TensorError("symmetricity needs C as a registered power or polynomial family")
    if ans.unknowns:
        raise TensorError("symmetricity needs a fully specified C")
    F = model.F()
    L = ans.log_derivative("j")
    divF = divergence(F, "j")
    if construction == "trivial":
        Fi = TensorExpr({}, {"i"})
    else:
        x = build_position_from_F(F, L if ans is not IDENTITY else None)
        # x' = F_ij q_j + i hbar F_i: keep the q-free part and divide by i hbar
        q_free = {k: c for k, c in x.expr.items() if not any(s.kind == "q" for s, _ in k[2])}
        if any(k[0] < 1 for k in q_free):
            raise TensorError("momentum-only part of x' lacks the hbar factor")
        Fi = TensorExpr(q_free, {"i"}).times_hbar(-1).times_i(-1)
    residual = divF - mul(F, L, contract=True).scale(2) - Fi.scale(2)
    rep = _verdict(model, "symmetricity", EXACT, residual)
    rep.notes.append(f"construction {construction}")
    return rep


# commutativity ----------------------------------------------------------------


def position_commutator(model: ModelSpec) -> OperatorExpr:
    F = model.F()
    x_i = build_position_from_F(F, None, "i", "j")
    x_j = build_position_from_F(F.rename({"i": "k", "j": "l"}), None, "k", "l").rename({"k": "j"})
    return commutator(x_i, x_j)


def check_commutativity(model: ModelSpec, mode: Mode = EXACT) -> CheckReport:
    return _verdict(model, "commutativity", mode, position_commutator(model).expr)


def commutative_g_from_f(f: TensorExpr, atom_name: str = "D") -> tuple[TensorExpr, ScalarAtom]:
    """g_i = f d_i f / (f - p.d f); returns (g_i, the registered atom)."""
    if f.free:
        raise TensorError("f must be a scalar")
    df = derive(f, "a")
    D = f - mul(term(P, "a"), df, contract=True)
    num, den = together(D)
    if den:
        raise TensorError("f - p.df must be polynomial over the declared symbols")
    try:
        atom = ScalarAtom(atom_name, num)
    except TensorError:
        raise TensorError("f - p.df has zero constant term") from None
    g = mul(mul(f, derive(f, "i")), atom.inverse())
    return g, atom


# angular momentum -------------------------------------------------------------


def angular_momentum_q(i: str = "i", j: str = "j") -> OperatorExpr:
    """L_ij = q_i p_j - q_j p_i."""
    return OperatorExpr(
        mul(term(P, j), term(Q, i)) - mul(term(P, i), term(Q, j))
    )


def conventional_vector_bracket(V_k: OperatorExpr, V_i: OperatorExpr, V_j: OperatorExpr) -> OperatorExpr:
    """i hbar (delta_kj V_i - delta_ki V_j)."""
    dkj = OperatorExpr(term(DELTA, "k", "j"))
    dki = OperatorExpr(term(DELTA, "k", "i"))
    return OperatorExpr(
        mul(ihbar(), op_mul(dkj, V_i).expr - op_mul(dki, V_j).expr)
    )


def hamiltonian() -> OperatorExpr:
    return OperatorExpr(mul(term(P, "a"), term(P, "a"), contract=True))


def angular_momentum_x_form(model: ModelSpec) -> OperatorExpr:
    """x-form of L_ij for g-models:

    (x_i p_j - x_j p_i) - (g_i p_j - g_j p_i) (1 + p.g)^-1 (p.x + c i hbar)

    with c read from the symmetrising term, so that x_i = q_i + g_i (p.q + c i hbar).
    For F = f delta it is f^-1 (x_i p_j - x_j p_i) - (i hbar/2) f^-1 (d_i f p_j - d_j f p_i).
    """
    F = model.F()
    x = build_position_from_F(F, None)
    xi, xj = x, x.rename({"i": "j"})
    pi, pj = p_op("i"), p_op("j")
    base = op_mul(xi, pj).expr - op_mul(xj, pi).expr
    if model.g is None and model.h is None:
        atom = ScalarAtom("F0", model.f) if not _is_one(model.f) else None
        inv = atom.inverse() if atom else const(1)
        df = derive(model.f, "i")
        corr = mul(df, term(P, "j")) - mul(derive(model.f, "j"), term(P, "i"))
        out = op_mul(OperatorExpr(inv), OperatorExpr(base)).expr - mul(ihbar(), mul(inv, corr)).scale(
            Fraction(1, 2)
        )
        return OperatorExpr(out)
    if model.h is not None or not _is_one(model.f):
        raise TensorError("x-form angular momentum is implemented for f delta and delta + g p models")
    g = model.g
    gp = mul(g.rename({"i": "a"}), term(P, "a"), contract=True)
    atom = ScalarAtom("G1", const(1) + gp)
    px = op_mul(OperatorExpr(term(P, "b")), x.rename({"i": "b"}), contract=True).expr
    c = _sym_coefficient(model)
    inner = px + mul(ihbar(), const(c))
    cross = mul(g, term(P, "j")) - mul(g.rename({"i": "j"}), term(P, "i"))
    corr = op_mul(OperatorExpr(mul(cross, atom.inverse())), OperatorExpr(inner)).expr
    return OperatorExpr(base - corr)


def _sym_coefficient(model: ModelSpec) -> Fraction:
    """c with (1/2) d_j F_ij = c g_i for a homogeneous g-model."""
    half = divergence(model.F(), "j").scale(Fraction(1, 2))
    half = model.pin(half)
    g = model.pin(model.g)
    # compare one monomial
    (key, cg), = list(g.items())[:1]
    ch = half.terms.get(key)
    if ch is None:
        raise TensorError("g-model is not homogeneous")
    c = ch / cg
    if not is_zero(half - g.scale(c)):
        raise TensorError("g-model is not homogeneous")
    return c


def _is_one(e: TensorExpr) -> bool:
    return e == const(1)


def check_angular_momentum(model: ModelSpec) -> CheckReport:
    """Conventional-algebra checks for L = q x p plus [H, L] in q x p and x forms."""
    L_ij = angular_momentum_q("i", "j")
    parts: dict = {}
    pin = model.pin
    # [p_k, L_ij]
    pk = p_op("k")
    r = commutator(pk, L_ij).expr - conventional_vector_bracket(pk, p_op("i"), p_op("j")).expr
    parts["[p_k,L_ij] - conventional"] = pin(r)
    # [L_ij, L_kl]
    L_kl = angular_momentum_q("k", "l")
    rhs = (
        mul(term(DELTA, "i", "k"), angular_momentum_q("j", "l").expr)
        + mul(term(DELTA, "j", "l"), angular_momentum_q("i", "k").expr)
        - mul(term(DELTA, "j", "k"), angular_momentum_q("i", "l").expr)
        - mul(term(DELTA, "i", "l"), angular_momentum_q("j", "k").expr)
    )
    parts["[L_ij,L_kl] - closure"] = pin(commutator(L_ij, L_kl).expr - mul(ihbar(), rhs))
    # [x_k, L_ij]
    F = model.F()
    x = build_position_from_F(F, None)
    xk = x.rename({"i": "k"})
    parts["[x_k,L_ij] - conventional"] = pin(
        commutator(xk, L_ij).expr
        - conventional_vector_bracket(xk, x, x.rename({"i": "j"})).expr
    )
    H = hamiltonian()
    parts["[H,L_ij] (q x p)"] = pin(commutator(H, L_ij).expr)
    notes = []
    try:
        Lx = angular_momentum_x_form(model)
        parts["[H,L_ij] (x form)"] = pin(commutator(H, Lx).expr)
        parts["x form - q x p"] = pin(Lx.expr - L_ij.expr)
    except TensorError as exc:
        notes.append(f"x form unavailable: {exc}")
    core = ["[p_k,L_ij] - conventional", "[L_ij,L_kl] - closure", "[H,L_ij] (q x p)"]
    status = HOLDS if all(is_zero(parts[k]) for k in core) else FAILS
    for k, v in parts.items():
        notes.append(f"{k}: {'0' if is_zero(v) else render_together(v)}")
    return CheckReport(
        model.name, "angular-momentum", "exact", status,
        "0" if status == HOLDS else render_together(parts["[H,L_ij] (q x p)"]),
        notes=notes, residual_expr=parts,
    )


# translation generator --------------------------------------------------------


def translation_generator(model: ModelSpec) -> TensorExpr:
    """T_j = p_j / (1 + f-hat)."""
    if _is_one(model.f):
        return term(P, "j")
    atom = ScalarAtom("F0", model.f)
    return mul(term(P, "j"), atom.inverse())


def check_translation_generator(model: ModelSpec, mode: Mode = Mode("order", 1)) -> CheckReport:
    """[x_i, T_j] = i hbar delta_ij.  Requires g_i = d f-hat_i (kappa = d)."""
    _require_kappa_d(model)
    x = build_position_from_F(model.F(), None)
    T = OperatorExpr(translation_generator(model))
    r = commutator(x, T).expr - mul(ihbar(), term(DELTA, "i", "j"))
    return _verdict(model, "translation-generator", mode, r)


def _require_kappa_d(model: ModelSpec) -> None:
    if model.h is not None:
        raise TensorError("translation generator needs h = 0")
    fhat = model.f - const(1)
    if not fhat:
        if model.g is None:
            return
        raise TensorError("model is not of the kappa = d form")
    # kappa = d means g_i = d_i f-hat (Euler: d f-hat_i = d_i f-hat)
    g = model.g if model.g is not None else TensorExpr({}, {"i"})
    if not is_zero(g - derive(fhat, "i")):
        raise TensorError("model is not of the kappa = d form (need g_i = d_i f)")


# displayed identities ---------------------------------------------------------


def _identity(model: ModelSpec, name: str, lhs, rhs, mode: Mode = EXACT) -> CheckReport:
    lhs = lhs.expr if isinstance(lhs, OperatorExpr) else lhs
    rhs = rhs.expr if isinstance(rhs, OperatorExpr) else rhs
    return _verdict(model, f"identity {name}", mode, lhs - rhs)


def _xp(model: ModelSpec) -> TensorExpr:
    x = build_position_from_F(model.F(), None)
    return commutator(x, p_op("j")).expr


def _pq() -> TensorExpr:
    """p.q as a normal-ordered expression with no free index."""
    return mul(term(P, "a"), term(Q, "a"), contract=True)


def _scaled_x(coeff: TensorExpr, model: ModelSpec, idx: str) -> OperatorExpr:
    x = build_position_from_F(model.F(), None)
    if idx != "i":
        x = x.rename({"i": idx})
    return op_mul(OperatorExpr(coeff), x)


def _bracket_form(model: ModelSpec, K: TensorExpr, v: TensorExpr) -> TensorExpr:
    """i hbar K (v_i x_j - v_j x_i) with K a scalar and v_i a vector."""
    vi, vj = v, v.rename({"i": "j"})
    return mul(
        ihbar(),
        _scaled_x(mul(K, vi), model, "j").expr - _scaled_x(mul(K, vj), model, "i").expr,
    )


def summary_f_model(model: ModelSpec) -> list[CheckReport]:
    """F = f delta: symmetric x, [x, p] and [x, x] in closed form, invariance."""
    f = model.f
    x = build_position_from_F(model.F(), None)
    out = [
        _identity(model, "x_i = f q_i + (i hbar/2) d_i f", x,
                  mul(f, term(Q, "i")) + mul(ihbar(), derive(f, "i")).scale(Fraction(1, 2))),
        _identity(model, "[x_i,p_j] = i hbar f delta_ij", _xp(model), mul(ihbar(), mul(f, term(DELTA, "i", "j")))),
        _identity(model, "[x_i,x_j] = i hbar (d_i f x_j - d_j f x_i)", position_commutator(model),
                  _bracket_form(model, const(1), derive(f, "i"))),
    ]
    for ans in model.ansatze.values():
        out.append(check_xx_invariance(model, ans))
    return out


def summary_g_model(model: ModelSpec) -> list[CheckReport]:
    """F = delta + g_i p_j with a single symmetric anisotropy."""
    g = model.g
    c = _sym_coefficient(model)
    x = build_position_from_F(model.F(), None)
    shape = term(Q, "i") + mul(g, _pq() + mul(ihbar(), const(c)))
    out = [
        _identity(model, f"x_i = q_i + g_i (p.q + {c} i hbar)", x, shape),
        _identity(model, "[x_i,p_j] = i hbar (delta_ij + g_i p_j)", _xp(model),
                  mul(ihbar(), term(DELTA, "i", "j") + mul(g, term(P, "j")))),
        _identity(model, "[x_i,x_j] = i hbar (x_i g_j - x_j g_i)", position_commutator(model),
                  _bracket_form(model, const(1), g).scale(-1)),
    ]
    for ans in model.ansatze.values():
        out.append(check_xx_invariance(model, ans))
    return out


def summary_f_g_model(model: ModelSpec, fhat_rank: int, kappa: TensorExpr) -> list[CheckReport]:
    """f = 1 + f-hat, g_i = kappa f-hat_i: position operator, [x,p], [x,x].

    ``fhat_rank`` is the tensor rank d of f-hat, ``kappa`` a rank-0 expression.
    """
    fhat = model.f - const(1)
    fi = derive(fhat, "i").scale(Fraction(1, fhat_rank))  # Euler: d_i f-hat = d f-hat_i
    dim = model.dim if model.dim is not None else term(DIM)
    d = const(fhat_rank)
    x = build_position_from_F(model.F(), None)
    sym = kappa + mul(kappa, d).scale(Fraction(1, 2)) + d.scale(Fraction(1, 2))
    shape = mul(model.f, term(Q, "i")) + mul(fi, mul(kappa, _pq()) + mul(ihbar(), sym))
    notes = []
    if dim != 3:
        notes.append("the symmetrising coefficient is the three-dimensional one")
    F0 = ScalarAtom("F0", model.f)
    K = mul(d - kappa + mul(d - kappa + mul(kappa, d), fhat), F0.inverse())
    out = [
        _identity(model, "x_i = (1+f) q_i + f_i (kappa p.q + (kappa + kappa d/2 + d/2) i hbar)", x, shape),
        _identity(model, "[x_i,p_j] = i hbar ((1+f) delta_ij + kappa f_i p_j)", _xp(model),
                  mul(ihbar(), mul(model.f, term(DELTA, "i", "j")) + mul(mul(kappa, fi), term(P, "j")))),
        _identity(model, "[x_i,x_j] = i hbar K (f_i x_j - f_j x_i)", position_commutator(model),
                  _bracket_form(model, K, fi)),
    ]
    for rep in out:
        rep.notes.extend(notes)
    return out


def summary_commutative_x(model: ModelSpec) -> CheckReport:
    """x_i = f q_i + g_i (p.q + 3/2 i hbar) + (i hbar/2)(d_i f + p.d g_i)."""
    f, g = model.f, model.g
    pdg = mul(term(P, "a"), derive(g, "a"), contract=True)
    shape = (
        mul(f, term(Q, "i"))
        + mul(g, _pq() + mul(ihbar(), const(Fraction(3, 2))))
        + mul(ihbar(), derive(f, "i") + pdg).scale(Fraction(1, 2))
    )
    return _identity(model, "x_i = f q_i + g_i (p.q + 3/2 i hbar) + (i hbar/2)(d_i f + p.d g_i)",
                     build_position_from_F(model.F(), None), shape)


def check_summary_models() -> list[CheckReport]:
    """Regression over the displayed identities of the overlapping-feature models."""
    from .library import get

    out: list[CheckReport] = []
    out += summary_f_model(get("f-only-general"))
    out += summary_f_model(get("f-only-single"))
    out += summary_g_model(get("g-only-single"))
    kk = get("kempf-aniso-kappa")
    out += summary_f_g_model(kk, 2, term(_param(kk, "kappa")))
    for name, kappa in (("kappa-proportional", Fraction(1, 2)), ("kempf-aniso", Fraction(2))):
        m = get(name)
        out += summary_f_g_model(m, 2, const(kappa))
        out.append(check_xx_invariance(m, "power"))
    ka = get("kempf-aniso")
    bp = ka.g.scale(Fraction(1, 2))  # (p.beta)_i
    shape = mul(ka.f, term(Q, "i")) + mul(bp, _pq().scale(2) + mul(ihbar(), const(5)))
    out.append(_identity(ka, "x_i = (1+p.beta.p) q_i + (p.beta)_i (2 p.q + 5 i hbar)",
                         build_position_from_F(ka.F(), None), shape))
    out.append(check_commutativity(ka, Mode("order", 1)))
    out.append(check_translation_generator(ka))
    out.append(check_xx_invariance(get("alpha-alpha-prime"), "exp-quadratic"))
    com = get("commutative")
    out.append(check_commutativity(com))
    out.append(summary_commutative_x(com))
    out.append(check_commutativity(get("isotropic-commutative")))
    return out


def _param(model: ModelSpec, name: str):
    from .tensor_core import param

    if name not in model.params:
        raise TensorError(f"model {model.name!r} has no parameter {name!r}")
    return param(name)


__all__ = [
    "CheckReport",
    "HOLDS",
    "FAILS",
    "SOLVED",
    "NO_SOLUTION",
    "xx_closed_form",
    "xx_operator_form",
    "check_xx_invariance",
    "reorder_residual",
    "check_reordering",
    "solve_transform",
    "verify_solution",
    "check_symmetricity",
    "position_commutator",
    "check_commutativity",
    "commutative_g_from_f",
    "angular_momentum_q",
    "angular_momentum_x_form",
    "check_angular_momentum",
    "hamiltonian",
    "translation_generator",
    "check_translation_generator",
    "check_summary_models",
    "summary_f_model",
    "summary_g_model",
    "summary_f_g_model",
    "summary_commutative_x",
]
