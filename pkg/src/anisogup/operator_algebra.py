"""Normal-ordered operators in the auxiliary pair (q, p) with [q_i, p_j] = i hbar delta_ij.

A normal-ordered operator is stored as a :class:`TensorExpr` whose ``q``
factors are understood to stand to the right of everything else.  Because the
q's commute among themselves this is a faithful representation, and the
tensor canonical form doubles as the operator canonical form.  Products are
brought back to normal order with

    q_a F(p) = F(p) q_a + i hbar d_a F(p)

applied to every subset of the left operand's q's at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Union

from .tensor_core import (
    DELTA,
    Q,
    P,
    TensorError,
    TensorExpr,
    const,
    derive,
    ihbar,
    is_zero,
    mul,
    term,
)


class OperatorExpr:
    """Immutable normal-ordered operator."""

    __slots__ = ("expr",)

    def __init__(self, expr: TensorExpr | int | Fraction):
        if not isinstance(expr, TensorExpr):
            expr = const(expr)
        self.expr = expr

    @property
    def free(self) -> frozenset:
        return self.expr.free

    def __add__(self, other) -> OperatorExpr:
        return OperatorExpr(self.expr + _unwrap(other))

    __radd__ = __add__

    def __sub__(self, other) -> OperatorExpr:
        return OperatorExpr(self.expr - _unwrap(other))

    def __rsub__(self, other) -> OperatorExpr:
        return OperatorExpr(_unwrap(other) - self.expr)

    def __neg__(self) -> OperatorExpr:
        return OperatorExpr(-self.expr)

    def __matmul__(self, other) -> OperatorExpr:
        return op_mul(self, _wrap(other), contract=True)

    def __rmatmul__(self, other) -> OperatorExpr:
        return op_mul(_wrap(other), self, contract=True)

    def scale(self, c) -> OperatorExpr:
        return OperatorExpr(self.expr.scale(c))

    def rename(self, mapping: Mapping[str, str]) -> OperatorExpr:
        return OperatorExpr(self.expr.rename(mapping))

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self.expr == other.expr

    def __hash__(self) -> int:
        return hash(self.expr)

    def __bool__(self) -> bool:
        return bool(self.expr)

    def __str__(self) -> str:
        return str(self.expr)

    def __repr__(self) -> str:
        return f"OperatorExpr({str(self.expr)!r})"

    def is_zero(self) -> bool:
        return is_zero(self.expr)

    def equals(self, other) -> bool:
        return is_zero(self.expr - _unwrap(other))

    def terms(self) -> list[OperatorTerm]:
        """Monomial view: coefficient (with q slots as free indices) and slots."""
        out = []
        for (h, ip, facs, den), c in self.expr.sorted_items():
            slots, rest = [], []
            for sym, labs in facs:
                if sym.kind == "q":
                    lab = labs[0]
                    slots.append(f"~{lab}" if isinstance(lab, int) else lab)
                else:
                    rest.append((sym, tuple(f"~{x}" if isinstance(x, int) else x for x in labs)))
            coeff = TensorExpr.from_raw([(c, h, ip, rest, den)])
            out.append(OperatorTerm(coeff, tuple(slots)))
        return out


@dataclass(frozen=True)
class OperatorTerm:
    coeff: TensorExpr
    q_slots: tuple


def _unwrap(x) -> TensorExpr:
    if isinstance(x, OperatorExpr):
        return x.expr
    if isinstance(x, TensorExpr):
        return x
    return const(x)


def _wrap(x) -> OperatorExpr:
    return x if isinstance(x, OperatorExpr) else OperatorExpr(_unwrap(x))


def q_op(i: str) -> OperatorExpr:
    return OperatorExpr(term(Q, i))


def p_op(i: str) -> OperatorExpr:
    return OperatorExpr(term(P, i))


def _split_q(key: tuple, c: Fraction, tag: str) -> tuple[list, list[str]]:
    """Coefficient factors of a monomial with every q slot re-routed through a
    delta to a fresh label; returns (factors, fresh labels)."""
    h, ip, facs, den = key
    rest, fresh = [], []
    for sym, labs in facs:
        labs = tuple(f"~{tag}{x}" if isinstance(x, int) else x for x in labs)
        if sym.kind == "q":
            t = f"~q{tag}{len(fresh)}"
            fresh.append(t)
            rest.append((DELTA, (labs[0], t)))
        else:
            rest.append((sym, labs))
    return rest, fresh


def op_mul(A: OperatorExpr, B: OperatorExpr, contract: bool = False) -> OperatorExpr:
    """Normal-ordered product A B."""
    a, b = _unwrap(A), _unwrap(B)
    shared = a.free & b.free
    if shared and not contract:
        raise TensorError(f"index collision {sorted(shared)} in operator product")
    free = (a.free | b.free) - shared
    out = TensorExpr({}, free)
    if not a or not b:
        return OperatorExpr(out)
    dcache: dict = {(): b}

    def d(labels: tuple) -> TensorExpr:
        if labels not in dcache:
            dcache[labels] = derive(d(labels[:-1]), labels[-1])
        return dcache[labels]

    for key, c in a.items():
        h, ip, _, den = key
        rest, fresh = _split_q(key, c, "A")
        n = len(fresh)
        for size in range(n + 1):
            for S in itertools.combinations(range(n), size):
                labels = tuple(fresh[s] for s in S)
                db = d(labels)
                if not db:
                    continue
                left = rest + [(Q, (fresh[s],)) for s in range(n) if s not in S]
                left_expr = TensorExpr.from_raw([(c, h + size, ip + size, left, den)])
                out = out + mul(left_expr, db, contract=True)
    return OperatorExpr(out)


def commutator(A: OperatorExpr, B: OperatorExpr) -> OperatorExpr:
    A, B = _wrap(A), _wrap(B)
    return OperatorExpr(op_mul(A, B).expr - op_mul(B, A).expr)


def divergence(F: TensorExpr, slot: str = "j") -> TensorExpr:
    """d_slot F_{..slot..}: derivative contracted with the named free slot."""
    dF = derive(F, "~t")
    return mul(dF, term(DELTA, slot, "~t"), contract=True)


def build_position_from_F(
    F: TensorExpr, L: TensorExpr | None = None, i: str = "i", j: str = "j"
) -> OperatorExpr:
    """x'_i = F_ij q_j + (1/2) i hbar d_j F_ij - i hbar F_ij L_j.

    ``F`` has free indices {i, j}; ``L`` (one free index, any name) is the
    logarithmic derivative d ln C of the transformation, or None for C = 1.
    """
    if F.free != {i, j}:
        raise TensorError(f"F must carry free indices {{{i},{j}}}, got {sorted(F.free)}")
    x = mul(F, term(Q, j), contract=True)
    x = x + mul(ihbar(), divergence(F, j)).scale(Fraction(1, 2))
    if L is not None:
        x = x - mul(ihbar(), mul(F, _as_slot(L, j), contract=True))
    return OperatorExpr(x)


def _as_slot(L: TensorExpr, name: str) -> TensorExpr:
    if len(L.free) != 1:
        raise TensorError("log-derivative must have exactly one free index")
    (old,) = L.free
    return L.rename({old: name}) if old != name else L


def build_position(model, transform: TensorExpr | None = None, i: str = "i") -> OperatorExpr:
    """Position operator for a model (anything with ``F(i, j)``) or a bare F."""
    if isinstance(model, TensorExpr):
        (a, b) = sorted(model.free)
        return build_position_from_F(model, transform, a, b)
    return build_position_from_F(model.F(i, "j"), transform, i, "j")


def apply_transform(A: OperatorExpr, L: TensorExpr) -> OperatorExpr:
    """C A C^-1 for C = C(p) with d_j ln C = L_j: every q_a becomes q_a - i hbar L_a."""
    a = _unwrap(A)
    out = OperatorExpr(TensorExpr({}, a.free))
    for key, c in a.items():
        h, ip, _, den = key
        rest, fresh = _split_q(key, c, "T")
        acc = OperatorExpr(TensorExpr.from_raw([(c, h, ip, rest, den)]))
        for t in fresh:
            shifted = term(Q, t) - mul(ihbar(), _as_slot(L, t))
            acc = op_mul(acc, OperatorExpr(shifted), contract=True)
        out = out + acc
    return out


def q_degree(A: OperatorExpr) -> int:
    a = _unwrap(A)
    return max(
        (sum(1 for sym, _ in facs if sym.kind == "q") for (_, _, facs, _) in a.terms), default=0
    )


def coefficient_of(A: OperatorExpr, slots: tuple[str, ...]) -> TensorExpr:
    """Coefficient of q_{slots} (symmetrised over the slots)."""
    a = _unwrap(A)
    n = len(slots)
    out = None
    for key, c in a.items():
        h, ip, facs, den = key
        rest, fresh = _split_q(key, c, "C")
        if len(fresh) != n:
            continue
        for perm in itertools.permutations(slots):
            facs2 = rest + [(DELTA, (t, s)) for t, s in zip(fresh, perm)]
            piece = TensorExpr.from_raw([(c / factorial(n), h, ip, facs2, den)])
            out = piece if out is None else out + piece
    if out is None:
        return TensorExpr({}, (a.free | set(slots)))
    return out


# reordering -----------------------------------------------------------------

Placement = Union[str, int, Mapping[int, int], Callable[[int, int], int]]


def momentum_factor_counts(F: TensorExpr) -> list[int]:
    """Number of momentum-dependent factors per canonical monomial of F.

    A block of denominators counts as one factor placed last.
    """
    out = []
    for (h, ip, facs, den), _ in F.sorted_items():
        out.append(sum(1 for sym, _ in facs if sym.p_dependent) + (1 if den else 0))
    return out


def _depths(F: TensorExpr, placement: Placement) -> list[int]:
    counts = momentum_factor_counts(F)
    if placement in ("canonical", "right"):
        return counts
    if placement in ("swap", "left"):
        return [0] * len(counts)
    if isinstance(placement, int):
        if placement < 0:
            raise TensorError("insertion depth must be non-negative")
        return [min(placement, n) for n in counts]
    if callable(placement):
        depths = [placement(k, n) for k, n in enumerate(counts)]
    elif isinstance(placement, Mapping):
        depths = [placement.get(k, n) for k, n in enumerate(counts)]
    else:
        raise TensorError(f"unknown placement {placement!r}")
    for r, n in zip(depths, counts):
        if not 0 <= r <= n:
            raise TensorError(f"insertion depth {r} out of range 0..{n}")
    return depths


def reorder_position(model, placement: Placement = "swap", i: str = "i") -> OperatorExpr:
    """Position operator with q_j inserted at depth r among the momentum
    factors of every monomial of F_ij, then normal ordered.  The symmetrising
    term (1/2) i hbar d_j F_ij is kept.

    Depth r of a monomial with n momentum units (each p-dependent factor is a
    unit, a block of denominators is one more) means the average over every
    choice of r units standing left of q.  Moving q_j left past the others
    gives i hbar d_j of the units it crosses, so by the product rule the
    average is (n - r)/n of the full swap term i hbar d_j(monomial).  This
    does not depend on how the factors of a monomial happen to be stored.
    """
    F = model if isinstance(model, TensorExpr) else model.F(i, "j")
    a, b = (i, "j") if not isinstance(model, TensorExpr) else sorted(F.free)
    base = build_position_from_F(F, None, a, b)
    depths = _depths(F, placement)
    extra = TensorExpr({}, frozenset({a}))
    counts = momentum_factor_counts(F)
    for ((h, ip, facs, den), c), r, n in zip(F.sorted_items(), depths, counts):
        if r >= n:
            continue
        mono = TensorExpr({(h, ip, facs, den): c}, F.free)
        moved = mul(derive(mono, "~t"), term(DELTA, b, "~t"), contract=True)
        extra = extra + mul(ihbar(), moved).scale(Fraction(n - r, n))
    return OperatorExpr(base.expr + extra)


__all__ = [
    "OperatorExpr",
    "OperatorTerm",
    "q_op",
    "p_op",
    "op_mul",
    "commutator",
    "divergence",
    "build_position",
    "build_position_from_F",
    "apply_transform",
    "q_degree",
    "coefficient_of",
    "reorder_position",
    "momentum_factor_counts",
]
