"""Exact solving of polynomial systems that become linear stage by stage.

Coefficient identities extracted from a residual give one polynomial equation
per independent monomial structure.  The solver repeatedly takes the
equations of total degree <= 1, solves them by Gaussian elimination over the
rationals (columns in declaration order), substitutes the forced values into
everything else, and starts over.  A system whose remaining equations are all
nonlinear is refused rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .tensor_core import Symbol, TensorExpr, TensorError

Poly = dict  # exponent tuple -> Fraction


class UnsupportedSystem(TensorError):
    """The system has no linear stage left to solve."""


@dataclass
class SolveResult:
    status: str  # "solved" | "no-solution"
    values: dict = field(default_factory=dict)  # Symbol -> Fraction
    free: list = field(default_factory=list)  # symbols set to 0 by convention
    rank: int = 0


# polynomial helpers -----------------------------------------------------------


def _padd(a: Poly, b: Poly, scale: Fraction = Fraction(1)) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _subst(poly: Poly, k: int, value: Poly, n: int) -> Poly:
    """Replace variable k by the polynomial ``value``."""
    powers = [{(0,) * n: Fraction(1)}]
    out: dict = {}
    for e, c in poly.items():
        m = e[k]
        while len(powers) <= m:
            powers.append(_pmul(powers[-1], value))
        rest = {e[:k] + (0,) + e[k + 1 :]: c}
        out = _padd(out, _pmul(rest, powers[m]))
    return out


def _degree(poly: Poly) -> int:
    return max((sum(e) for e in poly), default=0)


# linear stage -----------------------------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of an augmented matrix (last column = rhs)."""
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_linear(rows: list[list[Fraction]], ncols: int) -> tuple[str, dict, list[int]]:
    """Solve A x = b given rows [a_1..a_n, b].

    Returns (status, {col: value}, free columns); free columns are set to 0.
    """
    red, pivots = _rref(rows, ncols)
    for row in red[len(pivots) :]:
        if row[ncols]:
            return "no-solution", {}, []
    free = [c for c in range(ncols) if c not in pivots]
    values = {c: Fraction(0) for c in free}
    for row, c in zip(red, pivots):
        values[c] = row[ncols]
    return "solved", values, free


def solve_system(eqs: Sequence[Poly], nvars: int) -> SolveResult:
    """Staged exact solve of polynomial equations in ``nvars`` variables."""
    eqs = [dict(e) for e in eqs if e]
    zero = (0,) * nvars
    fixed: dict[int, Poly] = {}
    rank = 0
    while True:
        if any(set(e) == {zero} for e in eqs):
            return SolveResult("no-solution", rank=rank)
        eqs = [e for e in eqs if e]
        if not eqs:
            break
        linear = [e for e in eqs if _degree(e) <= 1]
        if not linear:
            raise UnsupportedSystem("the coefficient equations are nonlinear in the unknowns")
        rows = []
        for e in linear:
            row = [Fraction(0)] * (nvars + 1)
            for ex, c in e.items():
                if ex == zero:
                    row[nvars] = -c
                else:
                    row[ex.index(1)] = c
            rows.append(row)
        red, pivots = _rref(rows, nvars)
        if any(row[nvars] for row in red[len(pivots) :]):
            return SolveResult("no-solution", rank=rank + len(pivots))
        rank += len(pivots)
        # express each pivot as an affine polynomial in the non-pivot variables
        for row, col in zip(red, pivots):
            val: dict = {zero: row[nvars]} if row[nvars] else {}
            for c in range(nvars):
                if c != col and row[c]:
                    e = tuple(1 if k == c else 0 for k in range(nvars))
                    val[e] = -row[c]
            fixed[col] = val
            eqs = [_subst(e, col, val, nvars) for e in eqs]
            fixed = {k: _subst(v, col, val, nvars) for k, v in fixed.items()}
    free = [k for k in range(nvars) if k not in fixed]
    values = {}
    for k in range(nvars):
        if k in fixed:
            poly = fixed[k]
            for f in free:
                poly = _subst(poly, f, {}, nvars)
            values[k] = poly.get(zero, Fraction(0))
        else:
            values[k] = Fraction(0)
    return SolveResult("solved", values, free, rank)


# coefficient extraction -------------------------------------------------------


def coefficient_equations(
    numerator: TensorExpr, unknowns: Sequence[Symbol]
) -> list[Poly]:
    """Group monomials by everything except unknown factors; each group is one
    polynomial that must vanish identically."""
    index = {u: k for k, u in enumerate(unknowns)}
    n = len(unknowns)
    groups: dict = {}
    for (h, ip, facs, den), c in numerator.items():
        if any(u in index for atom, _ in den for u in atom.definition.symbols()):
            raise TensorError("unknowns left inside a denominator; clear denominators first")
        exps = [0] * n
        rest = []
        for sym, labs in facs:
            if sym in index:
                exps[index[sym]] += 1
            else:
                rest.append((sym, labs))
        key = (h, ip, tuple(rest), den)
        poly = groups.setdefault(key, {})
        e = tuple(exps)
        poly[e] = poly.get(e, 0) + c
    return [{e: c for e, c in p.items() if c} for p in groups.values()]


__all__ = [
    "SolveResult",
    "UnsupportedSystem",
    "solve_linear",
    "solve_system",
    "coefficient_equations",
]
