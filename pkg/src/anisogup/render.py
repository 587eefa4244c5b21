"""Stable text rendering of tensor expressions.

The output is valid model-DSL expression syntax, so rendered expressions can
be parsed back.  Monomials are ordered by :func:`monomial_sort_key`; dummy
indices are spelled with the first unused letters of ``_DUMMY_LETTERS``.
"""

from __future__ import annotations

from fractions import Fraction

from .tensor_core import TensorExpr, monomial_sort_key, together

_DUMMY_LETTERS = "abcdemnrstuvwxyz"


def _dummy_names(free: frozenset, count: int) -> list[str]:
    names = [ch for ch in _DUMMY_LETTERS if ch not in free]
    k = 1
    while len(names) < count:
        cand = f"a{k}"
        if cand not in free:
            names.append(cand)
        k += 1
    return names[:count]


def render_factor(sym, labels) -> str:
    if sym.kind == "radial":
        return sym.name + "'" * sym.level
    if sym.rank == 0:
        return sym.name
    return f"{sym.name}[{','.join(labels)}]"


def render_monomial(key: tuple, coeff: Fraction, free: frozenset) -> tuple[str, str]:
    """Return (sign, body) for one monomial."""
    h, ip, facs, den = key
    n_dummy = 1 + max((lab for _, labs in facs for lab in labs if isinstance(lab, int)), default=-1)
    names = _dummy_names(free, n_dummy)
    parts = []
    mag = abs(coeff)
    if ip:
        parts.append("im")
    if h == 1:
        parts.append("hbar")
    elif h > 1:
        parts.append(f"hbar^{h}")
    # collapse repeated scalar factors into powers
    scalars: list[tuple[str, int]] = []
    for sym, labs in facs:
        text = render_factor(sym, [names[x] if isinstance(x, int) else x for x in labs])
        if sym.rank == 0 and scalars and scalars[-1][0] == text:
            scalars[-1] = (text, scalars[-1][1] + 1)
        else:
            scalars.append((text, 1))
    for text, n in scalars:
        parts.append(text if n == 1 else f"{text}^{n}")
    body = "*".join(parts)
    if mag != 1 or not body:
        body = f"{mag}*{body}" if body else str(mag)
    for atom, m in den:
        body += f"/{atom.name}" + (f"^{m}" if m != 1 else "")
    return ("-" if coeff < 0 else "+"), body


def render_expr(e: TensorExpr) -> str:
    if not e:
        return "0"
    out = []
    for key, c in e.sorted_items():
        sign, body = render_monomial(key, c, e.free)
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def render_together(e: TensorExpr) -> str:
    """Like :func:`render_expr` but over one common denominator."""
    num, lcd = together(e)
    if not lcd:
        return render_expr(e)
    den = "*".join(a.name + (f"^{m}" if m != 1 else "") for a, m in sorted(lcd.items()))
    return f"({render_expr(num)})/({den})"


__all__ = ["render_together", "render_expr", "render_monomial", "render_factor", "monomial_sort_key"]
