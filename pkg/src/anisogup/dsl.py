"""Text format for model specifications.

A model file looks like::

    model "kempf-aniso" {
      dim 3
      tensor beta rank 2 symmetric
      scalaratom S = 1 + 3*p[a]*beta[a,b]*p[b]
      f = 1 + p[a]*beta[a,b]*p[b]
      g[i] = 2*beta[i,a]*p[a]
      ansatz "kempf" power S^n
    }

Indices follow the summation convention: a label used twice in a term is
summed, once is free, more often is an error.  Only exact rationals appear.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .model import ModelSpec, TransformAnsatz
from .render import render_expr
from .tensor_core import (
    DELTA,
    DIM,
    P,
    ScalarAtom,
    Symbol,
    TensorError,
    TensorExpr,
    const,
    function,
    ihbar,
    param,
    radial,
    tensor,
    term,
)


class DSLError(TensorError):
    """Parse or validation error carrying a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\](),=*/^+\-:;'])
    """,
    re.VERBOSE,
)

_RESERVED = {"p", "delta", "q", "hbar", "im", "dim"}


@dataclass(frozen=True)
class Token:
    kind: str  # string | int | ident | punct | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                start = pos + k + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0
        self.spec = ModelSpec("")
        self.symbols: dict[str, Symbol] = {}
        self.extra_unknowns: dict[str, Symbol] | None = None

    # token helpers ------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Token | None = None) -> DSLError:
        tok = tok or self.tok
        return DSLError(msg, tok.line, tok.col)

    def take(self) -> Token:
        t = self.tok
        self.k += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.k += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def integer(self) -> int:
        neg = self.accept("-")
        n = int(self.expect_kind("int", "an integer").text)
        return -n if neg else n

    def new_name(self) -> str:
        t = self.expect_kind("ident", "a name")
        if t.text in _RESERVED or t.text in self.symbols or t.text in self.spec.atoms:
            raise self.error(f"name {t.text!r} is reserved or already declared", t)
        return t.text

    # model --------------------------------------------------------------
    def model(self) -> ModelSpec:
        self.expect("model")
        self.spec.name = self.expect_kind("string", "a model name in quotes").text[1:-1]
        self.expect("{")
        fields: dict = {}
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}'")
            self.decl(fields)
            self.accept(";")
        if self.tok.kind != "eof":
            raise self.error("text after the end of the model")
        try:
            return ModelSpec(
                self.spec.name,
                dim=self.spec.dim,
                tensors=self.spec.tensors,
                radials=self.spec.radials,
                functions=self.spec.functions,
                params=self.spec.params,
                atoms=self.spec.atoms,
                f=fields.get("f", const(1)),
                g=fields.get("g"),
                h=fields.get("h"),
                ansatze=self.spec.ansatze,
            )
        except TensorError as exc:
            raise DSLError(str(exc)) from None

    def decl(self, fields: dict) -> None:
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected a declaration, found {t.text!r}")
        word = t.text
        self.take()
        if word == "dim":
            n = self.integer()
            if n < 1:
                raise self.error("dim must be positive", t)
            self.spec.dim = n
        elif word == "tensor":
            name = self.new_name()
            self.expect("rank")
            rank = self.integer()
            if rank < 1:
                raise self.error("rank must be at least 1", t)
            sym = self.accept("symmetric")
            order = self.integer() if self.accept("order") else 1
            s = tensor(name, rank, sym, order)
            self.symbols[name] = s
            self.spec.tensors[name] = s
        elif word == "radial":
            name = self.new_name()
            self.symbols[name] = radial(name)
            self.spec.radials.append(name)
        elif word == "function":
            name = self.new_name()
            self.symbols[name] = function(name)
            self.spec.functions.append(name)
        elif word == "param":
            name = self.new_name()
            self.symbols[name] = param(name)
            self.spec.params.append(name)
        elif word == "scalaratom":
            name = self.new_name()
            self.expect("=")
            e = self.expr_with(set(), "scalaratom")
            try:
                self.spec.atoms[name] = ScalarAtom(name, e)
            except TensorError as exc:
                raise self.error(str(exc), t) from None
        elif word == "f":
            if "f" in fields:
                raise self.error("f assigned twice", t)
            self.expect("=")
            fields["f"] = self.expr_with(set(), "f")
        elif word in ("g", "h"):
            if word in fields:
                raise self.error(f"{word} assigned twice", t)
            self.expect("[")
            idx = self.expect_kind("ident", "an index").text
            self.expect("]")
            self.expect("=")
            e = self.expr_with({idx}, word)
            fields[word] = e.rename({idx: "i"}) if e and idx != "i" else (e if e else None)
        elif word == "ansatz":
            self.ansatz()
        else:
            raise self.error(f"unknown declaration {word!r}", t)

    def expr_with(self, free: set, what: str) -> TensorExpr:
        t = self.tok
        e = self.expr()
        if e and set(e.free) != free:
            want = ", ".join(sorted(free)) or "none"
            raise self.error(f"{what} must have free indices {{{want}}}, got {sorted(e.free)}", t)
        return e

    def ansatz(self) -> None:
        name = self.expect_kind("string", "an ansatz name in quotes").text[1:-1]
        if name in self.spec.ansatze:
            raise self.error(f"ansatz {name!r} declared twice")
        kind = self.expect_kind("ident", "explicit, power or poly")
        if kind.text == "explicit":
            self.expect("[")
            idx = self.expect_kind("ident", "an index").text
            self.expect("]")
            self.expect("=")
            L = self.expr_with({idx}, "an explicit ansatz")
            L = L.rename({idx: "j"}) if L and idx != "j" else (L if L else TensorExpr({}, {"j"}))
            ans = TransformAnsatz(name, "explicit", L=L)
        elif kind.text == "power":
            self.extra_unknowns = {}
            factors = []
            while True:
                at = self.expect_kind("ident", "a scalar atom")
                atom = self.spec.atoms.get(at.text)
                if atom is None:
                    raise self.error(f"undeclared scalar atom {at.text!r}", at)
                self.expect("^")
                factors.append((atom, self.exponent()))
                if not self.accept("*"):
                    break
            ans = TransformAnsatz(name, "power", factors=tuple(factors), unknowns=tuple(self.extra_unknowns.values()))
            self.extra_unknowns = None
        elif kind.text == "poly":
            self.expect("unknowns")
            unknowns: dict = {}
            while self.tok.kind == "ident":
                n = self.new_name()
                if n in unknowns:
                    raise self.error(f"unknown {n!r} listed twice")
                unknowns[n] = param(n)
            if not unknowns:
                raise self.error("poly ansatz needs at least one unknown")
            self.expect(":")
            saved = dict(self.symbols)
            self.symbols.update(unknowns)
            t = self.tok
            C = self.expr_with(set(), "a poly ansatz")
            self.symbols = saved
            try:
                atom = ScalarAtom("C", C)
            except TensorError as exc:
                raise self.error(str(exc), t) from None
            ans = TransformAnsatz(name, "poly", C=atom, unknowns=tuple(unknowns.values()))
        else:
            raise self.error("expected explicit, power or poly", kind)
        self.spec.ansatze[name] = ans

    def exponent(self) -> TensorExpr:
        if self.accept("("):
            e = self.expr_with(set(), "an exponent")
            self.expect(")")
            return e
        if self.tok.kind == "ident":
            return self.scalar_name(self.take())
        n = Fraction(self.integer())
        if self.accept("/"):
            n /= self.integer()
        return const(n)

    def scalar_name(self, t: Token) -> TensorExpr:
        sym = self.symbols.get(t.text)
        if sym is None and self.extra_unknowns is not None and t.text not in _RESERVED:
            sym = self.extra_unknowns.setdefault(t.text, param(t.text))
        if sym is None or sym.kind != "param":
            raise self.error(f"exponent {t.text!r} must be a parameter or unknown", t)
        return term(sym)

    # expressions --------------------------------------------------------
    def expr(self) -> TensorExpr:
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        out = self.term().scale(sign)
        while self.at("+") or self.at("-"):
            sign = 1 if self.take().text == "+" else -1
            t = self.tok
            nxt = self.term().scale(sign)
            try:
                out = out + nxt
            except TensorError as exc:
                raise self.error(str(exc), t) from None
        return out

    def term(self) -> TensorExpr:
        start = self.tok
        parts = [self.power()]
        den: Counter = Counter()
        scale = Fraction(1)
        while True:
            if self.accept("*"):
                parts.append(self.power())
            elif self.accept("/"):
                t = self.tok
                if t.kind == "int":
                    n = int(self.take().text)
                    if n == 0:
                        raise self.error("division by zero", t)
                    scale /= n
                elif t.kind == "ident" and t.text in self.spec.atoms:
                    self.take()
                    den[t.text] += self.integer() if self.accept("^") else 1
                else:
                    raise self.error("only integers and scalar atoms may divide", t)
            else:
                break
        counts: Counter = Counter()
        for _, labels in parts:
            counts.update(labels)
        for lab, n in counts.items():
            if n > 2:
                raise self.error(f"index {lab!r} appears {n} times in one term", start)
        out = parts[0][0]
        for e, _ in parts[1:]:
            out = out * e
        for name, m in den.items():
            if m < 1:
                raise self.error("denominator powers must be positive", start)
            out = out * self.spec.atoms[name].inverse(m)
        return out.scale(scale)

    def power(self) -> tuple[TensorExpr, list[str]]:
        t = self.tok
        e, labels = self.factor()
        if self.accept("^"):
            n = self.integer()
            if e.free:
                raise self.error("only scalars can be raised to a power", t)
            if n < 0:
                if t.kind == "ident" and t.text in self.spec.atoms:
                    return self.spec.atoms[t.text].inverse(-n), labels
                raise self.error("negative powers need a scalar atom", t)
            e = e**n
        return e, labels

    def factor(self) -> tuple[TensorExpr, list[str]]:
        t = self.tok
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e, sorted(e.free)
        if t.kind == "int":
            self.take()
            return const(int(t.text)), []
        if t.kind != "ident":
            raise self.error(f"expected a factor, found {t.text or 'end of input'!r}")
        self.take()
        name = t.text
        if name == "hbar":
            return ihbar(1).times_i(-1), []
        if name == "im":
            return const(1).times_i(1), []
        if name == "dim":
            return term(DIM), []
        primes = 0
        while self.accept("'"):
            primes += 1
        labels: list[str] = []
        if self.accept("["):
            while True:
                labels.append(self.expect_kind("ident", "an index").text)
                if not self.accept(","):
                    break
            self.expect("]")
        if name in self.spec.atoms and not labels and not primes:
            return self.spec.atoms[name].definition, []
        sym = self._symbol(name, t, primes, len(labels))
        try:
            return term(sym, *labels), labels
        except TensorError as exc:
            raise self.error(str(exc), t) from None

    def _symbol(self, name: str, t: Token, primes: int, nidx: int) -> Symbol:
        if name == "p":
            sym = P
        elif name == "delta":
            sym = DELTA
        elif name in self.symbols:
            sym = self.symbols[name]
        elif self.extra_unknowns is not None and name not in _RESERVED:
            sym = self.extra_unknowns.setdefault(name, param(name))
        else:
            raise self.error(f"undeclared symbol {name!r}", t)
        if primes and sym.kind != "radial":
            raise self.error(f"{name!r} is not a radial function", t)
        if sym.kind == "radial":
            if nidx:
                raise self.error(f"radial function {name!r} takes no indices", t)
            return radial(name, primes)
        if sym.kind == "function":
            return function(name, nidx)
        if nidx != sym.rank:
            raise self.error(f"{name} expects {sym.rank} indices, got {nidx}", t)
        return sym


def parse_model(text: str) -> ModelSpec:
    """Parse one model description."""
    return _Parser(text).model()


# rendering ----------------------------------------------------------------------


def _expr(e: TensorExpr | None) -> str:
    return render_expr(e) if e is not None else "0"


def render_model(spec: ModelSpec) -> str:
    """Model text that :func:`parse_model` turns back into an equal spec."""
    lines = [f'model "{spec.name}" {{']
    if spec.dim is not None:
        lines.append(f"  dim {spec.dim}")
    for s in spec.tensors.values():
        decl = f"  tensor {s.name} rank {s.rank}"
        if s.symmetric:
            decl += " symmetric"
        if s.grading != 1:
            decl += f" order {s.grading}"
        lines.append(decl)
    lines += [f"  radial {n}" for n in spec.radials]
    lines += [f"  function {n}" for n in spec.functions]
    lines += [f"  param {n}" for n in spec.params]
    for a in spec.atoms.values():
        lines.append(f"  scalaratom {a.name} = {_expr(a.definition)}")
    lines.append(f"  f = {_expr(spec.f)}")
    if spec.g is not None:
        lines.append(f"  g[i] = {_expr(spec.g)}")
    if spec.h is not None:
        lines.append(f"  h[i] = {_expr(spec.h)}")
    for ans in spec.ansatze.values():
        head = f'  ansatz "{ans.name}" {ans.kind}'
        if ans.kind == "explicit":
            lines.append(f"{head} [j] = {_expr(ans.log_derivative('j'))}")
        elif ans.kind == "power":
            body = " * ".join(f"{atom.name}^({_expr(e)})" for atom, e in ans.factors)
            lines.append(f"{head} {body}")
        else:
            names = " ".join(u.name for u in ans.unknowns)
            lines.append(f"{head} unknowns {names} : {_expr(ans.C.definition)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["DSLError", "parse_model", "render_model", "tokenize"]
