"""Exact index-labelled tensor polynomials in the momentum.

An expression is a finite sum of monomials.  Each monomial carries an exact
rational coefficient, a power of hbar, a power of the imaginary unit (folded
into {0, 1}), a multiset of factors and a multiset of denominator atoms.

Index labels are strings for free indices.  Dummy (summed) indices are
renumbered to small integers by :func:`canonical_monomial`, so two monomials
that differ only by factor order, dummy names, or slot order inside a
symmetric tensor share one key.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

__all__ = [
    "TensorError",
    "Symbol",
    "ScalarAtom",
    "TensorExpr",
    "P",
    "DELTA",
    "Q",
    "DIM",
    "tensor",
    "radial",
    "function",
    "param",
    "const",
    "term",
    "ihbar",
    "add",
    "mul",
    "derive",
    "canonicalize",
    "is_zero",
    "truncate",
    "substitute",
    "together",
    "pin_dim",
    "mixed_weight",
]


class TensorError(ValueError):
    """Ill-formed tensor expression or operation."""


_KIND_ORDER = {
    "param": 0,
    "radial": 1,
    "function": 2,
    "tensor": 3,
    "p": 4,
    "delta": 5,
    "q": 6,
}


@functools.total_ordering
@dataclass(frozen=True)
class Symbol:
    """A factor head.

    ``kind`` is one of ``tensor`` (constant background tensor), ``p``,
    ``delta``, ``q`` (auxiliary position operator), ``param`` (rank-0
    constant such as ``dim`` or an unknown), ``radial`` (abstract function of
    p.p, ``level`` counts derivatives with respect to p.p) and ``function``
    (abstract scalar function of p whose ``level``-th derivative tensor has
    rank ``level``).
    """

    name: str
    rank: int = 0
    symmetric: bool = False
    grading: int = 0
    kind: str = "tensor"
    level: int = 0

    def __post_init__(self):
        key = (_KIND_ORDER[self.kind], self.name, self.level, self.rank)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash((key, self.symmetric, self.grading)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def sort_key(self) -> tuple:
        return self._key

    def __lt__(self, other: Symbol) -> bool:
        return self.sort_key < other.sort_key

    @property
    def p_dependent(self) -> bool:
        return self.kind in ("p", "radial", "function")


P = Symbol("p", 1, kind="p")
DELTA = Symbol("delta", 2, symmetric=True, kind="delta")
Q = Symbol("q", 1, kind="q")
DIM = Symbol("dim", kind="param")


def tensor(name: str, rank: int, symmetric: bool = False, grading: int = 1) -> Symbol:
    if rank < 1:
        raise TensorError(f"tensor {name!r} needs rank >= 1")
    return Symbol(name, rank, symmetric and rank > 1, grading, "tensor")


def radial(name: str, level: int = 0) -> Symbol:
    return Symbol(name, 0, False, 0, "radial", level)


def function(name: str, level: int = 0) -> Symbol:
    return Symbol(name, level, level > 1, 0, "function", level)


def param(name: str) -> Symbol:
    return Symbol(name, 0, False, 0, "param")


# Raw monomial: (coeff, hbar, ipow, factors, denominators).  Factors are
# (Symbol, labels) pairs, denominators (ScalarAtom, power) pairs with power>0.
Factor = tuple  # (Symbol, tuple[label, ...])


def _fold(coeff: Fraction, ipow: int) -> tuple[Fraction, int]:
    ipow %= 4
    if ipow >= 2:
        return -coeff, ipow - 2
    return coeff, ipow


def _eliminate_deltas(factors: list[Factor]) -> tuple[list[Factor], int]:
    """Contract delta factors carrying a dummy index; returns dim power."""
    factors = list(factors)
    dims = 0
    changed = True
    while changed:
        changed = False
        counts = Counter(lab for _, labs in factors for lab in labs)
        for k, (sym, labs) in enumerate(factors):
            if sym.kind != "delta":
                continue
            a, b = labs
            if a == b:
                factors.pop(k)
                dims += 1
                changed = True
                break
            if counts[a] == 2 or counts[b] == 2:
                gone, keep = (a, b) if counts[a] == 2 else (b, a)
                factors.pop(k)
                factors = [
                    (s, tuple(keep if lab == gone else lab for lab in ls)) for s, ls in factors
                ]
                changed = True
                break
    return factors, dims


def _enc_key(enc: tuple) -> tuple:
    return tuple(
        (sym.sort_key, tuple((0, x) if isinstance(x, str) else (1, x) for x in labs))
        for sym, labs in enc
    )


def _components(n: int, partner: list) -> list[list[int]]:
    """Connected components of the contraction graph (free slots don't link)."""
    root = list(range(n))

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for f, parts in enumerate(partner):
        for part in parts:
            if part[0] != "free":
                root[find(f)] = find(part[0])
    groups: dict = {}
    for f in range(n):
        groups.setdefault(find(f), []).append(f)
    return list(groups.values())


def _canonical_tensor_part(factors: list[Factor]) -> tuple:
    """Canonical ordering and dummy numbering of rank>=1 factors.

    Colour refinement on the contraction graph, with individualisation of tied
    factors and the lexicographically least leaf encoding kept.
    """
    n = len(factors)
    if n == 0:
        return ()
    where: dict = {}
    for f, (_, labs) in enumerate(factors):
        for s, lab in enumerate(labs):
            where.setdefault(lab, []).append((f, s))
    partner: list[list] = [[None] * len(labs) for _, labs in factors]
    for lab, occ in where.items():
        if len(occ) == 1:
            f, s = occ[0]
            if not isinstance(lab, str):
                raise TensorError(f"dangling internal index {lab!r}")
            partner[f][s] = ("free", lab)
        elif len(occ) == 2:
            (f, s), (g, t) = occ
            partner[f][s] = (g, t)
            partner[g][t] = (f, s)
        else:
            raise TensorError(f"index {lab!r} occurs {len(occ)} times")

    parts = _components(n, partner)
    if len(parts) > 1:
        # Disconnected pieces are canonicalised separately and sorted, which
        # avoids branching over interchangeable copies of the same piece.
        pieces = sorted(
            (_canonical_piece(_normalise([factors[f] for f in part])) for part in parts),
            key=_enc_key,
        )
        out, offset = [], 0
        for piece in pieces:
            width = 0
            for sym, labs in piece:
                shifted = []
                for lab in labs:
                    if isinstance(lab, int):
                        width = max(width, lab + 1)
                        lab += offset
                    shifted.append(lab)
                out.append((sym, tuple(shifted)))
            offset += width
        return tuple(out)

    def cls(f: int, s: int) -> int:
        return 0 if factors[f][0].symmetric else s

    def rerank(sigs: list) -> list[int]:
        table = {sg: k for k, sg in enumerate(sorted(set(sigs)))}
        return [table[sg] for sg in sigs]

    def refine(colors: list[int]) -> list[int]:
        while True:
            sigs = []
            for f in range(n):
                items = []
                for s, part in enumerate(partner[f]):
                    if part[0] == "free":
                        items.append((cls(f, s), 0, part[1]))
                    else:
                        g, t = part
                        items.append((cls(f, s), 1, colors[g], cls(g, t), g == f))
                items.sort()
                sigs.append((colors[f], tuple(items)))
            new = rerank(sigs)
            if len(set(new)) == len(set(colors)):
                return new
            colors = new

    def encode(order: list[int]) -> tuple:
        pos = {f: k for k, f in enumerate(order)}
        num: dict = {}
        out = []
        for f in order:
            sym, labs = factors[f]
            slots = list(range(len(labs)))
            if sym.symmetric:

                def key(s: int) -> tuple:
                    part = partner[f][s]
                    if part[0] == "free":
                        return (0, part[1])
                    if labs[s] in num:
                        return (1, num[labs[s]])
                    g, t = part
                    return (2, pos[g], cls(g, t))

                slots.sort(key=key)
            enc = []
            for s in slots:
                lab = labs[s]
                if partner[f][s][0] == "free":
                    enc.append(lab)
                else:
                    if lab not in num:
                        num[lab] = len(num)
                    enc.append(num[lab])
            out.append((sym, tuple(enc)))
        return tuple(out)

    def search(colors: list[int]) -> tuple:
        colors = refine(colors)
        counts = Counter(colors)
        tied = [c for c, k in counts.items() if k > 1]
        if not tied:
            return encode(sorted(range(n), key=colors.__getitem__))
        cell = min(tied)
        best = None
        best_key = None
        for f in range(n):
            if colors[f] != cell:
                continue
            trial = rerank([(c, 0 if g == f else 1) for g, c in enumerate(colors)])
            enc = search(trial)
            k = _enc_key(enc)
            if best is None or k < best_key:
                best, best_key = enc, k
        return best

    return search(rerank([sym.sort_key for sym, _ in factors]))


def _normalise(factors) -> tuple:
    """Factors sorted by symbol with dummies renamed in order of appearance."""
    counts = Counter(lab for _, labs in factors for lab in labs)
    ren: dict = {}
    out = []
    for sym, labs in sorted(factors, key=lambda fac: fac[0].sort_key):
        new = []
        for lab in labs:
            if counts[lab] == 1 and isinstance(lab, str):
                new.append(lab)
            else:
                new.append(ren.setdefault(lab, -1 - len(ren)))
        out.append((sym, tuple(new)))
    return tuple(out)


@functools.lru_cache(maxsize=200_000)
def _canonical_piece(factors: tuple) -> tuple:
    return _canonical_tensor_part(list(factors))


def _canonical_factors(factors: tuple) -> tuple:
    """Canonical factor tuple; delta traces become powers of dim."""
    # The result does not depend on dummy names or factor order, so normalise
    # both cheaply first; this lets the cache hit across freshly named dummies.
    return _canonical_factors_cached(_normalise(factors))


@functools.lru_cache(maxsize=200_000)
def _canonical_factors_cached(factors: tuple) -> tuple:
    flist, dims = _eliminate_deltas(list(factors))
    scalars = sorted(
        ((sym, ()) for sym, labs in flist if sym.rank == 0),
        key=lambda fac: fac[0].sort_key,
    )
    scalars.extend([(DIM, ())] * dims)
    scalars.sort(key=lambda fac: fac[0].sort_key)
    tensors = [(sym, tuple(labs)) for sym, labs in flist if sym.rank > 0]
    for sym, labs in tensors:
        if len(labs) != sym.rank:
            raise TensorError(f"{sym.name} expects {sym.rank} indices, got {len(labs)}")
    return tuple(scalars) + _canonical_tensor_part(tensors)


def canonical_monomial(coeff, hbar: int, ipow: int, factors: Iterable[Factor], denoms) -> tuple:
    """Return ``(key, coeff)`` for a raw monomial."""
    coeff, ipow = _fold(Fraction(coeff), ipow)
    facs = _canonical_factors(tuple((sym, tuple(labs)) for sym, labs in factors))
    den: dict = {}
    for atom, m in (denoms.items() if isinstance(denoms, Mapping) else denoms):
        if m:
            den[atom] = den.get(atom, 0) + m
    dkey = tuple(sorted(((a, m) for a, m in den.items() if m), key=lambda am: am[0]))
    return (hbar, ipow, facs, dkey), coeff


def _free_of_factors(facs: tuple) -> frozenset:
    counts = Counter(lab for _, labs in facs for lab in labs)
    return frozenset(lab for lab, c in counts.items() if c == 1)


class TensorExpr:
    """Immutable canonical sum of monomials with a fixed free-index set."""

    __slots__ = ("_terms", "free", "_hash")

    def __init__(self, terms: Mapping | None = None, free: Iterable[str] = ()):
        self._terms: dict = {k: v for k, v in (terms or {}).items() if v}
        self.free: frozenset = frozenset(free)
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def from_raw(cls, monomials: Iterable[tuple], free: Iterable[str] | None = None) -> TensorExpr:
        terms: dict = {}
        free_set = None if free is None else frozenset(free)
        for coeff, hbar, ipow, factors, denoms in monomials:
            if not coeff:
                continue
            key, c = canonical_monomial(coeff, hbar, ipow, factors, denoms)
            fr = _free_of_factors(key[2])
            if free_set is None:
                free_set = fr
            elif fr != free_set:
                raise TensorError(
                    f"free-index mismatch: {sorted(fr)} vs {sorted(free_set)}"
                )
            terms[key] = terms.get(key, 0) + c
        return cls(terms, free_set or ())

    # basic protocol ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, TensorExpr):
            return NotImplemented
        return self.free == other.free and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.free, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .render import render_expr

        return f"TensorExpr({render_expr(self)!r})"

    def __str__(self) -> str:
        from .render import render_expr

        return render_expr(self)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> TensorExpr:
        return add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self) -> TensorExpr:
        return TensorExpr({k: -v for k, v in self._terms.items()}, self.free)

    def __sub__(self, other) -> TensorExpr:
        return add(self, -_lift(other))

    def __rsub__(self, other) -> TensorExpr:
        return add(_lift(other), -self)

    # ``*`` follows the Einstein convention: a shared free name is summed.
    def __mul__(self, other) -> TensorExpr:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other, contract=True)

    def __rmul__(self, other) -> TensorExpr:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(other, self, contract=True)

    def __pow__(self, n: int) -> TensorExpr:
        if n < 0:
            raise TensorError("negative powers need a registered ScalarAtom")
        if self.free:
            raise TensorError("powers of an expression with free indices")
        out = const(1)
        for _ in range(n):
            out = mul(out, self)
        return out

    def scale(self, c) -> TensorExpr:
        c = Fraction(c)
        if not c:
            return TensorExpr({}, self.free)
        return TensorExpr({k: v * c for k, v in self._terms.items()}, self.free)

    def times_i(self, n: int = 1) -> TensorExpr:
        terms: dict = {}
        for (h, ip, facs, den), c in self._terms.items():
            c2, ip2 = _fold(c, ip + n)
            terms[(h, ip2, facs, den)] = c2
        return TensorExpr(terms, self.free)

    def times_hbar(self, n: int = 1) -> TensorExpr:
        return TensorExpr(
            {(h + n, ip, facs, den): c for (h, ip, facs, den), c in self._terms.items()},
            self.free,
        )

    def derive(self, idx: str) -> TensorExpr:
        return derive(self, idx)

    def rename(self, mapping: Mapping[str, str]) -> TensorExpr:
        """Rename free indices."""
        if not mapping:
            return self
        targets = set(mapping.values())
        clash = (targets & self.free) - set(mapping)
        if clash:
            raise TensorError(f"renaming onto existing free indices {sorted(clash)}")
        raw = []
        for (h, ip, facs, den), c in self._terms.items():
            facs2 = [
                (sym, tuple(mapping.get(lab, lab) if isinstance(lab, str) else lab for lab in labs))
                for sym, labs in facs
            ]
            raw.append((c, h, ip, facs2, den))
        free = frozenset(mapping.get(f, f) for f in self.free)
        return TensorExpr.from_raw(raw, free)

    # inspection -------------------------------------------------------
    def symbols(self) -> set[Symbol]:
        out = set()
        for (_, _, facs, den), _ in self._terms.items():
            out.update(sym for sym, _ in facs)
            for atom, _ in den:
                out.update(atom.definition.symbols())
        return out

    def atoms(self) -> set:
        out = set()
        for (_, _, _, den), _ in self._terms.items():
            out.update(a for a, _ in den)
        return out

    def has_denominators(self) -> bool:
        return any(key[3] for key in self._terms)

    def is_zero(self) -> bool:
        return is_zero(self)

    def equals(self, other) -> bool:
        return is_zero(self - _lift(other))

    def constant_term(self) -> Fraction:
        """Coefficient of the bare number 1 (no factors, no hbar, no i)."""
        return self._terms.get((0, 0, (), ()), Fraction(0))

    def sorted_items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: monomial_sort_key(kv[0]))


def monomial_sort_key(key: tuple) -> tuple:
    h, ip, facs, den = key
    return (
        sum(1 for _ in facs),
        tuple(
            (sym.sort_key, tuple((0, x) if isinstance(x, str) else (1, x) for x in labs))
            for sym, labs in facs
        ),
        h,
        ip,
        tuple((a.name, m) for a, m in den),
    )


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class ScalarAtom:
    """A named scalar expression allowed in denominators.

    The definition has no free indices, no denominators and a nonzero part
    free of explicit momenta, so it is invertible as a formal series.
    """

    name: str
    definition: TensorExpr = field(compare=True)

    def __post_init__(self):
        d = self.definition
        if d.free:
            raise TensorError(f"scalar atom {self.name!r} has free indices")
        if d.has_denominators():
            raise TensorError(f"scalar atom {self.name!r} has denominators")
        if not any(
            not any(sym.kind == "p" for sym, _ in facs) for (_, _, facs, _), _ in d.items()
        ):
            raise TensorError(f"scalar atom {self.name!r} vanishes at p=0")

    def __lt__(self, other: ScalarAtom) -> bool:
        return (self.name, str(self.definition)) < (other.name, str(other.definition))

    def __hash__(self) -> int:
        return hash((self.name, self.definition))

    def inverse(self, power: int = 1) -> TensorExpr:
        """The expression ``1/atom**power``."""
        return TensorExpr.from_raw([(Fraction(1), 0, 0, (), {self: power})], ())


# constructors ---------------------------------------------------------------


def _lift(x) -> TensorExpr:
    if isinstance(x, TensorExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a tensor expression")


def const(c) -> TensorExpr:
    c = Fraction(c)
    return TensorExpr({(0, 0, (), ()): c} if c else {}, ())


def term(sym: Symbol, *labels: str, coeff=1) -> TensorExpr:
    """A single factor, e.g. ``term(P, "i")`` for p_i."""
    if len(labels) != sym.rank:
        raise TensorError(f"{sym.name} expects {sym.rank} indices, got {len(labels)}")
    return TensorExpr.from_raw([(Fraction(coeff), 0, 0, [(sym, tuple(labels))], ())])


def ihbar(n: int = 1) -> TensorExpr:
    """(i hbar)**n."""
    c, ip = _fold(Fraction(1), n)
    return TensorExpr({(n, ip, (), ()): c}, ())


# operations -----------------------------------------------------------------


def add(a: TensorExpr, b: TensorExpr) -> TensorExpr:
    if a.free != b.free:
        if not a:
            return TensorExpr(b.terms, b.free)
        if not b:
            return TensorExpr(a.terms, a.free)
        raise TensorError(f"free-index mismatch: {sorted(a.free)} vs {sorted(b.free)}")
    terms = dict(a.terms)
    for k, v in b.items():
        terms[k] = terms.get(k, 0) + v
    return TensorExpr(terms, a.free)


def _shift_dummies(facs: tuple, tag: str) -> list:
    return [
        (sym, tuple(f"~{tag}{lab}" if isinstance(lab, int) else lab for lab in labs))
        for sym, labs in facs
    ]


def _mul_monomials(ka: tuple, kb: tuple, contract: bool = False) -> tuple:
    ha, ia, fa, da = ka
    hb, ib, fb, db = kb
    den = dict(da)
    for atom, m in db:
        den[atom] = den.get(atom, 0) + m
    facs = _shift_dummies(fa, "a") + _shift_dummies(fb, "b")
    return ha + hb, ia + ib, facs, den


def mul(a: TensorExpr, b: TensorExpr, contract: bool = False) -> TensorExpr:
    """Product.  Shared free names are an error unless ``contract`` is set,
    in which case they are summed over."""
    a, b = _lift(a), _lift(b)
    shared = a.free & b.free
    if shared and not contract:
        raise TensorError(f"duplicate free index {sorted(shared)} across operands")
    free = (a.free | b.free) - shared
    if not a or not b:
        return TensorExpr({}, free)
    terms: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            h, ip, facs, den = _mul_monomials(ka, kb)
            key, c = canonical_monomial(ca * cb, h, ip, facs, den)
            terms[key] = terms.get(key, 0) + c
    return TensorExpr(terms, free)


@functools.lru_cache(maxsize=4096)
def _atom_gradient(atom: ScalarAtom) -> TensorExpr:
    return derive(atom.definition, "~g")


def _monomial_expr(key: tuple, coeff) -> TensorExpr:
    return TensorExpr({key: Fraction(coeff)}, _free_of_factors(key[2]))


def derive(a: TensorExpr, idx: str) -> TensorExpr:
    """Partial derivative with respect to p_idx."""
    if idx in a.free:
        raise TensorError(f"derivative index {idx!r} already free")
    raw = []
    extra = []
    for key, c in a.items():
        h, ip, facs, den = key
        for k, (sym, labs) in enumerate(facs):
            rest = list(facs[:k]) + list(facs[k + 1 :])
            if sym.kind == "p":
                raw.append((c, h, ip, rest + [(DELTA, (labs[0], idx))], den))
            elif sym.kind == "radial":
                up = radial(sym.name, sym.level + 1)
                raw.append((2 * c, h, ip, rest + [(up, ()), (P, (idx,))], den))
            elif sym.kind == "function":
                up = function(sym.name, sym.level + 1)
                raw.append((c, h, ip, rest + [(up, labs + (idx,))], den))
        for atom, m in den:
            den2 = dict(den)
            den2[atom] = m + 1
            mono = TensorExpr.from_raw([(-m * c, h, ip, facs, den2)])
            extra.append(mul(mono, _atom_gradient(atom).rename({"~g": idx})))
    free = a.free | {idx}
    out = TensorExpr.from_raw(raw, free) if raw else TensorExpr({}, free)
    for e in extra:
        out = add(out, e)
    return out


def canonicalize(a: TensorExpr) -> TensorExpr:
    """Re-derive the canonical form from scratch (expressions are already
    canonical on construction; this re-runs the normaliser on every key)."""
    raw = [(c, h, ip, facs, den) for (h, ip, facs, den), c in a.items()]
    return TensorExpr.from_raw(raw, a.free) if raw else TensorExpr({}, a.free)


@functools.lru_cache(maxsize=4096)
def _atom_power(atom: ScalarAtom, n: int) -> TensorExpr:
    if n == 0:
        return const(1)
    if n == 1:
        return atom.definition
    half = _atom_power(atom, n // 2)
    sq = mul(half, half)
    return mul(sq, atom.definition) if n % 2 else sq


def together(a: TensorExpr) -> tuple[TensorExpr, dict]:
    """Bring ``a`` over its least common denominator.

    Returns ``(numerator, denominator)`` with the numerator free of
    denominators and the denominator a mapping atom -> power.
    """
    lcd: dict = {}
    for (_, _, _, den) in a.terms:
        for atom, m in den:
            lcd[atom] = max(lcd.get(atom, 0), m)
    if not lcd:
        return a, {}
    num = TensorExpr({}, a.free)
    for (h, ip, facs, den), c in a.items():
        mono = TensorExpr.from_raw([(c, h, ip, facs, ())], a.free)
        have = dict(den)
        for atom, m in lcd.items():
            k = m - have.get(atom, 0)
            if k:
                mono = mul(mono, _atom_power(atom, k))
        num = add(num, mono)
    return num, lcd


def is_zero(a: TensorExpr) -> bool:
    """Exact zero test: clear denominators and compare with the empty sum.

    Atoms are formal series with nonzero constant term, so multiplying by
    them cannot turn a nonzero expression into zero.
    """
    if not a:
        return True
    num, _ = together(a)
    return not num


def pin_dim(a: TensorExpr, n: int | None) -> TensorExpr:
    """Replace the symbolic dimension by the integer ``n`` (None: keep)."""
    if n is None:
        return a
    return substitute(a, DIM, const(n))


# truncation -----------------------------------------------------------------


def mixed_weight(sym: Symbol) -> int:
    """Grading by tensor rank for anisotropies (vectors 1, rank-2 tensors 2)."""
    return sym.rank if sym.kind == "tensor" and sym.grading > 0 else 0


def _default_weight(sym: Symbol) -> int:
    return sym.grading if sym.kind == "tensor" else 0


def _grade(facs: tuple, weight: Callable[[Symbol], int]) -> int:
    return sum(weight(sym) for sym, _ in facs)


def _split_by_grade(e: TensorExpr, weight) -> tuple[TensorExpr, TensorExpr]:
    zero, pos = {}, {}
    for key, c in e.items():
        (pos if _grade(key[2], weight) > 0 else zero)[key] = c
    return TensorExpr(zero, e.free), TensorExpr(pos, e.free)


def _min_grade(e: TensorExpr, weight) -> int:
    return min(_grade(key[2], weight) for key in e.terms)


def truncate(a: TensorExpr, order: int, weight: Callable[[Symbol], int] | None = None) -> TensorExpr:
    """Expand denominators as formal series in the grading and drop every
    monomial of grading above ``order``."""
    if order < 0:
        raise TensorError("truncation order must be non-negative")
    weight = weight or _default_weight
    out = TensorExpr({}, a.free)
    for (h, ip, facs, den), c in a.items():
        g0 = _grade(facs, weight)
        if g0 > order:
            continue
        pieces = [TensorExpr.from_raw([(c, h, ip, facs, ())], a.free)]
        for atom, m in den:
            pieces.append(_expand_inverse(atom, m, order - g0, weight))
        prod = pieces[0]
        for piece in pieces[1:]:
            prod = _truncated_mul(prod, piece, order, weight)
        out = add(out, prod)
    return _drop_above(out, order, weight)


def _drop_above(e: TensorExpr, order: int, weight) -> TensorExpr:
    return TensorExpr(
        {k: c for k, c in e.items() if _grade(k[2], weight) <= order}, e.free
    )


def _truncated_mul(a: TensorExpr, b: TensorExpr, order: int, weight) -> TensorExpr:
    return _drop_above(mul(_drop_above(a, order, weight), _drop_above(b, order, weight)), order, weight)


def _expand_inverse(atom: ScalarAtom, m: int, budget: int, weight) -> TensorExpr:
    """Series of atom**-m up to grading ``budget``."""
    s0, u = _split_by_grade(atom.definition, weight)
    if not u:
        return atom.inverse(m)
    if len(s0) == 1 and (0, 0, (), ()) in s0.terms:
        c0 = s0.terms[(0, 0, (), ())]
        base = None
    else:
        c0 = Fraction(1)
        base = ScalarAtom(atom.name + "_0", s0)
    step = _min_grade(u, weight)
    kmax = budget // step
    out = TensorExpr({}, ())
    upow = const(1)
    for k in range(kmax + 1):
        coef = Fraction((-1) ** k * comb(m + k - 1, k)) / c0 ** (m + k)
        piece = upow.scale(coef)
        if base is not None:
            piece = mul(piece, base.inverse(m + k))
        out = add(out, piece)
        upow = _truncated_mul(upow, u, budget, weight)
    return _drop_above(out, budget, weight)


# substitution ---------------------------------------------------------------


def substitute(
    a: TensorExpr, sym: Symbol, by: TensorExpr, slots: tuple[str, ...] | None = None
) -> TensorExpr:
    """Replace every occurrence of ``sym``.

    ``slots`` lists the free indices of ``by`` wired, in order, to the slots
    of ``sym`` (default: sorted free indices of ``by``).
    """
    by = _lift(by)
    slots = tuple(sorted(by.free)) if slots is None else tuple(slots)
    if len(slots) != sym.rank or set(slots) != set(by.free):
        raise TensorError(
            f"substitution for {sym.name} needs {sym.rank} free indices, got {sorted(by.free)}"
        )
    tmp = tuple(f"~s{k}" for k in range(sym.rank))
    by_tmp = by.rename(dict(zip(slots, tmp))) if slots else by
    out = TensorExpr({}, a.free)
    for (h, ip, facs, den), c in a.items():
        keep = [(s, labs) for s, labs in facs if s != sym]
        hits = [labs for s, labs in facs if s == sym]
        new_den: dict = {}
        for atom, m in den:
            if sym in atom.definition.symbols():
                atom = ScalarAtom(atom.name, substitute(atom.definition, sym, by, slots))
            new_den[atom] = new_den.get(atom, 0) + m
        if not hits and new_den == dict(den):
            out = add(out, _monomial_expr((h, ip, facs, den), c))
            continue
        # Free labels of the kept part stay; dummies get fresh names.
        kept = TensorExpr.from_raw(
            [(c, h, ip, _shift_dummies(tuple(keep), "k") + _hit_placeholders(hits), new_den)]
        )
        prod = kept
        for n, labs in enumerate(hits):
            names = tuple(f"~h{n}_{j}" for j in range(len(labs)))
            prod = mul(prod, by_tmp.rename(dict(zip(tmp, names))) if tmp else by_tmp, contract=True)
        out = add(out, prod)
    return out


def _hit_placeholders(hits: list) -> list:
    """Delta factors tying each replaced slot to the original index label."""
    out = []
    for n, labs in enumerate(hits):
        for j, lab in enumerate(labs):
            lab = f"~k{lab}" if isinstance(lab, int) else lab
            out.append((DELTA, (lab, f"~h{n}_{j}")))
    return out
