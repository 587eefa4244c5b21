"""Independent numeric check of symbolic results.

Anisotropy tensors get random rational components, radial atoms become
polynomials in s = p.p, general functions become random polynomials in
p1, p2, p3, and hbar = 1.  Operators act on polynomial test functions as
genuine differential operators (q_a -> i d/dp_a).

Two exact arithmetic backends share one evaluator.  :class:`CFun` holds
rational functions of p (used by :func:`apply`); :class:`Jet` holds truncated
Taylor expansions around a sample point, which is all a pointwise comparison
of differential operators needs and is much cheaper.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import gmpy2
import numpy as np
from sympy import QQ
from sympy.polys.fields import field as rational_field

from .model import ModelSpec
from .operator_algebra import OperatorExpr, commutator, q_degree
from .tensor_core import DIM, ScalarAtom, Symbol, TensorError, TensorExpr

_FIELD, *_GENS = rational_field("p1,p2,p3", QQ)
_VARS = tuple(_GENS)
_BIG = 10**9


def _q(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


# Gaussian rationals -------------------------------------------------------------


class GQ:
    """Gaussian rational re + i im with gmpy2 rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = gmpy2.mpq(re)
        self.im = gmpy2.mpq(im)

    def __add__(self, o: GQ) -> GQ:
        return _gq(self.re + o.re, self.im + o.im)

    def __sub__(self, o: GQ) -> GQ:
        return _gq(self.re - o.re, self.im - o.im)

    def __neg__(self) -> GQ:
        return _gq(-self.re, -self.im)

    def __mul__(self, o: GQ) -> GQ:
        if not self.im and not o.im:
            return _gq(self.re * o.re, _ZERO)
        return _gq(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self) -> GQ:
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by zero in jet arithmetic")
        return _gq(self.re / n, -self.im / n)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, o) -> bool:
        return isinstance(o, GQ) and self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return _frac(self.re), _frac(self.im)

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


_ZERO = gmpy2.mpq(0)


def _gq(re, im) -> GQ:
    out = GQ.__new__(GQ)
    out.re = re
    out.im = im
    return out


_ONE = GQ(1)


# value types ------------------------------------------------------------------


class CFun:
    """Complex rational function re + i im of p, with real field parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = _FIELD(0) if re is None else re
        self.im = _FIELD(0) if im is None else im

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return CFun(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        return CFun(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return CFun(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, int):
            return CFun(self.re * other, self.im * other)
        return CFun(
            self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re
        )

    __rmul__ = __mul__

    def times_i(self, n: int = 1) -> CFun:
        out = self
        for _ in range(n % 4):
            out = CFun(-out.im, out.re)
        return out

    def diff(self, k: int) -> CFun:
        v = _VARS[k]
        return CFun(self.re.diff(v), self.im.diff(v))

    def inverse(self) -> CFun:
        if self.im:
            n = self.re * self.re + self.im * self.im
            return CFun(self.re / n, -self.im / n)
        return CFun(1 / self.re)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def at(self, point) -> tuple[Fraction, Fraction]:
        return (_eval(self.re, point), _eval(self.im, point))

    def __repr__(self):
        return f"CFun({self.re}, {self.im})"


def _eval(fe, point) -> Fraction:
    args = [_q(x) for x in point]
    den = fe.denom(*args)
    if not den:
        raise ZeroDivisionError("denominator vanishes at sample point")
    return _frac(fe.numer(*args)) / _frac(den)


class Jet:
    """Taylor polynomial in u = p - p0, exact to total degree ``order``."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs: dict, order: int):
        self.c = coeffs  # exponent tuple -> GQ
        self.order = order

    @staticmethod
    def const(v: GQ) -> Jet:
        return Jet({(0, 0, 0): v} if v else {}, _BIG)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        order = min(self.order, other.order)
        out = {e: v for e, v in self.c.items() if sum(e) <= order}
        for e, v in other.c.items():
            if sum(e) > order:
                continue
            w = out.get(e)
            w = v if w is None else w + v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
        return Jet(out, order)

    __radd__ = __add__

    def __neg__(self):
        return Jet({e: -v for e, v in self.c.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Jet({}, self.order)
            other = Jet.const(GQ(other))
        order = min(self.order, other.order)
        out: dict = {}
        for ea, va in self.c.items():
            da = sum(ea)
            if da > order:
                continue
            for eb, vb in other.c.items():
                if da + sum(eb) > order:
                    continue
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                w = out.get(e)
                out[e] = va * vb if w is None else w + va * vb
        return Jet({e: v for e, v in out.items() if v}, order)

    __rmul__ = __mul__

    def times_i(self, n: int = 1) -> Jet:
        n %= 4
        if not n:
            return self
        unit = [None, GQ(0, 1), GQ(-1), GQ(0, -1)][n]
        return Jet({e: v * unit for e, v in self.c.items()}, self.order)

    def diff(self, k: int) -> Jet:
        out = {}
        for e, v in self.c.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = v * GQ(e[k])
        return Jet(out, self.order - 1 if self.order < _BIG else _BIG)

    def inverse(self) -> Jet:
        c0 = self.c.get((0, 0, 0))
        if c0 is None or not c0:
            raise ZeroDivisionError("denominator vanishes at sample point")
        inv0 = c0.inverse()
        r = Jet({e: v * inv0 for e, v in self.c.items() if e != (0, 0, 0)}, self.order)
        if not r.c:
            return Jet({(0, 0, 0): inv0}, self.order)
        out = Jet.const(_ONE)
        step = Jet.const(_ONE)
        for _ in range(self.order):
            step = step * (-r)
            if not step.c:
                break
            out = out + step
        return out * Jet.const(inv0)

    def value(self) -> GQ:
        return self.c.get((0, 0, 0), GQ())


class _FieldBackend:
    key = "field"

    def const(self, c) -> CFun:
        return CFun(_FIELD(_q(c)))

    def var(self, a: int) -> CFun:
        return CFun(_FIELD(_VARS[a]))


class _JetBackend:
    def __init__(self, point, order: int):
        self.point = tuple(Fraction(x) for x in point)
        self.order = order
        self.key = ("jet", self.point, order)

    def const(self, c) -> Jet:
        c = Fraction(c)
        return Jet.const(GQ(gmpy2.mpq(c.numerator, c.denominator)))

    def var(self, a: int) -> Jet:
        e = [0, 0, 0]
        e[a] = 1
        coeffs = {tuple(e): _ONE} if self.order > 0 else {}
        if self.point[a]:
            coeffs[(0, 0, 0)] = GQ(gmpy2.mpq(self.point[a].numerator, self.point[a].denominator))
        return Jet(coeffs, self.order)


FIELD_BACKEND = _FieldBackend()


def _rand_rational(rng: random.Random) -> Fraction:
    den = rng.randint(1, 16)
    return Fraction(rng.randint(-den, den), den)


def _poly_value(terms, backend):
    """sum c * prod p_a^e_a for terms [(c, (e1, e2, e3))]."""
    out = backend.const(0)
    for c, exps in terms:
        mono = backend.const(c)
        for a, e in enumerate(exps):
            for _ in range(e):
                mono = mono * backend.var(a)
        out = out + mono
    return out


def _poly_diff(terms, a: int):
    out = []
    for c, exps in terms:
        if exps[a]:
            e = list(exps)
            e[a] -= 1
            out.append((c * exps[a], tuple(e)))
    return out


@dataclass
class NumericInstance:
    seed: int
    dim: int = 3
    tensors: dict = field(default_factory=dict)  # name -> ndarray of Fraction
    radials: dict = field(default_factory=dict)  # name -> s-polynomial coefficients
    functions: dict = field(default_factory=dict)  # name -> [(coeff, exponents)]
    params: dict = field(default_factory=dict)  # name -> Fraction
    _cache: dict = field(default_factory=dict, repr=False)

    def param_value(self, sym: Symbol) -> Fraction:
        if sym == DIM:
            return Fraction(self.dim)
        if sym.name not in self.params:
            rng = random.Random(f"{self.seed}:param:{sym.name}")
            self.params[sym.name] = _rand_rational(rng)
        return self.params[sym.name]

    def tensor_components(self, sym: Symbol) -> np.ndarray:
        if sym.name not in self.tensors:
            rng = random.Random(f"{self.seed}:tensor:{sym.name}")
            arr = np.empty((self.dim,) * sym.rank, dtype=object)
            for idx in np.ndindex(arr.shape):
                if sym.symmetric and tuple(sorted(idx)) != idx:
                    continue
                arr[idx] = _rand_rational(rng)
            if sym.symmetric:
                for idx in np.ndindex(arr.shape):
                    arr[idx] = arr[tuple(sorted(idx))]
            self.tensors[sym.name] = arr
        return self.tensors[sym.name]

    def radial_coefficients(self, name: str) -> list:
        if name not in self.radials:
            rng = random.Random(f"{self.seed}:radial:{name}")
            coeffs = [_rand_rational(rng) for _ in range(3)]
            if not coeffs[0]:
                coeffs[0] = Fraction(1)
            self.radials[name] = coeffs
        return self.radials[name]

    def function_terms(self, name: str) -> list:
        if name not in self.functions:
            rng = random.Random(f"{self.seed}:function:{name}")
            terms = [(Fraction(rng.randint(1, 4), rng.randint(1, 4)), (0, 0, 0))]
            for _ in range(4):
                e = [0, 0, 0]
                for _ in range(rng.randint(1, 3)):
                    e[rng.randrange(self.dim)] += 1
                terms.append((_rand_rational(rng), tuple(e)))
            self.functions[name] = terms
        return self.functions[name]

    def factor_array(self, sym: Symbol, backend) -> np.ndarray:
        """Component array (object dtype) of a factor head in a backend."""
        key = (backend.key, "f", sym)
        if key in self._cache:
            return self._cache[key]
        d = self.dim
        if sym.kind == "p":
            arr = np.empty((d,), dtype=object)
            for a in range(d):
                arr[a] = backend.var(a)
        elif sym.kind == "delta":
            arr = np.empty((d, d), dtype=object)
            for a, b in itertools.product(range(d), repeat=2):
                arr[a, b] = backend.const(1 if a == b else 0)
        elif sym.kind == "tensor":
            comps = self.tensor_components(sym)
            arr = np.empty(comps.shape, dtype=object)
            for idx in np.ndindex(comps.shape):
                arr[idx] = backend.const(comps[idx])
        elif sym.kind == "radial":
            coeffs = list(self.radial_coefficients(sym.name))
            for _ in range(sym.level):
                coeffs = [k * c for k, c in enumerate(coeffs)][1:]
            s = backend.const(0)
            for a in range(d):
                s = s + backend.var(a) * backend.var(a)
            val = backend.const(0)
            power = backend.const(1)
            for c in coeffs:
                val = val + power * backend.const(c)
                power = power * s
            arr = _box(val)
        elif sym.kind == "function":
            base = self.function_terms(sym.name)
            arr = np.empty((d,) * sym.level, dtype=object)
            for idx in np.ndindex(arr.shape):
                terms = base
                for k in idx:
                    terms = _poly_diff(terms, k)
                arr[idx] = _poly_value(terms, backend)
        elif sym.kind == "param":
            arr = _box(backend.const(self.param_value(sym)))
        else:
            raise TensorError(f"cannot instantiate factor kind {sym.kind!r}")
        self._cache[key] = arr
        return arr

    def atom_inverse(self, atom: ScalarAtom, backend):
        key = (backend.key, "atom", atom)
        if key not in self._cache:
            v = _evaluate_in(atom.definition, self, {}, backend)
            self._cache[key] = v.inverse()
        return self._cache[key]


def instantiate(model: ModelSpec | None = None, seed: int = 0, dim: int = 3) -> NumericInstance:
    """Reproducible random instance; components are rationals in [-1, 1]
    with denominator at most 16, symmetric where declared."""
    inst = NumericInstance(seed=seed, dim=dim)
    if model is not None:
        for sym in model.tensors.values():
            inst.tensor_components(sym)
        for name in model.radials:
            inst.radial_coefficients(name)
        for name in model.functions:
            inst.function_terms(name)
    return inst


# evaluation -------------------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _box(x) -> np.ndarray:
    arr = np.empty((), dtype=object)
    arr[()] = x
    return arr


def _take(arr: np.ndarray, k: int, axis: int) -> np.ndarray:
    out = np.take(arr, k, axis=axis)
    return out if isinstance(out, np.ndarray) else _box(out)


def _contract(operands, subs):
    if any(subs):
        return np.einsum(",".join(subs) + "->", *operands)
    out = operands[0][()]
    for o in operands[1:]:
        out = out * o[()]
    return out


def _monomial_value(facs, den, c, ip, inst, assign, backend, psi_derivs):
    """One monomial with free labels fixed by ``assign``; the q factors
    (possibly none) are replaced by the matching derivative tensor of psi."""
    operands, subs = [], []
    letter: dict = {}

    def wire(arr, labs):
        s = ""
        for lab in labs:
            if isinstance(lab, str) and lab in assign:
                arr = _take(arr, assign[lab], len(s))
            else:
                s += letter.setdefault(lab, _LETTERS[len(letter)])
        operands.append(arr)
        subs.append(s)

    qlabels = []
    for sym, labs in facs:
        if sym.kind == "q":
            qlabels.append(labs[0])
        else:
            wire(inst.factor_array(sym, backend), labs)
    wire(psi_derivs(len(qlabels)), qlabels)
    out = _contract(operands, subs) * backend.const(c)
    for atom, m in den:
        inv = inst.atom_inverse(atom, backend)
        for _ in range(m):
            out = out * inv
    return out.times_i(ip + len(qlabels))


def _derivatives(psi, dim: int):
    cache: dict = {}

    def tensor(n: int) -> np.ndarray:
        if n not in cache:
            arr = np.empty((dim,) * n, dtype=object)
            for idx in np.ndindex(arr.shape):
                key = tuple(sorted(idx))
                if ("d", key) not in cache:
                    v = psi
                    for k in key:
                        v = v.diff(k)
                    cache[("d", key)] = v
                arr[idx] = cache[("d", key)]
            cache[n] = arr
        return cache[n]

    return tensor


def _apply_in(expr: TensorExpr, psi, inst, assign, backend):
    missing = set(expr.free) - set(assign)
    if missing:
        raise TensorError(f"free indices {sorted(missing)} need values")
    derivs = _derivatives(psi, inst.dim)
    out = backend.const(0)
    for (h, ip, facs, den), c in expr.items():
        out = out + _monomial_value(facs, den, c, ip, inst, assign, backend, derivs)
    return out


def _evaluate_in(e: TensorExpr, inst, assign, backend):
    return _apply_in(e, backend.const(1), inst, assign, backend)


def apply(op: OperatorExpr, psi, inst: NumericInstance, assign: Mapping[str, int]) -> CFun:
    """Act with a normal-ordered operator on psi, returning a rational function
    (q_a = i d/dp_a, hbar = 1).  ``assign`` fixes the free indices."""
    expr = op.expr if isinstance(op, OperatorExpr) else op
    if isinstance(psi, TestFunction):
        psi = psi.as_cfun()
    return _apply_in(expr, psi, inst, assign, FIELD_BACKEND)


def _require_q_free(e: TensorExpr) -> None:
    if q_degree(OperatorExpr(e)):
        raise TensorError("expression contains q factors; use apply() on a test function")


def evaluate(e: TensorExpr, inst: NumericInstance, assign: Mapping[str, int]) -> CFun:
    """Value of a q-free expression as a rational function of p."""
    _require_q_free(e)
    return _evaluate_in(e, inst, assign, FIELD_BACKEND)


def evaluate_at(e: TensorExpr, inst: NumericInstance, assign: Mapping[str, int], point) -> GQ:
    """Exact value of a q-free expression at one point."""
    _require_q_free(e)
    return _evaluate_in(e, inst, assign, _JetBackend(point, 0)).value()


def evaluate_raw_at(monomials, inst: NumericInstance, assign: Mapping[str, int], point) -> GQ:
    """Exact value of raw, un-canonicalised monomials
    ``(coeff, hbar, ipow, factors, denominators)`` at one point."""
    backend = _JetBackend(point, 0)
    out = backend.const(0)
    one = _derivatives(backend.const(1), inst.dim)
    for c, h, ip, facs, den in monomials:
        den_items = list(den.items()) if isinstance(den, Mapping) else list(den)
        out = out + _monomial_value(list(facs), den_items, c, ip, inst, assign, backend, one)
    return out.value()


# test functions -----------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """Polynomial in p1, p2, p3 with Gaussian-rational coefficients."""

    __test__ = False  # keep pytest from collecting it

    terms: tuple  # ((GQ, exponents), ...)

    def in_backend(self, backend):
        out = backend.const(0)
        for c, exps in self.terms:
            re, im = c.as_fractions()
            mono = backend.const(re)
            if im:
                mono = mono + backend.const(im).times_i(1)
            for a, e in enumerate(exps):
                for _ in range(e):
                    mono = mono * backend.var(a)
            out = out + mono
        return out

    def as_cfun(self) -> CFun:
        return self.in_backend(FIELD_BACKEND)


def random_test_function(rng: random.Random, degree: int = 6, terms: int = 6) -> TestFunction:
    out = []
    for k in range(terms):
        e = [0, 0, 0]
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(3)] += 1
        im = _rand_rational(rng) if k == 0 else Fraction(0)
        re = _rand_rational(rng)
        out.append((GQ(gmpy2.mpq(re.numerator, re.denominator), gmpy2.mpq(im.numerator, im.denominator)), tuple(e)))
    return TestFunction(tuple(out))


def random_point(rng: random.Random) -> tuple:
    return tuple(_rand_rational(rng) for _ in range(3))


def _assignments(free, dim: int):
    names = sorted(free)
    for vals in itertools.product(range(dim), repeat=len(names)):
        yield dict(zip(names, vals))


def cross_check(
    A: OperatorExpr,
    B: OperatorExpr,
    inst: NumericInstance,
    trials: int = 5,
    commutator_fn: Callable = commutator,
    seed: int | None = None,
    points: int = 5,
    max_assignments: int | None = 9,
) -> bool:
    """Symbolic [A, B] against A(B psi) - B(A psi), exactly, at random points.

    ``trials`` random test functions are each compared at ``points`` random
    rational points (resampled where a denominator vanishes).
    """
    rng = random.Random(inst.seed if seed is None else seed)
    C = commutator_fn(A, B)
    order = q_degree(A) + q_degree(B)
    assigns = list(_assignments(A.free | B.free, inst.dim))
    if max_assignments is not None and len(assigns) > max_assignments:
        assigns = rng.sample(assigns, max_assignments)
    for _ in range(trials):
        psi = random_test_function(rng)
        done = attempts = 0
        while done < points:
            attempts += 1
            if attempts > 20 * points:
                raise ZeroDivisionError("could not find regular sample points")
            backend = _JetBackend(random_point(rng), order)
            try:
                ok = _agree(A, B, C, psi, inst, assigns, backend)
            except ZeroDivisionError:
                continue
            if not ok:
                return False
            done += 1
    return True


def _agree(A, B, C, psi, inst, assigns, backend) -> bool:
    # Coefficients only need as many orders as are differentiated later:
    # the inner operator's result feeds q-degree(outer) derivatives, the
    # outer result and the commutator are read off at the point itself.
    psi_j = psi.in_backend(backend)
    point = backend.point
    flat = _JetBackend(point, 0)
    inner_b = _JetBackend(point, q_degree(A))
    inner_a = _JetBackend(point, q_degree(B))
    cache: dict = {}

    def inner(op, sub, coeff_backend):
        key = (id(op), tuple(sorted(sub.items())))
        if key not in cache:
            cache[key] = _apply_in(op.expr, psi_j, inst, sub, coeff_backend)
        return cache[key]

    for assign in assigns:
        a_only = {k: v for k, v in assign.items() if k in A.free}
        b_only = {k: v for k, v in assign.items() if k in B.free}
        lhs = _apply_in(C.expr, psi_j, inst, assign, flat)
        ab = _apply_in(A.expr, inner(B, b_only, inner_b), inst, a_only, flat)
        ba = _apply_in(B.expr, inner(A, a_only, inner_a), inst, b_only, flat)
        if lhs.value() != (ab - ba).value():
            return False
    return True


def nonzero_somewhere(e, inst: NumericInstance, points: int = 5, seed: int = 0) -> bool:
    """True if ``e`` evaluates nonzero for some index assignment and point.

    Operators (anything with q factors) are applied to random test functions.
    """
    expr = e.expr if isinstance(e, OperatorExpr) else e
    order = q_degree(OperatorExpr(expr))
    rng = random.Random(seed)
    for assign in _assignments(expr.free, inst.dim):
        for _ in range(points):
            backend = _JetBackend(random_point(rng), order)
            try:
                if order:
                    psi = random_test_function(rng).in_backend(backend)
                    value = _apply_in(expr, psi, inst, assign, backend).value()
                else:
                    value = _evaluate_in(expr, inst, assign, backend).value()
            except ZeroDivisionError:
                continue
            if value:
                return True
    return False


def operators_agree(A: OperatorExpr, B: OperatorExpr, inst: NumericInstance, trials: int = 3, seed: int = 0) -> bool:
    """A psi = B psi at random points for random test functions."""
    if A.free != B.free:
        return False
    rng = random.Random(seed)
    order = max(q_degree(A), q_degree(B))
    for _ in range(trials):
        psi = random_test_function(rng)
        backend = _JetBackend(random_point(rng), order)
        psi_j = psi.in_backend(backend)
        for assign in _assignments(A.free, inst.dim):
            try:
                a = _apply_in(A.expr, psi_j, inst, assign, backend).value()
                b = _apply_in(B.expr, psi_j, inst, assign, backend).value()
            except ZeroDivisionError:
                continue
            if a != b:
                return False
    return True


def oracle_checks(model: ModelSpec, seed: int = 0, trials: int = 3, points: int = 2) -> list:
    """Cross-check [x_i, p_j], [x_i, x_j] and, for every fully specified
    ansatz, the transformed [x'_i, x'_j] of a model."""
    from .criteria import FAILS, HOLDS, CheckReport
    from .operator_algebra import build_position_from_F, p_op

    inst = instantiate(model, seed)
    F = model.pin(model.F())
    Fk = F.rename({"i": "k", "j": "l"})
    pairs = [("[x_i,p_j]", build_position_from_F(F, None), p_op("j"))]
    x_i = build_position_from_F(F, None)
    x_j = build_position_from_F(Fk, None, "k", "l").rename({"k": "j"})
    pairs.append(("[x_i,x_j]", x_i, x_j))
    for ans in model.ansatze.values():
        if ans.unknowns:
            continue
        L = model.pin(ans.log_derivative("n"))
        y_i = build_position_from_F(F, L)
        y_j = build_position_from_F(Fk, L, "k", "l").rename({"k": "j"})
        pairs.append((f"[x'_i,x'_j] ({ans.name})", y_i, y_j))
    out = []
    for label, A, B in pairs:
        ok = cross_check(A, B, inst, trials=trials, points=points)
        out.append(
            CheckReport(
                model.name, f"oracle {label}", f"seed-{seed}", HOLDS if ok else FAILS,
                "0" if ok else "symbolic commutator disagrees with composition",
                notes=[f"{trials} test functions x {points} points"],
            )
        )
    return out


__all__ = [
    "oracle_checks",
    "GQ",
    "CFun",
    "Jet",
    "NumericInstance",
    "TestFunction",
    "instantiate",
    "apply",
    "evaluate",
    "evaluate_at",
    "evaluate_raw_at",
    "cross_check",
    "operators_agree",
    "random_test_function",
    "random_point",
    "nonzero_somewhere",
]
