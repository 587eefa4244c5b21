"""Model specifications, transformation ansatz families and evaluation modes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .tensor_core import (
    DELTA,
    P,
    ScalarAtom,
    Symbol,
    TensorError,
    TensorExpr,
    const,
    derive,
    mixed_weight,
    mul,
    pin_dim,
    substitute,
    term,
    truncate,
)


@dataclass(frozen=True)
class Mode:
    """How identities are decided: exactly, or modulo anisotropy order."""

    kind: str = "exact"  # exact | order | mixed
    order: int = 0

    @classmethod
    def parse(cls, text: str) -> Mode:
        text = text.strip()
        if text == "exact":
            return cls("exact")
        if text == "mixed":
            return cls("mixed")
        if text.startswith("order-"):
            text = text[len("order-") :]
        try:
            k = int(text)
        except ValueError:
            raise TensorError(f"unknown mode {text!r}") from None
        if k < 0:
            raise TensorError("truncation order must be non-negative")
        return cls("order", k)

    def label(self) -> str:
        if self.kind == "order":
            return f"order-{self.order}"
        return self.kind

    def reduce(self, e: TensorExpr, model: ModelSpec | None = None) -> TensorExpr:
        if self.kind == "exact":
            return e
        if self.kind == "order":
            return truncate(e, self.order)
        k = model.mixed_order() if model is not None else 2
        return truncate(e, k, mixed_weight)

    @property
    def truncated(self) -> bool:
        return self.kind != "exact"


EXACT = Mode("exact")


@dataclass(frozen=True)
class TransformAnsatz:
    """A canonical transformation C(p), described through L_j = d_j ln C.

    ``explicit``: L given directly.  ``power``: C = prod s_a^(e_a) over
    registered atoms, exponents rank-0 expressions possibly containing
    unknowns.  ``poly``: C itself is a registered atom whose definition holds
    unknown coefficients.
    """

    name: str
    kind: str
    L: TensorExpr | None = None
    factors: tuple = ()  # ((ScalarAtom, TensorExpr exponent), ...)
    C: ScalarAtom | None = None
    unknowns: tuple = ()  # Symbols, declaration order

    def log_derivative(self, idx: str = "j") -> TensorExpr:
        if self.kind == "explicit":
            (old,) = self.L.free
            return self.L.rename({old: idx}) if old != idx else self.L
        out = TensorExpr({}, {idx})
        if self.kind == "power":
            for atom, e in self.factors:
                grad = derive(atom.definition, idx)
                out = out + mul(mul(e, grad), atom.inverse())
            return out
        if self.kind == "poly":
            return mul(derive(self.C.definition, idx), self.C.inverse())
        raise TensorError(f"unknown ansatz kind {self.kind!r}")

    def is_integrable(self) -> bool:
        """d_a L_b = d_b L_a (automatic for power and poly families)."""
        if self.kind != "explicit":
            return True
        return curl(self.log_derivative("b"), "a", "b").is_zero()

    def substituted(self, values: Mapping[Symbol, Fraction]) -> TransformAnsatz:
        def sub(e: TensorExpr) -> TensorExpr:
            for sym, v in values.items():
                e = substitute(e, sym, const(v))
            return e

        left = tuple(u for u in self.unknowns if u not in values)
        if self.kind == "explicit":
            return TransformAnsatz(self.name, "explicit", L=sub(self.L), unknowns=left)
        if self.kind == "power":
            return TransformAnsatz(
                self.name, "power", factors=tuple((a, sub(e)) for a, e in self.factors), unknowns=left
            )
        return TransformAnsatz(
            self.name, "poly", C=ScalarAtom(self.C.name, sub(self.C.definition)), unknowns=left
        )


def curl(L: TensorExpr, a: str, b: str) -> TensorExpr:
    """d_a L_b - d_b L_a for L with single free index ``b``."""
    d1 = derive(L, a)
    d2 = d1.rename({a: "~x", b: a}).rename({"~x": b})
    return d1 - d2


IDENTITY = TransformAnsatz("identity", "explicit", L=TensorExpr({}, {"j"}))


@dataclass
class ModelSpec:
    name: str
    dim: int | None = None
    tensors: dict = field(default_factory=dict)  # name -> Symbol
    radials: list = field(default_factory=list)
    functions: list = field(default_factory=list)
    params: list = field(default_factory=list)
    atoms: dict = field(default_factory=dict)  # name -> ScalarAtom
    f: TensorExpr = field(default_factory=lambda: const(1))
    g: TensorExpr | None = None  # free index "i"
    h: TensorExpr | None = None  # free index "i"
    ansatze: dict = field(default_factory=dict)  # name -> TransformAnsatz

    def __post_init__(self):
        if self.f.free:
            raise TensorError("f must not carry free indices")
        for name, v in (("g", self.g), ("h", self.h)):
            if v is not None and v.free != {"i"}:
                raise TensorError(f"{name} must carry exactly the free index i")
        if self.g is not None and not self.g:
            self.g = None
        if self.h is not None and not self.h:
            self.h = None

    def pin(self, e: TensorExpr) -> TensorExpr:
        return pin_dim(e, self.dim)

    def F(self, i: str = "i", j: str = "j") -> TensorExpr:
        """F_ij = f delta_ij + g_i p_j + p_i h_j."""
        out = mul(self.f, term(DELTA, i, j))
        if self.g is not None:
            out = out + mul(self.g.rename({"i": i}), term(P, j))
        if self.h is not None:
            out = out + mul(term(P, i), self.h.rename({"i": j}))
        return out

    def mixed_order(self) -> int:
        """Largest rank among graded anisotropies (the mixed truncation order)."""
        return max((s.rank for s in self.tensors.values() if s.grading > 0), default=0)

    def ansatz(self, name: str | None = None) -> TransformAnsatz:
        if name is None:
            if not self.ansatze:
                raise TensorError(f"model {self.name!r} declares no ansatz")
            return next(iter(self.ansatze.values()))
        try:
            return self.ansatze[name]
        except KeyError:
            raise TensorError(f"model {self.name!r} has no ansatz {name!r}") from None


__all__ = ["Mode", "EXACT", "TransformAnsatz", "IDENTITY", "ModelSpec", "curl"]
