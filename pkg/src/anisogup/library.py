"""Built-in models, stored as model-DSL text.

Tensor rank-2 anisotropies that share a model with vectors are declared with
``order 2`` so that mixed truncation treats beta and c*c alike.  Models whose
identities depend on the spatial dimension pin ``dim 3``.
"""

from __future__ import annotations

from .dsl import parse_model
from .model import ModelSpec
from .tensor_core import TensorError

SOURCES: dict[str, str] = {}


def _add(text: str) -> None:
    name = text.split('"')[1]
    SOURCES[name] = text.strip() + "\n"


_add('''
model "baseline" {
  f = 1
}
''')

_add('''
model "isotropic-radial" {
  dim 3
  radial u
  radial w
  radial l
  scalaratom D = u + w*p[a]*p[a]
  f = u
  g[i] = w*p[i]
  ansatz "radial-C" explicit [j] = 2*l*p[j]
  ansatz "compensator" explicit [j] = -2*(u' + w'*p[a]*p[a] + 2*w)*p[j]/D
}
''')

_add('''
model "isotropic-kempf" {
  dim 3
  param b
  param b2
  scalaratom S = 1 + b*p[a]*p[a]
  f = 1 + b*p[a]*p[a]
  g[i] = b2*p[i]
  ansatz "radial-power" power S^n
}
''')

_add('''
model "f-only-general" {
  function u
  scalaratom U = u
  f = u
  ansatz "inverse" power U^(-1)
  ansatz "power" power U^n
}
''')

_add('''
model "f-only-single" {
  tensor beta rank 2 symmetric
  scalaratom S = 1 + p[a]*beta[a,b]*p[b]
  f = 1 + p[a]*beta[a,b]*p[b]
  ansatz "power" power S^n
  ansatz "inverse" power S^(-1)
}
''')

_add('''
model "f-only-two-term" {
  tensor alpha rank 1
  tensor beta rank 2 symmetric
  scalaratom S = 1 + alpha[a]*p[a] + p[a]*beta[a,b]*p[b]
  f = 1 + alpha[a]*p[a] + p[a]*beta[a,b]*p[b]
  ansatz "power" power S^n
}
''')

_add('''
model "g-only-single" {
  dim 3
  tensor gam rank 3 symmetric
  scalaratom S = 1 + gam[a,b,c]*p[a]*p[b]*p[c]
  g[i] = gam[i,a,b]*p[a]*p[b]
  ansatz "power" power S^n
}
''')

_add('''
model "g-only-nonsym" {
  dim 3
  tensor bp rank 2
  scalaratom S = 1 + p[a]*bp[a,b]*p[b]
  g[i] = bp[i,a]*p[a]
  ansatz "power" power S^n
}
''')

_add('''
model "alpha-alpha-prime" {
  dim 3
  tensor alpha rank 1
  tensor alphap rank 1
  f = 1 + alpha[a]*p[a]
  g[i] = alphap[i]
  ansatz "exp-quadratic" explicit [j] = (1 + alpha[a]*p[a])*alpha[j] - alphap[j]
}
''')

_add('''
model "h-constant-c" {
  dim 3
  tensor c rank 1
  scalaratom S1 = 1 + c[a]*p[a]
  scalaratom S2 = 1 + p[a]*p[a]
  h[i] = c[i]
  ansatz "power" power S1^n1 * S2^n2
  ansatz "graded" poly unknowns k1 k2 k3 : 1 + k1*c[a]*p[a] + k2*c[a]*p[a]*c[b]*p[b] + k3*c[a]*c[a]*p[b]*p[b]
}
''')

_add('''
model "h-rank-2-d" {
  dim 3
  tensor d rank 2
  scalaratom S = 1 + p[a]*d[a,b]*p[b]
  h[i] = p[a]*d[a,i]
  ansatz "power" power S^n
}
''')

_add('''
model "kappa-proportional" {
  dim 3
  tensor beta rank 2 symmetric
  scalaratom S = 1 + 3/2*p[a]*beta[a,b]*p[b]
  f = 1 + p[a]*beta[a,b]*p[b]
  g[i] = 1/2*beta[i,a]*p[a]
  ansatz "power" power S^n
}
''')

_add('''
model "kempf-aniso" {
  dim 3
  tensor beta rank 2 symmetric
  scalaratom S = 1 + 3*p[a]*beta[a,b]*p[b]
  f = 1 + p[a]*beta[a,b]*p[b]
  g[i] = 2*beta[i,a]*p[a]
  ansatz "power" power S^n
}
''')

_add('''
model "kempf-aniso-kappa" {
  dim 3
  tensor beta rank 2 symmetric
  param kappa
  f = 1 + p[a]*beta[a,b]*p[b]
  g[i] = kappa*beta[i,a]*p[a]
}
''')

_add('''
model "kempf-aniso-c" {
  dim 3
  tensor beta rank 2 symmetric order 2
  tensor c rank 1
  f = 1 + p[a]*beta[a,b]*p[b]
  h[i] = c[i]
  ansatz "paper-vi-b2" poly unknowns k1 k2 k3 k4 : 1 + k1*p[a]*beta[a,b]*p[b] + k2*p[a]*c[a] + k3*p[a]*c[a]*p[b]*c[b] + k4*c[a]*c[a]*p[b]*p[b]
}
''')

_add('''
model "commutative" {
  dim 3
  tensor beta rank 2 symmetric
  scalaratom D = 1 - p[a]*beta[a,b]*p[b]
  f = 1 + p[a]*beta[a,b]*p[b]
  g[i] = 2*(1 + p[a]*beta[a,b]*p[b])*beta[i,c]*p[c]/D
}
''')

_add('''
model "isotropic-commutative" {
  dim 3
  radial u
  scalaratom D = u - 2*u'*p[a]*p[a]
  f = u
  g[i] = 2*u*u'*p[i]/D
}
''')


def names() -> list[str]:
    return list(SOURCES)


def get(name: str) -> ModelSpec:
    """A fresh copy of a built-in model."""
    if name not in SOURCES:
        raise TensorError(f"no built-in model {name!r}; known: {', '.join(SOURCES)}")
    return parse_model(SOURCES[name])


def library() -> list[ModelSpec]:
    return [get(n) for n in SOURCES]


__all__ = ["SOURCES", "names", "get", "library"]
