"""The ambient surface models as quotient rings with a confluent normal form.

Two models are supported:

  * tilde(k, r):  x^r*y = z^k - 1  in variables (x, y, z), the simply
    connected model; torus weights (1, -r, 0); the residual cyclic action
    with parameter a acts with exponents (1, -r, -a).
  * hyper(k, rbar):  u^(rbar+1)*v + u = w^k  in variables (u, v, w), the
    hypersurface model of the quotient with a = 1 and r = rbar*k; torus
    weights (k, -rbar*k, 1).

Equality in the coordinate ring is decided by a single confluent rewrite:
lexicographic order with x > y > z (resp. u > v > w) selects the leading
monomial x^r*y (resp. u^(rbar+1)*v), and the one-element set {relation} is a
Groebner basis of the principal ideal, so the division remainder is a
canonical normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numfield import QQ, FieldElement, NumberField
from .polyalg import Poly, divmod_poly


class NotOnSurface(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceSpec:
    """One of the ambient models; validated by the module constructors."""
    model: str                    # "tilde" | "hyper"
    k: int
    r: int                        # r for tilde, rbar for hyper

    @property
    def vars(self) -> tuple[str, str, str]:
        return ("x", "y", "z") if self.model == "tilde" else ("u", "v", "w")

    @property
    def weights(self) -> tuple[int, int, int]:
        if self.model == "tilde":
            return (1, -self.r, 0)
        return (self.k, -self.r * self.k, 1)

    def zk_exponents(self, a: int) -> tuple[int, int, int]:
        """Exponents of the order-k cyclic action eps*_a on the tilde model."""
        if self.model != "tilde":
            raise ValueError("cyclic action data lives on the tilde model")
        return (1, -self.r, -a)

    def relation(self, field: NumberField = QQ) -> Poly:
        x, y, z = (Poly.variable(v, field, self.vars) for v in self.vars)
        if self.model == "tilde":
            return x ** self.r * y - z ** self.k + 1
        return x ** (self.r + 1) * y + x - z ** self.k

    def surface_id(self) -> str:
        return f"{self.model}({self.k},{self.r})"

    def __str__(self):
        return self.surface_id()


def tilde_surface(k: int, r: int) -> SurfaceSpec:
    if k < 1 or r < 1:
        raise ValueError("tilde(k, r) needs k, r >= 1")
    return SurfaceSpec("tilde", k, r)


def hyper_surface(k: int, rbar: int) -> SurfaceSpec:
    if k < 2 or rbar < 1:
        raise ValueError("hyper(k, rbar) needs k >= 2, rbar >= 1")
    return SurfaceSpec("hyper", k, rbar)


def parse_surface_id(text: str) -> SurfaceSpec:
    text = text.strip()
    for name, ctor in (("tilde", tilde_surface), ("hyper", hyper_surface)):
        if text.startswith(name + "(") and text.endswith(")"):
            inner = text[len(name) + 1:-1]
            a, b = inner.split(",")
            return ctor(int(a), int(b))
    raise ValueError(f"not a surface id: {text!r}")


def normal_form(p: Poly, s: SurfaceSpec) -> Poly:
    """Canonical remainder of p modulo the principal surface ideal.

    p may carry extra parameter variables; the surface variables are moved
    to the front so the lex order of the module docstring applies.
    """
    order = tuple(list(s.vars) + [v for v in p.variables if v not in s.vars])
    aligned = p.with_variables(order)
    rel = s.relation(aligned.field).with_variables(order)
    _, r = divmod_poly(aligned, rel)
    return r


def on_surface(pt, s: SurfaceSpec) -> bool:
    """Exact test relation(pt) == 0. pt is a triple of field elements."""
    coords = _as_elements(pt)
    field = coords[0].field
    rel = s.relation(field if not field.is_rational else QQ)
    return rel.evaluate(dict(zip(s.vars, coords))).is_zero()


def _as_elements(pt) -> tuple[FieldElement, FieldElement, FieldElement]:
    out = []
    for c in pt:
        if isinstance(c, FieldElement):
            out.append(c)
        else:
            out.append(QQ.elem(c))
    if len(out) != 3:
        raise ValueError("a surface point has three coordinates")
    return tuple(out)


@dataclass(frozen=True)
class SurfacePoint:
    """An exact point on a surface; the relation is checked on construction."""
    surface: SurfaceSpec
    coords: tuple[FieldElement, FieldElement, FieldElement]

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_elements(self.coords))
        if not on_surface(self.coords, self.surface):
            raise NotOnSurface(
                f"{tuple(str(c) for c in self.coords)} not on {self.surface}")

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def weight_of(p: Poly, s: SurfaceSpec) -> int | None:
    """Common torus weight of all monomials of p, or None if mixed.

    Variables beyond the surface triple (deformation parameters in tests)
    count with weight zero.
    """
    if p.is_zero():
        raise ValueError("weight of the zero polynomial is undefined")
    wmap = dict(zip(s.vars, s.weights))
    ws = [wmap.get(v, 0) for v in p.variables]
    seen = None
    for k in p.terms:
        w = sum(e * wv for e, wv in zip(k, ws))
        if seen is None:
            seen = w
        elif seen != w:
            return None
    return seen


# -- deterministic exact sampling ---------------------------------------------


class SplitMix64:
    """splitmix64 PRNG; deterministic across platforms, seed is the state."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.next_u64() % (hi - lo + 1)

    def fraction(self, height: int = 1000) -> Fraction:
        """Nonzero rational with |numerator|, denominator <= height."""
        num = 0
        while num == 0:
            num = self.randint(-height, height)
        return Fraction(num, self.randint(1, height))


def sample_point(s: SurfaceSpec, seed: int, rng: SplitMix64 | None = None) -> SurfacePoint:
    """Deterministic rational point with all coordinates nonzero.

    tilde: draw x != 0 and z with z^k != 1, z != 0; then y = (z^k - 1)/x^r.
    hyper: draw u != 0 and w with w^k != u, w != 0; then v = (w^k - u)/u^(rbar+1).
    """
    rng = rng if rng is not None else SplitMix64(seed)
    if s.model == "tilde":
        while True:
            x = rng.fraction()
            z = rng.fraction()
            if z != 0 and z ** s.k != 1:
                y = (z ** s.k - 1) / x ** s.r
                return SurfacePoint(s, (QQ.elem(x), QQ.elem(y), QQ.elem(z)))
    while True:
        u = rng.fraction()
        w = rng.fraction()
        if w != 0 and w ** s.k != u:
            v = (w ** s.k - u) / u ** (s.r + 1)
            return SurfacePoint(s, (QQ.elem(u), QQ.elem(v), QQ.elem(w)))
