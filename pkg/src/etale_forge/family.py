"""Deformation machinery: shear automorphisms, the covering map, the
deformed family, and the equivalence decision modulo automorphisms.

The additive shear Theta^P acts on tilde(k, r) by

    (x, y, z) -> (x, y + x^(-r)((z + P(x) x^r)^k - z^k), z + P(x) x^r)

with the middle coordinate expanded so the binomial terms cancel the
x^(-r); it satisfies the group law Theta^P o Theta^Q = Theta^(P+Q) and is
an automorphism.  A family member is pi o Theta^F(a) o j, where j is the
factorization of a certified alpha = 0 endomorphism through the covering
pi(x, y, z) = (x^k, y, x*z), and F(a) = 1 + sum a_i x^(r i).

Two deformation polynomials are equivalent modulo pre/post-composition by
automorphisms iff F1(x) = lam^r F2(lam x) for some lam != 0; since both lie
in C[x^r], only mu = lam^r enters, and solvability is decided exactly in
the coefficient field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constructor import PreconditionViolated, factor_through_cover
from .endo import EtaleParams, SurfaceMap, compose_maps, make_map
from .numfield import QQ, FieldElement, NumberField, cyclotomic_field
from .polyalg import ArityError, Poly
from .surface import SurfaceSpec, hyper_surface, tilde_surface


def theta(P, s: SurfaceSpec) -> SurfaceMap:
    """The shear automorphism of tilde(k, r) attached to P in C[x]."""
    if s.model != "tilde":
        raise ValueError("theta lives on the tilde model")
    if isinstance(P, Poly):
        bad = [v for v in P.support_variables()
               if v != "x" and v in ("y", "z", "u", "v", "w")]
        if bad:
            raise ArityError(f"P must be a polynomial in x, found {bad}")
        field = P.field
    else:
        field = QQ
        P = Poly.constant(P, field, ("x",))
    x = Poly.variable("x", field, s.vars)
    y = Poly.variable("y", field, s.vars)
    z = Poly.variable("z", field, s.vars)
    k, r = s.k, s.r
    shift = Poly.zero(field, s.vars)
    for j in range(1, k + 1):
        shift = shift + math.comb(k, j) * z ** (k - j) * P ** j * x ** (r * (j - 1))
    return make_map(s, s, (x, y + shift, z + P * x ** r), declared_degree=1)


def covering(k: int, rbar: int) -> SurfaceMap:
    """The degree-k quotient covering tilde(k, rbar*k) -> hyper(k, rbar)."""
    source = tilde_surface(k, rbar * k)
    target = hyper_surface(k, rbar)
    x = Poly.variable("x", QQ, source.vars)
    y = Poly.variable("y", QQ, source.vars)
    z = Poly.variable("z", QQ, source.vars)
    return make_map(source, target, (x ** k, y, x * z), declared_degree=k)


@dataclass(frozen=True)
class FamilySpec:
    """A deformed endomorphism of hyper(k, rbar): pi o Theta^F(a) o j_base."""
    k: int
    rbar: int
    base: EtaleParams
    avector: tuple[FieldElement, ...]

    def __post_init__(self):
        if self.base.alpha != 0 or self.base.a != 1:
            raise PreconditionViolated("family base must have alpha = 0, a = 1")
        if self.base.k != self.k or self.base.r != self.rbar * self.k:
            raise PreconditionViolated(
                f"base parameters are for tilde({self.base.k},{self.base.r})")
        object.__setattr__(self, "avector",
                           tuple(self.base.field.coerce(a) for a in self.avector))

    def deformation_poly(self) -> Poly:
        """F(a) = 1 + sum a_i x^(r i) with r = rbar*k."""
        r = self.rbar * self.k
        field = self.base.field
        x = Poly.variable("x", field)
        F = Poly.constant(1, field, ("x",))
        for i, ai in enumerate(self.avector, start=1):
            F = F + Poly.constant(ai, field, ("x",)) * x ** (r * i)
        return F


def family_member(f: FamilySpec) -> SurfaceMap:
    """The self-map pi o Theta^F(a) o j of hyper(k, rbar), reduced to
    normal form; its degree is k * deg(j)."""
    j = factor_through_cover(f.base)
    th = theta(f.deformation_poly(), tilde_surface(f.k, f.rbar * f.k))
    pi = covering(f.k, f.rbar)
    return compose_maps(pi, compose_maps(th, j))


def family_member_symbolic(base: EtaleParams, nparams: int) -> SurfaceMap:
    """A family member with formal parameters a1..an (torus weight zero)."""
    k = base.k
    rbar = base.r // k
    r = base.r
    field = base.field
    x = Poly.variable("x", field)
    F = Poly.constant(1, field, ("x",))
    for i in range(1, nparams + 1):
        F = F + Poly.variable(f"a{i}", field) * x ** (r * i)
    j = factor_through_cover(base)
    th = theta(F, tilde_surface(k, r))
    pi = covering(k, rbar)
    return compose_maps(pi, compose_maps(th, j))


# -- equivalence modulo automorphisms ----------------------------------------------


@dataclass(frozen=True)
class EcEquivalence:
    equivalent: bool
    lam: FieldElement | None = None         # witness with P1(x) = lam^r P2(lam x)
    lam_pow_r: FieldElement | None = None   # mu = lam^r, always in the base field


def _support(P: Poly, r: int) -> dict[int, FieldElement]:
    if P.is_zero():
        raise ValueError("equivalence needs nonzero polynomials")
    coeffs = P.univariate_coeffs()
    supp = {}
    for j, c in enumerate(coeffs):
        if not c.is_zero():
            if j % r != 0:
                raise ValueError(f"polynomial is not in C[x^{r}]")
            supp[j] = c
    return supp


def _finite_order(mu: FieldElement, bound: int = 64) -> int | None:
    acc = mu
    one = mu.field.one()
    for order in range(1, bound + 1):
        if acc == one:
            return order
        acc = acc * mu
    return None


def ec_equivalent(P1: Poly, P2: Poly, r: int) -> EcEquivalence:
    """Decide existence of lam != 0 with P1(x) = lam^r * P2(lam * x).

    Both inputs lie in C[x^r], so with e_j = 1 + j/r the condition reads
    mu^(e_j) = a_j / b_j for mu = lam^r.  For g = gcd(e_j) and Bezout
    coefficients c_j, any solution satisfies mu^g = nu := prod (a_j/b_j)^c_j,
    and conversely the system is solvable over C iff nu^(e_j/g) = a_j/b_j
    for every j -- an exact test in the coefficient field.  A witness lam in
    the field is produced whenever mu is a root of unity of order prime
    to r.
    """
    if r < 1:
        raise ValueError("r must be positive")
    s1 = _support(P1, r)
    s2 = _support(P2, r)
    if set(s1) != set(s2):
        return EcEquivalence(False)
    exps = sorted(s1)
    e = [1 + j // r for j in exps]
    q = []
    field = None
    for j in exps:
        a, b = s1[j], s2[j]
        ratio = a / b
        q.append(ratio)
        field = ratio.field
    g = e[0]
    for ei in e[1:]:
        g = math.gcd(g, ei)
    # Bezout coefficients for gcd of the whole list
    cs = [0] * len(e)
    acc = e[0]
    cs[0] = 1
    for i in range(1, len(e)):
        gg, u, v = _xgcd(acc, e[i])
        cs = [c * u for c in cs]
        cs[i] = v
        acc = gg
    assert acc == g
    nu = field.one()
    for ci, qi in zip(cs, q):
        nu = nu * (qi ** ci)
    for ei, qi in zip(e, q):
        if nu ** (ei // g) != qi:
            return EcEquivalence(False)
    # mu = lam^r satisfies mu^g = nu; when g = 1 it is determined
    mu = nu if g == 1 else None
    lam = None
    if mu is not None:
        order = _finite_order(mu)
        if order is not None and math.gcd(r, order) == 1:
            lam = mu ** pow(r, -1, order)
            assert all((lam ** (r + j)) * s2[j] == s1[j] for j in exps)
    return EcEquivalence(True, lam=lam, lam_pow_r=mu)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, rr = a, b
    old_s, ss = 1, 0
    old_t, tt = 0, 1
    while rr:
        qq = old_r // rr
        old_r, rr = rr, old_r - qq * rr
        old_s, ss = ss, old_s - qq * ss
        old_t, tt = tt, old_t - qq * tt
    return old_r, old_s, old_t


def _canonical_avector(av: tuple[FieldElement, ...]) -> tuple[FieldElement, ...]:
    out = list(av)
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def family_pairwise_distinct(f_list: list[FamilySpec]) -> bool:
    """True iff all members are pairwise inequivalent modulo automorphisms.

    Canonicalizes a-vectors by stripping trailing zeros (duplicates make the
    family degenerate, hence False) and decides each pair through the
    deformation polynomials; for F with F(0) = 1 in C[x^r] the criterion
    collapses to equality of the F's.
    """
    if not f_list:
        return True
    k, rbar, base = f_list[0].k, f_list[0].rbar, f_list[0].base
    for f in f_list:
        if (f.k, f.rbar) != (k, rbar) or f.base != base:
            raise ValueError("family members must share (k, rbar, base)")
    canon = [_canonical_avector(f.avector) for f in f_list]
    for i in range(len(canon)):
        for j in range(i + 1, len(canon)):
            if canon[i] == canon[j]:
                return False
            r = rbar * k
            if ec_equivalent(f_list[i].deformation_poly(),
                             f_list[j].deformation_poly(), r).equivalent:
                return False
    return True
