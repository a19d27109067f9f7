"""Surface morphisms as first-class objects, with the etale certificate.

A SurfaceMap holds three coordinate polynomials in the source variables
(possibly with extra parameter variables, which carry torus weight zero).
Construction runs a cheap sampled on-surface gate and the exact gate: the
target relation composed with the coordinates must reduce to zero in the
source coordinate ring.

The etale decision for the parametric family is certificate-based: the
conditions (C1)-(C5) recorded in EtaleCertificate are exactly the necessary
and sufficient conditions for the formula

    (lam * x * z^(1-alpha) * R2(1-z^k),
     lam^(-r) * y * R0(1-z^k),
     z^alpha * R1(1-z^k))

to define a torus-equivariant etale endomorphism of tilde(k, r) of degree d
descending to the quotient with parameter a.  The Jacobian spot-check is an
independent rational-point oracle, never the decision procedure: degrees are
computed through the base polynomial, not by fiber counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numfield import QQ, FieldElement, NumberField, field_from_string
from .polyalg import Poly, compose, is_separable
from .surface import (SplitMix64, SurfacePoint, SurfaceSpec, hyper_surface,
                      normal_form, sample_point, tilde_surface, weight_of)


class NotAMorphism(ValueError):
    """The target relation does not vanish modulo the source ideal."""

    def __init__(self, witness: Poly):
        super().__init__(f"target relation pulls back to {witness}, not 0")
        self.witness = witness


class SourceTargetMismatch(ValueError):
    pass


class DegreeUndetermined(ValueError):
    pass


class CertificateRequired(ValueError):
    def __init__(self, certificate: "EtaleCertificate"):
        failing = [name for name, ok in certificate.checks.items() if not ok]
        super().__init__(f"certificate verdict false; failing: {', '.join(failing)}")
        self.certificate = certificate


class ChartDegenerate(ValueError):
    pass


class SurfaceMap:
    """A validated morphism between surface models."""

    def __init__(self, source: SurfaceSpec, target: SurfaceSpec,
                 coords: tuple[Poly, Poly, Poly], meta=None,
                 cached_degree: int | None = None):
        self.source = source
        self.target = target
        self.coords = tuple(coords)
        self.meta = meta
        self.cached_degree = cached_degree

    @property
    def field(self) -> NumberField:
        for c in self.coords:
            if not c.field.is_rational:
                return c.field
        return QQ

    def extra_variables(self) -> tuple[str, ...]:
        out = []
        for c in self.coords:
            for v in c.support_variables():
                if v not in self.source.vars and v not in out:
                    out.append(v)
        return tuple(out)

    def normalized_coords(self) -> tuple[Poly, Poly, Poly]:
        return tuple(normal_form(c, self.source) for c in self.coords)

    def __repr__(self):
        cs = ", ".join(str(c) for c in self.coords)
        return f"SurfaceMap({self.source} -> {self.target}: ({cs}))"


def make_map(source: SurfaceSpec, target: SurfaceSpec, coords,
             meta=None, declared_degree: int | None = None,
             gate_points: int = 20, gate_seed: int = 0) -> SurfaceMap:
    """Validate and build a SurfaceMap.

    Gate 1 (cheap): the target relation vanishes at the image of sampled
    rational points.  Gate 2 (exact): the pullback of the target relation
    reduces to zero modulo the source ideal.
    """
    coords = tuple(coords)
    if len(coords) != 3:
        raise ValueError("a surface map has three coordinates")
    m = SurfaceMap(source, target, coords, meta=meta, cached_degree=declared_degree)

    rng = SplitMix64(gate_seed)
    extras = m.extra_variables()
    rel = target.relation(m.field)
    gate_failed = False
    for _ in range(gate_points):
        pt = sample_point(source, seed=0, rng=rng)
        env = dict(zip(source.vars, pt.coords))
        for v in extras:
            env[v] = QQ.elem(rng.fraction())
        image = tuple(c.evaluate(env) for c in coords)
        if not rel.evaluate(dict(zip(target.vars, image))).is_zero():
            gate_failed = True
            break

    pullback = rel.substitute(dict(zip(target.vars, coords)))
    witness = normal_form(pullback, source)
    if gate_failed or not witness.is_zero():
        raise NotAMorphism(witness)
    return m


def identity_map(s: SurfaceSpec, field: NumberField = QQ) -> SurfaceMap:
    coords = tuple(Poly.variable(v, field, s.vars) for v in s.vars)
    return make_map(s, s, coords, declared_degree=1)


def apply_map(m: SurfaceMap, p: SurfacePoint) -> SurfacePoint:
    """Image of a point; the result is revalidated on the target."""
    if p.surface != m.source:
        raise SourceTargetMismatch(f"point on {p.surface}, map from {m.source}")
    env = dict(zip(m.source.vars, p.coords))
    image = tuple(c.evaluate(env) for c in m.coords)
    return SurfacePoint(m.target, image)


def compose_maps(g: SurfaceMap, f: SurfaceMap) -> SurfaceMap:
    """g after f, coordinates reduced to normal form in the source ring."""
    if f.target != g.source:
        raise SourceTargetMismatch(f"{f.target} != {g.source}")
    sub = dict(zip(g.source.vars, f.coords))
    coords = tuple(normal_form(c.substitute(sub), f.source) for c in g.coords)
    degree = None
    if f.cached_degree is not None and g.cached_degree is not None:
        degree = f.cached_degree * g.cached_degree
    return make_map(f.source, g.target, coords, declared_degree=degree)


def maps_equal(m1: SurfaceMap, m2: SurfaceMap) -> bool:
    """Equality as morphisms: normal forms of the coordinates agree."""
    if m1.source != m2.source or m1.target != m2.target:
        return False
    return all(a == b for a, b in
               zip(m1.normalized_coords(), m2.normalized_coords()))


# -- equivariance ------------------------------------------------------------


def cstar_equivariant(m: SurfaceMap) -> bool:
    """Each coordinate is weighted-homogeneous of the target variable weight."""
    for coord, target_weight in zip(m.normalized_coords(), m.target.weights):
        if coord.is_zero():
            continue
        if weight_of(coord, m.source) != target_weight:
            return False
    return True


@dataclass(frozen=True)
class ZkCompat:
    kind: str                  # "equivariant" | "invariant" | "no"
    twist: int | None = None   # exponent m with eta o (eps*_a) = (eps^m *_a) o eta


def zk_compatible(m: SurfaceMap, a: int) -> ZkCompat:
    """Compatibility with the order-k cyclic action on the tilde model.

    Substituting the action scales each monomial x^i y^j z^l by eps^(i-rj-al),
    so the identity (for a primitive root) holds for twist m iff every
    monomial of the n-th coordinate has the same exponent mod k, matching
    m times the target exponent.  This decides the identity in the
    cyclotomic-extended ring by pure exponent arithmetic.
    """
    s = m.source
    if s.model != "tilde" or m.target != s:
        raise ValueError("cyclic compatibility applies to self-maps of tilde(k, r)")
    if math.gcd(a, s.k) != 1:
        raise ValueError(f"a = {a} is not coprime with k = {s.k}")
    k = s.k
    exps = s.zk_exponents(a)
    coord_weights: list[int | None] = []
    for coord in m.normalized_coords():
        wmap = dict(zip(s.vars, exps))
        ws = [wmap.get(v, 0) for v in coord.variables]
        seen = None
        uniform = True
        for key in coord.terms:
            w = sum(e * wv for e, wv in zip(key, ws)) % k
            if seen is None:
                seen = w
            elif seen != w:
                uniform = False
                break
        if not uniform:
            return ZkCompat("no")
        coord_weights.append(seen)
    for twist in range(k):
        if all(w is None or w == (twist * t) % k
               for w, t in zip(coord_weights, exps)):
            if twist == 0:
                return ZkCompat("invariant", 0)
            return ZkCompat("equivariant", twist)
    return ZkCompat("no")


# -- degree through the base polynomial ------------------------------------------


def base_polynomial(m: SurfaceMap) -> Poly:
    """The induced polynomial on the base line, as a polynomial in t.

    For a torus-equivariant self-map the pullback of the base coordinate
    (t = 1 - z^k on the tilde model, t = -u^rbar*v on the hypersurface
    model) is a polynomial in z^k, from which eta_rho is read off by the
    substitution z^k = 1 - t.  Hypersurface self-maps are first composed
    with the covering (x, y, z) -> (x^k, y, x*z).
    """
    if m.source != m.target:
        raise DegreeUndetermined("base polynomial is defined for self-maps")
    if m.extra_variables():
        raise DegreeUndetermined("coordinates carry free parameters")
    if not cstar_equivariant(m):
        raise DegreeUndetermined("map is not torus-equivariant")
    s = m.source
    field = m.field
    k = s.k
    if s.model == "tilde":
        w = normal_form(m.coords[2], s)
        ambient = tilde_surface(k, s.r)
        q = 1 - normal_form(w ** k, ambient)
    else:
        cover = tilde_surface(k, s.r * k)
        x = Poly.variable("x", field, cover.vars)
        y = Poly.variable("y", field, cover.vars)
        z = Poly.variable("z", field, cover.vars)
        sub = {"u": x ** k, "v": y, "w": x * z}
        psi1 = m.coords[0].substitute(sub)
        psi2 = m.coords[1].substitute(sub)
        q = normal_form(-(psi1 ** s.r) * psi2, cover)
    if q.is_zero():
        raise DegreeUndetermined("degenerate (non-dominant) map")
    if any(v != "z" for v in q.support_variables()):
        raise DegreeUndetermined("base pullback is not a function of the base")
    t = Poly.variable("t", field)
    eta_rho = Poly.zero(field, ("t",))
    for key, c in q.terms.items():
        e = key[q.variables.index("z")] if "z" in q.variables else 0
        if e % k != 0:
            raise DegreeUndetermined("base pullback is not a polynomial in z^k")
        eta_rho = eta_rho + Poly.constant(c, field, ("t",)) * (1 - t) ** (e // k)
    return eta_rho


def degree_of(m: SurfaceMap) -> int:
    """Degree via declared data, composition, or the base polynomial.

    Never computed by generic fiber counting: equivariant self-maps take
    the degree of eta_rho (the fibration degree theorem), coverings and
    automorphisms carry declared degrees, compositions multiply.
    """
    if m.cached_degree is not None:
        return m.cached_degree
    eta_rho = base_polynomial(m)
    d = eta_rho.total_degree()
    if d < 1:
        raise DegreeUndetermined("constant base polynomial")
    m.cached_degree = d
    return d


# -- parameters and certificate ----------------------------------------------------


def _as_t_poly(p, field: NumberField) -> Poly:
    if isinstance(p, Poly):
        q = p.with_field(field)
        if not q.is_univariate():
            raise ValueError(f"{p} is not univariate in t")
        used = q.support_variables()
        if used and used[0] != "t":
            q = q.substitute({used[0]: Poly.variable("t", field)})
        return q.with_variables(("t",)) if q.variables != ("t",) else q
    return Poly.constant(field.elem(p), field, ("t",))


@dataclass(frozen=True)
class EtaleParams:
    """The tuple (k, r, a, alpha, d, lambda, R0, R1, R2) of the family."""
    k: int
    r: int
    a: int
    alpha: int
    d: int
    lam: FieldElement
    R0: Poly
    R1: Poly
    R2: Poly

    def __post_init__(self):
        if self.k < 2 or self.r < 2:
            raise ValueError("parameters need k, r >= 2")
        if self.alpha not in (0, 1):
            raise ValueError("alpha must be 0 or 1")
        if math.gcd(self.a, self.k) != 1:
            raise ValueError("a must be coprime with k")
        if self.alpha == 0 and self.a != 1:
            raise ValueError("alpha = 0 forces a = 1")
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if not isinstance(self.lam, FieldElement):
            object.__setattr__(self, "lam", QQ.elem(self.lam))
        if self.lam.is_zero():
            raise ValueError("lambda must be nonzero")
        field = self.lam.field
        for rp in (self.R0, self.R1, self.R2):
            if isinstance(rp, Poly) and not rp.field.is_rational:
                field = rp.field
        if field != self.lam.field:
            object.__setattr__(self, "lam", field.coerce(self.lam))
        object.__setattr__(self, "R0", _as_t_poly(self.R0, field))
        object.__setattr__(self, "R1", _as_t_poly(self.R1, field))
        object.__setattr__(self, "R2", _as_t_poly(self.R2, field))

    @property
    def field(self) -> NumberField:
        return self.lam.field

    def to_json(self) -> dict:
        from .polyparse import print_poly
        name = "QQ" if self.field == QQ else self.field.minpoly_str()
        return {
            "k": self.k, "r": self.r, "a": self.a,
            "alpha": self.alpha, "d": self.d,
            "field": name,
            "lambda": [str(c) for c in self.lam.coords],
            "R0": print_poly(self.R0),
            "R1": print_poly(self.R1),
            "R2": print_poly(self.R2),
        }


def params_from_json(data: dict) -> EtaleParams:
    from .polyparse import parse_poly
    field = field_from_string(data["field"])
    lam = field.from_coords([Fraction(c) for c in data["lambda"]])
    return EtaleParams(
        k=int(data["k"]), r=int(data["r"]), a=int(data["a"]),
        alpha=int(data["alpha"]), d=int(data["d"]), lam=lam,
        R0=parse_poly(data["R0"], ("t",), field),
        R1=parse_poly(data["R1"], ("t",), field),
        R2=parse_poly(data["R2"], ("t",), field),
    )


def ri_degrees(k: int, r: int, alpha: int, d: int) -> tuple[Fraction, Fraction, Fraction]:
    """The derived degrees (d0, d1, d2) as exact fractions.

    d2 = (d - alpha - r(1-alpha)) / (k(r-1)),
    d1 = d2 (r-1) + (1-alpha) r/k,
    d0 = (d2 k + 1 - alpha)(r - 1 - r/k).
    """
    d2 = Fraction(d - alpha - r * (1 - alpha), k * (r - 1))
    d1 = d2 * (r - 1) + Fraction((1 - alpha) * r, k)
    d0 = (d2 * k + 1 - alpha) * (r - 1 - Fraction(r, k))
    return d0, d1, d2


@dataclass(frozen=True)
class EtaleCertificate:
    """Named exact checks; the verdict is their conjunction."""
    params: EtaleParams
    checks: dict
    verdict: bool

    def failing(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.checks.items() if not ok)


def etale_certificate(p: EtaleParams) -> EtaleCertificate:
    """Evaluate the five certificate conditions, all exactly.

    C1  two-sided identity t(1-t)^((1-alpha)r/k) R0 R2^r = 1 - (1-t)^alpha R1^k
    C2  the derived degrees are nonnegative integers matching deg R0, R1, R2
    C3  (1-t) R0 R1 R2 separable; R1(0) = R2(0) = 1, R0(0) != 0
    C4  d = alpha + r(1-alpha)  mod k(r-1)
    C5  alpha = 1, or k | r and alpha = 0 (with a = 1)
    """
    field = p.field
    checks: dict[str, bool] = {}
    kr_ok = p.alpha == 1 or (p.alpha == 0 and p.r % p.k == 0)
    checks["C5_alpha_kr"] = kr_ok and math.gcd(p.a, p.k) == 1 and \
        (p.alpha == 1 or p.a == 1)

    d0, d1, d2 = ri_degrees(p.k, p.r, p.alpha, p.d)
    ints_ok = all(x.denominator == 1 and x >= 0 for x in (d0, d1, d2))
    checks["C2_degrees"] = ints_ok and (
        p.R0.total_degree() == d0
        and p.R1.total_degree() == d1
        and p.R2.total_degree() == d2)

    modulus = p.k * (p.r - 1)
    checks["C4_congruence"] = (p.d - (p.alpha + p.r * (1 - p.alpha))) % modulus == 0

    t = Poly.variable("t", field)
    if p.alpha == 0 and p.r % p.k != 0:
        checks["C1_identity"] = False
    else:
        exp = (1 - p.alpha) * p.r // p.k
        lhs = t * (1 - t) ** exp * p.R0 * p.R2 ** p.r
        rhs = 1 - (1 - t) ** p.alpha * p.R1 ** p.k
        checks["C1_identity"] = lhs == rhs

    sep_poly = (1 - t) * p.R0 * p.R1 * p.R2
    checks["C3_separability"] = (not sep_poly.is_zero()) and is_separable(sep_poly)
    zero = {"t": field.zero()}
    one = field.one()
    checks["C3_normalization"] = (
        p.R1.evaluate(zero) == one
        and p.R2.evaluate(zero) == one
        and not p.R0.evaluate(zero).is_zero())

    return EtaleCertificate(p, checks, all(checks.values()))


@dataclass(frozen=True)
class BuildResult:
    tilde_map: SurfaceMap
    hyper_map: SurfaceMap | None


def build_from_params(p: EtaleParams) -> BuildResult:
    """The lift on tilde(k, r), and the descended self-map of the
    hypersurface model when a = 1 and k | r."""
    cert = etale_certificate(p)
    if not cert.verdict:
        raise CertificateRequired(cert)
    field = p.field
    k, r, alpha = p.k, p.r, p.alpha

    s = tilde_surface(k, r)
    x = Poly.variable("x", field, s.vars)
    y = Poly.variable("y", field, s.vars)
    z = Poly.variable("z", field, s.vars)
    tz = 1 - z ** k
    eta1 = x * z ** (1 - alpha) * compose(p.R2, tz) * p.lam
    eta2 = y * compose(p.R0, tz) * (p.lam ** (-r))
    eta3 = z ** alpha * compose(p.R1, tz)
    tilde_map = make_map(s, s, (eta1, eta2, eta3), meta=p)

    hyper_map = None
    if p.a == 1 and r % k == 0:
        rbar = r // k
        h = hyper_surface(k, rbar)
        u = Poly.variable("u", field, h.vars)
        v = Poly.variable("v", field, h.vars)
        w = Poly.variable("w", field, h.vars)
        tu = -(u ** rbar) * v
        r2t = compose(p.R2, tu)
        h1 = u * (1 - tu) ** (1 - alpha) * (r2t ** k) * (p.lam ** k)
        h2 = v * compose(p.R0, tu) * (p.lam ** (-r))
        h3 = w * compose(p.R1, tu) * r2t * p.lam
        hyper_map = make_map(h, h, (h1, h2, h3), meta=p)
    return BuildResult(tilde_map, hyper_map)


# -- independent Jacobian oracle -----------------------------------------------------


def _chart_rational(p: Poly, s: SurfaceSpec) -> tuple[Poly, int]:
    """p with the middle variable eliminated on the chart {first var != 0}.

    Returns (N, e) with p = N / first^e on the chart, where the middle
    variable was replaced using the surface relation (y = (z^k-1)/x^r on
    tilde, v = (w^k-u)/u^(rbar+1) on hyper).
    """
    first, middle, last = s.vars
    field = p.field
    f = Poly.variable(first, field, (first, last))
    l = Poly.variable(last, field, (first, last))
    if s.model == "tilde":
        num = l ** s.k - 1
        den_pow = s.r
    else:
        num = l ** s.k - f
        den_pow = s.r + 1
    m = p.degree_in(middle) if middle in p.variables else 0
    m = max(m, 0)
    out = Poly.zero(field, (first, last))
    for key, c in p.terms.items():
        exps = dict(zip(p.variables, key))
        a = exps.get(first, 0)
        b = exps.get(middle, 0)
        cc = exps.get(last, 0)
        term = Poly.constant(c, field, (first, last))
        term = term * f ** (a + den_pow * (m - b)) * (num ** b) * l ** cc
        out = out + term
    return out, den_pow * m


def jacobian_det_at(m: SurfaceMap, pt: SurfacePoint) -> FieldElement:
    """Exact determinant of the induced chart map at pt.

    The chart solves the middle variable from the relation on {first != 0};
    both pt and its image must lie in the chart (ChartDegenerate otherwise).
    The first and last variables are etale coordinates there, so the map is
    etale at pt iff this determinant is nonzero.
    """
    if m.extra_variables():
        raise ValueError("spot-check needs numeric coordinates, not parameters")
    if pt.coords[0].is_zero():
        raise ChartDegenerate("sample has vanishing first coordinate")
    image = apply_map(m, pt)
    if image.coords[0].is_zero():
        raise ChartDegenerate("image has vanishing first coordinate")
    first, _, last = m.source.vars
    env = {first: pt.coords[0], last: pt.coords[2]}
    x0 = pt.coords[0]

    rows = []
    for idx in (0, 2):
        num, e = _chart_rational(m.coords[idx], m.source)
        n_val = num.evaluate(env)
        dx_val = num.derivative(first).evaluate(env)
        dz_val = num.derivative(last).evaluate(env)
        # d/dx (N/x^e) = (N' x - e N)/x^(e+1);  d/dz (N/x^e) = N_z / x^e
        rows.append(((dx_val * x0 - e * n_val) / x0 ** (e + 1),
                     dz_val / x0 ** e))
    return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]


def jacobian_spotcheck(m: SurfaceMap, n: int = 25, seed: int = 0,
                       max_retries: int = 200) -> bool:
    """True iff the chart Jacobian determinant is nonzero at n seeded points.

    Points (or images) falling off the chart are redrawn, with a bounded
    number of retries.
    """
    rng = SplitMix64(seed)
    checked = 0
    retries = 0
    while checked < n:
        pt = sample_point(m.source, seed=0, rng=rng)
        try:
            det = jacobian_det_at(m, pt)
        except ChartDegenerate:
            retries += 1
            if retries > max_retries:
                raise ChartDegenerate(
                    f"could not find {n} chart-valid samples after {max_retries} retries")
            continue
        if det.is_zero():
            return False
        checked += 1
    return True


# -- map serialization ------------------------------------------------------------


def map_to_json(m: SurfaceMap) -> dict:
    from .polyparse import print_poly
    name = "QQ" if m.field == QQ else m.field.minpoly_str()
    return {
        "source": m.source.surface_id(),
        "target": m.target.surface_id(),
        "coords": [print_poly(c) for c in m.coords],
        "field": name,
    }


def map_from_json(data: dict) -> SurfaceMap:
    from .polyparse import parse_poly
    from .surface import parse_surface_id
    source = parse_surface_id(data["source"])
    target = parse_surface_id(data["target"])
    field = field_from_string(data["field"])
    coords = tuple(parse_poly(c, source.vars, field) for c in data["coords"])
    return make_map(source, target, coords)
