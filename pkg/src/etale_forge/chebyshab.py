"""Chebyshev polynomial generators and branched-cover feasibility arithmetic.

T_n is generated by the recurrence T_n = 2x T_(n-1) - T_(n-2) with T_0 = 1
and T_1 = x; U_n is the rescaled derivative T_(n+1)'/(n+1).  The feasibility
test for a ramification profile over an ordered branching locus checks the
two counting conditions for branched self-covers of the affine line; the
Chebyshev recognizer decides the normalized characterization through the
exact identity P^2 - 1 = (x^2 - 1)(P'/n)^2 together with P(1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numfield import QQ, FieldElement
from .polyalg import ArityError, Poly, compose, multiplicity_profile


_T_CACHE: list[Poly] = []
_X = Poly.variable("x", QQ)


def chebyshev_T(n: int) -> Poly:
    """Degree-n Chebyshev polynomial of the first kind, by the recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not _T_CACHE:
        _T_CACHE.append(Poly.constant(1, QQ, ("x",)))
        _T_CACHE.append(_X)
    while len(_T_CACHE) <= n:
        m = len(_T_CACHE)
        _T_CACHE.append(2 * _X * _T_CACHE[m - 1] - _T_CACHE[m - 2])
    return _T_CACHE[n]


def chebyshev_U(n: int) -> Poly:
    """Degree-n Chebyshev polynomial of the second kind: T_(n+1)'/(n+1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    d = chebyshev_T(n + 1).derivative()
    return d * Poly.constant(QQ.elem(1) / (n + 1), QQ, ("x",))


@dataclass(frozen=True)
class RamificationProfile:
    """Ordered multiplicity partitions over an ordered branching locus."""
    branch_points: tuple[FieldElement, ...]
    partitions: tuple[tuple[int, ...], ...]
    degree: int

    def __post_init__(self):
        if len(self.branch_points) != len(self.partitions):
            raise ValueError("one partition per branch point")
        for part in self.partitions:
            if not part or any(e < 1 for e in part):
                raise ValueError(f"invalid partition {part}")
            if any(part[i] < part[i + 1] for i in range(len(part) - 1)):
                raise ValueError(f"partition {part} is not non-increasing")


@dataclass(frozen=True)
class ThomResult:
    feasible: bool
    diagnostics: tuple[str, ...] = ()


def thom_feasible(profile: RamificationProfile) -> ThomResult:
    """The two counting conditions for branched self-covers of the line.

    (1) every partition sums to the degree d;
    (2) the total number of parts equals (n-1)d + 1 for n branch points.
    """
    d = profile.degree
    problems = []
    for pt, part in zip(profile.branch_points, profile.partitions):
        if sum(part) != d:
            problems.append(
                f"condition (1): partition over {pt} sums to {sum(part)}, not {d}")
    n = len(profile.partitions)
    total_parts = sum(len(part) for part in profile.partitions)
    expected = (n - 1) * d + 1
    if total_parts != expected:
        problems.append(
            f"condition (2): {total_parts} parts, expected (n-1)d+1 = {expected}")
    return ThomResult(not problems, tuple(problems))


@dataclass(frozen=True)
class ChebyshevVerdict:
    is_chebyshev: bool
    n: int | None = None
    reason: str | None = None


def is_chebyshev_normalized(P: Poly) -> ChebyshevVerdict:
    """Decide P == T_n for n = deg P, in the normalized form.

    Exact criterion: P^2 - 1 = (x^2 - 1) Q^2 with Q = P'/n forces P = +-T_n
    (the identity bootstraps the Chebyshev differential equation), and
    P(1) = 1 picks the sign.  No search over affine reparameterizations.
    """
    if not P.is_univariate() or P.total_degree() < 1:
        raise ArityError("expected a univariate polynomial of degree >= 1")
    n = P.total_degree()
    used = P.support_variables()
    var = used[0]
    x = Poly.variable(var, P.field)
    Q = P.derivative() * Poly.constant(P.field.elem(1) / P.field.elem(n), P.field)
    if P * P - 1 != (x * x - 1) * Q * Q:
        return ChebyshevVerdict(False, reason="P^2 - 1 != (x^2 - 1)(P'/n)^2")
    one = P.field.one()
    if P.evaluate({var: one}) != one:
        return ChebyshevVerdict(False, reason="P(1) != 1 (P = -T_n)")
    return ChebyshevVerdict(True, n=n)


@dataclass(frozen=True)
class MoreThanTwoCriticalValues:
    """Returned when the branch-count over {0, 1} misses the Hurwitz bound."""
    parts_found: int
    parts_expected: int


def extract_profile(phi: Poly):
    """Ramification profile of phi over the normalized branch points {0, 1}.

    The Hurwitz count certifies that no third branch point exists: over two
    points the total number of parts must be d + 1.  Degree-one maps report
    the trivial profile over (0).
    """
    if not phi.is_univariate() or phi.total_degree() < 1:
        raise ArityError("expected a univariate polynomial of degree >= 1")
    field = phi.field
    d = phi.total_degree()
    if d == 1:
        return RamificationProfile((field.zero(),), ((1,),), 1)
    lam0 = multiplicity_profile(phi, field.zero())
    lam1 = multiplicity_profile(phi, field.one())
    found = len(lam0) + len(lam1)
    if found != d + 1:
        return MoreThanTwoCriticalValues(found, d + 1)
    return RamificationProfile((field.zero(), field.one()), (lam0, lam1), d)


def chebyshev_shabat(n: int) -> Poly:
    """T_n renormalized to branch points {0, 1}: t -> (1 + T_n(2t - 1))/2."""
    t = Poly.variable("t", QQ)
    half = Poly.constant(QQ.elem("1/2"), QQ, ("t",))
    return (compose(chebyshev_T(n), 2 * t - 1) + 1) * half
