"""q-hypergeometric series, presets, and mirror-map truncations.

Series are configuration data: a per-class factor rule assigns to every
curve class a monomial prefactor ``q**a * u`` and a list of signed factors
``(step, base, exponent)`` standing for ``(1 - q**step * base)**exponent``
(negative exponents are denominator factors).  The degree-0 coefficient is
always 1.  Presets are validated against structural identities (the
q-difference recursion for projective space) instead of being trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from qkwc.novikov import ConeSpec, CurveClass, NovikovSeries
from qkwc.qfun import QLaurent, QRational
from qkwc.ringcore import RingElem, RingError, RingSpec

FactorRule = Callable[[CurveClass], tuple[tuple[int, RingElem], list[tuple[int, RingElem, int]]]]


@dataclass
class HypergeomSpec:
    """Declarative description of a small hypergeometric series.

    ``rule(beta) -> ((q_power, unit_prefactor), [(step, base, exponent), ..])``
    for nonzero classes.  ``name`` is echoed in JSON reports.
    """

    cone: ConeSpec
    ring: RingSpec
    rule: FactorRule
    name: str = "custom"

    def coefficient(self, beta: CurveClass) -> QRational:
        """The series coefficient at ``Q**beta`` as an exact rational
        function of q."""
        if beta == self.cone.zero:
            return QRational.one(self.ring)
        (q_pow, unit), factors = self.rule(beta)
        if not unit.is_unit():
            raise RingError("prefactor must be a unit")
        num = QLaurent(self.ring, {q_pow: unit})
        den = []
        for step, base, exp in factors:
            if exp == 0:
                continue
            if exp > 0:
                poly = QLaurent(self.ring, {0: self.ring.one(), step: -base})
                for _ in range(exp):
                    num = num * poly
            else:
                den.append((step, base, -exp))
        return QRational(num, den)


def evaluate(spec: HypergeomSpec, max_degree=None) -> NovikovSeries:
    """Evaluate the series through the requested Novikov degree."""
    cone = spec.cone
    if max_degree is not None:
        cone = ConeSpec(cone.rank, cone.weights, Fraction(max_degree))
    terms = {}
    for beta in cone.classes_up_to(cone.max_degree):
        terms[beta] = spec.coefficient(beta)
    return NovikovSeries(cone, spec.ring, terms)


def preset_projective(n: int, max_degree=4) -> HypergeomSpec:
    """Projective space of dimension ``n - 1``: coefficient ring
    ``Q[nu]/(nu**n)`` with hyperplane class ``P = 1 - nu``, degree-d
    coefficient ``prod_{i=1..d} (1 - q**i P)**(-n)``.

    The preset is checked (in the test suite) against the q-difference
    recursion ``(1 - q**d P)**n * I_d = I_{d-1}``, which pins it down
    uniquely given the degree-0 value 1.
    """
    if n < 2:
        raise RingError("projective preset needs n >= 2")
    ring = RingSpec(nilpotents=(("nu", n),))
    p_class = ring.one() - ring.gen("nu")
    cone = ConeSpec(1, (Fraction(1),), Fraction(max_degree))

    def rule(beta: CurveClass):
        (d,) = beta
        return (0, ring.one()), [(i, p_class, -n) for i in range(1, d + 1)]

    return HypergeomSpec(cone, ring, rule, name=f"projective{n}")


def twist_I(spec: HypergeomSpec, prefactor: Callable[[CurveClass], tuple[int, RingElem]], name=None) -> HypergeomSpec:
    """Compose a per-class monomial prefactor ``q**a(beta) * u(beta)`` into
    the factor rule."""

    def rule(beta: CurveClass):
        (q_pow, unit), factors = spec.rule(beta)
        extra_q, extra_u = prefactor(beta)
        return (q_pow + extra_q, unit * extra_u), factors

    return HypergeomSpec(spec.cone, spec.ring, rule, name=name or f"{spec.name}+twist")


def toy_twist_p1(max_degree=4) -> HypergeomSpec:
    """The degree-d prefactor ``q**d`` on the projective line: the smallest
    preset with a nonvanishing mirror map."""
    base = preset_projective(2, max_degree)
    return twist_I(base, lambda b: (b[0], base.ring.one()), name="toy-twisted-p1")


def mu_beta(series: NovikovSeries, beta: CurveClass) -> QLaurent:
    """Mirror-map coefficient: the Laurent-polynomial part of
    ``(1 - q) * I_beta``."""
    if beta == series.cone.zero:
        raise RingError("mu is undefined at the zero class")
    if series.cone.degree(beta) > series.cone.max_degree:
        raise RingError("class outside the series truncation")
    one_minus_q = QLaurent(series.ring, {0: series.ring.one(), 1: -series.ring.one()})
    plus, _ = (series.coeff(beta) * one_minus_q).split()
    return plus


class MuSeries:
    """Mirror-map data: nonzero classes -> Laurent polynomials."""

    __slots__ = ("cone", "ring", "terms")

    def __init__(self, cone: ConeSpec, ring: RingSpec, terms: Mapping[CurveClass, QLaurent]):
        self.cone = cone
        self.ring = ring
        self.terms = {b: t for b, t in terms.items() if not t.is_zero()}

    def coeff(self, beta: CurveClass) -> QLaurent:
        return self.terms.get(beta, QLaurent(self.ring))

    def restrict_to_degree(self, d0) -> "MuSeries":
        d0 = Fraction(d0)
        return MuSeries(
            self.cone, self.ring,
            {b: t for b, t in self.terms.items() if self.cone.degree(b) == d0},
        )

    def __eq__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        return self.cone == other.cone and self.terms == other.terms

    def to_json(self) -> list:
        return [[list(b), self.terms[b].to_json()] for b in sorted(self.terms)]

    def __repr__(self):
        return " + ".join(f"Q^{b}*({t!r})" for b, t in sorted(self.terms.items())) or "0"


def mu_geq_epsilon(series: NovikovSeries, epsilon) -> MuSeries:
    """All mirror-map coefficients in the wall range ``0 < deg <= 1/epsilon``."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise RingError("epsilon must be positive")
    bound = min(1 / epsilon, series.cone.max_degree)
    terms = {}
    for beta in series.cone.classes_up_to(bound):
        if beta == series.cone.zero:
            continue
        terms[beta] = mu_beta(series, beta)
    return MuSeries(series.cone, series.ring, terms)


def small_j_from_I(series: NovikovSeries) -> NovikovSeries:
    """Multiply termwise by ``1 - q``."""
    one_minus_q = QLaurent(series.ring, {0: series.ring.one(), 1: -series.ring.one()})
    return series.map_coeffs(lambda _, f: f * one_minus_q)


def q_difference_holds(spec: HypergeomSpec, n: int, max_degree: int) -> bool:
    """Independent oracle for projective presets: checks
    ``(1 - q**d P)**n I_d == I_{d-1}`` for all d through the bound."""
    p_class = spec.ring.one() - spec.ring.gen("nu")
    series = evaluate(spec, max_degree)
    for d in range(1, max_degree + 1):
        lhs_poly = QLaurent(spec.ring, {0: spec.ring.one(), d: -p_class})
        acc = QRational.from_laurent(QLaurent.from_scalar(spec.ring, 1))
        for _ in range(n):
            acc = acc * lhs_poly
        if not (acc * series.coeff((d,)) == series.coeff((d - 1,))):
            return False
    return True
