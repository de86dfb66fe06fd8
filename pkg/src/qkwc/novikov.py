"""Effective curve classes, walls, decompositions, and graded series.

A :class:`ConeSpec` declares the effective cone directly: a rank, one
positive rational degree weight per coordinate, and a truncation bound.
Curve classes are lattice vectors in ``N**rank``; their degree is the
weighted coordinate sum.  Stability-style constraints on decompositions are
caller-supplied predicates, never baked in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping

from qkwc.qfun import QRational
from qkwc.ringcore import RingError, RingSpec

CurveClass = tuple[int, ...]


@dataclass(frozen=True)
class ConeSpec:
    rank: int
    weights: tuple[Fraction, ...]
    max_degree: Fraction

    def __init__(self, rank: int, weights=None, max_degree=Fraction(4)):
        if weights is None:
            weights = (Fraction(1),) * rank
        weights = tuple(Fraction(w) for w in weights)
        if len(weights) != rank or any(w <= 0 for w in weights):
            raise RingError("cone weights must be positive, one per coordinate")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "max_degree", Fraction(max_degree))

    @property
    def zero(self) -> CurveClass:
        return (0,) * self.rank

    def degree(self, beta: CurveClass) -> Fraction:
        return sum((w * b for w, b in zip(self.weights, beta)), Fraction(0))

    def classes_up_to(self, bound: Fraction) -> Iterator[CurveClass]:
        """All effective classes (including zero) of degree <= bound."""
        bound = Fraction(bound)
        ranges = [range(int(bound / w) + 1) for w in self.weights]
        for beta in product(*ranges):
            if self.degree(beta) <= bound:
                yield beta

    def classes_of_degree(self, d: Fraction) -> list[CurveClass]:
        d = Fraction(d)
        return [b for b in self.classes_up_to(d) if self.degree(b) == d]

    def add(self, a: CurveClass, b: CurveClass) -> CurveClass:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: CurveClass, b: CurveClass) -> CurveClass | None:
        """Componentwise difference, or None if it leaves the cone."""
        out = tuple(x - y for x, y in zip(a, b))
        return out if all(x >= 0 for x in out) else None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "weights": [str(w) for w in self.weights],
            "max_degree": str(self.max_degree),
        }

    @staticmethod
    def from_json(data: Mapping) -> "ConeSpec":
        return ConeSpec(
            int(data["rank"]),
            [Fraction(w) for w in data["weights"]],
            Fraction(data["max_degree"]),
        )


def walls(cone: ConeSpec, d) -> list[Fraction]:
    """Wall values ``1/d'`` over attainable positive degrees ``d' <= d``,
    sorted descending."""
    d = Fraction(d)
    if d <= 0:
        raise RingError("wall bound must be positive")
    degs = sorted({cone.degree(b) for b in cone.classes_up_to(d)} - {Fraction(0)})
    return [1 / x for x in degs]


def ordered_decompositions(
    cone: ConeSpec,
    beta: CurveClass,
    d0,
    max_tails: int | None = None,
) -> list[tuple[CurveClass, tuple[CurveClass, ...]]]:
    """All ordered tuples ``(beta', (beta_1, .., beta_k))`` with ``k >= 1``,
    ``beta = beta' + sum(beta_i)``, every tail of degree ``d0``, and
    ``beta'`` effective (zero allowed)."""
    d0 = Fraction(d0)
    if d0 <= 0:
        raise RingError("wall degree must be positive")
    tails = cone.classes_of_degree(d0)
    out = []
    kmax = int(cone.degree(beta) / d0)
    if max_tails is not None:
        kmax = min(kmax, max_tails)
    for k in range(1, kmax + 1):
        for combo in product(tails, repeat=k):
            rest = beta
            ok = True
            for t in combo:
                rest = cone.sub(rest, t)
                if rest is None:
                    ok = False
                    break
            if ok:
                out.append((rest, combo))
    return out


def unordered_decompositions(cone, beta, d0, max_tails=None):
    """Multiset version: each S_k-orbit of tails listed once, sorted."""
    seen = {}
    for rest, combo in ordered_decompositions(cone, beta, d0, max_tails):
        key = (rest, tuple(sorted(combo)))
        seen[key] = (rest, tuple(sorted(combo)))
    return sorted(seen.values())


def orbit_stabilizer(tails: Iterable[CurveClass]) -> tuple[int, int]:
    """(orbit size, stabilizer order) of the permutation action on an
    ordered tuple with the given multiset of tails; the product is k!."""
    tails = list(tails)
    mult: dict[CurveClass, int] = {}
    for t in tails:
        mult[t] = mult.get(t, 0) + 1
    stab = 1
    for m in mult.values():
        stab *= factorial(m)
    return factorial(len(tails)) // stab, stab


class NovikovSeries:
    """Degree-truncated series: map CurveClass -> QRational."""

    __slots__ = ("cone", "ring", "terms")

    def __init__(self, cone: ConeSpec, ring: RingSpec, terms: Mapping[CurveClass, QRational] | None = None):
        self.cone = cone
        self.ring = ring
        self.terms: dict[CurveClass, QRational] = {}
        if terms:
            for b, f in terms.items():
                if self.cone.degree(b) <= self.cone.max_degree and not f.is_zero_repr():
                    self.terms[b] = f

    def coeff(self, beta: CurveClass) -> QRational:
        return self.terms.get(beta, QRational.zero(self.ring))

    def _check(self, other: "NovikovSeries"):
        if self.cone != other.cone:
            raise RingError("cone mismatch")
        if self.ring != other.ring:
            raise RingError("ring spec mismatch")

    def __add__(self, other: "NovikovSeries") -> "NovikovSeries":
        self._check(other)
        out = dict(self.terms)
        for b, f in other.terms.items():
            out[b] = out[b] + f if b in out else f
        return NovikovSeries(self.cone, self.ring, out)

    def __mul__(self, other) -> "NovikovSeries":
        if isinstance(other, NovikovSeries):
            self._check(other)
            out: dict[CurveClass, QRational] = {}
            for b1, f1 in self.terms.items():
                for b2, f2 in other.terms.items():
                    b = self.cone.add(b1, b2)
                    if self.cone.degree(b) > self.cone.max_degree:
                        continue
                    p = f1 * f2
                    out[b] = out[b] + p if b in out else p
            return NovikovSeries(self.cone, self.ring, out)
        return NovikovSeries(
            self.cone, self.ring, {b: f * other for b, f in self.terms.items()}
        )

    __rmul__ = __mul__

    def map_coeffs(self, fn: Callable[[CurveClass, QRational], QRational]) -> "NovikovSeries":
        return NovikovSeries(self.cone, self.ring, {b: fn(b, f) for b, f in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        if self.cone != other.cone or self.ring != other.ring:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(self.coeff(b) == other.coeff(b) for b in keys)

    def to_json(self) -> list:
        return [[list(b), self.terms[b].to_json()] for b in sorted(self.terms)]

    @staticmethod
    def from_json(cone: ConeSpec, ring: RingSpec, data) -> "NovikovSeries":
        return NovikovSeries(
            cone, ring, {tuple(b): QRational.from_json(ring, f) for b, f in data}
        )

    def __repr__(self):
        return " + ".join(f"Q^{b}*({f!r})" for b, f in sorted(self.terms.items())) or "0"
