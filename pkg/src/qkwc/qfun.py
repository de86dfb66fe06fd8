"""Rational functions in the loop variable q over a coefficient ring.

A :class:`QRational` is a Laurent-polynomial numerator over a factored
denominator ``prod (1 - q**a * u)**mult`` with ``a > 0`` and ``u`` a ring
unit.  Factors built with negative ``a`` are normalized on construction via
``1 - q**-a * u == -q**-a * u * (1 - q**a * u**-1)``.  This shape keeps all
poles away from q = 0 and q = infinity, so:

- expansions at 0 and infinity are exact truncated Laurent series;
- every element splits as (Laurent polynomial) + (proper part regular at 0
  and vanishing at infinity);
- the residue ``Res = Res_0 + Res_inf`` of ``f dq/q`` is computable in
  closed form.

No polynomial cancellation is ever performed; equality is decided by
cross-multiplication, which is sound because every denominator factor has
unit leading and trailing coefficients (hence is a non-zero-divisor).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, NamedTuple

from qkwc.ringcore import RingElem, RingError, RingSpec


class QLaurent:
    """Laurent polynomial in q: sparse map exponent -> RingElem."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: Mapping[int, RingElem] | None = None):
        self.spec = spec
        self.coeffs: dict[int, RingElem] = {}
        if coeffs:
            for e, c in coeffs.items():
                if not c.is_zero():
                    self.coeffs[e] = c

    @staticmethod
    def from_scalar(spec: RingSpec, c) -> "QLaurent":
        return QLaurent(spec, {0: spec.scalar(c)})

    @staticmethod
    def from_elem(c: RingElem, exp: int = 0) -> "QLaurent":
        return QLaurent(c.spec, {exp: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise RingError("degree of zero is undefined")
        return max(self.coeffs)

    def order(self) -> int:
        if not self.coeffs:
            raise RingError("order of zero is undefined")
        return min(self.coeffs)

    def coeff(self, e: int) -> RingElem:
        return self.coeffs.get(e, self.spec.zero())

    def __add__(self, other: "QLaurent") -> "QLaurent":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return QLaurent(self.spec, out)

    def __neg__(self) -> "QLaurent":
        return QLaurent(self.spec, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "QLaurent") -> "QLaurent":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElem):
            return QLaurent(self.spec, {e: c * other for e, c in self.coeffs.items()})
        if isinstance(other, (int, Fraction)):
            return QLaurent(self.spec, {e: c * other for e, c in self.coeffs.items()})
        out: dict[int, RingElem] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                p = c1 * c2
                if p.is_zero():
                    continue
                s = out.get(e)
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return QLaurent(self.spec, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QLaurent":
        return QLaurent(self.spec, {e + k: c for e, c in self.coeffs.items()})

    def truncate_above(self, n: int) -> "QLaurent":
        return QLaurent(self.spec, {e: c for e, c in self.coeffs.items() if e <= n})

    def eval_at_one(self) -> RingElem:
        out = self.spec.zero()
        for c in self.coeffs.values():
            out = out + c
        return out

    def substitute(self, r: int, u: RingElem) -> "QLaurent":
        """q |-> q**r * u, exactly."""
        if r == 0:
            raise RingError("substitution exponent must be nonzero")
        out: dict[int, RingElem] = {}
        for e, c in self.coeffs.items():
            val = c * _unit_power(u, e)
            if val.is_zero():
                continue
            key = r * e
            s = out.get(key)
            s = val if s is None else s + val
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return QLaurent(self.spec, out)

    def __eq__(self, other):
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec, tuple(sorted((e, hash(c)) for e, c in self.coeffs.items()))))

    def to_json(self) -> dict:
        return {str(e): self.coeffs[e].to_json() for e in sorted(self.coeffs)}

    @staticmethod
    def from_json(spec: RingSpec, data: Mapping) -> "QLaurent":
        return QLaurent(spec, {int(e): RingElem.from_json(spec, c) for e, c in data.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.coeffs[e]!r})*q^{e}" for e in sorted(self.coeffs))


def _unit_power(u: RingElem, e: int) -> RingElem:
    if e == 0:
        return u.spec.one()
    if e > 0:
        return u**e
    return u.inverse() ** (-e)


class QFactor(NamedTuple):
    """One denominator factor ``(1 - q**a * u)**mult`` with ``a > 0``."""

    a: int
    u: RingElem
    mult: int

    def key(self):
        return (self.a, tuple(sorted(self.u.coeffs.items())))


class QRational:
    """Numerator over a factored denominator; representation non-canonical."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, num: QLaurent, factors: Iterable[tuple[int, RingElem, int]] = ()):
        """Build ``num / prod (1 - q**a * u)**mult``; factors with ``a < 0``
        are normalized into positive-exponent form (adjusting ``num``)."""
        self.spec = num.spec
        merged: dict = {}
        for a, u, mult in factors:
            if a == 0:
                raise RingError("denominator factor exponent must be nonzero")
            if mult <= 0:
                raise RingError("denominator multiplicity must be positive")
            if not u.is_unit():
                raise RingError("denominator factor base must be a unit")
            if a < 0:
                # 1 - q**a u = -q**a u (1 - q**-a u**-1): dividing by the
                # factor multiplies the numerator by (-q**-a u**-1)**mult
                num = (num * ((-(u.inverse())) ** mult)).shift(-a * mult)
                a, u = -a, u.inverse()
            f = QFactor(a, u, mult)
            k = f.key()
            if k in merged:
                old = merged[k]
                merged[k] = QFactor(old.a, old.u, old.mult + mult)
            else:
                merged[k] = f
        self.num = num
        self.den = tuple(merged[k] for k in sorted(merged))

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_laurent(p: QLaurent) -> "QRational":
        return QRational(p)

    @staticmethod
    def from_elem(c: RingElem) -> "QRational":
        return QRational(QLaurent.from_elem(c))

    @staticmethod
    def one(spec: RingSpec) -> "QRational":
        return QRational(QLaurent.from_scalar(spec, 1))

    @staticmethod
    def zero(spec: RingSpec) -> "QRational":
        return QRational(QLaurent(spec))

    @staticmethod
    def q_power(spec: RingSpec, e: int) -> "QRational":
        return QRational(QLaurent(spec, {e: spec.one()}))

    def is_zero_repr(self) -> bool:
        return self.num.is_zero()

    # -- arithmetic -------------------------------------------------------------

    def _with(self, num: QLaurent, den: tuple[QFactor, ...]) -> "QRational":
        out = QRational.__new__(QRational)
        out.spec = self.spec
        out.num = num
        out.den = den
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return self._with(self.num * other, self.den)
        if isinstance(other, QLaurent):
            return self._with(self.num * other, self.den)
        if self.spec != other.spec:
            raise RingError("ring spec mismatch")
        return QRational(self.num * other.num, [(f.a, f.u, f.mult) for f in self.den + other.den])

    __rmul__ = __mul__

    def __neg__(self):
        return self._with(-self.num, self.den)

    def __add__(self, other: "QRational") -> "QRational":
        if self.spec != other.spec:
            raise RingError("ring spec mismatch")
        common: dict = {}
        for f in self.den + other.den:
            k = f.key()
            if k in common:
                common[k] = QFactor(f.a, f.u, max(common[k].mult, f.mult))
            else:
                common[k] = f
        den = tuple(common[k] for k in sorted(common))
        num = self.num * _cofactor(self.spec, den, self.den) + other.num * _cofactor(
            self.spec, den, other.den
        )
        return self._with(num, den)

    def __sub__(self, other):
        return self + (-other)

    def den_expanded(self) -> QLaurent:
        return _expand_factors(self.spec, self.den)

    def den_degree(self) -> int:
        return sum(f.a * f.mult for f in self.den)

    def __eq__(self, other):
        if not isinstance(other, QRational):
            return NotImplemented
        if self.spec != other.spec:
            return False
        return (self.num * other.den_expanded()) == (other.num * self.den_expanded())

    def __hash__(self):
        raise TypeError("QRational is unhashable (equality is by cross-multiplication)")

    # -- substitution and expansion ------------------------------------------------

    def substitute(self, r: int, u: RingElem) -> "QRational":
        """q |-> q**r * u.  Factors are renormalized if r < 0."""
        num = self.num.substitute(r, u)
        factors = []
        for f in self.den:
            factors.append((r * f.a, f.u * _unit_power(u, f.a), f.mult))
        return QRational(num, factors)

    def expand_at_zero(self, n: int) -> QLaurent:
        """Exact formal Laurent expansion around q = 0 through degree ``n``.

        Each ``1/(1 - q**a u)**m`` becomes ``sum_i C(i+m-1, m-1) q**(a i) u**i``;
        finitely many negative exponents occur, bounded by the numerator
        order."""
        if self.num.is_zero():
            return QLaurent(self.spec)
        series = self.num.truncate_above(n)
        for f in self.den:
            if series.is_zero():
                return series
            floor = series.order()
            terms: dict[int, RingElem] = {}
            ui = self.spec.one()
            i = 0
            while floor + f.a * i <= n:
                c = ui * comb(i + f.mult - 1, f.mult - 1)
                if not c.is_zero():
                    terms[f.a * i] = c
                ui = ui * f.u
                i += 1
            series = (series * QLaurent(self.spec, terms)).truncate_above(n)
        return series

    def reciprocal(self) -> "QRational":
        """Exact q |-> 1/q."""
        return self.substitute(-1, self.spec.one())

    def expand_at_infinity(self, n: int) -> QLaurent:
        """Expansion of ``f(1/w)`` around w = 0 through degree ``n`` (the
        returned exponents are w-exponents)."""
        return self.reciprocal().expand_at_zero(n)

    # -- splitting and residue --------------------------------------------------------

    def split(self) -> tuple[QLaurent, "QRational"]:
        """Decompose ``f = plus + minus`` with ``plus`` a Laurent polynomial
        and ``minus`` proper: regular at 0 and vanishing at infinity.

        Works over the common denominator ``D``: the numerator top degree is
        reduced against the unit leading coefficient of ``D`` first, then
        negative orders against the unit constant term."""
        spec = self.spec
        den = self.den
        dpoly = _expand_factors(spec, den)
        delta = self.den_degree()
        lead = dpoly.coeff(delta)
        lead_inv = lead.inverse()
        num = self.num
        plus = QLaurent(spec)
        while not num.is_zero() and num.degree() >= delta:
            e = num.degree()
            c = num.coeffs[e] * lead_inv
            q_sh = e - delta
            plus = plus + QLaurent(spec, {q_sh: c})
            num = num - dpoly.shift(q_sh) * c
        while not num.is_zero() and num.order() < 0:
            e = num.order()
            c = num.coeffs[e]  # constant term of D is 1
            plus = plus + QLaurent(spec, {e: c})
            num = num - dpoly.shift(e) * c
        minus = self._with(num, den)
        return plus, minus

    def residue(self) -> RingElem:
        """``Res = Res_0 + Res_inf`` of ``f dq/q``: the constant expansion
        coefficient at 0 minus the constant coefficient of the expansion of
        ``f(1/w)`` at 0.  Cross-checked against evaluating the proper part
        at q = 0."""
        at_zero = self.expand_at_zero(0).coeff(0)
        at_inf = self.expand_at_infinity(0).coeff(0)
        out = at_zero - at_inf
        _, minus = self.split()
        alt = minus.expand_at_zero(0).coeff(0)
        if alt != out:
            raise RingError("residue cross-check failed: expansion and split routes disagree")
        return out

    def to_json(self) -> dict:
        return {
            "num": self.num.to_json(),
            "den": [[f.a, f.u.to_json(), f.mult] for f in self.den],
        }

    @staticmethod
    def from_json(spec: RingSpec, data: Mapping) -> "QRational":
        num = QLaurent.from_json(spec, data["num"])
        factors = [(int(a), RingElem.from_json(spec, u), int(m)) for a, u, m in data["den"]]
        return QRational(num, factors)

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        dens = " * ".join(f"(1 - q^{f.a}*({f.u!r}))^{f.mult}" for f in self.den)
        return f"[{self.num!r}] / [{dens}]"


def _expand_factors(spec: RingSpec, factors: Iterable[QFactor]) -> QLaurent:
    out = QLaurent.from_scalar(spec, 1)
    for f in factors:
        base = QLaurent(spec, {0: spec.one(), f.a: -f.u})
        for _ in range(f.mult):
            out = out * base
    return out


def _cofactor(spec: RingSpec, total: tuple[QFactor, ...], part: tuple[QFactor, ...]) -> QLaurent:
    have = {f.key(): f.mult for f in part}
    missing = []
    for f in total:
        extra = f.mult - have.get(f.key(), 0)
        if extra:
            missing.append(QFactor(f.a, f.u, extra))
    return _expand_factors(spec, missing)


# Functional aliases matching the operation names used elsewhere.


def substitute(f: QRational, r: int, u: RingElem) -> QRational:
    return f.substitute(r, u)


def expand_at_zero(f: QRational, n: int) -> QLaurent:
    return f.expand_at_zero(n)


def expand_at_infinity(f: QRational, n: int) -> QLaurent:
    return f.expand_at_infinity(n)


def split(f: QRational) -> tuple[QLaurent, QRational]:
    return f.split()


def residue(f: QRational) -> RingElem:
    return f.residue()
