"""Exact arithmetic in finite-dimensional quotient coefficient rings.

A ring is described by a :class:`RingSpec`:

- nilpotent generators ``nu`` with a relation ``nu**order == 0``
  (``P = 1 - nu`` models the hyperplane class, a unit);
- invertible generators with free integer exponents (line-bundle markers);
- Newton generators ``N_1 .. N_M`` of weight ``m``, with every monomial of
  total weight above ``W`` truncated to zero;
- auxiliary deformation variables ``t`` with a symmetric truncation window
  ``|exponent| < cutoff``.

Elements (:class:`RingElem`) are sparse maps from basis monomials to exact
rationals.  All operations return normal forms; nothing is mutated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]


class RingError(ValueError):
    """Raised on spec mismatches, non-unit inversion, unhoused monomials."""


@dataclass(frozen=True)
class RingSpec:
    """Presentation of a quotient coefficient ring.

    ``nilpotents`` is a tuple of ``(name, order)`` pairs, ``units`` a tuple
    of names, ``lambda_max``/``lambda_weight`` the Newton-generator index
    and weight cutoffs, ``t_vars`` a tuple of ``(name, cutoff)`` pairs.
    """

    nilpotents: tuple[tuple[str, int], ...] = ()
    units: tuple[str, ...] = ()
    lambda_max: int = 0
    lambda_weight: int = 0
    t_vars: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.nilpotents] + list(self.units)
        names += [f"N{m}" for m in range(1, self.lambda_max + 1)]
        names += [n for n, _ in self.t_vars]
        if len(set(names)) != len(names):
            raise RingError("generator names must be distinct")
        for name, order in self.nilpotents:
            if order < 1:
                raise RingError(f"nilpotent order must be >= 1 (got {name}^{order})")
        for name, cutoff in self.t_vars:
            if cutoff < 1:
                raise RingError(f"t-cutoff must be >= 1 (got {name}:{cutoff})")
        if self.lambda_max < 0 or self.lambda_weight < 0:
            raise RingError("lambda cutoffs must be nonnegative")

    # -- monomial plumbing -------------------------------------------------

    @property
    def zero_monomial(self) -> Monomial:
        return (
            (0,) * len(self.nilpotents),
            (0,) * len(self.units),
            (0,) * self.lambda_max,
            (0,) * len(self.t_vars),
        )

    def admissible(self, mono: Monomial) -> bool:
        """True if the monomial survives all truncations."""
        nil, _, lam, t = mono
        for e, (_, order) in zip(nil, self.nilpotents):
            if not 0 <= e < order:
                return False
        if sum(m * e for m, e in zip(range(1, self.lambda_max + 1), lam)) > self.lambda_weight:
            return False
        for e, (_, cutoff) in zip(t, self.t_vars):
            if abs(e) >= cutoff:
                return False
        return True

    # -- element constructors ----------------------------------------------

    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def one(self) -> "RingElem":
        return RingElem(self, {self.zero_monomial: Fraction(1)})

    def scalar(self, c) -> "RingElem":
        c = Fraction(c)
        return RingElem(self, {self.zero_monomial: c} if c else {})

    def gen(self, name: str) -> "RingElem":
        """The generator called ``name`` (nilpotent, unit, ``Nm``, or t)."""
        nil, uni, lam, t = (list(x) for x in self.zero_monomial)
        for i, (n, _) in enumerate(self.nilpotents):
            if n == name:
                nil[i] = 1
                return self._mono(nil, uni, lam, t)
        for i, n in enumerate(self.units):
            if n == name:
                uni[i] = 1
                return self._mono(nil, uni, lam, t)
        for m in range(1, self.lambda_max + 1):
            if name == f"N{m}":
                lam[m - 1] = 1
                return self._mono(nil, uni, lam, t)
        for i, (n, _) in enumerate(self.t_vars):
            if n == name:
                t[i] = 1
                return self._mono(nil, uni, lam, t)
        raise RingError(f"no generator named {name!r}")

    def _mono(self, nil, uni, lam, t) -> "RingElem":
        mono = (tuple(nil), tuple(uni), tuple(lam), tuple(t))
        if not self.admissible(mono):
            return self.zero()
        return RingElem(self, {mono: Fraction(1)})

    def unit_monomial(self, exponents: Mapping[str, int], coeff=1) -> "RingElem":
        """``coeff * prod(u**e)`` over unit generators."""
        uni = [0] * len(self.units)
        for name, e in exponents.items():
            uni[self.units.index(name)] = e
        mono = (self.zero_monomial[0], tuple(uni), self.zero_monomial[2], self.zero_monomial[3])
        c = Fraction(coeff)
        return RingElem(self, {mono: c} if c else {})

    def to_json(self) -> dict:
        return {
            "nilpotents": [[n, o] for n, o in self.nilpotents],
            "units": list(self.units),
            "lambda_max": self.lambda_max,
            "lambda_weight": self.lambda_weight,
            "t_vars": [[n, c] for n, c in self.t_vars],
        }

    @staticmethod
    def from_json(data: Mapping) -> "RingSpec":
        return RingSpec(
            nilpotents=tuple((str(n), int(o)) for n, o in data.get("nilpotents", [])),
            units=tuple(str(u) for u in data.get("units", [])),
            lambda_max=int(data.get("lambda_max", 0)),
            lambda_weight=int(data.get("lambda_weight", 0)),
            t_vars=tuple((str(n), int(c)) for n, c in data.get("t_vars", [])),
        )


class RingElem:
    """Normal-form element: sparse map basis monomial -> Fraction."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: Mapping[Monomial, Fraction]):
        self.spec = spec
        self.coeffs = {m: c for m, c in coeffs.items() if c}

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "RingElem"):
        if self.spec != other.spec:
            raise RingError("ring spec mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.scalar(other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return RingElem(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.spec, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.spec.scalar(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return RingElem(self.spec, {m: v * c for m, v in self.coeffs.items()} if c else {})
        self._check(other)
        spec = self.spec
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                mono = tuple(tuple(a + b for a, b in zip(p1, p2)) for p1, p2 in zip(m1, m2))
                if not spec.admissible(mono):
                    continue
                s = out.get(mono, Fraction(0)) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return RingElem(spec, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = Fraction(scalar)
        return RingElem(self.spec, {m: v / c for m, v in self.coeffs.items()})

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.spec.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.scalar(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- structure ----------------------------------------------------------

    def augmentation_split(self):
        """Split into (constant part, rest): the constant part collects all
        monomials with zero nilpotent/lambda/t exponents (unit exponents are
        free)."""
        const, rest = {}, {}
        for m, c in self.coeffs.items():
            nil, _, lam, t = m
            if not any(nil) and not any(lam) and not any(t):
                const[m] = c
            else:
                rest[m] = c
        return RingElem(self.spec, const), RingElem(self.spec, rest)

    def is_unit(self) -> bool:
        const, _ = self.augmentation_split()
        return len(const.coeffs) == 1

    def inverse(self) -> "RingElem":
        """Exact two-sided inverse; raises :class:`RingError` on non-units.

        Inverts the single unit-monomial constant part, then a finite
        geometric series in the remaining (nilpotent) part.
        """
        const, rest = self.augmentation_split()
        if len(const.coeffs) != 1:
            raise RingError("element is not a unit")
        [(mono, c)] = const.coeffs.items()
        inv_mono = (mono[0], tuple(-e for e in mono[1]), mono[2], mono[3])
        c_inv = RingElem(self.spec, {inv_mono: 1 / c})
        if rest.is_zero():
            return c_inv
        # self = const * (1 + n) with n killed by the truncations, so the
        # geometric series for 1/(1+n) terminates
        n = c_inv * rest
        out = self.spec.one()
        term = self.spec.one()
        sign = 1
        while True:
            term = term * n
            sign = -sign
            if term.is_zero():
                break
            out = out + term * sign
        return out * c_inv

    # -- lambda structure ----------------------------------------------------

    def adams(self, r: int) -> "RingElem":
        """Adams operation: ring homomorphism with ``nu -> 1-(1-nu)**r``,
        ``u -> u**r``, ``Nm -> N(rm)`` (0 past the index cap), ``t -> t**r``.

        Negative ``r`` acts by the dual rule on units and nilpotents;
        elements carrying Newton generators are rejected for ``r < 0``.
        """
        if r == 0:
            raise RingError("Adams operation needs a nonzero integer")
        spec = self.spec
        if r == 1:
            return self
        nu_images = [_adams_nilpotent(spec, i, r) for i in range(len(spec.nilpotents))]
        out = spec.zero()
        for mono, c in self.coeffs.items():
            nil, uni, lam, t = mono
            if r < 0 and any(lam):
                raise RingError("negative Adams operations are undefined on Newton generators")
            new_lam = [0] * spec.lambda_max
            dead = False
            for m_idx, e in enumerate(lam):
                if not e:
                    continue
                target = r * (m_idx + 1)
                if target > spec.lambda_max:
                    dead = True
                    break
                new_lam[target - 1] += e
            if dead:
                continue
            base = (
                (0,) * len(nil),
                tuple(r * e for e in uni),
                tuple(new_lam),
                tuple(r * e for e in t),
            )
            if not spec.admissible(base):
                continue
            term = RingElem(spec, {base: c})
            for i, e in enumerate(nil):
                for _ in range(e):
                    term = term * nu_images[i]
            out = out + term
        return out

    def sym_power(self, k: int) -> "RingElem":
        """Complete homogeneous symmetric power ``h_k`` via the Newton
        recurrence ``k*h_k = sum_{r=1..k} adams(r) * h_{k-r}``."""
        if k < 0:
            raise RingError("symmetric power needs k >= 0")
        hs = [self.spec.one()]
        psis = [None, self]
        for r in range(2, k + 1):
            psis.append(self.adams(r))
        for n in range(1, k + 1):
            acc = self.spec.zero()
            for r in range(1, n + 1):
                acc = acc + psis[r] * hs[n - r]
            hs.append(acc / n)
        return hs[k]

    # -- serialization --------------------------------------------------------

    def to_json(self) -> list:
        """Canonical encoding: sorted monomial keys, coefficients as
        ``"num/den"`` integer strings."""
        items = []
        for mono in sorted(self.coeffs):
            c = self.coeffs[mono]
            items.append([[list(p) for p in mono], f"{c.numerator}/{c.denominator}"])
        return items

    @staticmethod
    def from_json(spec: RingSpec, data: Iterable) -> "RingElem":
        coeffs = {}
        for mono, c in data:
            num, den = str(c).split("/")
            coeffs[tuple(tuple(int(e) for e in p) for p in mono)] = Fraction(int(num), int(den))
        return RingElem(spec, coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"{c}*{_mono_str(self.spec, m)}" for m, c in sorted(self.coeffs.items())
        )


def _mono_str(spec: RingSpec, mono: Monomial) -> str:
    nil, uni, lam, t = mono
    parts = []
    for (name, _), e in zip(spec.nilpotents, nil):
        if e:
            parts.append(f"{name}^{e}")
    for name, e in zip(spec.units, uni):
        if e:
            parts.append(f"{name}^{e}")
    for m, e in enumerate(lam, start=1):
        if e:
            parts.append(f"N{m}^{e}")
    for (name, _), e in zip(spec.t_vars, t):
        if e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def _adams_nilpotent(spec: RingSpec, index: int, r: int) -> RingElem:
    """Image of the ``index``-th nilpotent generator: ``1 - (1-nu)**r``."""
    nu = spec.gen(spec.nilpotents[index][0])
    p = spec.one() - nu
    if r >= 0:
        return spec.one() - p**r
    return spec.one() - p.inverse() ** (-r)


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def ring_neg(a: RingElem) -> RingElem:
    return -a


def invert(a: RingElem) -> RingElem:
    return a.inverse()


def adams(r: int, a: RingElem) -> RingElem:
    return a.adams(r)


def sym_power(k: int, a: RingElem) -> RingElem:
    return a.sym_power(k)


def euler_class(lines: Sequence[RingElem], spec: RingSpec | None = None) -> RingElem:
    """K-theoretic Euler class of a sum of line classes:
    ``prod_i (1 - lines[i]**-1)``.  Empty input gives 1 (pass ``spec``)."""
    if not lines:
        if spec is None:
            raise RingError("empty euler_class needs an explicit spec")
        return spec.one()
    out = lines[0].spec.one()
    for line in lines:
        out = out * (line.spec.one() - line.inverse())
    return out


@dataclass
class TwistData:
    """Input for :func:`twist_class`.

    ``summands`` maps nonzero integers ``m`` to classes whose monomials all
    carry nonzero t-degree (so the exponential truncates); ``determinant``
    is an integer combination of unit-generator names; ``level`` the
    integer twist exponent on the determinant.
    """

    spec: RingSpec
    summands: tuple[tuple[int, RingElem], ...] = ()
    determinant: Mapping[str, int] = field(default_factory=dict)
    level: int = 0


def twist_class(data: TwistData) -> RingElem:
    """``exp(sum_m adams(m, E_m)/m) * det**(-level)``.

    The exponential is a finite sum by t-truncation; summands with a
    nonzero t-degree-0 part are rejected since exp would not truncate.
    """
    spec = data.spec
    arg = spec.zero()
    for m, e_class in data.summands:
        if m == 0:
            raise RingError("twist summand index must be nonzero")
        if any(not any(mono[3]) for mono in e_class.coeffs):
            raise RingError("twist summand has a nonzero t-degree-0 part")
        arg = arg + e_class.adams(m) / m
    if any(not any(mono[3]) for mono in arg.coeffs):
        raise RingError("twist argument has a nonzero t-degree-0 part")
    out = spec.one()
    term = spec.one()
    budget = sum(2 * c - 1 for _, c in spec.t_vars) + 1
    for k in range(1, budget + 1):
        term = term * arg / k
        if term.is_zero():
            break
        out = out + term
    else:
        if not (term * arg).is_zero():
            raise RingError("twist exponential does not truncate")
    det = {name: -data.level * e for name, e in data.determinant.items()}
    return out * spec.unit_monomial(det)


class ChiPreset:
    """Euler-characteristic functional given on the nilpotent basis.

    ``table(nil_exponents) -> Fraction`` evaluates the functional on the
    monomial ``prod nu_i**e_i``; lambda/t monomial factors pass through as
    residual symbols, unit-generator factors are unhoused and rejected.
    """

    def __init__(self, spec: RingSpec, table: Callable[[tuple[int, ...]], Fraction], name: str = "custom"):
        self.spec = spec
        self.table = table
        self.name = name


def projective_chi(n: int, spec: RingSpec | None = None) -> ChiPreset:
    """Preset for projective space of dimension ``n-1``: the coefficient ring
    is ``Q[nu]/(nu**n)`` with hyperplane class ``P = 1 - nu`` and
    ``chi(P**i) = C(n-1-i, n-1)`` read as a polynomial in ``i``."""
    if n < 2:
        raise RingError("projective preset needs n >= 2")
    if spec is None:
        spec = RingSpec(nilpotents=(("nu", n),))
    if len(spec.nilpotents) != 1 or spec.nilpotents[0][1] != n:
        raise RingError("spec does not present Q[nu]/(nu^n)")

    def chi_p(i: int) -> Fraction:
        # C(j+n-1, n-1) at j = -i, as an exact rational polynomial value
        num = 1
        for s in range(1, n):
            num *= -i + s
        return Fraction(num, factorial(n - 1))

    def table(nil: tuple[int, ...]) -> Fraction:
        (a,) = nil
        return sum(
            (Fraction((-1) ** i * comb(a, i)) * chi_p(i) for i in range(a + 1)),
            Fraction(0),
        )

    return ChiPreset(spec, table, name=f"P{n - 1}")


def euler_char(a: RingElem, preset: ChiPreset) -> RingElem:
    """Linear extension of the preset functional.  Returns an element of the
    same ring with all nilpotent exponents eliminated; residual lambda/t
    monomials survive untouched."""
    if a.spec != preset.spec:
        raise RingError("ring spec mismatch")
    spec = a.spec
    out = spec.zero()
    zero_nil = (0,) * len(spec.nilpotents)
    for mono, c in a.coeffs.items():
        nil, uni, lam, t = mono
        if any(uni):
            raise RingError(f"unhoused basis monomial {_mono_str(spec, mono)}")
        value = preset.table(nil)
        residual = (zero_nil, uni, lam, t)
        out = out + RingElem(spec, {residual: Fraction(1)}) * (c * value)
    return out


def mukai_pairing(a: RingElem, b: RingElem, preset: ChiPreset) -> RingElem:
    """``(a, b) = chi(a * involution(b))``; the involution is the identity on
    manifold presets."""
    return euler_char(a * b, preset)


def canonical_json(obj) -> str:
    """Deterministic JSON used by every serializer in the package."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
