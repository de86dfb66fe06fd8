"""Graded symmetric-power bookkeeping for permutation-equivariant brackets.

A :class:`SlotElem` is an element of ``A[q**±1, w**±1]`` (optionally graded
by curve classes) where ``A`` is a :mod:`qkwc.ringcore` ring.  Adams
operations multiply all gradings by ``r`` and act on coefficients through
the ring; ``h_sym`` realizes the invariant part of a symmetrized tensor
power, with the q/w/class gradings adding across tensor slots.  The coarse
cotangent line of a symmetrized slot group lives inside ``A`` as a unit
generator, one shared variable per group.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from qkwc.novikov import CurveClass
from qkwc.ringcore import RingElem, RingError, RingSpec

SlotKey = tuple[int, int, CurveClass]


class SlotElem:
    """Sparse map (q-exponent, w-exponent, curve class) -> RingElem."""

    __slots__ = ("spec", "rank", "terms")

    def __init__(self, spec: RingSpec, terms: Mapping[SlotKey, RingElem] | None = None, rank: int = 0):
        self.spec = spec
        self.rank = rank
        self.terms: dict[SlotKey, RingElem] = {}
        if terms:
            for key, c in terms.items():
                if len(key[2]) != rank:
                    raise RingError("curve-class grading has the wrong rank")
                if not c.is_zero():
                    self.terms[key] = c

    @staticmethod
    def zero(spec: RingSpec, rank: int = 0) -> "SlotElem":
        return SlotElem(spec, {}, rank)

    @staticmethod
    def one(spec: RingSpec, rank: int = 0) -> "SlotElem":
        return SlotElem(spec, {(0, 0, (0,) * rank): spec.one()}, rank)

    @staticmethod
    def from_elem(c: RingElem, q_exp: int = 0, w_exp: int = 0, cls: CurveClass = ()) -> "SlotElem":
        return SlotElem(c.spec, {(q_exp, w_exp, cls): c}, len(cls))

    def _check(self, other: "SlotElem"):
        if self.spec != other.spec or self.rank != other.rank:
            raise RingError("slot context mismatch")

    def __add__(self, other: "SlotElem") -> "SlotElem":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SlotElem(self.spec, out, self.rank)

    def __neg__(self) -> "SlotElem":
        return SlotElem(self.spec, {k: -c for k, c in self.terms.items()}, self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return SlotElem(self.spec, {k: c * other for k, c in self.terms.items()}, self.rank)
        self._check(other)
        out: dict[SlotKey, RingElem] = {}
        for (q1, w1, b1), c1 in self.terms.items():
            for (q2, w2, b2), c2 in other.terms.items():
                key = (q1 + q2, w1 + w2, tuple(x + y for x, y in zip(b1, b2)))
                p = c1 * c2
                if p.is_zero():
                    continue
                s = out.get(key)
                s = p if s is None else s + p
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return SlotElem(self.spec, out, self.rank)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SlotElem(
            self.spec, {k: c / scalar for k, c in self.terms.items()}, self.rank
        )

    def __eq__(self, other):
        if not isinstance(other, SlotElem):
            return NotImplemented
        return self.spec == other.spec and self.rank == other.rank and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def adams(self, r: int) -> "SlotElem":
        out: dict[SlotKey, RingElem] = {}
        for (qe, we, b), c in self.terms.items():
            img = c.adams(r)
            if img.is_zero():
                continue
            key = (r * qe, r * we, tuple(r * x for x in b))
            s = out.get(key)
            s = img if s is None else s + img
            if not s.is_zero():
                out[key] = s
            else:
                out.pop(key, None)
        return SlotElem(self.spec, out, self.rank)

    def h_sym(self, k: int) -> "SlotElem":
        """Newton recurrence in the graded ring; gradings add across slots."""
        if k < 0:
            raise RingError("symmetric power needs k >= 0")
        hs = [SlotElem.one(self.spec, self.rank)]
        psis = [None, self]
        for r in range(2, k + 1):
            psis.append(self.adams(r))
        for n in range(1, k + 1):
            acc = SlotElem.zero(self.spec, self.rank)
            for r in range(1, n + 1):
                acc = acc + psis[r] * hs[n - r]
            hs.append(acc / n)
        return hs[k]

    # -- grading access ---------------------------------------------------------

    def grade_items(self):
        return self.terms.items()

    def coeff(self, q_exp: int, w_exp: int, cls: CurveClass | None = None) -> RingElem:
        if cls is None:
            cls = (0,) * self.rank
        return self.terms.get((q_exp, w_exp, cls), self.spec.zero())

    def q_slice(self, predicate) -> "SlotElem":
        """Subsum of terms whose q-exponent satisfies the predicate."""
        return SlotElem(
            self.spec,
            {k: c for k, c in self.terms.items() if predicate(k[0])},
            self.rank,
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (qe, we, b), c in sorted(self.terms.items()):
            tag = f"q^{qe}"
            if we:
                tag += f"*w^{we}"
            if b and any(b):
                tag += f"*Q^{b}"
            bits.append(f"({c!r})*{tag}")
        return " + ".join(bits)


def h_sym(k: int, f: SlotElem) -> SlotElem:
    return f.h_sym(k)


def extract_grade(f: SlotElem, q_exp: int, w_exp: int = 0) -> RingElem:
    """Read off one graded piece; for class-graded slots the total over all
    classes at that grade is returned."""
    out = f.spec.zero()
    for (qe, we, _), c in f.terms.items():
        if qe == q_exp and we == w_exp:
            out = out + c
    return out


class BracketTerm:
    """One product of symmetrized groups: coeff * prod_a h_{k_a}(slot_a)."""

    __slots__ = ("coeff", "factors")

    def __init__(self, coeff: Fraction, factors: Iterable[tuple[str, int]]):
        self.coeff = Fraction(coeff)
        self.factors = tuple(sorted((s, k) for s, k in factors if k > 0))

    def key(self):
        return self.factors


class BracketPoly:
    """Formal polynomial in brackets, with slot values bound by name.

    ``env`` maps slot names to :class:`SlotElem` values (the insertions
    ``T_a(f_a)``); evaluation realizes every bracket as a product of
    symmetric powers.
    """

    def __init__(self, env: Mapping[str, SlotElem], terms: Iterable[BracketTerm] = ()):
        self.env = dict(env)
        self.terms: dict[tuple, BracketTerm] = {}
        for t in terms:
            self._absorb(t)

    def _absorb(self, term: BracketTerm):
        k = term.key()
        if k in self.terms:
            merged = BracketTerm(self.terms[k].coeff + term.coeff, k)
            if merged.coeff:
                self.terms[k] = merged
            else:
                del self.terms[k]
        elif term.coeff:
            self.terms[k] = term

    @staticmethod
    def single(env: Mapping[str, SlotElem], factors, coeff=1) -> "BracketPoly":
        return BracketPoly(env, [BracketTerm(Fraction(coeff), factors)])

    def __add__(self, other: "BracketPoly") -> "BracketPoly":
        out = BracketPoly(self.env | other.env, self.terms.values())
        for t in other.terms.values():
            out._absorb(t)
        return out

    def evaluate(self) -> SlotElem:
        spec, rank = _env_context(self.env)
        total = SlotElem.zero(spec, rank)
        for term in self.terms.values():
            val = SlotElem.one(spec, rank)
            for name, k in term.factors:
                val = val * self.env[name].h_sym(k)
            total = total + val * term.coeff
        return total

    def directional_derivative(self, direction: Mapping[str, SlotElem]) -> "BracketPoly":
        """Leibniz rule: in every term, each symmetrized group ``h_k(T(f))``
        in a perturbed slot is replaced by ``T(delta) * h_{k-1}(T(f))``,
        summed over groups.  ``direction`` maps slot names to the derivative
        insertions ``T(delta q**l)``; they must be monomial increments."""
        fresh_env = dict(self.env)
        new_terms: list[BracketTerm] = []
        for name, delta in direction.items():
            if len(delta.terms) > 1:
                raise RingError("direction must be a monomial increment")
            dname = f"{name}'"
            fresh_env[dname] = delta
            for term in self.terms.values():
                for fname, k in term.factors:
                    if fname != name:
                        continue
                    rest = list(term.factors)
                    rest.remove((fname, k))
                    if k - 1 > 0:
                        rest.append((fname, k - 1))
                    rest.append((dname, 1))
                    new_terms.append(BracketTerm(term.coeff, rest))
        return BracketPoly(fresh_env, new_terms)


def _env_context(env: Mapping[str, SlotElem]):
    specs = {(v.spec, v.rank) for v in env.values()}
    if len(specs) != 1:
        raise RingError("all slot values must share one context")
    return next(iter(specs))


def directional_derivative(expr: BracketPoly, direction: Mapping[str, SlotElem]) -> BracketPoly:
    return expr.directional_derivative(direction)
