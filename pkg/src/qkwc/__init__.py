"""qkwc: exact symbolic engine for K-theoretic wall-crossing identities.

Everything is computed over exact rationals; there is no floating point
anywhere in the package.  The modules:

- ``ringcore``: finite-dimensional quotient coefficient rings with
  lambda-structure (Adams operations, symmetric powers), Euler
  characteristics and twisting classes.
- ``qfun``: rational functions in the loop variable q, expansions at 0
  and infinity, the plus/minus splitting, and the two-point residue.
- ``novikov``: effective curve classes, walls, decompositions and graded
  series.
- ``ifun``: q-hypergeometric series, presets, and the mirror-map
  truncations.
- ``perm``: graded symmetric-power bookkeeping for permutation-equivariant
  brackets.
- ``wallcross``: the universal wall-crossing expressions and transforms.
- ``inflated``: staircase symmetric-function identity, Koszul relation
  ring, and closed-form pushforwards.
- ``verify``: randomized, seeded verification suites behind the CLI.
"""

from qkwc.ringcore import RingSpec, RingElem, TwistData
from qkwc.qfun import QLaurent, QRational
from qkwc.novikov import ConeSpec, NovikovSeries
from qkwc.ifun import HypergeomSpec, preset_projective
from qkwc.perm import SlotElem
from qkwc.wallcross import WallInput, CorrelatorSeries

__all__ = [
    "RingSpec",
    "RingElem",
    "TwistData",
    "QLaurent",
    "QRational",
    "ConeSpec",
    "NovikovSeries",
    "HypergeomSpec",
    "preset_projective",
    "SlotElem",
    "WallInput",
    "CorrelatorSeries",
]
