"""Evaluation of the counting bounds and the vanishing non-MRR ratio.

Three quantities drive the asymptotic argument: a bound on the number of
candidate over-groups with cyclic point stabilizer (doubly exponential in
log r), an exact-integer bound on the (S, ordering) pairs a fixed
stabilizer generator can survive in, and their product divided by (r-2)!,
which vanishes as r grows. Values overflow machine floats around r = 100,
so everything is evaluated in the log2 domain with exact-integer or
mpmath cross-checks where precision matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import mpmath

from .cayley import enumerate_connection_sets, enumerate_cyclic_orderings
from .census import DEFAULT_BUDGET, _budget_guard
from .errors import InvalidInputError
from .group import FiniteGroup
from .perm import Permutation, cycle_length_profile

_EXACT_FACTORIAL_LIMIT = 2000  # above this, log2-factorials switch to lgamma
_MP_DPS = 60


def subgroup_count_bound_log2(r: int) -> float:
    """log2 of the over-group count bound: 7*(log2 r)^2 + 12*log2 r."""
    if r < 2:
        raise InvalidInputError("bound defined for r >= 2")
    lg = math.log2(r)
    return 7.0 * lg * lg + 12.0 * lg


def subgroup_count_bound(r: int) -> mpmath.mpf:
    """The over-group count bound itself, as an arbitrary-precision value."""
    if r < 2:
        raise InvalidInputError("bound defined for r >= 2")
    with mpmath.workdps(_MP_DPS):
        lg = mpmath.log(r, 2)
        return mpmath.power(2, 7 * lg * lg + 12 * lg)


def compatible_pairs_bound(r: int) -> Fraction:
    """Exact bound on (S, ordering) pairs admitting a fixed non-identity
    stabilizer generator: (r-1) * (r/2) * floor(r/2)! * 2^r.

    The r/2 prefactor is kept exact (it is half-integral for odd r, but the
    product is always an integer since r-1 is then even).
    """
    if r < 2:
        raise InvalidInputError("bound defined for r >= 2")
    return Fraction(r - 1) * Fraction(r, 2) * math.factorial(r // 2) * 2 ** r


def compatible_pairs_bound_log2(r: int) -> float:
    if r <= _EXACT_FACTORIAL_LIMIT:
        value = compatible_pairs_bound(r)
        return math.log2(value.numerator) - math.log2(value.denominator)
    return (math.log2(r - 1) + math.log2(r) - 1.0
            + math.lgamma(r // 2 + 1) / math.log(2) + r)


@dataclass(frozen=True)
class GammaProfile:
    """Cycle-length profile of a vertex permutation that fixes a point."""

    r: int
    counts: dict[int, int]  # cycle length -> number of cycles

    def __post_init__(self):
        clean = {l: n for l, n in self.counts.items() if n}
        object.__setattr__(self, "counts", clean)
        if any(l < 1 or n < 0 for l, n in clean.items()):
            raise InvalidInputError("profile entries must be positive")
        if sum(l * n for l, n in clean.items()) != self.r:
            raise InvalidInputError("cycle lengths do not sum to r")
        if clean.get(1, 0) < 1:
            raise InvalidInputError("profile must fix at least one point")

    @classmethod
    def of_permutation(cls, p: Permutation) -> "GammaProfile":
        return cls(p.n, cycle_length_profile(p))


def cycle_profile_bound(profile: Union[GammaProfile, Mapping[int, int]]) -> int:
    """Sum over cycle lengths l >= 2 and selection sizes k of C(n_l,k)*k!*l^k.

    Bounds the number of (S, ordering) pairs compatible with a permutation
    of the given cycle profile: S must be a union of k same-length cycles,
    and the ordering lies in a centralizer of wreath-product order l^k*k!.
    """
    counts = profile.counts if isinstance(profile, GammaProfile) else profile
    total = 0
    for l, n_l in counts.items():
        if l < 2 or n_l < 1:
            continue
        for k in range(1, n_l + 1):
            total += math.comb(n_l, k) * math.factorial(k) * l ** k
    return total


def count_maps_admitting(group: FiniteGroup, gamma: Permutation,
                         budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of labelled Cayley maps admitting gamma as an automorphism.

    The oracle route: every (S, ordering) pair is visited and gamma is
    checked against the definition (adjacency plus the rotation condition
    at every vertex), with no propagation shortcuts.
    """
    r = group.order
    if gamma.n != r:
        raise InvalidInputError("permutation size differs from the group order")
    if gamma.images[group.identity] != group.identity:
        raise InvalidInputError("permutation must fix the identity vertex")
    if gamma.images == tuple(range(r)):
        raise InvalidInputError("permutation must not be the identity")
    _budget_guard(group, budget)

    mult = [v for row in group.mult for v in row]
    inv = list(group.inv)
    img = list(gamma.images)
    count = 0
    cpos = [-1] * r
    for conn in enumerate_connection_sets(group):
        k = conn.size
        for ordering in enumerate_cyclic_orderings(conn):
            cycle = ordering.cycle
            for i, x in enumerate(cycle):
                cpos[x] = i
            if _admits(mult, inv, r, k, cycle, cpos, img):
                count += 1
        for x in conn.elements:
            cpos[x] = -1
    return count


def _admits(mult, inv, r, k, cycle, cpos, img) -> bool:
    """Definition check: img preserves adjacency and every rotation."""
    for v in range(r):
        v2 = img[v]
        iv2 = inv[v2]
        for j in range(k):
            x2 = img[mult[cycle[j] * r + v]]
            s2 = mult[x2 * r + iv2]
            if cpos[s2] < 0:
                return False
            if img[mult[cycle[(j + 1) % k] * r + v]] != mult[cycle[(cpos[s2] + 1) % k] * r + v2]:
                return False
    return True


def non_mrr_fraction_bound_log2(r: int) -> float:
    """log2 of (pairs bound * over-group bound / (r-2)!), the vanishing ratio."""
    if r < 2:
        raise InvalidInputError("ratio defined for r >= 2")
    if r - 2 <= _EXACT_FACTORIAL_LIMIT:
        denom = math.log2(math.factorial(r - 2)) if r > 2 else 0.0
    else:
        denom = math.lgamma(r - 1) / math.log(2)
    return compatible_pairs_bound_log2(r) + subgroup_count_bound_log2(r) - denom


def non_mrr_fraction_bound(r: int) -> mpmath.mpf:
    """High-precision reference value of the ratio, from the exact rational
    pair bound and factorial plus an mpf power of two."""
    if r < 2:
        raise InvalidInputError("ratio defined for r >= 2")
    with mpmath.workdps(_MP_DPS):
        rational = Fraction(compatible_pairs_bound(r), math.factorial(r - 2))
        lg = mpmath.log(r, 2)
        return (mpmath.mpf(rational.numerator) / rational.denominator
                * mpmath.power(2, 7 * lg * lg + 12 * lg))


def first_vanishing_order(lo: int = 4, hi: int | None = None) -> int:
    """Least r in the searched range with ratio < 1, located by bisection in
    the log2 domain after an exponential bracket search."""
    if hi is None:
        hi = lo
        while non_mrr_fraction_bound_log2(hi) >= 0.0:
            hi *= 2
            if hi > 10 ** 7:
                raise InvalidInputError("no vanishing point below 10^7")
    while lo < hi:
        mid = (lo + hi) // 2
        if non_mrr_fraction_bound_log2(mid) < 0.0:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------------------
# bound-report rows: r,lemma2_log2,lemma3,ratio_log2

@dataclass(frozen=True)
class BoundReport:
    r: int
    lemma2_log2: float
    lemma3: Fraction
    ratio_log2: float | None

    @property
    def vacuous(self) -> bool:
        return self.ratio_log2 is not None and self.ratio_log2 > 0.0


def bound_report(r: int) -> BoundReport:
    if r < 1:
        raise InvalidInputError("need r >= 1")
    if r == 1:
        return BoundReport(1, 0.0, Fraction(0), None)
    return BoundReport(
        r=r,
        lemma2_log2=subgroup_count_bound_log2(r),
        lemma3=compatible_pairs_bound(r),
        ratio_log2=non_mrr_fraction_bound_log2(r),
    )


def bound_reports_to_csv(reports) -> str:
    lines = ["r,lemma2_log2,lemma3,ratio_log2"]
    for rep in reports:
        lemma3 = (str(rep.lemma3.numerator) if rep.lemma3.denominator == 1
                  else str(rep.lemma3))
        ratio = "" if rep.ratio_log2 is None else repr(rep.ratio_log2)
        lines.append(f"{rep.r},{rep.lemma2_log2!r},{lemma3},{ratio}")
    return "\n".join(lines) + "\n"
