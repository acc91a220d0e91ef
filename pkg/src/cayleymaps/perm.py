"""Permutations on {0,...,n-1} and cyclic orderings of index subsets.

Composition is left-to-right throughout the package: compose(p, q) applies
p first, then q. Cyclic orderings are single-cycle permutations of their
support (with the identity admitted as the unique ordering of a singleton)
and are stored canonically as the cycle anchored at the minimum element.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

from .errors import DomainMismatchError, InvalidInputError


class Permutation:
    """Bijection of {0,...,n-1}, stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        n = len(imgs)
        seen = [False] * n
        for x in imgs:
            if not (isinstance(x, int) and 0 <= x < n) or seen[x]:
                raise InvalidInputError(f"image sequence is not a bijection of 0..{n - 1}: {imgs!r}")
            seen[x] = True
        self.images = imgs

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({cycle_string(self)})"

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (including fixed points), each anchored at its minimum."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.n else 1


def identity(n: int) -> Permutation:
    return Permutation(range(n))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p first, then q: the result maps i to q(p(i))."""
    if p.n != q.n:
        raise DomainMismatchError(f"cannot compose permutations of sizes {p.n} and {q.n}")
    qi = q.images
    return Permutation(qi[x] for x in p.images)


def inverse(p: Permutation) -> Permutation:
    out = [0] * p.n
    for i, x in enumerate(p.images):
        out[x] = i
    return Permutation(out)


def power(p: Permutation, e: int) -> Permutation:
    """p composed with itself e times (e may be negative)."""
    if e < 0:
        return power(inverse(p), -e)
    acc = identity(p.n)
    base = p
    while e:
        if e & 1:
            acc = compose(acc, base)
        base = compose(base, base)
        e >>= 1
    return acc


def from_cycles(n: int, cycles: Iterable[Iterable[int]]) -> Permutation:
    """Permutation of {0..n-1} from disjoint cycles; unmentioned points are fixed."""
    out = list(range(n))
    for cyc in cycles:
        cyc = list(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if out[a] != a:
                raise InvalidInputError("cycles are not disjoint")
            out[a] = b
    return Permutation(out)


def cycle_length_profile(p: Permutation) -> dict[int, int]:
    """Map cycle length l to the number of cycles of that length (fixed points under 1)."""
    profile: dict[int, int] = {}
    for c in p.cycles():
        profile[len(c)] = profile.get(len(c), 0) + 1
    return profile


def cycle_string(p: Permutation) -> str:
    """Cycle-notation rendering for diagnostics, fixed points omitted."""
    parts = ["(" + " ".join(map(str, c)) + ")" for c in p.cycles() if len(c) > 1]
    return "".join(parts) if parts else "()"


class CyclicOrdering:
    """Single-cycle successor map on a support of element indices.

    Stored as the cycle tuple rotated so the minimum element comes first,
    which makes equality of orderings plain tuple equality. A singleton
    support carries the identity as its unique ordering.
    """

    __slots__ = ("cycle", "_pos")

    def __init__(self, cycle: Iterable[int]):
        cyc = tuple(cycle)
        if not cyc:
            raise InvalidInputError("cyclic ordering needs a non-empty support")
        if len(set(cyc)) != len(cyc):
            raise InvalidInputError(f"cycle has repeated elements: {cyc!r}")
        a = cyc.index(min(cyc))
        self.cycle = cyc[a:] + cyc[:a]
        self._pos = {x: i for i, x in enumerate(self.cycle)}

    @classmethod
    def from_successor(cls, successor: Mapping[int, int]) -> "CyclicOrdering":
        support = sorted(successor)
        if not is_cyclic_ordering(successor, support):
            raise InvalidInputError(f"successor map is not a single covering cycle: {dict(successor)!r}")
        cyc = [support[0]]
        while len(cyc) < len(support):
            cyc.append(successor[cyc[-1]])
        return cls(cyc)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.cycle))

    def __len__(self) -> int:
        return len(self.cycle)

    def __contains__(self, x: int) -> bool:
        return x in self._pos

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclicOrdering) and self.cycle == other.cycle

    def __hash__(self) -> int:
        return hash(self.cycle)

    def __repr__(self) -> str:
        return f"CyclicOrdering({' '.join(map(str, self.cycle))})"

    def __call__(self, x: int) -> int:
        return self.cycle[(self._pos[x] + 1) % len(self.cycle)]

    def apply_power(self, e: int, x: int) -> int:
        """Image of x under the e-th power of the successor map."""
        k = len(self.cycle)
        return self.cycle[(self._pos[x] + e) % k]

    def successor_dict(self) -> dict[int, int]:
        k = len(self.cycle)
        return {x: self.cycle[(i + 1) % k] for i, x in enumerate(self.cycle)}

    def position_permutation(self) -> Permutation:
        """The successor map written on sorted-support positions 0..k-1."""
        sup = self.support
        index = {x: i for i, x in enumerate(sup)}
        return Permutation(index[self(x)] for x in sup)


def is_cyclic_ordering(successor: Mapping[int, int], support: Iterable[int]) -> bool:
    """Check the single-cycle invariants of a successor map on the given support.

    Raises InvalidInputError if the map is not defined exactly on the support
    or takes values outside it; otherwise returns whether the map is a single
    cycle covering the support with no fixed points (identity if |support|=1).
    """
    sup = set(support)
    if set(successor) != sup:
        raise InvalidInputError("successor map keys do not match the support")
    if any(v not in sup for v in successor.values()):
        raise InvalidInputError("successor map takes a value outside the support")
    if len(set(successor.values())) != len(sup):
        return False
    if len(sup) == 1:
        (x,) = sup
        return successor[x] == x
    if any(successor[x] == x for x in sup):
        return False
    start = next(iter(sup))
    count = 1
    x = successor[start]
    while x != start:
        count += 1
        x = successor[x]
    return count == len(sup)


def power_group(ordering: CyclicOrdering) -> list[Permutation]:
    """All k distinct powers of the ordering, written on sorted-support positions.

    This set is exactly the centralizer of the ordering inside the symmetric
    group on its support.
    """
    k = len(ordering)
    sup = ordering.support
    index = {x: i for i, x in enumerate(sup)}
    return [
        Permutation(index[ordering.apply_power(e, x)] for x in sup)
        for e in range(k)
    ]
