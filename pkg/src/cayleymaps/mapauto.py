"""Map automorphisms: dart extension, stabilizers, MRR detection, oracles.

A map automorphism is a graph automorphism phi with
rot[v^phi] = phi^-1 * rot[v] * phi at every vertex; on a connected map it
is determined by its value on a single dart (ordered pair of adjacent
vertices), so the automorphism group acts semiregularly on darts. The
engine reconstructs an automorphism from one dart image by transporting
neighbourhoods along matching rotation exponents, then re-verifies the
rotation condition at every vertex so correctness never depends on the
traversal order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .cayley import CayleyMap, RotationMap, build_cayley_map
from .errors import BruteForceSizeError, InvalidDartError
from .perm import Permutation

BRUTE_FORCE_LIMIT = 8


class Dart(NamedTuple):
    """Oriented edge: an ordered pair of adjacent vertices."""

    tail: int
    head: int


class MapAutomorphism:
    """A vertex permutation preserving adjacency and every rotation."""

    __slots__ = ("perm",)

    def __init__(self, perm: Permutation):
        self.perm = perm

    @property
    def images(self) -> tuple[int, ...]:
        return self.perm.images

    def __call__(self, v: int) -> int:
        return self.perm.images[v]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MapAutomorphism) and self.perm == other.perm

    def __hash__(self) -> int:
        return hash(self.perm)

    def __repr__(self) -> str:
        return f"MapAutomorphism({self.perm!r})"


@dataclass(frozen=True)
class StabilizerResult:
    """The identity-vertex stabilizer of a Cayley map.

    It is cyclic, its elements restrict to powers of the map's ordering on
    S, and exponents records which powers occur (a subgroup of Z_|S|).
    generator_exponent is the least positive exponent, or 0 when trivial.
    """

    order: int
    generator_exponent: int
    elements: tuple[MapAutomorphism, ...]
    exponents: tuple[int, ...]


def _check_dart(m: RotationMap, dart: Dart) -> None:
    if not (0 <= dart.tail < m.n) or dart.head not in m.adjacency[dart.tail]:
        raise InvalidDartError(f"{tuple(dart)} is not a dart of the map")


def extend_dart_map(m: RotationMap, base: Dart, image: Dart) -> Optional[MapAutomorphism]:
    """The unique map automorphism sending base to image, or None.

    Breadth-first transport: once a vertex v and one of its neighbours have
    images, the rest of the neighbourhood of v is forced by matching
    rotation exponents. Any double assignment or non-injective image aborts.
    A final pass checks adjacency and the rotation condition everywhere.
    """
    base = Dart(*base)
    image = Dart(*image)
    _check_dart(m, base)
    _check_dart(m, image)

    n = m.n
    img = [-1] * n
    taken = [False] * n
    img[base.tail] = image.tail
    taken[image.tail] = True
    img[base.head] = image.head
    taken[image.head] = True

    pivot = [-1] * n
    pivot[base.tail] = base.head
    pivot[base.head] = base.tail
    queue = [base.tail, base.head]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        v2 = img[v]
        if m.degree(v) != m.degree(v2):
            return None
        rot_v = m.rotation[v]
        rot_v2 = m.rotation[v2]
        x = pivot[v]
        y = img[x]
        for _ in range(m.degree(v) - 1):
            x = rot_v(x)
            y = rot_v2(y)
            if img[x] == -1:
                if taken[y]:
                    return None
                img[x] = y
                taken[y] = True
                pivot[x] = v
                queue.append(x)
            elif img[x] != y:
                return None

    if any(i == -1 for i in img):
        return None
    candidate = Permutation(img)
    if not is_map_automorphism(m, candidate):
        return None
    return MapAutomorphism(candidate)


def is_map_automorphism(m: RotationMap, perm: Permutation) -> bool:
    """Direct check of adjacency preservation and the rotation condition."""
    if perm.n != m.n:
        return False
    img = perm.images
    for v in range(m.n):
        v2 = img[v]
        rot_v = m.rotation[v]
        rot_v2 = m.rotation[v2]
        for x in m.adjacency[v]:
            x2 = img[x]
            if x2 not in rot_v2:
                return False
            if img[rot_v(x)] != rot_v2(x2):
                return False
    return True


def all_darts(m: RotationMap):
    for v in range(m.n):
        for w in m.adjacency[v]:
            yield Dart(v, w)


def full_aut_group(m: RotationMap) -> list[MapAutomorphism]:
    """Every map automorphism, by extending one base dart to all darts.

    Semiregularity makes each dart image yield at most one automorphism, so
    the result size divides twice the edge count.
    """
    if m.edge_count == 0:
        raise InvalidDartError("map has no edges")
    base = Dart(0, m.adjacency[0][0])
    out = []
    for image in all_darts(m):
        aut = extend_dart_map(m, base, image)
        if aut is not None:
            out.append(aut)
    out.sort(key=lambda a: a.images)
    return out


def brute_force_aut(m: RotationMap) -> list[MapAutomorphism]:
    """Ground-truth automorphism list by filtering all n! vertex permutations."""
    if m.n > BRUTE_FORCE_LIMIT:
        raise BruteForceSizeError(f"brute force capped at {BRUTE_FORCE_LIMIT} vertices, got {m.n}")
    out = []
    for images in itertools.permutations(range(m.n)):
        p = Permutation(images)
        if is_map_automorphism(m, p):
            out.append(MapAutomorphism(p))
    return out


def stabilizer_of_identity(m: CayleyMap) -> StabilizerResult:
    """Stabilizer of the identity vertex, via the restriction lemma.

    Each stabilizer element restricts to a power of the map's ordering on
    S, so only the |S| candidate dart images (e, s0) -> (e, ordering^k(s0))
    can extend; the successful exponents form a subgroup of Z_|S|.
    """
    rm = build_cayley_map(m)
    e = m.group.identity
    s0 = m.connection_set.elements[0]
    base = Dart(e, m.group.mult[s0][e])
    k = m.connection_set.size
    found: dict[int, MapAutomorphism] = {}
    for c in range(k):
        target = m.group.mult[m.ordering.apply_power(c, s0)][e]
        aut = extend_dart_map(rm, base, Dart(e, target))
        if aut is not None:
            found[c] = aut
    exponents = tuple(sorted(found))
    order = len(exponents)
    gen = min((c for c in exponents if c > 0), default=0)
    elements = tuple(found[c] for c in exponents)
    return StabilizerResult(order, gen, elements, exponents)


def is_mrr(m: CayleyMap) -> bool:
    """Whether the map's full automorphism group is just the right translations."""
    return stabilizer_of_identity(m).order == 1


def aut_order(m: CayleyMap) -> int:
    """|Aut| of a Cayley map: group order times the identity-vertex stabilizer order."""
    return m.group.order * stabilizer_of_identity(m).order
