"""Connection sets, Cayley graphs, rotation maps, and labelled Cayley maps.

A labelled Cayley map is the triple (group, connection set S, cyclic
ordering of S); two maps are equal exactly when both S and the ordering
coincide. Vertices x and y are adjacent when y*x^-1 lies in S, and the
rotation at a vertex g sends a neighbour x to rot(x*g^-1)*g, the unique
extension of the ordering at the identity that right translations preserve.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

from . import group as groupmod
from .errors import (ContainsIdentityError, InvalidInputError, MapFormatError,
                     NotGeneratingError, NotInverseClosedError)
from .group import FiniteGroup, generates, inverse_class_partition
from .perm import CyclicOrdering


@dataclass(frozen=True)
class ConnectionSet:
    """Inverse-closed generating set of non-identity elements, kept sorted."""

    group: FiniteGroup
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"ConnectionSet({self.group.name}, {{{', '.join(map(str, self.elements))}}})"


def make_connection_set(group: FiniteGroup, elements) -> ConnectionSet:
    elems = tuple(sorted(set(elements)))
    if any(not (isinstance(x, int) and 0 <= x < group.order) for x in elems):
        raise InvalidInputError(f"element indices out of range for order {group.order}: {elems!r}")
    if group.identity in elems:
        raise ContainsIdentityError("connection set must not contain the identity")
    missing = [x for x in elems if group.inv[x] not in elems]
    if missing:
        raise NotInverseClosedError(f"missing inverses for elements {missing}")
    if not elems or not generates(group, elems):
        raise NotGeneratingError(f"{elems!r} does not generate the group")
    return ConnectionSet(group, elems)


@dataclass(frozen=True)
class CayleyMap:
    """The labelled triple: group, connection set, and a cyclic ordering of it."""

    group: FiniteGroup
    connection_set: ConnectionSet
    ordering: CyclicOrdering

    def __post_init__(self):
        if self.connection_set.group is not self.group:
            raise InvalidInputError("connection set belongs to a different group")
        if self.ordering.support != self.connection_set.elements:
            raise InvalidInputError("ordering support differs from the connection set")

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Hashable labelled identity: (sorted S, anchored ordering cycle)."""
        return (self.connection_set.elements, self.ordering.cycle)


class RotationMap:
    """A connected simple graph with a cyclic ordering of every neighbourhood."""

    __slots__ = ("n", "adjacency", "rotation")

    def __init__(self, adjacency, rotation):
        adj = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        rot = tuple(rotation)
        n = len(adj)
        if len(rot) != n:
            raise InvalidInputError("need one rotation per vertex")
        for v, nbrs in enumerate(adj):
            if len(set(nbrs)) != len(nbrs):
                raise InvalidInputError(f"repeated neighbour at vertex {v}")
            for w in nbrs:
                if not 0 <= w < n:
                    raise InvalidInputError(f"neighbour {w} of vertex {v} out of range")
                if w == v:
                    raise InvalidInputError(f"loop at vertex {v}")
                if v not in adj[w]:
                    raise InvalidInputError(f"adjacency not symmetric at {{{v},{w}}}")
            if rot[v].support != nbrs:
                raise InvalidInputError(f"rotation at vertex {v} is not an ordering of its neighbourhood")
        if not _connected(adj):
            raise InvalidInputError("graph is not connected")
        self.n = n
        self.adjacency = adj
        self.rotation = rot

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def _connected(adj) -> bool:
    n = len(adj)
    if n == 0:
        return False
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == n


def cayley_graph(conn: ConnectionSet) -> tuple[tuple[int, ...], ...]:
    """Adjacency lists of the Cayley graph: neighbours of v are {s*v : s in S}."""
    g = conn.group
    return tuple(
        tuple(sorted(g.mult[s][v] for s in conn.elements))
        for v in range(g.order)
    )


def build_cayley_map(m: CayleyMap) -> RotationMap:
    """Materialize the rotation map with rot_g(x) = ordering(x*g^-1)*g at every vertex."""
    g = m.group
    adjacency = cayley_graph(m.connection_set)
    rotations = []
    for v in range(g.order):
        cyc = [g.mult[s][v] for s in m.ordering.cycle]
        rotations.append(CyclicOrdering(cyc))
    return RotationMap(adjacency, rotations)


def enumerate_connection_sets(group: FiniteGroup):
    """All valid connection sets, ordered by size then lexicographically.

    Iterates subsets of the inverse-class partition and filters by
    generation, so downstream code never sees a disconnected Cayley graph.
    Intended for desk-scale orders (subset count is 2^class_count).
    """
    if group.order < 2:
        raise InvalidInputError("need a group of order >= 2")
    part = inverse_class_partition(group)
    classes = [(x,) for x in part.involution_classes] + [p for p in part.pair_classes]
    candidates = []
    for mask_size in range(1, len(classes) + 1):
        for chosen in itertools.combinations(classes, mask_size):
            elems = tuple(sorted(x for cls in chosen for x in cls))
            candidates.append(elems)
    candidates.sort(key=lambda e: (len(e), e))
    for elems in candidates:
        if generates(group, elems):
            yield ConnectionSet(group, elems)


def enumerate_cyclic_orderings(conn: ConnectionSet):
    """The (|S|-1)! cyclic orderings of S, anchored at min(S), in lexicographic order."""
    anchor = conn.elements[0]
    rest = conn.elements[1:]
    for tail in itertools.permutations(rest):
        yield CyclicOrdering((anchor,) + tail)


def enumerate_maps(group: FiniteGroup):
    """Every labelled Cayley map on the group, in census order."""
    for conn in enumerate_connection_sets(group):
        for ordering in enumerate_cyclic_orderings(conn):
            yield CayleyMap(group, conn, ordering)


def count_labelled_maps(group: FiniteGroup) -> int:
    """Total number of labelled Cayley maps: sum of (|S|-1)! over valid S."""
    return sum(math.factorial(conn.size - 1) for conn in enumerate_connection_sets(group))


# ---------------------------------------------------------------------------
# map file format:
#   {"group": {"builtin": "cyclic:4"} | {order,names,table},
#    "S": [indices], "rotation": [[x, successor(x)], ...]}

def map_to_doc(m: CayleyMap) -> dict:
    if m.group.descriptor is not None:
        gdoc: dict = {"builtin": m.group.descriptor}
    else:
        gdoc = groupmod.group_to_doc(m.group)
    succ = m.ordering.successor_dict()
    return {
        "group": gdoc,
        "S": list(m.connection_set.elements),
        "rotation": [[x, succ[x]] for x in sorted(succ)],
    }


def map_from_doc(doc: dict) -> CayleyMap:
    try:
        gdoc = doc["group"]
        s_elems = doc["S"]
        rotation_pairs = doc["rotation"]
    except (TypeError, KeyError) as exc:
        raise MapFormatError(f"map document missing field: {exc}") from None
    if isinstance(gdoc, dict) and "builtin" in gdoc:
        g = groupmod.builtin(gdoc["builtin"])
    elif isinstance(gdoc, dict):
        g = groupmod.group_from_doc(gdoc)
    else:
        raise MapFormatError("map document 'group' must be an object")
    try:
        conn = make_connection_set(g, s_elems)
    except (InvalidInputError, ContainsIdentityError, NotInverseClosedError, NotGeneratingError) as exc:
        raise MapFormatError(f"bad connection set in map document: {exc}") from exc
    succ = {}
    for pair in rotation_pairs:
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise MapFormatError(f"bad rotation pair {pair!r}")
        succ[pair[0]] = pair[1]
    if set(succ) != set(conn.elements):
        raise MapFormatError("rotation pairs do not cover the connection set exactly")
    try:
        ordering = CyclicOrdering.from_successor(succ)
    except InvalidInputError as exc:
        raise MapFormatError(f"bad rotation in map document: {exc}") from exc
    return CayleyMap(g, conn, ordering)


def save_map(m: CayleyMap, path) -> None:
    Path(path).write_text(json.dumps(map_to_doc(m), sort_keys=True, indent=2) + "\n")


def load_map(path) -> CayleyMap:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"not valid JSON: {exc}") from exc
    return map_from_doc(doc)
