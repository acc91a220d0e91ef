"""Finite groups as validated multiplication tables, plus a builtin catalog.

Elements are indices 0..r-1 into the table; display names ride along for
reports. Associativity is checked exhaustively up to order 256 (larger
tables are accepted with an explicit unchecked flag, but nothing in this
package targets them).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import GroupSpecError, GroupValidationError, InvalidInputError, MapFormatError
from .perm import Permutation

ASSOCIATIVITY_CHECK_LIMIT = 256


class FiniteGroup:
    """Group of order r given by its r x r multiplication table.

    Immutable after construction; instances can be shared freely across
    worker threads. mult[a][b] is the index of a*b.
    """

    __slots__ = ("order", "mult", "identity", "inv", "names", "descriptor",
                 "associativity_checked", "_cache")

    def __init__(self, mult: tuple[tuple[int, ...], ...], identity: int,
                 inv: tuple[int, ...], names: tuple[str, ...],
                 descriptor: str | None, associativity_checked: bool):
        self.order = len(mult)
        self.mult = mult
        self.identity = identity
        self.inv = inv
        self.names = names
        self.descriptor = descriptor
        self.associativity_checked = associativity_checked
        self._cache: dict = {}

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inverse_of(self, x: int) -> int:
        return self.inv[x]

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.mult[y][x]
            n += 1
        return n

    @property
    def name(self) -> str:
        return self.descriptor or f"table:{self.order}"

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def packed(self):
        """Flat int buffers (mult, inv, identity) for the census kernels."""
        if "packed" not in self._cache:
            from array import array
            flat = array("i", [v for row in self.mult for v in row])
            self._cache["packed"] = (flat, array("i", self.inv), self.identity)
        return self._cache["packed"]


def from_multiplication_table(table, names=None, descriptor: str | None = None) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a FiniteGroup.

    Checks shape, a two-sided identity, two-sided inverses, and (up to order
    256) associativity of every triple, naming the first offender.
    """
    mult = tuple(tuple(row) for row in table)
    r = len(mult)
    if r == 0:
        raise GroupValidationError("empty multiplication table")
    for a, row in enumerate(mult):
        if len(row) != r:
            raise GroupValidationError(f"row {a} has length {len(row)}, expected {r}")
        for b, v in enumerate(row):
            if not (isinstance(v, int) and 0 <= v < r):
                raise GroupValidationError(f"entry mult[{a}][{b}] = {v!r} out of range 0..{r - 1}")

    identity = None
    for e in range(r):
        if all(mult[e][x] == x and mult[x][e] == x for x in range(r)):
            identity = e
            break
    if identity is None:
        raise GroupValidationError("no two-sided identity element")

    inv = [None] * r
    for x in range(r):
        for y in range(r):
            if mult[x][y] == identity and mult[y][x] == identity:
                inv[x] = y
                break
        if inv[x] is None:
            raise GroupValidationError(f"element {x} has no two-sided inverse")

    checked = r <= ASSOCIATIVITY_CHECK_LIMIT
    if checked:
        for a in range(r):
            ra = mult[a]
            for b in range(r):
                rb = mult[b]
                rab = mult[ra[b]]
                # a*(b*c) == (a*b)*c for every c, compared row-at-once
                if [ra[x] for x in rb] != list(rab):
                    c = next(c for c in range(r) if ra[rb[c]] != rab[c])
                    raise GroupValidationError(f"associativity fails at triple ({a},{b},{c})")

    if names is None:
        names = tuple(str(i) for i in range(r))
    else:
        names = tuple(str(n) for n in names)
        if len(names) != r:
            raise GroupValidationError(f"got {len(names)} names for order {r}")

    return FiniteGroup(mult, identity, tuple(inv), names, descriptor, checked)


# ---------------------------------------------------------------------------
# builtin families

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError(f"cyclic order must be >= 1, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return from_multiplication_table(table, [str(i) for i in range(n)], f"cyclic:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: indices 0..n-1 are rotations, n..2n-1 reflections."""
    if n < 2:
        raise GroupSpecError(f"dihedral parameter must be >= 2, got {n}")
    r = 2 * n

    def prod(i, j):
        f1, a = divmod(i, n)
        f2, b = divmod(j, n)
        rot = (b + (a if f2 == 0 else -a)) % n
        return (f1 ^ f2) * n + rot

    table = [[prod(i, j) for j in range(r)] for i in range(r)]
    names = [("e" if a == 0 else f"r{a}" if a > 1 else "r") for a in range(n)]
    names += [("s" if a == 0 else f"sr{a}") for a in range(n)]
    return from_multiplication_table(table, names, f"dihedral:{n}")


def elementary_abelian_2(k: int) -> FiniteGroup:
    if k < 1:
        raise GroupSpecError(f"elem2 rank must be >= 1, got {k}")
    if 2 ** k > ASSOCIATIVITY_CHECK_LIMIT:
        raise GroupSpecError(f"elem2 rank {k} exceeds the supported order {ASSOCIATIVITY_CHECK_LIMIT}")
    n = 2 ** k
    table = [[i ^ j for j in range(n)] for i in range(n)]
    return from_multiplication_table(table, [format(i, f"0{k}b") for i in range(n)], f"elem2:{k}")


def quaternion8() -> FiniteGroup:
    """The quaternion group {1,-1,i,-i,j,-j,k,-k}."""
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("j", "1"): (1, "j"), ("k", "1"): (1, "k"),
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }

    def split(u):
        return (-1, u[1:]) if u.startswith("-") else (1, u)

    def idx(sign, b):
        return units.index(b if sign == 1 else "-" + b)

    table = []
    for u in units:
        row = []
        for v in units:
            su, bu = split(u)
            sv, bv = split(v)
            sm, bm = basis_mul[(bu, bv)]
            row.append(idx(su * sv * sm, bm))
        table.append(row)
    return from_multiplication_table(table, units, "quaternion:8")


def symmetric(n: int) -> FiniteGroup:
    """Sym(n) for n <= 5, elements in lexicographic one-line order."""
    if not 1 <= n <= 5:
        raise GroupSpecError(f"symmetric parameter must be in 1..5, got {n}")
    elems = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    # left-to-right composition, matching the package convention
    table = [[index[tuple(q[p[x]] for x in range(n))] for q in elems] for p in elems]
    names = ["".join(map(str, p)) for p in elems]
    return from_multiplication_table(table, names, f"sym:{n}")


def alternating4() -> FiniteGroup:
    """Alt(4) of order 12, built from its table (it is not a builtin family)."""
    elems = sorted(p for p in itertools.permutations(range(4)) if _parity(p) == 0)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(q[p[x]] for x in range(4))] for q in elems] for p in elems]
    names = ["".join(map(str, p)) for p in elems]
    return from_multiplication_table(table, names, "alt4-table")


def _parity(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    if len(groups) < 2:
        raise GroupSpecError("direct product needs at least two factors")
    acc = groups[0]
    for g in groups[1:]:
        acc = _product2(acc, g)
    desc = "product:" + ",".join(g.descriptor or "table" for g in groups)
    return FiniteGroup(acc.mult, acc.identity, acc.inv, acc.names, desc, acc.associativity_checked)


def _product2(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    rg, rh = g.order, h.order
    if rg * rh > ASSOCIATIVITY_CHECK_LIMIT:
        raise GroupSpecError(f"product order {rg * rh} exceeds the supported order {ASSOCIATIVITY_CHECK_LIMIT}")
    table = [
        [g.mult[a1][a2] * rh + h.mult[b1][b2] for a2 in range(rg) for b2 in range(rh)]
        for a1 in range(rg) for b1 in range(rh)
    ]
    names = [f"{g.names[a]}|{h.names[b]}" for a in range(rg) for b in range(rh)]
    return from_multiplication_table(table, names)


_FAMILIES = ("cyclic", "dihedral", "elem2", "quaternion", "sym", "product")


def builtin(spec: str) -> FiniteGroup:
    """Construct a catalog group from a descriptor string.

    Supported: cyclic:N, dihedral:N (order 2N), elem2:K (order 2^K),
    quaternion:8, sym:N (N<=5), and product:spec,spec[,spec...] over the
    non-product families.
    """
    spec = spec.strip()
    family, sep, rest = spec.partition(":")
    if not sep or family not in _FAMILIES:
        raise GroupSpecError(f"unknown group descriptor {spec!r}")
    if family == "product":
        parts = [p.strip() for p in rest.split(",") if p.strip()]
        if len(parts) < 2:
            raise GroupSpecError(f"product descriptor needs >= 2 factors: {spec!r}")
        if any(p.startswith("product") for p in parts):
            raise GroupSpecError("nested product descriptors are not supported")
        return direct_product(*(builtin(p) for p in parts))
    try:
        n = int(rest)
    except ValueError:
        raise GroupSpecError(f"bad parameter in group descriptor {spec!r}") from None
    if family == "cyclic":
        return cyclic(n)
    if family == "dihedral":
        return dihedral(n)
    if family == "elem2":
        return elementary_abelian_2(n)
    if family == "quaternion":
        if n != 8:
            raise GroupSpecError("only quaternion:8 is supported")
        return quaternion8()
    return symmetric(n)


def catalog(max_order: int = 12) -> list[FiniteGroup]:
    """The experiment catalog up to max_order (census targets).

    Covers cyclic, dihedral, elementary abelian 2-groups, quaternion:8,
    sym:3, Alt(4) ingested as a raw table, and a few direct products.
    Contains isomorphic repeats under different constructions on purpose
    (dihedral:2 vs elem2:2, sym:3 vs dihedral:3); they double as cross-checks.
    """
    groups: list[FiniteGroup] = []
    groups += [cyclic(n) for n in range(2, max_order + 1)]
    groups += [dihedral(n) for n in range(2, max_order // 2 + 1)]
    groups += [elementary_abelian_2(k) for k in range(2, max_order.bit_length() + 1) if 2 ** k <= max_order]
    if max_order >= 8:
        groups.append(quaternion8())
    if max_order >= 6:
        groups.append(symmetric(3))
    if max_order >= 12:
        groups.append(alternating4())
    for desc in ("product:cyclic:2,cyclic:4", "product:cyclic:3,cyclic:3", "product:cyclic:2,cyclic:6"):
        g = builtin(desc)
        if g.order <= max_order:
            groups.append(g)
    return groups


# ---------------------------------------------------------------------------
# structural queries

@dataclass(frozen=True)
class InverseClassPartition:
    """R minus the identity, split into involution singletons and {x, x^-1} pairs."""

    involution_classes: tuple[int, ...]
    pair_classes: tuple[tuple[int, int], ...]

    @property
    def class_count(self) -> int:
        return len(self.involution_classes) + len(self.pair_classes)


def inverse_class_partition(group: FiniteGroup) -> InverseClassPartition:
    involutions = []
    pairs = []
    e = group.identity
    for x in range(group.order):
        if x == e:
            continue
        y = group.inv[x]
        if y == x:
            involutions.append(x)
        elif x < y:
            pairs.append((x, y))
    return InverseClassPartition(tuple(involutions), tuple(pairs))


def generates(group: FiniteGroup, elements) -> bool:
    """Whether the closure of the given elements under multiplication is the whole group."""
    elems = sorted(set(elements))
    if group.identity in elems:
        raise InvalidInputError("generating-set query must not contain the identity")
    reached = [False] * group.order
    reached[group.identity] = True
    frontier = [group.identity]
    count = 1
    while frontier:
        v = frontier.pop()
        for s in elems:
            w = group.mult[s][v]
            if not reached[w]:
                reached[w] = True
                count += 1
                frontier.append(w)
    return count == group.order


def right_regular_action(group: FiniteGroup, g: int) -> Permutation:
    """The permutation x -> x*g of the element indices."""
    if not 0 <= g < group.order:
        raise InvalidInputError(f"no element with index {g}")
    return Permutation(group.mult[x][g] for x in range(group.order))


def is_exceptional(group: FiniteGroup) -> bool:
    """The two MRR-free groups: order 3, or order 4 with every non-identity
    element an involution (order/exponent fingerprint, exact for these orders)."""
    r = group.order
    if r == 3:
        return True
    if r == 4:
        e = group.identity
        return all(group.mult[x][x] == e for x in range(r) if x != e)
    return False


# ---------------------------------------------------------------------------
# group file format: {"order": r, "names": [...], "table": [[...], ...]}

def group_to_doc(group: FiniteGroup) -> dict:
    return {
        "order": group.order,
        "names": list(group.names),
        "table": [list(row) for row in group.mult],
    }


def group_from_doc(doc: dict) -> FiniteGroup:
    try:
        order = doc["order"]
        names = doc["names"]
        table = doc["table"]
    except (TypeError, KeyError) as exc:
        raise MapFormatError(f"group document missing field: {exc}") from None
    if not isinstance(order, int) or len(table) != order:
        raise MapFormatError("group document order/table mismatch")
    try:
        return from_multiplication_table(table, names)
    except GroupValidationError as exc:
        raise MapFormatError(f"group document is not a group: {exc}") from exc


def save_group(group: FiniteGroup, path) -> None:
    Path(path).write_text(json.dumps(group_to_doc(group), sort_keys=True, indent=2) + "\n")


def load_group(path) -> FiniteGroup:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"not valid JSON: {exc}") from exc
    return group_from_doc(doc)


def resolve_group_spec(spec: str) -> FiniteGroup:
    """CLI group argument: a builtin descriptor, or a path to a group JSON file."""
    family = spec.partition(":")[0]
    if family in _FAMILIES:
        return builtin(spec)
    if Path(spec).exists():
        return load_group(spec)
    raise GroupSpecError(f"{spec!r} is neither a builtin descriptor nor an existing file")
