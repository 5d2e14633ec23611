"""Tableau-sets, tableau-clouds and the successor relations between them.

Tableau-sets are bitsets over a :class:`SubformulaTable`.  The universe of
all tableau-sets for a formula and logic is kept in alphabetical bitstring
order; clouds are bitsets over that list, again with the first list entry as
the most significant bit, so ascending integers enumerate clouds in
alphabetical order.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .formula import AND, BOX, KNOW, NEG, VAR, Formula, SubformulaTable, subformulas

__all__ = [
    "Logic",
    "TableauUniverse",
    "is_tableau_set",
    "enumerate_tableau_sets",
    "enumerate_tableau_sets_naive",
    "set_successor",
    "is_cloud",
    "cloud_successor",
    "cloud_iterator",
    "cloud_hits",
    "universe",
]


class Logic(enum.Enum):
    K4xS5 = "k4s5"
    S4xS5 = "s4s5"
    SSL = "ssl"

    @classmethod
    def parse(cls, name: str) -> "Logic":
        key = name.strip().lower().replace("x", "").replace("×", "").replace("_", "")
        for logic in cls:
            if logic.value.replace("x", "") == key:
                return logic
        raise ValueError(f"unknown logic {name!r}; expected one of k4s5, s4s5, ssl")

    @property
    def reflexive(self) -> bool:
        """Whether the box relation is reflexive (condition (d) applies)."""
        return self is not Logic.K4xS5

    @property
    def label(self) -> str:
        return {"k4s5": "K4xS5", "s4s5": "S4xS5", "ssl": "SSL"}[self.value]

    def __str__(self) -> str:
        return self.label


def is_tableau_set(bits: int, table: SubformulaTable, x: Logic) -> bool:
    for i, kind in enumerate(table.kinds):
        here = bool(bits & table.bit(i))
        ch = table.children[i]
        if kind == NEG:
            if here == bool(bits & table.bit(ch[0])):
                return False
        elif kind == AND:
            both = bool(bits & table.bit(ch[0])) and bool(bits & table.bit(ch[1]))
            if here != both:
                return False
        elif kind == KNOW or (kind == BOX and x.reflexive):
            if here and not bits & table.bit(ch[0]):
                return False
    return True


def enumerate_tableau_sets_naive(table: SubformulaTable, x: Logic) -> list[int]:
    """Filter all ``2**a`` subsets in ascending order."""
    return [b for b in range(1 << table.a) if is_tableau_set(b, table, x)]


def enumerate_tableau_sets(table: SubformulaTable, x: Logic) -> list[int]:
    """All tableau-sets in ascending bitstring order.

    Builds sets index by index; post-order puts children first, so negations
    and conjunctions are forced and only atoms and modal formulas branch.
    Produces exactly the list of :func:`enumerate_tableau_sets_naive`.
    """
    partial = [0]
    for i, kind in enumerate(table.kinds):
        b = table.bit(i)
        ch = table.children[i]
        nxt = []
        for s in partial:
            if kind == VAR:
                nxt.append(s)
                nxt.append(s | b)
            elif kind == NEG:
                nxt.append(s if s & table.bit(ch[0]) else s | b)
            elif kind == AND:
                both = s & table.bit(ch[0]) and s & table.bit(ch[1])
                nxt.append(s | b if both else s)
            else:
                nxt.append(s)
                if not (kind == KNOW or x.reflexive) or s & table.bit(ch[0]):
                    nxt.append(s | b)
        partial = nxt
    return sorted(partial)


def _box_bodies(bits: int, table: SubformulaTable) -> int:
    out = 0
    for i in table.indices(BOX):
        if bits & table.bit(i):
            out |= table.bit(table.children[i][0])
    return out


def set_successor(f: int, g: int, table: SubformulaTable, x: Logic) -> bool:
    """Whether tableau-set ``g`` can be an ``x``-successor of ``f``."""
    boxes = f & table.box_mask
    if boxes & ~g:
        return False
    if x is Logic.K4xS5:
        return not _box_bodies(f, table) & ~g
    if x is Logic.SSL:
        return (f & table.atom_mask) == (g & table.atom_mask)
    return True


@dataclass(frozen=True)
class TableauUniverse:
    """All tableau-sets for one formula and logic, plus precomputed tables.

    ``succ[j]`` / ``pred[j]`` are cloud-width masks of the sets ``G`` with
    ``F_j <= G`` / ``G <= F_j`` under the set successor relation.
    """

    table: SubformulaTable
    logic: Logic
    sets: tuple[int, ...]
    index: dict = field(repr=False, compare=False)
    succ: tuple[int, ...] = field(repr=False, compare=False)
    pred: tuple[int, ...] = field(repr=False, compare=False)
    k_proj: tuple[int, ...] = field(repr=False, compare=False)
    k_classes: tuple[int, ...] = field(repr=False, compare=False)
    without: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def A(self) -> int:
        return len(self.sets)

    @property
    def formula(self) -> Formula:
        return self.table.root

    def cbit(self, j: int) -> int:
        return 1 << (self.A - 1 - j)

    def members(self, cloud: int) -> list[int]:
        out = []
        top = len(self.sets) - 1
        while cloud:
            low = cloud & -cloud
            out.append(top - (low.bit_length() - 1))
            cloud ^= low
        out.reverse()
        return out

    def cloud_of(self, set_indices) -> int:
        c = 0
        for j in set_indices:
            c |= self.cbit(j)
        return c

    def cloud_from_sets(self, bitsets) -> int:
        return self.cloud_of(self.index[b] for b in bitsets)

    def reach(self, cloud: int) -> int:
        """Union of the successor rows of the members of ``cloud``."""
        r = 0
        for j in self.members(cloud):
            r |= self.succ[j]
        return r

    def containing(self, i: int) -> int:
        """Cloud-width mask of the sets that contain subformula ``i``."""
        return ~self.without[i] & ((1 << self.A) - 1)

    def describe_cloud(self, cloud: int) -> str:
        return "{" + ", ".join(self.table.describe(self.sets[j]) for j in self.members(cloud)) + "}"


def universe(f: Formula | SubformulaTable, x: Logic) -> TableauUniverse:
    """Build the :class:`TableauUniverse` for ``f`` under logic ``x``."""
    table = f if isinstance(f, SubformulaTable) else subformulas(f)
    sets = enumerate_tableau_sets(table, x)
    A = len(sets)
    cbit = [1 << (A - 1 - j) for j in range(A)]
    succ = [0] * A
    pred = [0] * A
    for j, F in enumerate(sets):
        for k, G in enumerate(sets):
            if set_successor(F, G, table, x):
                succ[j] |= cbit[k]
                pred[k] |= cbit[j]
    k_proj = tuple(F & table.k_mask for F in sets)
    classes: dict[int, int] = {}
    for j, p in enumerate(k_proj):
        classes[p] = classes.get(p, 0) | cbit[j]
    without = []
    for i in range(table.a):
        m = 0
        for j, F in enumerate(sets):
            if not F & table.bit(i):
                m |= cbit[j]
        without.append(m)
    return TableauUniverse(
        table=table,
        logic=x,
        sets=tuple(sets),
        index={F: j for j, F in enumerate(sets)},
        succ=tuple(succ),
        pred=tuple(pred),
        k_proj=k_proj,
        k_classes=tuple(sorted(classes.values(), reverse=True)),
        without=tuple(without),
    )


def is_cloud(c: int, u: TableauUniverse) -> bool:
    """Nonempty, members agree on K-formulas, and common truths are known."""
    if c <= 0 or c >> u.A:
        return False
    members = u.members(c)
    proj = u.k_proj[members[0]]
    common = -1
    for j in members:
        if u.k_proj[j] != proj:
            return False
        common &= u.sets[j]
    table = u.table
    for i in table.indices(KNOW):
        if common & table.bit(table.children[i][0]) and not common & table.bit(i):
            return False
    return True


def cloud_successor(f: int, g: int, u: TableauUniverse, x: Logic | None = None) -> bool:
    """Whether cloud ``g`` can be an ``x``-successor of cloud ``f``.

    Every member of ``g`` needs a predecessor in ``f``; outside SSL every
    member of ``f`` also needs a successor in ``g``.
    """
    x = u.logic if x is None else x
    if g & ~u.reach(f):
        return False
    if x is Logic.SSL:
        return True
    return all(u.succ[j] & g for j in u.members(f))


def _ascending_submasks(mask: int, hits: list[int]) -> Iterator[int]:
    """Nonempty submasks of ``mask`` meeting every mask in ``hits``, ascending.

    Decides bits from the most significant down, 0 before 1, and drops a
    prefix as soon as some unmet constraint cannot be met by the lower bits.
    """
    hits = [h & mask for h in hits]
    if any(h == 0 for h in hits):
        return
    bits = []
    m = mask
    while m:
        top = 1 << (m.bit_length() - 1)
        bits.append(top)
        m ^= top

    def go(k: int, cur: int, open_: list[int]) -> Iterator[int]:
        if k == len(bits):
            if cur and not open_:
                yield cur
            return
        b = bits[k]
        below = b - 1
        # leave bit b out
        if all(h & below for h in open_) and (cur or mask & below):
            yield from go(k + 1, cur, open_)
        # put bit b in
        rest = [h for h in open_ if not h & b]
        if all(h & below for h in rest):
            yield from go(k + 1, cur | b, rest)

    yield from go(0, 0, hits)


def cloud_hits(u: TableauUniverse, kclass: int) -> list[int]:
    """Cloud condition (b) for one K-class, as sets a cloud must meet.

    Members share their K-formulas; when ``K chi`` is absent from them, some
    member must lack ``chi``.
    """
    proj = u.k_proj[u.members(kclass)[0]]
    table = u.table
    return [
        u.without[table.children[i][0]]
        for i in table.indices(KNOW)
        if not proj & table.bit(i)
    ]


def cloud_iterator(
    u: TableauUniverse,
    filter: Callable[[int], bool] | None = None,
    within: int | None = None,
    hits: tuple[int, ...] = (),
) -> Iterator[int]:
    """Yield the clouds of ``u`` in ascending bitstring order.

    Same sequence as scanning every ``A``-bit string and discarding
    non-clouds and ``filter`` rejects.  A cloud lies inside one
    K-projection class and meets the masks from :func:`cloud_hits`, so only
    such subsets are generated and the per-class streams are merged.
    ``within`` restricts members to a mask; each mask in ``hits`` must be met.
    """
    streams = []
    for kclass in u.k_classes:
        m = kclass if within is None else kclass & within
        if m:
            streams.append(_ascending_submasks(m, cloud_hits(u, kclass) + list(hits)))
    for c in heapq.merge(*streams):
        if filter is None or filter(c):
            yield c
