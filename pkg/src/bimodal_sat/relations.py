"""Finite binary relations on ``{0, ..., size-1}``.

Property checks, strict parts, maximum chain length, quotients by an
equivalence and the lifting of a relation to the powerset.  Everything here
is small-scale and exact; it backs the chain-length bounds used by the
solver's depth analysis and the property tests around them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

__all__ = [
    "FiniteRelation",
    "NotTransitive",
    "NotEquivalence",
    "UniverseTooLarge",
    "classify",
    "strict_part",
    "inverse",
    "intersection",
    "mcl",
    "derived_equivalence",
    "equivalence_classes",
    "quotient",
    "lift_powerset",
    "left_commutative",
    "right_commutative",
    "LIFT_MAX_UNIVERSE",
]

LIFT_MAX_UNIVERSE = 5


class NotTransitive(ValueError):
    pass


class NotEquivalence(ValueError):
    pass


class UniverseTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FiniteRelation:
    size: int
    pairs: frozenset

    def __post_init__(self):
        for s, t in self.pairs:
            if not (0 <= s < self.size and 0 <= t < self.size):
                raise ValueError(f"pair {(s, t)} outside universe of size {self.size}")

    @classmethod
    def of(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "FiniteRelation":
        return cls(size, frozenset((int(s), int(t)) for s, t in pairs))

    @classmethod
    def identity(cls, size: int) -> "FiniteRelation":
        return cls.of(size, ((i, i) for i in range(size)))

    @classmethod
    def total(cls, size: int) -> "FiniteRelation":
        return cls.of(size, ((i, j) for i in range(size) for j in range(size)))

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def holds(self, s: int, t: int) -> bool:
        return (s, t) in self.pairs

    def successors(self, s: int) -> list[int]:
        return sorted(t for (u, t) in self.pairs if u == s)

    @property
    def is_reflexive(self) -> bool:
        return all((i, i) in self.pairs for i in range(self.size))

    @property
    def is_symmetric(self) -> bool:
        return all((t, s) in self.pairs for s, t in self.pairs)

    @property
    def is_transitive(self) -> bool:
        succ = {}
        for s, t in self.pairs:
            succ.setdefault(s, set()).add(t)
        for s, ts in succ.items():
            for t in ts:
                if not succ.get(t, set()) <= ts:
                    return False
        return True

    @property
    def is_preorder(self) -> bool:
        return self.is_reflexive and self.is_transitive

    @property
    def is_equivalence(self) -> bool:
        return self.is_reflexive and self.is_symmetric and self.is_transitive


def classify(r: FiniteRelation) -> dict[str, bool]:
    return {
        "reflexive": r.is_reflexive,
        "transitive": r.is_transitive,
        "symmetric": r.is_symmetric,
    }


def strict_part(r: FiniteRelation) -> FiniteRelation:
    """``s < t`` iff ``s <= t`` and not ``t <= s``."""
    return FiniteRelation(r.size, frozenset((s, t) for s, t in r.pairs if (t, s) not in r.pairs))


def inverse(r: FiniteRelation) -> FiniteRelation:
    return FiniteRelation(r.size, frozenset((t, s) for s, t in r.pairs))


def intersection(r1: FiniteRelation, r2: FiniteRelation) -> FiniteRelation:
    if r1.size != r2.size:
        raise ValueError("relations live on different universes")
    return FiniteRelation(r1.size, r1.pairs & r2.pairs)


def mcl(r: FiniteRelation) -> int:
    """Maximum chain length: the most ``<``-steps in a strict chain.

    The strict part of a transitive relation is acyclic, so this is the
    longest path (counted in edges) of a DAG.
    """
    if r.size == 0:
        raise ValueError("maximum chain length needs a nonempty universe")
    if not r.is_transitive:
        raise NotTransitive("maximum chain length is defined for transitive relations")
    lt = strict_part(r)
    succ: dict[int, list[int]] = {}
    for s, t in lt.pairs:
        succ.setdefault(s, []).append(t)

    @lru_cache(maxsize=None)
    def longest_from(s: int) -> int:
        return max((1 + longest_from(t) for t in succ.get(s, ())), default=0)

    return max(longest_from(s) for s in range(r.size))


def derived_equivalence(r: FiniteRelation) -> FiniteRelation:
    """``s == t`` iff ``s = t`` or (``s <= t`` and ``t <= s``)."""
    pairs = {(i, i) for i in range(r.size)}
    pairs |= {(s, t) for s, t in r.pairs if (t, s) in r.pairs}
    return FiniteRelation(r.size, frozenset(pairs))


def equivalence_classes(e: FiniteRelation) -> list[tuple[int, ...]]:
    """Classes of an equivalence, each sorted, ordered by least member."""
    if not e.is_equivalence:
        raise NotEquivalence("not an equivalence relation")
    seen: set[int] = set()
    classes = []
    for i in range(e.size):
        if i in seen:
            continue
        cls = tuple(sorted(j for j in range(e.size) if (i, j) in e.pairs))
        seen.update(cls)
        classes.append(cls)
    return classes


def quotient(r: FiniteRelation, e: FiniteRelation) -> FiniteRelation:
    """The relation induced by ``r`` on the classes of ``e``.

    Class ``k`` is the ``k``-th class ordered by least member; ``C -> D`` iff
    some member of ``C`` is ``r``-related to some member of ``D``.
    """
    if r.size != e.size:
        raise ValueError("relations live on different universes")
    classes = equivalence_classes(e)
    which = {}
    for k, cls in enumerate(classes):
        for w in cls:
            which[w] = k
    return FiniteRelation(len(classes), frozenset((which[s], which[t]) for s, t in r.pairs))


def lift_powerset(r: FiniteRelation) -> FiniteRelation:
    """Lift ``r`` to subsets: ``A <=' B`` iff every ``b`` in ``B`` has some
    ``a`` in ``A`` with ``a <= b``.

    Subset ``A`` is the point whose bit ``i`` is set iff ``i`` is in ``A``.
    """
    if r.size > LIFT_MAX_UNIVERSE:
        raise UniverseTooLarge(f"powerset lift limited to universes of size <= {LIFT_MAX_UNIVERSE}")
    if not r.is_transitive:
        raise NotTransitive("powerset lift expects a transitive relation")
    # below[b] = bitmask of all a with a <= b
    below = [0] * r.size
    for a, b in r.pairs:
        below[b] |= 1 << a
    n = 1 << r.size
    pairs = []
    for A in range(n):
        for B in range(n):
            if all(below[b] & A for b in range(r.size) if B >> b & 1):
                pairs.append((A, B))
    return FiniteRelation(n, frozenset(pairs))


def left_commutative(d: FiniteRelation, e: FiniteRelation):
    """First triple ``(w, u, u2)`` breaking left commutativity, or ``None``.

    Left commutativity: ``w d u`` and ``u e u2`` imply some ``w2`` with
    ``w e w2`` and ``w2 d u2``.
    """
    for w, u in sorted(d.pairs):
        for u2 in e.successors(u):
            if not any((w2, u2) in d.pairs for w2 in e.successors(w)):
                return (w, u, u2)
    return None


def right_commutative(d: FiniteRelation, e: FiniteRelation):
    """First triple ``(w, w2, u2)`` breaking right commutativity, or ``None``.

    Right commutativity: ``w e w2`` and ``w2 d u2`` imply some ``u`` with
    ``w d u`` and ``u e u2``.
    """
    for w, w2 in sorted(e.pairs):
        for u2 in d.successors(w2):
            if not any((u, u2) in e.pairs for u in d.successors(w)):
                return (w, w2, u2)
    return None
