"""Brute-force ground truth for small formulas.

Everything here works on plain Python sets of :class:`Formula` objects and
re-derives tableau-sets, clouds and both successor relations straight from
their definitions, so it shares no tables with the solver.  Only the
decoding of solver clouds (bitsets over a universe) into sets of formulas
touches :mod:`bimodal_sat.tableau`.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .formula import And, Box, Formula, K, Neg, Var, render
from .tableau import Logic, TableauUniverse

__all__ = [
    "TooLarge",
    "verify_partial_tableau",
    "exhaustive_search",
    "decode_cloud",
    "LITERAL_MAX_CLOUDS",
    "FIXPOINT_MAX_CLOUDS",
    "MAX_GROUP",
]

# all 2**15 subsets of clouds are tried literally up to this many clouds
LITERAL_MAX_CLOUDS = 15
FIXPOINT_MAX_CLOUDS = 1024
# candidate clouds per K-agreement group are all subsets of the group
MAX_GROUP = 16
MAX_FREE = 20
SINGLE_CLOUD_MAX_SIZE = 2

FSet = frozenset  # a tableau-set: frozenset of Formula
FCloud = frozenset  # a cloud: frozenset of FSet


class TooLarge(ValueError):
    pass


# --------------------------------------------------------------------------
# Definitions, evaluated directly


def closure(f: Formula) -> set:
    out = {f}
    if isinstance(f, And):
        out |= closure(f.left) | closure(f.right)
    elif not isinstance(f, Var):
        out |= closure(f.child)
    return out


def is_tableau_set(F: FSet, sf: set, x: Logic) -> bool:
    for g in sf:
        if isinstance(g, Neg) and (g in F) == (g.child in F):
            return False
        if isinstance(g, And) and (g in F) != (g.left in F and g.right in F):
            return False
        if isinstance(g, K) and g in F and g.child not in F:
            return False
        if isinstance(g, Box) and x is not Logic.K4xS5 and g in F and g.child not in F:
            return False
    return True


def tableau_sets(sf: set, x: Logic) -> list[FSet]:
    # truth of atoms and modal formulas is free; the rest is forced
    free = sorted((g for g in sf if isinstance(g, (Var, Box, K))), key=render)
    out = []
    for r in range(len(free) + 1):
        for chosen in combinations(free, r):
            F = _saturate(set(chosen), sf)
            if is_tableau_set(F, sf, x):
                out.append(F)
    return out


def _saturate(free_true: set, sf: set) -> FSet:
    memo: dict = {}

    def true(g):
        if g not in memo:
            if isinstance(g, Neg):
                memo[g] = not true(g.child)
            elif isinstance(g, And):
                memo[g] = true(g.left) and true(g.right)
            else:
                memo[g] = g in free_true
        return memo[g]

    return frozenset(g for g in sf if true(g))


def set_successor(F: FSet, G: FSet, x: Logic) -> bool:
    boxes = {g for g in F if isinstance(g, Box)}
    if not boxes <= G:
        return False
    if x is Logic.K4xS5 and not {g.child for g in boxes} <= G:
        return False
    if x is Logic.SSL:
        return {g for g in F if isinstance(g, Var)} == {g for g in G if isinstance(g, Var)}
    return True


def is_cloud(C: FCloud, sf: set) -> bool:
    if not C:
        return False
    ks = [g for g in sf if isinstance(g, K)]
    first = next(iter(C))
    for F in C:
        if any((k in F) != (k in first) for k in ks):
            return False
    for k in ks:
        if all(k.child in F for F in C) and k not in first:
            return False
    return True


def cloud_successor(C: FCloud, D: FCloud, x: Logic) -> bool:
    if not all(any(set_successor(F, G, x) for F in C) for G in D):
        return False
    if x is Logic.SSL:
        return True
    return all(any(set_successor(F, G, x) for G in D) for F in C)


def _obligations(F: FSet, sf: set) -> list[Box]:
    return [g for g in sf if isinstance(g, Box) and g not in F]


def is_partial_tableau(t: set, seq: list, sf: set, x: Logic) -> bool:
    """Both conditions of a partial tableau for the chain ``seq``."""
    if not all(c in t for c in seq):
        return False
    if not all(is_cloud(c, sf) for c in t):
        return False
    exempt = set(seq[:-1])
    for C in t:
        if C in exempt:
            continue
        for F in C:
            for b in _obligations(F, sf):
                if not any(
                    cloud_successor(C, D, x)
                    and any(set_successor(F, G, x) and b.child not in G for G in D)
                    for D in t
                ):
                    return False
    return True


# --------------------------------------------------------------------------
# Public entry points


def decode_cloud(u: TableauUniverse, cloud: int) -> FCloud:
    """A solver cloud as a set of sets of formulas."""
    return frozenset(frozenset(u.table.to_formulas(u.sets[j])) for j in u.members(cloud))


def verify_partial_tableau(u: TableauUniverse, x: Logic, t: Iterable[int], seq: list[int]) -> bool:
    """Check a set of solver clouds against the partial-tableau definition.

    ``seq`` must be pairwise distinct and chained by the cloud successor
    relation; ``ValueError`` otherwise.
    """
    sf = closure(u.formula)
    dseq = [decode_cloud(u, c) for c in seq]
    if len(set(seq)) != len(seq):
        raise ValueError("chain clouds must be pairwise different")
    for a, b in zip(dseq, dseq[1:]):
        if not cloud_successor(a, b, x):
            raise ValueError("chain is not linked by the cloud successor relation")
    dt = {decode_cloud(u, c) for c in t}
    for C in dt:
        if not all(is_tableau_set(F, sf, x) for F in C):
            return False
    return is_partial_tableau(dt, dseq, sf, x)


def all_clouds(sets: list[FSet], sf: set) -> list[FCloud]:
    """Every cloud over ``sets``; members share their K-formulas, so only
    subsets of one K-agreement group are candidates."""
    ks = sorted((g for g in sf if isinstance(g, K)), key=render)
    groups: dict = {}
    for F in sets:
        groups.setdefault(tuple(k in F for k in ks), []).append(F)
    if sum(2 ** len(g) for g in groups.values()) > 2 ** MAX_GROUP:
        raise TooLarge("too many candidate clouds for the brute-force oracle")
    out = []
    for members in groups.values():
        for r in range(1, len(members) + 1):
            for combo in combinations(members, r):
                C = frozenset(combo)
                if is_cloud(C, sf):
                    out.append(C)
    return out


def exhaustive_search(f: Formula, x: Logic, method: str = "auto") -> bool:
    """Whether some set of clouds is a partial tableau for a one-cloud chain
    ``[C0]`` whose cloud ``C0`` has a member containing ``f``.

    Up to ``LITERAL_MAX_CLOUDS`` clouds every subset is tried.  Up to
    ``FIXPOINT_MAX_CLOUDS`` the largest qualifying subset is computed by
    discarding clouds with an undischarged obligation until none is left;
    this is exact because the union of two partial tableaux for one-cloud
    chains is again one.  Beyond that only partial tableaux made of one
    small cloud are tried, and :class:`TooLarge` is raised if none exists.

    ``method`` forces ``"subsets"`` or ``"fixpoint"`` instead of ``"auto"``.
    """
    if method not in ("auto", "subsets", "fixpoint"):
        raise ValueError(f"unknown method {method!r}")
    sf = closure(f)
    if len({g for g in sf if isinstance(g, (Var, Box, K))}) > MAX_FREE:
        raise TooLarge("formula too large for the brute-force oracle")
    sets = tableau_sets(sf, x)
    if not any(f in F for F in sets):
        return False
    try:
        clouds = all_clouds(sets, sf)
    except TooLarge:
        clouds = None
    if clouds is None or len(clouds) > FIXPOINT_MAX_CLOUDS:
        if _single_cloud_witness(f, sets, sf, x):
            return True
        raise TooLarge("too many clouds for the brute-force oracle")
    initial = [i for i, C in enumerate(clouds) if any(f in F for F in C)]
    if not initial:
        return False

    need = _discharge_masks(clouds, sf, x)
    init_mask = sum(1 << i for i in initial)

    def closed(S: int) -> bool:
        return all(
            all(m & S for m in need[i])
            for i in range(len(clouds)) if S >> i & 1
        )

    if method == "subsets" and len(clouds) > LITERAL_MAX_CLOUDS:
        raise TooLarge(f"{len(clouds)} clouds exceed {LITERAL_MAX_CLOUDS} for subset enumeration")
    if method == "subsets" or (method == "auto" and len(clouds) <= LITERAL_MAX_CLOUDS):
        for S in range(1, 1 << len(clouds)):
            if S & init_mask and closed(S):
                t = {clouds[i] for i in range(len(clouds)) if S >> i & 1}
                C0 = next(clouds[i] for i in initial if S >> i & 1)
                assert is_partial_tableau(t, [C0], sf, x)
                return True
        return False

    S = (1 << len(clouds)) - 1
    changed = True
    while changed:
        changed = False
        for i in range(len(clouds)):
            if S >> i & 1 and not all(m & S for m in need[i]):
                S &= ~(1 << i)
                changed = True
    return bool(S & init_mask)


def _single_cloud_witness(f: Formula, sets: list[FSet], sf: set, x: Logic) -> bool:
    """Look for a one-cloud partial tableau among clouds of at most
    ``SINGLE_CLOUD_MAX_SIZE`` sets."""
    for r in range(1, SINGLE_CLOUD_MAX_SIZE + 1):
        for combo in combinations(sets, r):
            C = frozenset(combo)
            if any(f in F for F in C) and is_cloud(C, sf) and is_partial_tableau({C}, [C], sf, x):
                return True
    return False


def _discharge_masks(clouds: list[FCloud], sf: set, x: Logic) -> list[list[int]]:
    """For each cloud, one mask per obligation: the clouds discharging it."""
    succ_cache: dict = {}

    def ss(F, G):
        key = (F, G)
        if key not in succ_cache:
            succ_cache[key] = set_successor(F, G, x)
        return succ_cache[key]

    def le(C, D):
        if not all(any(ss(F, G) for F in C) for G in D):
            return False
        return x is Logic.SSL or all(any(ss(F, G) for G in D) for F in C)

    out = []
    for C in clouds:
        later = [k for k, D in enumerate(clouds) if le(C, D)]
        masks = []
        for F in C:
            for b in _obligations(F, sf):
                m = 0
                for k in later:
                    if any(ss(F, G) and b.child not in G for G in clouds[k]):
                        m |= 1 << k
                masks.append(m)
        out.append(masks)
    return out
