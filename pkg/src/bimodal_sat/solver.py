"""Recursive tableau-cloud search deciding satisfiability.

``alg_rec`` decides, for a chain of pairwise different clouds, whether a
partial tableau extending it exists.  For each unfulfilled box obligation
``(Box chi, F)`` of the last cloud it first looks back along the chain for a
cloud that discharges it, and otherwise tries every fresh successor cloud
that could discharge it and recurses.  ``solve`` runs the procedure from
every admissible initial cloud.
"""

from __future__ import annotations

import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from .formula import BOX, Formula, lengths
from .tableau import Logic, TableauUniverse, cloud_iterator, cloud_successor, universe

__all__ = [
    "SearchOptions",
    "SearchStats",
    "PartialTableau",
    "Verdict",
    "ResourceLimit",
    "InvariantViolation",
    "alg_rec",
    "solve",
    "count_tableau_sets",
    "depth_bound",
    "DEFAULT_STEP_LIMIT",
]

DEFAULT_STEP_LIMIT = 2**32


class ResourceLimit(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    pass


@dataclass
class SearchOptions:
    logic: Logic = Logic.S4xS5
    collect_tableau: bool = True
    # Caches results per (set of chain clouds, last cloud); trades the
    # procedure's small memory footprint for speed.
    memoize: bool = False
    depth_limit_override: int | None = None
    step_limit: int = DEFAULT_STEP_LIMIT
    time_limit: float | None = None
    memo_limit: int | None = None


@dataclass
class SearchStats:
    max_recursion_depth: int = 0
    clouds_enumerated: int = 0
    pairs_checked: int = 0
    steps: int = 0
    memo_hits: int = 0
    depth_bound: int = 0
    n: int = 0
    ell: int = 0
    a: int = 0
    A: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PartialTableau:
    """An accepting set of clouds with its initial cloud and a set in it
    containing the input formula."""

    clouds: frozenset
    initial: int
    initial_set: int


@dataclass
class Verdict:
    satisfiable: bool
    logic: Logic
    stats: SearchStats
    universe: TableauUniverse = field(repr=False)
    witness: PartialTableau | None = None


def depth_bound(n: int, A: int) -> int:
    """Proven strict upper bound ``5 * n * A**2`` on the chain index."""
    return 5 * n * A * A


class _Search:
    def __init__(
        self,
        u: TableauUniverse,
        opts: SearchOptions,
        stats: SearchStats,
        hook: Callable[[list[int]], None] | None = None,
    ):
        self.u = u
        self.x = opts.logic
        self.opts = opts
        self.stats = stats
        self.hook = hook
        self.memo: dict | None = {} if opts.memoize else None
        self.deadline = None if opts.time_limit is None else time.monotonic() + opts.time_limit
        n = stats.n or lengths(u.formula)[0]
        self.bound = depth_bound(n, u.A)
        self.depth_limit = opts.depth_limit_override
        table = u.table
        # obligations[j]: (box index, target mask) for every Box chi not in F_j,
        # target = sets G with F_j <= G and chi not in G
        self.obligations = []
        for j, F in enumerate(u.sets):
            obs = []
            for i in table.indices(BOX):
                if not F & table.bit(i):
                    chi = table.children[i][0]
                    obs.append((i, u.succ[j] & u.without[chi]))
            self.obligations.append(obs)

    def le(self, f: int, g: int) -> bool:
        return cloud_successor(f, g, self.u, self.x)

    def _tick(self, depth: int) -> None:
        st = self.stats
        st.steps += 1
        if depth > st.max_recursion_depth:
            st.max_recursion_depth = depth
        if depth >= self.bound:
            raise InvariantViolation(
                f"chain index {depth} reached the proven bound {self.bound}")
        if self.depth_limit is not None and depth > self.depth_limit:
            raise ResourceLimit(f"recursion depth {depth} exceeds limit {self.depth_limit}")
        if st.steps > self.opts.step_limit:
            raise ResourceLimit(f"step limit {self.opts.step_limit} exceeded")
        if self.deadline is not None and st.steps % 256 == 0 and time.monotonic() > self.deadline:
            raise ResourceLimit(f"time limit {self.opts.time_limit}s exceeded")

    def candidates(self, last: int, target: int):
        """Clouds that may follow ``last`` and contain a set from ``target``."""
        u = self.u
        hits = [target]
        if self.x is not Logic.SSL:
            # every member of last needs a son in the successor
            hits += [u.succ[j] for j in u.members(last)]
        # every member of a successor has a father in last
        return cloud_iterator(u, within=u.reach(last), hits=tuple(hits))

    def run(self, seq: list[int], seqset: set[int], collect: set | None) -> bool:
        depth = len(seq) - 1
        self._tick(depth)
        if self.hook is not None:
            self.hook(seq)
        key = None
        if self.memo is not None:
            key = (frozenset(seqset), seq[-1])
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                if hit is False:
                    return False
                if collect is not None:
                    collect |= hit
                return True
        ok = self._run(seq, seqset, collect)
        if self.memo is not None:
            if self.opts.memo_limit is not None and len(self.memo) >= self.opts.memo_limit:
                raise ResourceLimit(f"memo limit {self.opts.memo_limit} exceeded")
            self.memo[key] = (frozenset(collect) if collect is not None else True) if ok else False
        return ok

    def _run(self, seq: list[int], seqset: set[int], collect: set | None) -> bool:
        u = self.u
        last = seq[-1]
        # sets reachable through look-back: members of chain clouds above last
        back = 0
        for c in seq:
            if self.le(last, c):
                back |= c
        members = u.members(last)
        pairs = sorted((i, j, t) for j in members for i, t in self.obligations[j])
        found: set = set()
        for _, _, target in pairs:
            self.stats.pairs_checked += 1
            if back & target:
                continue
            for cand in self.candidates(last, target):
                self.stats.clouds_enumerated += 1
                if cand in seqset:
                    continue
                sub = set() if collect is not None else None
                seq.append(cand)
                seqset.add(cand)
                try:
                    ok = self.run(seq, seqset, sub)
                finally:
                    seq.pop()
                    seqset.discard(cand)
                if ok:
                    if sub is not None:
                        found |= sub
                    break
            else:
                return False
        if collect is not None:
            collect |= found
            collect.update(seq)
        return True


def alg_rec(
    u: TableauUniverse,
    x: Logic,
    seq: list[int],
    collector: set | None = None,
    opts: SearchOptions | None = None,
    stats: SearchStats | None = None,
    hook: Callable[[list[int]], None] | None = None,
) -> bool:
    """Decide whether a partial tableau for the chain ``seq`` exists.

    ``seq`` must be nonempty, pairwise distinct and chained by the cloud
    successor relation.  When ``collector`` is given and the answer is yes,
    it receives the clouds of one such partial tableau.
    """
    if not seq:
        raise ValueError("alg_rec needs a nonempty chain")
    if len(set(seq)) != len(seq):
        raise ValueError("chain clouds must be pairwise different")
    opts = opts or SearchOptions(logic=x)
    if opts.logic is not x:
        opts = SearchOptions(**{**asdict(opts), "logic": x})
    stats = stats if stats is not None else SearchStats()
    with _deep_recursion(len(u.sets)):
        return _Search(u, opts, stats, hook).run(list(seq), set(seq), collector)


class _deep_recursion:
    """Raise the interpreter recursion limit for the duration of a search."""

    def __init__(self, hint: int):
        self.want = max(10_000, 40 * hint)

    def __enter__(self):
        self.old = sys.getrecursionlimit()
        if self.want > self.old:
            sys.setrecursionlimit(self.want)

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)


def solve(
    f: Formula,
    opts: SearchOptions | None = None,
    hook: Callable[[list[int]], None] | None = None,
) -> Verdict:
    """Decide satisfiability of ``f`` in ``opts.logic``."""
    opts = opts or SearchOptions()
    t0 = time.perf_counter()
    u = universe(f, opts.logic)
    n, ell = lengths(f)
    stats = SearchStats(n=n, ell=ell, a=u.table.a, A=u.A, depth_bound=depth_bound(n, u.A))
    root = u.table.root_index
    has_phi = u.containing(root)
    sat_at = None
    with _deep_recursion(u.A):
        search = _Search(u, opts, stats, hook)
        for c in cloud_iterator(u, lambda c: bool(c & has_phi)):
            stats.clouds_enumerated += 1
            if search.run([c], {c}, None):
                sat_at = c
                break
        witness = None
        if sat_at is not None and opts.collect_tableau:
            # re-run the accepting branch, this time keeping its clouds
            collect: set = set()
            replay = _Search(u, opts, SearchStats(n=n), None)
            if not replay.run([sat_at], {sat_at}, collect):
                raise InvariantViolation("accepting branch failed on replay")
            first = next(j for j in u.members(sat_at) if u.sets[j] & u.table.bit(root))
            witness = PartialTableau(frozenset(collect), sat_at, u.sets[first])
    stats.elapsed = time.perf_counter() - t0
    return Verdict(sat_at is not None, opts.logic, stats, u, witness)


def count_tableau_sets(f: Formula, x: Logic) -> int:
    return universe(f, x).A


def step_limit_from_env(default: int = DEFAULT_STEP_LIMIT) -> int:
    raw = os.environ.get("BIMODAL_SAT_STEP_LIMIT")
    return int(raw) if raw else default
