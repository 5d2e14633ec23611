"""Shared corpora, strategies and model builders for the test suite."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from hypothesis import strategies as st

from bimodal_sat.formula import And, Box, K, Neg, Var
from bimodal_sat.generate import random_corpus, small_formulas
from bimodal_sat.models import Model, check_frame
from bimodal_sat.relations import FiniteRelation
from bimodal_sat.tableau import Logic

LOGICS = list(Logic)


@lru_cache(maxsize=None)
def small_corpus():
    """All formulas over two variables with at most four subformulas."""
    return tuple(small_formulas(4, 2))


@lru_cache(maxsize=None)
def oracle_random_corpus():
    return tuple(random_corpus(2024, 50, 3, 6))


@lru_cache(maxsize=None)
def counting_corpus():
    return tuple(random_corpus(11, 240, 3, 12))


def formulas(max_leaves: int = 6, nvars: int = 3):
    atoms = st.builds(Var, st.integers(0, nvars - 1))
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(Neg, sub),
            st.builds(Box, sub),
            st.builds(K, sub),
            st.builds(And, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def transitive_closure(size: int, pairs) -> FiniteRelation:
    reach = [set() for _ in range(size)]
    for s, t in pairs:
        reach[s].add(t)
    changed = True
    while changed:
        changed = False
        for s in range(size):
            extra = set().union(*(reach[t] for t in reach[s])) - reach[s]
            if extra:
                reach[s] |= extra
                changed = True
    return FiniteRelation.of(size, ((s, t) for s in range(size) for t in reach[s]))


def random_transitive(rng: random.Random, size: int, density: float | None = None) -> FiniteRelation:
    density = rng.random() if density is None else density
    pairs = [(s, t) for s in range(size) for t in range(size) if rng.random() < density * 0.5]
    return transitive_closure(size, pairs)


def random_partition(rng: random.Random, size: int) -> FiniteRelation:
    label = [rng.randrange(size) for _ in range(size)]
    return FiniteRelation.of(size, ((s, t) for s in range(size) for t in range(size) if label[s] == label[t]))


def product_model(rng: random.Random, x: Logic, max_worlds: int = 4) -> Model:
    """A product frame: a box frame on ``H`` times a total L on ``V``."""
    while True:
        h = rng.randint(1, max_worlds)
        v = rng.randint(1, max_worlds // h)
        if h * v <= max_worlds:
            break
    hrel = random_transitive(rng, h)
    if x.reflexive:
        hrel = FiniteRelation(h, hrel.pairs | FiniteRelation.identity(h).pairs)
    worlds = list(product(range(h), range(v)))
    diamond = [(i, j) for i, (a, b) in enumerate(worlds) for j, (c, d) in enumerate(worlds)
               if b == d and (a, c) in hrel.pairs]
    L = [(i, j) for i, (a, _) in enumerate(worlds) for j, (c, _) in enumerate(worlds) if a == c]
    return Model.build(len(worlds), diamond, L, _valuation(rng, worlds, x), logic=x)


def _valuation(rng: random.Random, worlds, x: Logic) -> dict:
    val = {}
    for var in range(2):
        if x is Logic.SSL:
            # depend only on the vertical coordinate: constant along diamond
            on = {b for b in {w[1] for w in worlds} if rng.random() < 0.5}
            val[var] = {i for i, w in enumerate(worlds) if w[1] in on}
        else:
            val[var] = {i for i in range(len(worlds)) if rng.random() < 0.5}
    return val


def random_valid_model(rng: random.Random, x: Logic, max_worlds: int = 4, tries: int = 200) -> Model:
    """Rejection-sample an arbitrary frame; fall back to a product frame."""
    for _ in range(tries):
        n = rng.randint(1, max_worlds)
        L = random_partition(rng, n)
        d = random_transitive(rng, n)
        if x.reflexive:
            d = FiniteRelation(n, d.pairs | FiniteRelation.identity(n).pairs)
        val = {}
        for var in range(2):
            val[var] = {w for w in range(n) if rng.random() < 0.5}
        if x is Logic.SSL:
            # make atoms constant on diamond-connected components
            comp = list(range(n))
            for s, t in d.pairs:
                a, b = comp[s], comp[t]
                comp = [a if c == b else c for c in comp]
            for var in range(2):
                on = {c for c in set(comp) if rng.random() < 0.5}
                val[var] = {w for w in range(n) if comp[w] in on}
        m = Model.build(n, d.pairs, L.pairs, val, logic=x)
        if check_frame(m, x).ok:
            return m
    return product_model(rng, x, max_worlds)
