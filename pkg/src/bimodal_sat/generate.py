"""Formula corpora: random formulas of a given simplified length and the
exhaustive list of small formulas."""

from __future__ import annotations

import random

from .formula import And, Box, Formula, K, Neg, Var, render

__all__ = ["random_formula", "random_corpus", "small_formulas", "rename"]

_UNARY = (Neg, Box, K)


def random_formula(rng: random.Random, ell: int, nvars: int = 2) -> Formula:
    """Uniform-ish random formula whose simplified length is exactly ``ell``."""
    if ell < 1:
        raise ValueError("simplified length is at least 1")
    if ell == 1:
        return Var(rng.randrange(nvars))
    if ell >= 5 and rng.random() < 0.45:
        left = rng.randint(1, ell - 4)
        return And(random_formula(rng, left, nvars), random_formula(rng, ell - 3 - left, nvars))
    return rng.choice(_UNARY)(random_formula(rng, ell - 1, nvars))


def random_corpus(seed: int, count: int, lo: int, hi: int, nvars: int = 2) -> list[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(lo, hi), nvars) for _ in range(count)]


def rename(f: Formula, mapping: dict[int, int]) -> Formula:
    if isinstance(f, Var):
        return Var(mapping.get(f.id, f.id))
    if isinstance(f, And):
        return And(rename(f.left, mapping), rename(f.right, mapping))
    return type(f)(rename(f.child, mapping))


def small_formulas(max_a: int = 4, nvars: int = 2) -> list[Formula]:
    """Every formula over ``x0 .. x{nvars-1}`` with at most ``max_a``
    subformulas, one representative per variable renaming.

    Built bottom-up: a formula with at most ``max_a`` subformulas only has
    such subformulas, so closing the variables under the connectives while
    discarding anything too large reaches all of them.
    """
    sf: dict = {Var(i): frozenset([Var(i)]) for i in range(nvars)}
    frontier = list(sf)
    while frontier:
        new: dict = {}
        known = list(sf)
        for f in frontier:
            if len(sf[f]) < max_a:
                for op in _UNARY:
                    new[op(f)] = sf[f] | {op(f)}
            for g in known:
                both = sf[f] | sf[g]
                if len(both) < max_a:
                    for h in (And(f, g), And(g, f)):
                        new[h] = both | {h}
        new = {h: s for h, s in new.items() if h not in sf}
        sf.update(new)
        frontier = list(new)
    pool = set(sf)
    reps = {}
    perms = _permutations(nvars)
    for f in pool:
        key = min(render(rename(f, p)) for p in perms)
        reps.setdefault(key, f)
    # canonical representative: the rendering-minimal renaming
    out = []
    for key in sorted(reps, key=lambda s: (len(s), s)):
        f = reps[key]
        out.append(min((rename(f, p) for p in perms), key=render))
    return out


def _permutations(n: int) -> list[dict[int, int]]:
    from itertools import permutations

    return [dict(enumerate(p)) for p in permutations(range(n))]
