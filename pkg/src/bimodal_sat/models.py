"""Finite bimodal models: semantics, frame conditions per logic, and the two
constructions linking models with partial tableaux."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .formula import AND, BOX, NEG, VAR, Formula, SubformulaTable, subformulas
from .relations import FiniteRelation, left_commutative, right_commutative
from .solver import PartialTableau
from .tableau import Logic, TableauUniverse, cloud_successor, is_cloud, universe

__all__ = [
    "Model",
    "FrameCheck",
    "FrameReport",
    "UnknownWorld",
    "InvalidTableau",
    "InvalidFrame",
    "ModelFormatError",
    "check_frame",
    "model_check",
    "truth_sets",
    "model_from_tableau",
    "tableau_from_model",
    "model_to_json",
    "model_from_json",
]


class UnknownWorld(KeyError):
    pass


class InvalidTableau(ValueError):
    pass


class InvalidFrame(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    """Worlds are ``0 .. size-1``; ``origin[w]`` is ``(cloud, set index)``
    for worlds built from a tableau and ``None`` otherwise."""

    size: int
    diamond: FiniteRelation
    L: FiniteRelation
    valuation: dict = field(default_factory=dict)
    origin: tuple = ()
    logic: Logic | None = None
    designated: int | None = None

    @classmethod
    def build(
        cls,
        size: int,
        diamond: Iterable[tuple[int, int]],
        L: Iterable[tuple[int, int]],
        valuation: dict | None = None,
        **kw,
    ) -> "Model":
        val = {int(k): frozenset(v) for k, v in (valuation or {}).items()}
        return cls(size, FiniteRelation.of(size, diamond), FiniteRelation.of(size, L), val, **kw)

    @property
    def worlds(self) -> range:
        return range(self.size)

    def true_at(self, var: int) -> frozenset:
        return self.valuation.get(var, frozenset())


@dataclass(frozen=True)
class FrameCheck:
    name: str
    passed: bool
    counterexample: tuple | None = None

    def __str__(self) -> str:
        if self.passed:
            return f"PASS {self.name}"
        return f"FAIL {self.name}: {self.counterexample}"


@dataclass(frozen=True)
class FrameReport:
    logic: Logic
    checks: tuple[FrameCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[FrameCheck]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.checks)


def _first_irreflexive(r: FiniteRelation):
    return next(((w,) for w in range(r.size) if (w, w) not in r.pairs), None)


def _first_asymmetric(r: FiniteRelation):
    return next(((s, t) for s, t in sorted(r.pairs) if (t, s) not in r.pairs), None)


def _first_intransitive(r: FiniteRelation):
    for s, t in sorted(r.pairs):
        for v in r.successors(t):
            if (s, v) not in r.pairs:
                return (s, t, v)
    return None


def _first_unpersistent(m: Model):
    for w, v in sorted(m.diamond.pairs):
        for var in sorted(m.valuation):
            if (w in m.valuation[var]) != (v in m.valuation[var]):
                return (w, v, var)
    return None


def check_frame(m: Model, x: Logic) -> FrameReport:
    """Every frame condition ``x`` requires, each with a counterexample when
    it fails."""
    checks = [FrameCheck("nonempty", m.size > 0, None if m.size > 0 else ())]

    def add(name: str, witness) -> None:
        checks.append(FrameCheck(name, witness is None, witness))

    add("L reflexive", _first_irreflexive(m.L))
    add("L symmetric", _first_asymmetric(m.L))
    add("L transitive", _first_intransitive(m.L))
    add("diamond transitive", _first_intransitive(m.diamond))
    if x.reflexive:
        add("diamond reflexive", _first_irreflexive(m.diamond))
    add("left commutativity", left_commutative(m.diamond, m.L))
    if x is not Logic.SSL:
        add("right commutativity", right_commutative(m.diamond, m.L))
    else:
        add("persistence", _first_unpersistent(m))
    return FrameReport(x, tuple(checks))


def truth_sets(m: Model, f: Formula | SubformulaTable) -> tuple[SubformulaTable, list[frozenset]]:
    """The set of worlds satisfying each subformula, in table order."""
    table = f if isinstance(f, SubformulaTable) else subformulas(f)
    dsucc = [set(m.diamond.successors(w)) for w in m.worlds]
    lsucc = [set(m.L.successors(w)) for w in m.worlds]
    every = frozenset(m.worlds)
    ext: list[frozenset] = []
    for i, kind in enumerate(table.kinds):
        g = table.formulas[i]
        ch = table.children[i]
        if kind == VAR:
            ext.append(m.true_at(g.id) & every)
        elif kind == NEG:
            ext.append(every - ext[ch[0]])
        elif kind == AND:
            ext.append(ext[ch[0]] & ext[ch[1]])
        else:
            rel = dsucc if kind == BOX else lsucc
            body = ext[ch[0]]
            ext.append(frozenset(w for w in m.worlds if rel[w] <= body))
    return table, ext


def model_check(m: Model, w: int, f: Formula) -> bool:
    if not 0 <= w < m.size:
        raise UnknownWorld(w)
    table, ext = truth_sets(m, f)
    return w in ext[table.root_index]


def model_from_tableau(u: TableauUniverse, t: PartialTableau) -> Model:
    """One world per (cloud, member set) of the tableau.

    Diamond links worlds whose clouds and sets are successors; L links the
    worlds of one cloud.
    """
    from .oracle import verify_partial_tableau

    x = u.logic
    clouds = sorted(t.clouds)
    if t.initial not in t.clouds or not all(is_cloud(c, u) for c in clouds):
        raise InvalidTableau("not a set of clouds containing the initial cloud")
    if not verify_partial_tableau(u, x, clouds, [t.initial]):
        raise InvalidTableau("clouds do not form a partial tableau")
    origin = [(c, j) for c in clouds for j in u.members(c)]
    where = {o: w for w, o in enumerate(origin)}
    cbit = u.cbit
    diamond = []
    for c in clouds:
        for d in clouds:
            if cloud_successor(c, d, u, x):
                for j in u.members(c):
                    for k in u.members(d):
                        if u.succ[j] & cbit(k):
                            diamond.append((where[c, j], where[d, k]))
    L = [(where[c, j], where[c, k]) for c in clouds for j in u.members(c) for k in u.members(c)]
    table = u.table
    valuation = {
        table.formulas[i].id: frozenset(w for w, (_, j) in enumerate(origin) if u.sets[j] & table.bit(i))
        for i in table.indices(VAR)
    }
    designated = where[t.initial, u.index[t.initial_set]]
    return Model.build(
        len(origin), diamond, L, valuation, origin=tuple(origin), logic=x, designated=designated)


def tableau_from_model(
    m: Model, f: Formula, x: Logic, w: int
) -> tuple[frozenset, int, TableauUniverse]:
    """Clouds of the sets of true subformulas, one cloud per L-class.

    Returns the clouds, the cloud of ``w``'s class and the universe they are
    expressed in.
    """
    report = check_frame(m, x)
    if not report.ok:
        raise InvalidFrame(str(report.failures()[0]))
    if not 0 <= w < m.size:
        raise UnknownWorld(w)
    u = universe(f, x)
    table, ext = truth_sets(m, u.table)
    sat = []
    for v in m.worlds:
        bits = 0
        for i in range(table.a):
            if v in ext[i]:
                bits |= table.bit(i)
        if bits not in u.index:
            raise InvalidFrame(f"world {v} yields a non-tableau set {table.describe(bits)}")
        sat.append(u.index[bits])
    cloud_of_world = [u.cloud_of(sat[v] for v in m.L.successors(w2)) for w2 in m.worlds]
    return frozenset(cloud_of_world), cloud_of_world[w], u


# --------------------------------------------------------------------------
# JSON


def model_to_json(m: Model, u: TableauUniverse | None = None) -> dict:
    """Plain-data form of ``m``.

    With provenance, ``cloud`` numbers the distinct clouds in ascending
    order (their members are listed under ``clouds``) and ``set`` is the
    tableau-set's universe index.
    """
    clouds = sorted({c for c, _ in m.origin}) if m.origin else []
    rank = {c: k for k, c in enumerate(clouds)}
    worlds = []
    for w in m.worlds:
        entry: dict = {"id": w}
        if m.origin:
            c, j = m.origin[w]
            entry["cloud"] = rank[c]
            entry["set"] = j
        worlds.append(entry)
    out = {
        "logic": m.logic.value if m.logic else None,
        "worlds": worlds,
        "diamond": [list(p) for p in sorted(m.diamond.pairs)],
        "L": [list(p) for p in sorted(m.L.pairs)],
        "valuation": {str(k): sorted(v) for k, v in sorted(m.valuation.items())},
        "designated": m.designated,
    }
    if u is not None:
        out["formula"] = str(u.formula)
        out["clouds"] = [u.members(c) for c in clouds]
        out["sets"] = [u.table.describe(F) for F in u.sets]
    return out


def model_from_json(data: dict | str) -> Model:
    """Inverse of :func:`model_to_json`; raises :class:`ModelFormatError`."""
    try:
        if isinstance(data, str):
            data = json.loads(data)
        worlds = data["worlds"]
        ids = [int(e["id"]) for e in worlds]
        if not ids:
            raise ModelFormatError("model has no worlds")
        if sorted(ids) != list(range(len(ids))):
            raise ModelFormatError("world ids must be 0 .. n-1")
        size = len(ids)
        logic = Logic.parse(data["logic"]) if data.get("logic") else None
        diamond = [(int(a), int(b)) for a, b in data.get("diamond", [])]
        L = [(int(a), int(b)) for a, b in data.get("L", [])]
        valuation = {int(k): [int(w) for w in v] for k, v in data.get("valuation", {}).items()}
        for ws in valuation.values():
            if any(not 0 <= w < size for w in ws):
                raise ModelFormatError("valuation names an unknown world")
        designated = data.get("designated")
        if designated is not None and not 0 <= int(designated) < size:
            raise ModelFormatError("designated world is unknown")
        return Model.build(
            size, diamond, L, valuation, logic=logic,
            designated=None if designated is None else int(designated))
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ModelFormatError(f"malformed model: {e}") from e
