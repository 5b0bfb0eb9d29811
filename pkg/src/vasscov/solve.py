"""Coverability and reachability decision procedures.

All searches work on a compiled copy of the VASS where states are integers
and each transition keeps only its nonzero update entries.  A search node is
a ``(state_index, counters)`` pair.  Transitions are tried in declaration
order, so results are deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .bounds import thin_profile
from .core import (
    COVER,
    Configuration,
    Instance,
    Run,
    Transition,
    VassError,
    Vector,
    instance_size,
)


class SolverError(VassError):
    pass


class ModeMismatch(SolverError):
    pass


class UnsupportedGuards(SolverError):
    def __init__(self, algo: str):
        super().__init__(f"{algo} does not support zero-tests")


class UnsupportedBound(SolverError):
    def __init__(self, algo: str):
        super().__init__(f"{algo} works on unbounded instances; drop the bound first")


class MissingBound(SolverError):
    def __init__(self, algo: str):
        super().__init__(f"{algo} needs a counter bound")


class BudgetExhausted(SolverError):
    def __init__(self, expanded: int):
        self.expanded = expanded
        super().__init__(f"node budget exhausted after {expanded} expansions")


class Status(Enum):
    FOUND = "yes"
    DEFINITIVE_NO = "no"
    NOT_FOUND_WITHIN_CAP = "budget-exhausted"


@dataclass(frozen=True)
class Witness:
    run: Run
    max_counters: Vector
    guarded_steps: int

    @classmethod
    def of(cls, run: Run) -> "Witness":
        return cls(run, run.max_counters(), run.guarded_steps())


@dataclass
class SearchResult:
    status: Status
    witness: Optional[Witness] = None
    expanded: int = 0
    seconds: float = 0.0
    # componentwise max over every configuration the search stored
    explored_max: Vector = ()
    # effective run-length cap (forward search only)
    cap: Optional[int] = None
    budget_limited: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @property
    def answer(self) -> str:
        return self.status.value


Prune = Callable[[str, Vector], bool]


class _Net:
    """Integer-indexed view of a VASS used by every search loop."""

    def __init__(self, instance: Instance, honor_guards: bool = True):
        vass = instance.vass
        self.vass = vass
        self.names = vass.states
        self.index = {q: i for i, q in enumerate(vass.states)}
        self.out: list[list[tuple]] = [[] for _ in vass.states]
        for ti, t in enumerate(vass.transitions):
            nz = tuple((i, x) for i, x in enumerate(t.update) if x)
            guard = t.guard if honor_guards else None
            self.out[self.index[t.source]].append((ti, self.index[t.target], nz, guard))
        self.start = (self.index[instance.init.state], instance.init.counters)
        tq = self.index[instance.target.state]
        tv = instance.target.counters
        if instance.mode == COVER:
            self.accepts = lambda s, c: s == tq and all(a >= b for a, b in zip(c, tv))
        else:
            self.accepts = lambda s, c: s == tq and c == tv

    def run(self, parents: dict, key) -> Run:
        keys = [key]
        tis = []
        while parents[key] is not None:
            key, ti = parents[key]
            keys.append(key)
            tis.append(ti)
        keys.reverse()
        tis.reverse()
        configs = tuple(Configuration(self.names[s], c) for s, c in keys)
        path = tuple(self.vass.transitions[ti] for ti in tis)
        return Run(configs, path)


def _fire(c: Vector, nz: tuple, guard: Optional[int], bound: Optional[int]) -> Optional[Vector]:
    if guard is not None and c[guard]:
        return None
    if not nz:
        return c
    new = list(c)
    for i, x in nz:
        v = new[i] + x
        if v < 0 or (bound is not None and v > bound):
            return None
        new[i] = v
    return tuple(new)


def _max_over(keys: Iterable, d: int) -> Vector:
    mx = [0] * d
    for _, c in keys:
        for i in range(d):
            if c[i] > mx[i]:
                mx[i] = c[i]
    return tuple(mx)


def shortest_witness_oracle(instance: Instance, budget: int = 1_000_000) -> Optional[Run]:
    """Plain layered BFS over exact configurations, no pruning.

    Returns a minimum-length witness, or None once the whole reachable set
    has been explored without success.  Honors the instance bound and zero
    guards when present.  Raises :class:`BudgetExhausted` after ``budget``
    expansions.
    """
    net = _Net(instance)
    out, bound, accepts = net.out, instance.bound, net.accepts
    start = net.start
    parents: dict = {start: None}
    if accepts(*start):
        return net.run(parents, start)
    frontier = [start]
    expanded = 0
    while frontier:
        layer = []
        for key in frontier:
            if expanded >= budget:
                raise BudgetExhausted(expanded)
            expanded += 1
            s, c = key
            for ti, dst, nz, guard in out[s]:
                new = _fire(c, nz, guard, bound)
                if new is None:
                    continue
                nk = (dst, new)
                if nk in parents:
                    continue
                parents[nk] = (key, ti)
                if accepts(dst, new):
                    return net.run(parents, nk)
                layer.append(nk)
        frontier = layer
    return None


def _dominated(antichain: list, v: Vector) -> bool:
    for w in antichain:
        if all(a >= b for a, b in zip(w, v)):
            return True
    return False


def forward_cover(
    instance: Instance,
    cap: Optional[int] = None,
    max_nodes: Optional[int] = None,
) -> SearchResult:
    """Breadth-first coverability search with domination pruning.

    ``cap`` bounds the run length (number of configurations); by default it
    is L_d for the instance size.  A configuration is dropped when an
    already-retained configuration in the same state is componentwise
    greater or equal, which keeps a shortest witness reachable.
    """
    if instance.mode != COVER:
        raise ModeMismatch("forward_cover decides coverability only")
    if instance.vass.has_guards:
        raise UnsupportedGuards("forward_cover")
    if instance.bound is not None:
        raise UnsupportedBound("forward_cover")
    if cap is None:
        cap = thin_profile(instance_size(instance), instance.dimension).length_bound
    if cap < 1:
        raise ValueError("cap must be at least 1")
    t0 = time.perf_counter()
    net = _Net(instance)
    out, accepts = net.out, net.accepts
    d = instance.dimension
    start = net.start
    parents: dict = {start: None}

    def result(status, key=None, expanded=0, limited=False):
        witness = Witness.of(net.run(parents, key)) if key is not None else None
        return SearchResult(status, witness, expanded, time.perf_counter() - t0,
                            _max_over(parents, d), cap, limited)

    if accepts(*start):
        return result(Status.FOUND, start)
    retained: list[list] = [[] for _ in net.names]
    retained[start[0]].append(start[1])
    frontier = [start]
    expanded = 0
    length = 1
    while frontier:
        if length >= cap:
            return result(Status.NOT_FOUND_WITHIN_CAP, expanded=expanded)
        layer = []
        for key in frontier:
            if max_nodes is not None and expanded >= max_nodes:
                return result(Status.NOT_FOUND_WITHIN_CAP, expanded=expanded, limited=True)
            expanded += 1
            s, c = key
            for ti, dst, nz, guard in out[s]:
                new = _fire(c, nz, None, None)
                if new is None:
                    continue
                chain = retained[dst]
                if _dominated(chain, new):
                    continue
                chain[:] = [w for w in chain if not all(a <= b for a, b in zip(w, new))]
                chain.append(new)
                nk = (dst, new)
                parents[nk] = (key, ti)
                if accepts(dst, new):
                    return result(Status.FOUND, nk, expanded)
                layer.append(nk)
        frontier = layer
        length += 1
    return result(Status.DEFINITIVE_NO, expanded=expanded)


class UpwardClosedSet:
    """Per-state antichains of minimal counter vectors."""

    def __init__(self, d: int):
        self.d = d
        self.basis: dict[str, list[Vector]] = {}

    def __contains__(self, config: Configuration) -> bool:
        return any(all(b <= c for b, c in zip(m, config.counters))
                   for m in self.basis.get(config.state, ()))

    def add(self, state: str, vec: Vector) -> bool:
        """Insert ``vec`` unless already covered; drop elements it subsumes."""
        chain = self.basis.setdefault(state, [])
        for m in chain:
            if all(a <= b for a, b in zip(m, vec)):
                return False
        chain[:] = [m for m in chain if not all(a <= b for a, b in zip(vec, m))]
        chain.append(vec)
        return True

    def has_element(self, state: str, vec: Vector) -> bool:
        return vec in self.basis.get(state, ())

    def is_antichain(self) -> bool:
        for chain in self.basis.values():
            for i, a in enumerate(chain):
                for j, b in enumerate(chain):
                    if i != j and all(x <= y for x, y in zip(a, b)):
                        return False
        return True

    def elements(self) -> list[tuple[str, Vector]]:
        return [(q, m) for q, chain in self.basis.items() for m in chain]

    def __len__(self) -> int:
        return sum(len(c) for c in self.basis.values())


@dataclass
class BackwardResult:
    covered: bool
    basis: UpwardClosedSet
    rounds: int
    seconds: float


def predecessor_basis(m: Vector, update: Vector) -> Vector:
    """Minimal v with v >= 0 and v + update >= m."""
    return tuple(max(a - x, 0) for a, x in zip(m, update))


def backward_cover(
    instance: Instance,
    on_round: Optional[Callable[[int, UpwardClosedSet], None]] = None,
) -> BackwardResult:
    """Backward saturation of the set of configurations that cover the target."""
    if instance.mode != COVER:
        raise ModeMismatch("backward_cover decides coverability only")
    if instance.vass.has_guards:
        raise UnsupportedGuards("backward_cover")
    if instance.bound is not None:
        raise UnsupportedBound("backward_cover")
    t0 = time.perf_counter()
    incoming: dict[str, list[Transition]] = {q: [] for q in instance.vass.states}
    for t in instance.vass.transitions:
        incoming[t.target].append(t)
    ucs = UpwardClosedSet(instance.dimension)
    ucs.add(instance.target.state, instance.target.counters)
    frontier = [(instance.target.state, instance.target.counters)]
    rounds = 0
    while frontier:
        rounds += 1
        added = []
        for q, m in frontier:
            for t in incoming[q]:
                cand = predecessor_basis(m, t.update)
                if ucs.add(t.source, cand):
                    added.append((t.source, cand))
        frontier = [e for e in added if ucs.has_element(*e)]
        if on_round is not None:
            on_round(rounds, ucs)
    return BackwardResult(instance.init in ucs, ucs, rounds, time.perf_counter() - t0)


def _bounded_search(
    instance: Instance,
    honor_guards: bool,
    prune: Optional[Prune],
    stop_on_accept: bool = True,
    max_nodes: Optional[int] = None,
) -> tuple[SearchResult, dict]:
    bound = instance.bound
    t0 = time.perf_counter()
    net = _Net(instance, honor_guards)
    out, accepts, names = net.out, net.accepts, net.names
    start = net.start
    parents: dict = {start: None}
    d = instance.dimension
    envelope = len(names) * (bound + 1) ** d

    def result(status, key=None, expanded=0):
        if expanded > envelope:
            raise AssertionError(f"{expanded} expansions exceed |Q|(B+1)^d = {envelope}")
        witness = Witness.of(net.run(parents, key)) if key is not None else None
        return SearchResult(status, witness, expanded, time.perf_counter() - t0,
                            _max_over(parents, d), extra={"envelope": envelope})

    if any(v > bound for v in start[1]):
        return result(Status.DEFINITIVE_NO), parents
    if stop_on_accept and accepts(*start):
        return result(Status.FOUND, start), parents
    stack = [start]
    expanded = 0
    while stack:
        key = stack.pop()
        if max_nodes is not None and expanded >= max_nodes:
            raise BudgetExhausted(expanded)
        expanded += 1
        s, c = key
        for ti, dst, nz, guard in out[s]:
            new = _fire(c, nz, guard, bound)
            if new is None:
                continue
            nk = (dst, new)
            if nk in parents:
                continue
            parents[nk] = (key, ti)
            if prune is not None and prune(names[dst], new):
                continue
            if stop_on_accept and accepts(dst, new):
                return result(Status.FOUND, nk, expanded), parents
            stack.append(nk)
    return result(Status.DEFINITIVE_NO, expanded=expanded), parents


def bounded_dfs(
    instance: Instance,
    bound: Optional[int] = None,
    prune: Optional[Prune] = None,
    max_nodes: Optional[int] = None,
) -> SearchResult:
    """Exhaustive depth-first search over Q x {0..B}^d.

    Each configuration is expanded at most once.  ``prune`` may reject
    configurations known not to lead to the target; it must be sound.
    ``max_nodes`` turns the search into a budgeted one that raises
    :class:`BudgetExhausted` instead of answering.
    """
    if instance.vass.has_guards:
        raise UnsupportedGuards("bounded_dfs")
    if bound is not None:
        instance = instance.with_bound(bound)
    if instance.bound is None:
        raise MissingBound("bounded_dfs")
    return _bounded_search(instance, False, prune, max_nodes=max_nodes)[0]


def ztest_bounded_search(
    instance: Instance,
    bound: Optional[int] = None,
    prune: Optional[Prune] = None,
    max_nodes: Optional[int] = None,
) -> SearchResult:
    """:func:`bounded_dfs` where guarded transitions need their counter at 0."""
    if bound is not None:
        instance = instance.with_bound(bound)
    if instance.bound is None:
        raise MissingBound("ztest_bounded_search")
    return _bounded_search(instance, True, prune, max_nodes=max_nodes)[0]


def reachable_configurations(instance: Instance, bound: Optional[int] = None) -> set[Configuration]:
    """Every configuration reachable within the bound, zero guards honored."""
    if bound is not None:
        instance = instance.with_bound(bound)
    if instance.bound is None:
        raise MissingBound("reachable_configurations")
    _, parents = _bounded_search(instance, True, None, stop_on_accept=False)
    names = instance.vass.states
    return {Configuration(names[s], c) for s, c in parents}
