"""Hardness-instance constructions and answer-preserving transforms.

The clique and hyperclique reductions are written as counter programs and
compiled into VASS with zero-tests.  Gadget semantics, with helper counter
``y`` and input ``y = 0``:

* ``Multiply(x, p)``: ``x = v`` becomes ``x = v*p``
* ``Divide(x, p)``: ``x = v*p`` becomes ``x = v``; stuck when p does not divide x
* ``Edge(u, v)``: Divide/Multiply by p_u then by p_v, x unchanged
* ``VertexSelected(v)``: guess a data counter, Divide then Multiply it by p_v
* ``HyperEdge(u, v, w)``: three VertexSelected in a row
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .core import (
    COVER,
    REACH,
    Configuration,
    Instance,
    Run,
    Transition,
    Vass,
    VassError,
    Vector,
    apply_path,
    to_unary,
)

# -- primes -------------------------------------------------------------------


def primes_first(m: int) -> list[int]:
    """The first m primes, by a sieve sized from the n(ln n + ln ln n) envelope."""
    if m < 1:
        raise ValueError("need at least one prime")
    limit = 15
    if m >= 6:
        limit = int(m * (math.log(m) + math.log(math.log(m)))) + 1
    while True:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for i in range(2, math.isqrt(limit) + 1):
            if sieve[i]:
                sieve[i * i::i] = bytearray(len(range(i * i, limit + 1, i)))
        primes = [i for i in range(limit + 1) if sieve[i]]
        if len(primes) >= m:
            return primes[:m]
        limit *= 2


# -- graphs -------------------------------------------------------------------


class GraphError(VassError):
    pass


class NotKPartite(GraphError):
    pass


class EmptyLayer(GraphError):
    pass


class NotFourDPartite(GraphError):
    pass


PARTITE = "partite"
CIRCLE = "circle"


@dataclass(frozen=True)
class PartitionedGraph:
    """k parts of vertex names plus edges.

    In partite mode edges are unordered and join two distinct parts; in
    circle mode an edge ``(u, v)`` is directed from layer i to layer i+1 mod k.
    """

    parts: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[str, str], ...]
    mode: str = PARTITE

    def __post_init__(self):
        where = self.part_of
        seen: set[str] = set()
        for part in self.parts:
            for v in part:
                if v in seen:
                    raise GraphError(f"vertex {v!r} appears twice")
                seen.add(v)
        k = self.k
        for u, v in self.edges:
            for w in (u, v):
                if w not in where:
                    raise GraphError(f"edge endpoint {w!r} is not a vertex")
            i, j = where[u], where[v]
            if self.mode == PARTITE and i == j:
                raise NotKPartite(f"edge {u}-{v} stays inside part {i + 1}")
            if self.mode == CIRCLE and j != (i + 1) % k:
                raise NotKPartite(f"edge {u}->{v} goes from layer {i} to layer {j}")

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def part_of(self) -> dict[str, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    @property
    def vertices(self) -> list[str]:
        return [v for part in self.parts for v in part]

    def has_edge(self, u: str, v: str) -> bool:
        if self.mode == CIRCLE:
            return (u, v) in set(self.edges)
        return (u, v) in set(self.edges) or (v, u) in set(self.edges)


@dataclass(frozen=True)
class Hypergraph3:
    parts: tuple[tuple[str, ...], ...]
    hyperedges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        where = {v: i for i, part in enumerate(self.parts) for v in part}
        if len(where) != sum(len(p) for p in self.parts):
            raise GraphError("a vertex appears twice")
        for e in self.hyperedges:
            if len(e) != 3:
                raise GraphError(f"hyperedge {e} is not 3-uniform")
            for w in e:
                if w not in where:
                    raise GraphError(f"hyperedge endpoint {w!r} is not a vertex")
            if len({where[w] for w in e}) != 3:
                raise NotKPartite(f"hyperedge {e} has two vertices in one part")

    @property
    def part_of(self) -> dict[str, int]:
        return {v: i for i, part in enumerate(self.parts) for v in part}

    @property
    def vertices(self) -> list[str]:
        return [v for part in self.parts for v in part]


def assign_primes(vertices: Sequence[str]) -> dict[str, int]:
    """Vertex -> distinct prime, the i-th vertex getting the i-th prime."""
    return dict(zip(vertices, primes_first(max(1, len(vertices)))))


# -- brute-force graph oracles -----------------------------------------------


def has_k_clique(graph: PartitionedGraph) -> bool:
    """One vertex per part, all pairs adjacent."""
    edges = {frozenset(e) for e in graph.edges}
    for pick in itertools.product(*graph.parts):
        if all(frozenset((a, b)) in edges for a, b in itertools.combinations(pick, 2)):
            return True
    return False


def has_k_cycle(graph: PartitionedGraph) -> bool:
    """A directed cycle visiting one vertex of each layer in layer order."""
    edges = set(graph.edges)
    k = graph.k
    for pick in itertools.product(*graph.parts):
        if all((pick[i], pick[(i + 1) % k]) in edges for i in range(k)):
            return True
    return False


def has_hyperclique(h: Hypergraph3) -> bool:
    edges = {frozenset(e) for e in h.hyperedges}
    for pick in itertools.product(*h.parts):
        if all(frozenset(t) in edges for t in itertools.combinations(pick, 3)):
            return True
    return False


# -- counter programs ---------------------------------------------------------


class ProgramError(VassError):
    pass


class UnknownCounter(ProgramError):
    pass


class UnknownGadget(ProgramError):
    pass


@dataclass(frozen=True)
class AddUnit:
    counter: str
    delta: int


@dataclass(frozen=True)
class GuardZero:
    counter: str


@dataclass(frozen=True)
class Guess:
    branches: tuple[tuple["Instr", ...], ...]


@dataclass(frozen=True)
class Multiply:
    counter: str
    prime: int


@dataclass(frozen=True)
class Divide:
    counter: str
    prime: int


@dataclass(frozen=True)
class Edge:
    u: str
    v: str


@dataclass(frozen=True)
class VertexSelected:
    v: str


@dataclass(frozen=True)
class HyperEdge:
    u: str
    v: str
    w: str


Instr = Union[AddUnit, GuardZero, Guess, Multiply, Divide, Edge, VertexSelected, HyperEdge]


@dataclass(frozen=True)
class CounterProgram:
    """Straight-line code with nondeterministic ``Guess`` blocks.

    ``helper`` is the scratch counter used by Multiply/Divide; the remaining
    counters are data counters.  ``primes`` maps vertex names to primes for
    the graph gadgets, which act on the first data counter (Edge) or guess
    among all data counters (VertexSelected).
    """

    counters: tuple[str, ...]
    body: tuple[Instr, ...]
    helper: str = "y"
    primes: dict = field(default_factory=dict)

    @property
    def data_counters(self) -> tuple[str, ...]:
        return tuple(c for c in self.counters if c != self.helper)


class _Builder:
    def __init__(self, program: CounterProgram):
        if program.helper not in program.counters:
            raise UnknownCounter(f"helper counter {program.helper!r} is not declared")
        self.program = program
        self.d = len(program.counters)
        self.cidx = {c: i for i, c in enumerate(program.counters)}
        self.states: list[str] = []
        self.taken: set[str] = set()
        self.transitions: list[Transition] = []

    def fresh(self, name: str) -> str:
        base, k = name, 1
        while name in self.taken:
            k += 1
            name = f"{base}'{k}"
        self.taken.add(name)
        self.states.append(name)
        return name

    def counter(self, name: str) -> int:
        if name not in self.cidx:
            raise UnknownCounter(f"counter {name!r} is not declared")
        return self.cidx[name]

    def unit(self, i: int, x: int) -> Vector:
        return tuple(x if j == i else 0 for j in range(self.d))

    def zero(self) -> Vector:
        return (0,) * self.d

    def add(self, src: str, update: Vector, dst: str, guard: Optional[int] = None):
        self.transitions.append(Transition(src, update, dst, guard))

    def prime(self, v: str) -> int:
        if v not in self.program.primes:
            raise UnknownGadget(f"vertex {v!r} has no prime")
        return self.program.primes[v]

    def scale(self, entry: str, counter: str, prime: int, multiply: bool, prefix: str) -> str:
        x = self.counter(counter)
        y = self.counter(self.program.helper)
        if x == y:
            raise UnknownCounter("Multiply/Divide cannot act on the helper counter")
        if prime < 1:
            raise ProgramError("Multiply/Divide need a positive factor")
        first = [0] * self.d
        second = [0] * self.d
        if multiply:
            first[x], first[y] = -1, 1
            second[x], second[y] = prime, -1
        else:
            first[x], first[y] = -prime, 1
            second[x], second[y] = 1, -1
        mid = self.fresh(f"{prefix}b")
        out = self.fresh(f"{prefix}c")
        self.add(entry, tuple(first), entry)
        self.add(entry, self.zero(), mid, guard=x)
        self.add(mid, tuple(second), mid)
        self.add(mid, self.zero(), out, guard=y)
        return out

    def block(self, instrs: Sequence[Instr], entry: str, prefix: str) -> str:
        here = entry
        for i, ins in enumerate(instrs):
            here = self.instr(ins, here, f"{prefix}{i}.")
        return here

    def guess(self, branches: Sequence[Sequence[Instr]], entry: str, prefix: str) -> str:
        join = self.fresh(f"{prefix}join")
        for j, branch in enumerate(branches):
            start = self.fresh(f"{prefix}g{j}")
            self.add(entry, self.zero(), start)
            end = self.block(branch, start, f"{prefix}g{j}.")
            self.add(end, self.zero(), join)
        return join

    def instr(self, ins: Instr, entry: str, prefix: str) -> str:
        prog = self.program
        if isinstance(ins, AddUnit):
            if ins.delta not in (-1, 1):
                raise ProgramError("AddUnit changes a counter by exactly one")
            out = self.fresh(f"{prefix}{'inc' if ins.delta > 0 else 'dec'}")
            self.add(entry, self.unit(self.counter(ins.counter), ins.delta), out)
            return out
        if isinstance(ins, GuardZero):
            out = self.fresh(f"{prefix}z")
            self.add(entry, self.zero(), out, guard=self.counter(ins.counter))
            return out
        if isinstance(ins, Guess):
            return self.guess(ins.branches, entry, prefix)
        if isinstance(ins, Multiply):
            return self.scale(entry, ins.counter, ins.prime, True, f"{prefix}mul{ins.prime}.")
        if isinstance(ins, Divide):
            return self.scale(entry, ins.counter, ins.prime, False, f"{prefix}div{ins.prime}.")
        if isinstance(ins, Edge):
            if not prog.data_counters:
                raise UnknownCounter("Edge needs a data counter")
            x = prog.data_counters[0]
            pu, pv = self.prime(ins.u), self.prime(ins.v)
            body = (Divide(x, pu), Multiply(x, pu), Divide(x, pv), Multiply(x, pv))
            return self.block(body, entry, f"{prefix}edge.")
        if isinstance(ins, VertexSelected):
            p = self.prime(ins.v)
            branches = tuple((Divide(x, p), Multiply(x, p)) for x in prog.data_counters)
            return self.guess(branches, entry, f"{prefix}sel.")
        if isinstance(ins, HyperEdge):
            body = (VertexSelected(ins.u), VertexSelected(ins.v), VertexSelected(ins.w))
            return self.block(body, entry, f"{prefix}hedge.")
        raise UnknownGadget(f"unknown instruction {ins!r}")


def compile_program(
    program: CounterProgram,
    init: Optional[Sequence[int]] = None,
    entry: str = "qI",
    exit_name: str = "qF",
) -> Instance:
    """Compile to a VASS with zero-tests; returns the cover instance qI(init) -> qF(0).

    Gadget calls are inlined into fresh states.  Consecutive instructions
    share their boundary state, so a lone Multiply compiles to exactly three
    states.
    """
    b = _Builder(program)
    start = b.fresh(entry)
    end = b.block(program.body, start, "")
    if end == start:
        # empty program: keep a distinct exit so the VASS has a transition
        out = b.fresh(exit_name)
        b.add(start, b.zero(), out)
        end = out
    else:
        b.states[b.states.index(end)] = exit_name
        b.taken.discard(end)
        if exit_name in b.taken:
            raise ProgramError(f"state name {exit_name!r} is already used")
        b.transitions = [
            Transition(exit_name if t.source == end else t.source, t.update,
                       exit_name if t.target == end else t.target, t.guard)
            for t in b.transitions
        ]
    vass = Vass(b.d, tuple(b.states), tuple(b.transitions))
    init = tuple(init) if init is not None else b.zero()
    return Instance(vass, Configuration(start, init), Configuration(exit_name, b.zero()), COVER)


# -- hardness instances -------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """A generated instance plus what was used to build it."""

    instance: Instance
    primes: dict
    program: Optional[CounterProgram] = None
    # vertices after padding, per part
    parts: tuple = ()


def _maybe_unary(instance: Instance, unary: bool) -> Instance:
    if not unary:
        return instance
    return Instance(to_unary(instance.vass), instance.init, instance.target,
                    instance.mode, instance.bound)


def gen_clique_instance(graph: PartitionedGraph, unary: bool = False) -> Reduction:
    """k-clique -> coverability of qF(0,0) from qI(0,0) in a 2-VASS with zero-tests.

    Parts are padded with isolated dummies to a common size l; the counter
    bound is p^k for the (k*l)-th prime p.
    """
    if graph.mode != PARTITE:
        raise NotKPartite("clique reduction needs a k-partite graph")
    k = graph.k
    if k < 1:
        raise NotKPartite("graph has no parts")
    width = max(len(p) for p in graph.parts)
    taken = set(graph.vertices)
    parts = []
    for i, part in enumerate(graph.parts):
        padded = list(part)
        j = 0
        while len(padded) < width:
            name = f"_pad{i + 1}.{j}"
            j += 1
            if name not in taken:
                padded.append(name)
        parts.append(tuple(padded))
    # real vertices first so accepting runs only use the first |V| primes
    primes = assign_primes(graph.vertices + [v for part in parts for v in part
                                             if v not in taken])
    where = graph.part_of
    body: list[Instr] = [AddUnit("x", 1)]
    for part in parts:
        body.append(Guess(tuple((Multiply("x", primes[v]),) for v in part)))
    for i, j in itertools.combinations(range(k), 2):
        slice_ = []
        for u, v in graph.edges:
            if where[u] == j and where[v] == i:
                u, v = v, u
            if where[u] == i and where[v] == j:
                slice_.append((Edge(u, v),))
        body.append(Guess(tuple(slice_)))
    program = CounterProgram(("x", "y"), tuple(body), "y", primes)
    inst = compile_program(program)
    bound = max(primes.values()) ** k if primes else 1
    inst = _maybe_unary(inst.with_bound(bound), unary)
    return Reduction(inst, primes, program, tuple(parts))


def clique_zero_tests(k: int) -> int:
    return 2 * k * (2 * k - 1)


def gen_cycle_instance(graph: PartitionedGraph) -> Reduction:
    """k-cycle in a circle-layered graph -> bounded reachability in a 1-VASS."""
    if graph.mode != CIRCLE:
        raise NotKPartite("cycle reduction needs a circle-layered graph")
    k = graph.k
    if k < 2:
        raise NotKPartite("need at least two layers")
    for i, part in enumerate(graph.parts):
        if not part:
            raise EmptyLayer(f"layer {i} is empty")
    where = graph.part_of
    v0 = graph.parts[0]
    P = [f"p:{v}" for v in v0]
    Q = [f"q:{v}" for v in v0]
    S = [f"s:{v}" for part in graph.parts[1:] for v in part]
    transitions: list[Transition] = []
    for a, b in zip(P, P[1:]):
        transitions.append(Transition(a, (1,), b))
    for u, v in graph.edges:
        i, j = where[u], where[v]
        src = f"p:{u}" if i == 0 else f"s:{u}"
        dst = f"q:{v}" if j == 0 else f"s:{v}"
        transitions.append(Transition(src, (0,), dst))
    for a, b in zip(Q, Q[1:]):
        transitions.append(Transition(b, (-1,), a))
    states = tuple(P + S + Q)
    if not transitions:
        # single-vertex layer 0 with no edges: add an inert loop so T is nonempty
        transitions.append(Transition(P[0], (0,), P[0]))
    vass = Vass(1, states, tuple(transitions))
    inst = Instance(vass, Configuration(P[0], (0,)), Configuration(Q[0], (0,)),
                    REACH, bound=len(states))
    return Reduction(inst, {})


def gen_hyperclique_instance(h: Hypergraph3, d: Optional[int] = None,
                             unary: bool = False) -> Reduction:
    """4d-hyperclique -> coverability of qF from qI(0) in a (d+1)-VASS with zero-tests.

    Counter x_i collects one guessed vertex prime from each of parts
    4(i-1)+1 .. 4i; every part triple is then checked by a guess over its
    hyperedges.
    """
    parts = h.parts
    if len(parts) % 4 or not parts:
        raise NotFourDPartite(f"{len(parts)} parts is not a positive multiple of 4")
    if d is None:
        d = len(parts) // 4
    if len(parts) != 4 * d:
        raise NotFourDPartite(f"expected {4 * d} parts, got {len(parts)}")
    primes = assign_primes(h.vertices)
    xs = tuple(f"x{i + 1}" for i in range(d))
    where = h.part_of
    body: list[Instr] = []
    for i, x in enumerate(xs):
        body.append(AddUnit(x, 1))
        for j in range(4):
            part = parts[4 * i + j]
            body.append(Guess(tuple((Multiply(x, primes[v]),) for v in part)))
    for triple in itertools.combinations(range(4 * d), 3):
        branches = []
        for e in h.hyperedges:
            if sorted(where[w] for w in e) == list(triple):
                u, v, w = sorted(e, key=lambda t: where[t])
                branches.append((HyperEdge(u, v, w),))
        body.append(Guess(tuple(branches)))
    program = CounterProgram(xs + ("y",), tuple(body), "y", primes)
    inst = compile_program(program)
    top = sorted(primes.values())[-4:]
    bound = math.prod(top)
    inst = _maybe_unary(inst.with_bound(bound), unary)
    return Reduction(inst, primes, program, parts)


def hyperclique_zero_tests(d: int) -> int:
    return 2 * (4 * d + 6 * math.comb(4 * d, 3))


# -- zero-test elimination ----------------------------------------------------


class ScheduleAmbiguous(VassError):
    def __init__(self, state: str):
        self.state = state
        super().__init__(f"paths from {state!r} to the exit disagree on zero-test counts")


class ScheduleMissing(VassError):
    pass


@dataclass(frozen=True)
class ZeroTestSchedule:
    """Remaining zero-tests per counter from each location to the exit.

    ``remaining[q]`` is None for locations that cannot reach the exit.
    ``tests[i]`` lists indices of transitions that zero-test counter i.
    """

    exit: str
    remaining: dict
    tests: tuple

    def at(self, state: str) -> Optional[Vector]:
        return self.remaining.get(state)

    def total(self, state: str) -> Optional[int]:
        t = self.remaining.get(state)
        return None if t is None else sum(t)


def static_schedule(instance: Instance) -> ZeroTestSchedule:
    """Backward pass from the target state computing remaining zero-test counts."""
    vass = instance.vass
    d = vass.dimension
    exit_ = instance.target.state
    incoming: dict[str, list[Transition]] = {q: [] for q in vass.states}
    for t in vass.transitions:
        incoming[t.target].append(t)
    remaining: dict = {q: None for q in vass.states}
    remaining[exit_] = (0,) * d
    queue = [exit_]
    while queue:
        q = queue.pop()
        for t in incoming[q]:
            if remaining[t.source] is None:
                v = list(remaining[q])
                if t.guard is not None:
                    v[t.guard] += 1
                remaining[t.source] = tuple(v)
                queue.append(t.source)
    for t in vass.transitions:
        a, b = remaining[t.source], remaining[t.target]
        if a is None or b is None:
            continue
        expect = list(b)
        if t.guard is not None:
            expect[t.guard] += 1
        if tuple(expect) != a:
            raise ScheduleAmbiguous(t.source)
    tests = tuple(
        tuple(ti for ti, t in enumerate(vass.transitions) if t.guard == i) for i in range(d)
    )
    return ZeroTestSchedule(exit_, remaining, tests)


@dataclass(frozen=True)
class Elimination:
    instance: Instance
    schedule: ZeroTestSchedule
    # index of the controlling counter z
    z: int
    # number of transitions copied from the guarded VASS (drain loops follow)
    copied: int

    def potential(self, state: str, counters: Sequence[int]) -> Optional[int]:
        """z - sum_i t_i * x_i at an original location, None elsewhere."""
        if state not in self.schedule.remaining:
            return None
        t = self.schedule.remaining[state]
        if t is None:
            return None
        return counters[self.z] - sum(a * b for a, b in zip(t, counters))

    def prune(self, state: str, counters: Sequence[int]) -> bool:
        """Sound cut for the reach search: the potential never decreases and
        must end at 0, and dead locations never reach the exit."""
        if state not in self.schedule.remaining:
            return False
        t = self.schedule.remaining[state]
        if t is None:
            return True
        return counters[self.z] > sum(a * b for a, b in zip(t, counters))


def eliminate_zero_tests(
    instance: Instance,
    schedule: Optional[ZeroTestSchedule] = None,
    unary: bool = False,
) -> Elimination:
    """Replace zero-tests by a controlling counter z (appended last).

    A transition with update x leaving a location with remaining-test vector
    t also adds sum_i t_i * x_i to z; zero-tests become plain moves.  Drain
    loops at the exit let every counter return to 0, and the result asks for
    exact reachability of exit(0, ..., 0).
    """
    vass = instance.vass
    if schedule is None:
        schedule = static_schedule(instance)
    missing = [q for q in vass.states if q not in schedule.remaining]
    if missing or schedule.exit != instance.target.state:
        raise ScheduleMissing("schedule was not computed for this instance")
    d = vass.dimension
    zero_t = (0,) * d
    transitions = []
    for t in vass.transitions:
        sched = schedule.remaining[t.source] or zero_t
        z = sum(a * b for a, b in zip(sched, t.update))
        transitions.append(Transition(t.source, t.update + (z,), t.target))
    exit_ = instance.target.state
    for i in range(d):
        transitions.append(Transition(exit_, tuple(-1 if j == i else 0 for j in range(d + 1)), exit_))
    new_vass = Vass(d + 1, vass.states, tuple(transitions))
    t0 = schedule.remaining[instance.init.state] or zero_t
    z0 = sum(a * b for a, b in zip(t0, instance.init.counters))
    bound = None
    if instance.bound is not None:
        bound = instance.bound * max(1, sum(t0))
    out = Instance(
        new_vass,
        Configuration(instance.init.state, instance.init.counters + (z0,)),
        Configuration(exit_, (0,) * (d + 1)),
        REACH,
        bound,
    )
    return Elimination(_maybe_unary(out, unary), schedule, d, len(vass.transitions))


def instrument_run(elim: Elimination, run: Run) -> Run:
    """Replay a guarded run on the instrumented VASS, then drain to 0.

    Raises StepFailed if the replay gets stuck, which cannot happen for a
    run that honours its zero-tests.
    """
    inst = elim.instance
    path = []
    for t in run.path:
        sched = elim.schedule.remaining.get(t.source) or (0,) * elim.z
        z = sum(a * b for a, b in zip(sched, t.update))
        path.append(Transition(t.source, t.update + (z,), t.target))
    replay = apply_path(inst.init, path)
    last = replay.last
    drains = [t for t in inst.vass.transitions[elim.copied:] if t.source == last.state]
    for i, t in enumerate(drains):
        path.extend([t] * last.counters[i])
    return apply_path(inst.init, path)


# -- coverability / reachability transforms ----------------------------------


def _fresh(states: Sequence[str], base: str) -> str:
    taken = set(states)
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def cover_to_reach(instance: Instance) -> Instance:
    """Add decrement loops on every counter at the target state."""
    if instance.mode != COVER:
        raise ValueError("cover_to_reach expects a cover instance")
    vass = instance.vass
    d = vass.dimension
    q = instance.target.state
    extra = tuple(Transition(q, tuple(-1 if j == i else 0 for j in range(d)), q) for i in range(d))
    new = Vass(d, vass.states, vass.transitions + extra)
    return Instance(new, instance.init, instance.target, REACH, instance.bound)


def bounded_reach_to_cover(instance: Instance) -> Instance:
    """Bounded reach q(v) -> bounded cover s(B,...,B).

    Appends q -> r subtracting v in unit steps and r -> s adding B to every
    counter in unit steps.  Under the bound, s(B,...,B) can only be covered
    if the counters were exactly 0 at r.
    """
    if instance.mode != REACH:
        raise ValueError("bounded_reach_to_cover expects a reach instance")
    if instance.bound is None:
        raise ValueError("bounded_reach_to_cover needs a bounded instance")
    vass = instance.vass
    d = vass.dimension
    B = instance.bound
    states = list(vass.states)
    v = instance.target.counters
    if any(x > B for x in v):
        dead = _fresh(states, "unreachable")
        new = Vass(d, tuple(states) + (dead,), vass.transitions)
        return Instance(new, instance.init, Configuration(dead, (0,) * d), COVER, B)

    def unit(i, x):
        return tuple(x if j == i else 0 for j in range(d))

    def chain(src, units, dst_base):
        out = []
        here = src
        if not units:
            units = [(0,) * d]
        for k, u in enumerate(units):
            nxt = _fresh(states, f"{dst_base}.{k}" if k < len(units) - 1 else dst_base)
            states.append(nxt)
            out.append(Transition(here, u, nxt))
            here = nxt
        return out, here

    down = [unit(i, -1) for i in range(d) for _ in range(v[i])]
    up = [unit(i, 1) for i in range(d) for _ in range(B)]
    t1, r = chain(instance.target.state, down, "r")
    t2, s = chain(r, up, "s")
    new = Vass(d, tuple(states), vass.transitions + tuple(t1) + tuple(t2))
    return Instance(new, instance.init, Configuration(s, (B,) * d), COVER, B)


def add_opposite_counter(instance: Instance, n: Optional[int] = None) -> Instance:
    """Bounded 1-VASS reach -> 2-VASS cover with a mirrored counter.

    Every update t becomes (t, -t); starting from p(u, n-u), the pair always
    sums to n, so covering q(v, n-v) means hitting q(v) exactly.
    """
    vass = instance.vass
    if vass.dimension != 1:
        raise ValueError("add_opposite_counter expects a 1-dimensional VASS")
    if instance.mode != REACH:
        raise ValueError("add_opposite_counter expects a reach instance")
    if n is None:
        n = instance.bound
    if n is None:
        raise ValueError("add_opposite_counter needs the counter bound n")
    u = instance.init.counters[0]
    v = instance.target.counters[0]
    transitions = tuple(Transition(t.source, (t.update[0], -t.update[0]), t.target)
                        for t in vass.transitions)
    new = Vass(2, vass.states, transitions)
    if u > n or v > n:
        # counters can never leave [0, n]; an out-of-range endpoint is unreachable
        dead = _fresh(vass.states, "unreachable")
        new = Vass(2, vass.states + (dead,), transitions)
        return Instance(new, Configuration(instance.init.state, (0, n)),
                        Configuration(dead, (0, 0)), COVER)
    return Instance(new, Configuration(instance.init.state, (u, n - u)),
                    Configuration(instance.target.state, (v, n - v)), COVER)
