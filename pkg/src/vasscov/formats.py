"""Line-oriented text formats for instances, graphs, counter programs and runs.

Instance::

    vass d=2
    state p
    state q
    trans p q -1 1
    ztest q p 1          # guard on counter 1 (1-based), zero update
    init p 2 0
    target q 0 1
    mode cover           # or reach
    bound 8              # optional

Graph / hypergraph::

    graph k=3 mode=partite          hypergraph parts=4
    part 1: a1 a2                   part 1: a b
    edge a1 b1                      hedge a c e

Counter program (one instruction per line, ``#`` comments)::

    counters x y         # optional; helper defaults to y
    helper y             # optional
    vertex u 2           # optional prime for a vertex name
    inc x / dec x / ztest x
    multiply x 3 / divide x 3
    edge u v / select u / hyperedge u v w
    guess {
      multiply x 2
    |
      multiply x 3
    }

``guess { multiply x 2 | multiply x 3 }`` also works on one line, with ``;``
separating instructions inside a branch.
"""

from __future__ import annotations

import re
from typing import Optional

from .core import (
    COVER,
    REACH,
    Configuration,
    Instance,
    Run,
    Transition,
    VassError,
    validate,
)
from .reduce import (
    CIRCLE,
    PARTITE,
    AddUnit,
    CounterProgram,
    Divide,
    Edge,
    GraphError,
    Guess,
    GuardZero,
    HyperEdge,
    Hypergraph3,
    Multiply,
    PartitionedGraph,
    VertexSelected,
    primes_first,
)


class FormatError(VassError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class FormatSyntaxError(FormatError):
    """Malformed line."""


class SemanticError(FormatError):
    """Well-formed text describing an invalid object."""

    def __init__(self, line: int, cause):
        self.cause = cause
        super().__init__(line, str(cause))


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(no: int, words, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(w) for w in words)
    except ValueError:
        raise FormatSyntaxError(no, f"{what} must be integers") from None


def _header(no: int, words, keyword: str) -> dict[str, str]:
    if not words or words[0] != keyword:
        raise FormatSyntaxError(no, f"expected '{keyword} ...' header")
    out = {}
    for w in words[1:]:
        if "=" not in w:
            raise FormatSyntaxError(no, f"header field {w!r} is not key=value")
        k, v = w.split("=", 1)
        out[k] = v
    return out


# -- instances ----------------------------------------------------------------


def parse_instance(text: str) -> Instance:
    d: Optional[int] = None
    states: list[str] = []
    transitions: list[Transition] = []
    init = target = None
    mode = COVER
    bound = None
    last = 0
    for no, line in _lines(text):
        last = no
        words = line.split()
        if d is None:
            fields = _header(no, words, "vass")
            if "d" not in fields:
                raise FormatSyntaxError(no, "header needs d=<dimension>")
            d = _ints(no, [fields["d"]], "d")[0]
            if d < 0:
                raise FormatSyntaxError(no, "dimension must be nonnegative")
            continue
        kw, args = words[0], words[1:]
        if kw == "state":
            if len(args) != 1:
                raise FormatSyntaxError(no, "state takes one name")
            states.append(args[0])
        elif kw == "trans":
            if len(args) != 2 + d:
                raise FormatSyntaxError(no, f"trans takes source, target and {d} integers")
            transitions.append(Transition(args[0], _ints(no, args[2:], "updates"), args[1]))
        elif kw == "ztest":
            if len(args) != 3:
                raise FormatSyntaxError(no, "ztest takes source, target and a counter index")
            i = _ints(no, args[2:], "counter index")[0]
            if not 1 <= i <= d:
                raise SemanticError(no, f"counter index {i} outside 1..{d}")
            transitions.append(Transition(args[0], (0,) * d, args[1], i - 1))
        elif kw in ("init", "target"):
            if len(args) != 1 + d:
                raise FormatSyntaxError(no, f"{kw} takes a state and {d} integers")
            c = (no, Configuration(args[0], _ints(no, args[1:], "counters")))
            if kw == "init":
                init = c
            else:
                target = c
        elif kw == "mode":
            if args not in ([COVER], [REACH]):
                raise FormatSyntaxError(no, "mode is cover or reach")
            mode = args[0]
        elif kw == "bound":
            if len(args) != 1:
                raise FormatSyntaxError(no, "bound takes one integer")
            bound = _ints(no, args, "bound")[0]
            if bound < 0:
                raise SemanticError(no, "bound must be nonnegative")
        else:
            raise FormatSyntaxError(no, f"unknown keyword {kw!r}")
    if d is None:
        raise FormatSyntaxError(last or 1, "missing 'vass d=<d>' header")
    if init is None or target is None:
        raise FormatSyntaxError(last, "init and target are required")
    try:
        vass = validate(d, states, transitions)
    except VassError as exc:
        raise SemanticError(last, exc) from exc
    try:
        return Instance(vass, init[1], target[1], mode, bound)
    except VassError as exc:
        raise SemanticError(max(init[0], target[0]), exc) from exc


def emit_instance(instance: Instance) -> str:
    vass = instance.vass
    out = [f"vass d={vass.dimension}"]
    out += [f"state {q}" for q in vass.states]
    for t in vass.transitions:
        if t.guard is not None:
            out.append(f"ztest {t.source} {t.target} {t.guard + 1}")
        else:
            out.append(" ".join(["trans", t.source, t.target, *map(str, t.update)]))
    for kw, c in (("init", instance.init), ("target", instance.target)):
        out.append(" ".join([kw, c.state, *map(str, c.counters)]))
    out.append(f"mode {instance.mode}")
    if instance.bound is not None:
        out.append(f"bound {instance.bound}")
    return "\n".join(out) + "\n"


# -- graphs -------------------------------------------------------------------

_PART = re.compile(r"^part\s+(\d+)\s*:\s*(.*)$")


def _parts(no: int, line: str, parts: dict[int, tuple[str, ...]]):
    m = _PART.match(line)
    if not m:
        raise FormatSyntaxError(no, "expected 'part <i>: v1 v2 ...'")
    i = int(m.group(1))
    if i in parts:
        raise SemanticError(no, f"part {i} declared twice")
    parts[i] = tuple(m.group(2).split())


def _ordered(no: int, parts: dict[int, tuple], first: int, count: int):
    if count < 1:
        raise SemanticError(no, "need at least one part")
    want = list(range(first, first + count))
    if sorted(parts) != want:
        raise SemanticError(no, f"expected parts {want[0]}..{want[-1]}, got {sorted(parts)}")
    return tuple(parts[i] for i in want)


def parse_graph(text: str) -> PartitionedGraph:
    """Parts are numbered 1..k in partite mode and 0..k-1 in circle mode."""
    header = None
    parts: dict[int, tuple[str, ...]] = {}
    edges: list[tuple[str, str]] = []
    last = 0
    for no, line in _lines(text):
        last = no
        if header is None:
            header = _header(no, line.split(), "graph")
            if "k" not in header:
                raise FormatSyntaxError(no, "header needs k=<k>")
            header["k"] = _ints(no, [header["k"]], "k")[0]
            header.setdefault("mode", PARTITE)
            if header["mode"] not in (PARTITE, CIRCLE):
                raise FormatSyntaxError(no, "mode is partite or circle")
            continue
        if line.startswith("part"):
            _parts(no, line, parts)
            continue
        words = line.split()
        if words[0] != "edge" or len(words) != 3:
            raise FormatSyntaxError(no, "expected 'edge u v'")
        where = {v: i for i, p in parts.items() for v in p}
        u, v = words[1:]
        for w in (u, v):
            if w not in where:
                raise SemanticError(no, f"unknown vertex {w!r}")
        if header["mode"] == PARTITE and where[u] == where[v]:
            raise SemanticError(no, f"edge {u}-{v} stays inside part {where[u]}")
        if header["mode"] == CIRCLE and where[v] != (where[u] + 1) % header["k"]:
            raise SemanticError(no, f"edge {u}->{v} does not go to the next layer")
        edges.append((u, v))
    if header is None:
        raise FormatSyntaxError(last or 1, "missing 'graph k=<k>' header")
    first = 0 if header["mode"] == CIRCLE else 1
    ordered = _ordered(last, parts, first, header["k"])
    try:
        return PartitionedGraph(ordered, tuple(edges), header["mode"])
    except GraphError as exc:
        raise SemanticError(last, exc) from exc


def emit_graph(graph: PartitionedGraph) -> str:
    first = 0 if graph.mode == CIRCLE else 1
    out = [f"graph k={graph.k} mode={graph.mode}"]
    out += [f"part {i + first}: {' '.join(p)}" for i, p in enumerate(graph.parts)]
    out += [f"edge {u} {v}" for u, v in graph.edges]
    return "\n".join(out) + "\n"


def parse_hypergraph(text: str) -> Hypergraph3:
    header = None
    parts: dict[int, tuple[str, ...]] = {}
    hedges: list[tuple[str, str, str]] = []
    last = 0
    for no, line in _lines(text):
        last = no
        if header is None:
            header = _header(no, line.split(), "hypergraph")
            if "parts" not in header:
                raise FormatSyntaxError(no, "header needs parts=<l>")
            header["parts"] = _ints(no, [header["parts"]], "parts")[0]
            continue
        if line.startswith("part"):
            _parts(no, line, parts)
            continue
        words = line.split()
        if words[0] != "hedge" or len(words) != 4:
            raise FormatSyntaxError(no, "expected 'hedge u v w'")
        where = {v: i for i, p in parts.items() for v in p}
        e = tuple(words[1:])
        for w in e:
            if w not in where:
                raise SemanticError(no, f"unknown vertex {w!r}")
        if len({where[w] for w in e}) != 3:
            raise SemanticError(no, f"hyperedge {' '.join(e)} has two vertices in one part")
        hedges.append(e)
    if header is None:
        raise FormatSyntaxError(last or 1, "missing 'hypergraph parts=<l>' header")
    ordered = _ordered(last, parts, 1, header["parts"])
    try:
        return Hypergraph3(ordered, tuple(hedges))
    except GraphError as exc:
        raise SemanticError(last, exc) from exc


def emit_hypergraph(h: Hypergraph3) -> str:
    out = [f"hypergraph parts={len(h.parts)}"]
    out += [f"part {i + 1}: {' '.join(p)}" for i, p in enumerate(h.parts)]
    out += [f"hedge {u} {v} {w}" for u, v, w in h.hyperedges]
    return "\n".join(out) + "\n"


# -- counter programs ---------------------------------------------------------

_TOKEN = re.compile(r"[{}|;]|[^\s{}|;]+")


def _tokenize(text: str):
    """Yield (line, token) with newlines turned into ';' separators."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in _TOKEN.findall(line):
            yield no, tok
        yield no, ";"


def parse_program(text: str) -> CounterProgram:
    toks = list(_tokenize(text))
    pos = 0
    declared: Optional[list[str]] = None
    helper: Optional[str] = None
    primes: dict[str, int] = {}
    seen_counters: list[str] = []
    seen_vertices: list[str] = []

    def counter(no, name):
        if declared is not None and name not in declared:
            raise SemanticError(no, f"unknown counter {name!r}")
        if name not in seen_counters:
            seen_counters.append(name)
        return name

    def vertex(name):
        if name not in seen_vertices:
            seen_vertices.append(name)
        return name

    def number(no, w):
        try:
            return int(w)
        except ValueError:
            raise FormatSyntaxError(no, f"expected an integer, got {w!r}") from None

    def statement(words, no):
        nonlocal declared, helper
        kw, args = words[0], words[1:]
        arity = {"inc": 1, "dec": 1, "ztest": 1, "multiply": 2, "divide": 2,
                 "edge": 2, "select": 1, "hyperedge": 3, "vertex": 2, "helper": 1}
        if kw == "counters":
            if not args:
                raise FormatSyntaxError(no, "counters needs at least one name")
            declared = list(args)
            return None
        if kw not in arity:
            raise SemanticError(no, f"unknown instruction or gadget {kw!r}")
        if len(args) != arity[kw]:
            raise FormatSyntaxError(no, f"{kw} takes {arity[kw]} argument(s)")
        if kw == "helper":
            helper = args[0]
            return None
        if kw == "vertex":
            primes[args[0]] = number(no, args[1])
            return None
        if kw in ("inc", "dec"):
            return AddUnit(counter(no, args[0]), 1 if kw == "inc" else -1)
        if kw == "ztest":
            return GuardZero(counter(no, args[0]))
        if kw in ("multiply", "divide"):
            p = number(no, args[1])
            cls = Multiply if kw == "multiply" else Divide
            return cls(counter(no, args[0]), p)
        if kw == "edge":
            return Edge(vertex(args[0]), vertex(args[1]))
        if kw == "select":
            return VertexSelected(vertex(args[0]))
        return HyperEdge(*(vertex(a) for a in args))

    def block(stop: set[str]):
        nonlocal pos
        body = []
        words: list[str] = []
        start = 0
        while pos < len(toks):
            no, tok = toks[pos]
            if tok in stop:
                break
            pos += 1
            if tok == ";":
                if words:
                    ins = statement(words, start)
                    if ins is not None:
                        body.append(ins)
                    words = []
            elif tok == "{":
                if words != ["guess"]:
                    raise FormatSyntaxError(no, "'{' only follows 'guess'")
                words = []
                branches = [block({"|", "}"})]
                while True:
                    if pos >= len(toks):
                        raise FormatSyntaxError(no, "unterminated guess block")
                    bno, btok = toks[pos]
                    pos += 1
                    if btok == "}":
                        break
                    branches.append(block({"|", "}"}))
                body.append(Guess(tuple(tuple(b) for b in branches)))
            elif tok in ("|", "}"):
                raise FormatSyntaxError(no, f"unexpected {tok!r}")
            else:
                if not words:
                    start = no
                words.append(tok)
        if words:
            ins = statement(words, start)
            if ins is not None:
                body.append(ins)
        return body

    body = block(set())
    if pos < len(toks):
        raise FormatSyntaxError(toks[pos][0], f"unexpected {toks[pos][1]!r}")
    if helper is None:
        helper = "y" if declared is None or "y" in declared else declared[-1]
    if declared is None:
        declared = [c for c in seen_counters if c != helper] + [helper]
    elif helper not in declared:
        raise SemanticError(1, f"helper counter {helper!r} is not declared")
    # vertices without an explicit prime get the smallest unused ones
    unassigned = [v for v in seen_vertices if v not in primes]
    if unassigned:
        pool = [p for p in primes_first(len(primes) + len(unassigned))
                if p not in set(primes.values())]
        primes.update(zip(unassigned, pool))
    return CounterProgram(tuple(declared), tuple(body), helper, primes)


# -- runs ---------------------------------------------------------------------


def emit_run(run: Run) -> list[str]:
    out = [f"len={len(run)}"]
    out += [" ".join([c.state, *map(str, c.counters)]) for c in run.configurations]
    return out


def emit_stats(stats: dict) -> list[str]:
    return [f"stats {k}={v}" for k, v in stats.items()]


def parse_run(text: str, instance: Instance) -> Run:
    """Parse ``emit_run`` output and recover the path from consecutive configurations.

    Where several transitions connect two configurations the first declared
    one is used; with equal source, target and effect they are interchangeable.
    """
    configs: list[Configuration] = []
    d = instance.dimension
    for no, line in _lines(text):
        # report lines (len=, answer=, stats ...) are all key=value
        if "=" in line:
            continue
        words = line.split()
        if len(words) != d + 1:
            raise FormatSyntaxError(no, f"configuration needs a state and {d} integers")
        configs.append(Configuration(words[0], _ints(no, words[1:], "counters")))
    if not configs:
        raise FormatSyntaxError(1, "empty run")
    path = []
    for i, (a, b) in enumerate(zip(configs, configs[1:])):
        delta = tuple(y - x for x, y in zip(a.counters, b.counters))
        match = next((t for t in instance.vass.transitions
                      if t.source == a.state and t.target == b.state and t.update == delta
                      and (t.guard is None or a.counters[t.guard] == 0)), None)
        if match is None:
            raise SemanticError(i + 2, f"no transition from {a} to {b}")
        path.append(match)
    return Run(tuple(configs), tuple(path))
