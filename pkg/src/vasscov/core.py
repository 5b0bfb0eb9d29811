"""VASS data model: states, transitions, configurations, runs and instances.

Counter indices are 0-based everywhere in the API; human-facing messages and
the textual format use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


class VassError(Exception):
    """Base class for model errors."""


class ValidationError(VassError):
    """Raised by :func:`validate`; ``problems`` lists every violation found."""

    def __init__(self, problems: list[VassError]):
        self.problems = problems
        super().__init__("; ".join(str(p) for p in problems))


class EmptyStates(VassError):
    def __init__(self):
        super().__init__("VASS has no states")


class EmptyTransitions(VassError):
    def __init__(self):
        super().__init__("VASS has no transitions")


class DimensionMismatch(VassError):
    def __init__(self, what: str, expected: int, got: int):
        self.what, self.expected, self.got = what, expected, got
        super().__init__(f"{what}: expected {expected} entries, got {got}")


class UnknownState(VassError):
    def __init__(self, state: str):
        self.state = state
        super().__init__(f"unknown state {state!r}")


class BadGuard(VassError):
    def __init__(self, msg: str):
        super().__init__(msg)


class StepError(VassError):
    """A single transition could not be fired."""


class NegativeCounter(StepError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"counter {index + 1} would become negative")


class BoundExceeded(StepError):
    def __init__(self, index: int, bound: int):
        self.index, self.bound = index, bound
        super().__init__(f"counter {index + 1} would exceed bound {bound}")


class GuardFailed(StepError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"zero-test on counter {index + 1} failed")


class WrongSourceState(StepError):
    def __init__(self, state: str, source: str):
        self.state, self.source = state, source
        super().__init__(f"configuration is in {state!r}, transition starts in {source!r}")


class StepFailed(VassError):
    def __init__(self, index: int, cause: StepError):
        self.index, self.cause = index, cause
        super().__init__(f"step {index} failed: {cause}")


def norm(vector: Sequence[int]) -> int:
    """max(1, max |entry|); the zero vector (and the empty vector) has norm 1."""
    return max([1, *(abs(x) for x in vector)])


@dataclass(frozen=True)
class Transition:
    source: str
    update: Vector
    target: str
    # 0-based counter index that must be zero for the transition to fire
    guard: Optional[int] = None

    @property
    def is_unary(self) -> bool:
        return all(-1 <= x <= 1 for x in self.update)

    def __str__(self) -> str:
        if self.guard is not None:
            return f"({self.source}, x{self.guard + 1}=0, {self.target})"
        return f"({self.source}, {self.update}, {self.target})"


@dataclass(frozen=True)
class Vass:
    """A d-VASS, optionally with zero-guarded transitions.

    ``transitions`` is an ordered multiset; declaration order drives solver
    tie-breaking.
    """

    dimension: int
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]

    @property
    def has_guards(self) -> bool:
        return any(t.guard is not None for t in self.transitions)

    @property
    def is_unary(self) -> bool:
        return all(t.is_unary for t in self.transitions)

    def norm(self) -> int:
        return len(self.states) + sum(norm(t.update) for t in self.transitions)

    def outgoing(self) -> dict[str, list[Transition]]:
        out: dict[str, list[Transition]] = {q: [] for q in self.states}
        for t in self.transitions:
            out[t.source].append(t)
        return out


@dataclass(frozen=True)
class Configuration:
    state: str
    counters: Vector

    def covers(self, other: "Configuration") -> bool:
        return self.state == other.state and all(
            a >= b for a, b in zip(self.counters, other.counters)
        )

    def __str__(self) -> str:
        return f"{self.state}({', '.join(map(str, self.counters))})"


@dataclass(frozen=True)
class Run:
    configurations: tuple[Configuration, ...]
    path: tuple[Transition, ...] = ()

    def __post_init__(self):
        if not self.configurations:
            raise ValueError("a run has at least one configuration")
        if len(self.path) != len(self.configurations) - 1:
            raise ValueError("path length must be len(run) - 1")

    def __len__(self) -> int:
        return len(self.configurations)

    @property
    def first(self) -> Configuration:
        return self.configurations[0]

    @property
    def last(self) -> Configuration:
        return self.configurations[-1]

    def effect(self) -> Vector:
        return tuple(b - a for a, b in zip(self.first.counters, self.last.counters))

    def max_counters(self) -> Vector:
        d = len(self.first.counters)
        return tuple(max(c.counters[i] for c in self.configurations) for i in range(d))

    def guarded_steps(self) -> int:
        return sum(1 for t in self.path if t.guard is not None)


COVER = "cover"
REACH = "reach"


@dataclass(frozen=True)
class Instance:
    """A coverability or reachability question, optionally B-bounded."""

    vass: Vass
    init: Configuration
    target: Configuration
    mode: str = COVER
    bound: Optional[int] = None

    def __post_init__(self):
        if self.mode not in (COVER, REACH):
            raise ValueError(f"mode must be cover or reach, not {self.mode!r}")
        d = self.vass.dimension
        for what, c in (("init", self.init), ("target", self.target)):
            if len(c.counters) != d:
                raise DimensionMismatch(what, d, len(c.counters))
            if c.state not in self.vass.states:
                raise UnknownState(c.state)
            if any(v < 0 for v in c.counters):
                raise VassError(f"{what} has a negative counter")

    @property
    def dimension(self) -> int:
        return self.vass.dimension

    def accepts(self, config: Configuration) -> bool:
        if self.mode == COVER:
            return config.covers(self.target)
        return config == self.target

    def with_bound(self, bound: Optional[int]) -> "Instance":
        return replace(self, bound=bound)

    def with_mode(self, mode: str) -> "Instance":
        return replace(self, mode=mode)


def instance_size(instance: Instance) -> int:
    """n = ||V|| + ||s|| + ||t||."""
    return instance.vass.norm() + norm(instance.init.counters) + norm(instance.target.counters)


def validate(
    dimension: int,
    states: Iterable[str],
    transitions: Iterable[tuple],
) -> Vass:
    """Build a :class:`Vass` from raw pieces, collecting every violation.

    ``transitions`` items are ``(source, update, target)`` or
    ``(source, update, target, guard)`` tuples, or :class:`Transition`.
    """
    states = tuple(states)
    raw = [t if isinstance(t, Transition) else Transition(t[0], tuple(t[1]), t[2], *t[3:])
           for t in transitions]
    problems: list[VassError] = []
    if not states:
        problems.append(EmptyStates())
    if not raw:
        problems.append(EmptyTransitions())
    known = set(states)
    reported: set[str] = set()
    for t in raw:
        if len(t.update) != dimension:
            problems.append(DimensionMismatch(f"update of {t.source}->{t.target}",
                                              dimension, len(t.update)))
        for q in (t.source, t.target):
            if q not in known and q not in reported:
                reported.add(q)
                problems.append(UnknownState(q))
        if t.guard is not None:
            if not 0 <= t.guard < dimension:
                problems.append(BadGuard(f"guard index {t.guard + 1} outside 1..{dimension}"))
            if any(t.update):
                problems.append(BadGuard(f"guarded transition {t.source}->{t.target} "
                                         "must have a zero update"))
    if problems:
        raise ValidationError(problems)
    return Vass(dimension, states, tuple(raw))


def step(
    config: Configuration,
    transition: Transition,
    bound: Optional[int] = None,
) -> Configuration:
    if config.state != transition.source:
        raise WrongSourceState(config.state, transition.source)
    if transition.guard is not None and config.counters[transition.guard] != 0:
        raise GuardFailed(transition.guard)
    new = tuple(a + b for a, b in zip(config.counters, transition.update))
    for i, v in enumerate(new):
        if v < 0:
            raise NegativeCounter(i)
        if bound is not None and v > bound:
            raise BoundExceeded(i, bound)
    return Configuration(transition.target, new)


def apply_path(
    init: Configuration,
    path: Sequence[Transition],
    bound: Optional[int] = None,
) -> Run:
    configs = [init]
    for i, t in enumerate(path):
        try:
            configs.append(step(configs[-1], t, bound))
        except StepError as exc:
            raise StepFailed(i, exc) from exc
    return Run(tuple(configs), tuple(path))


def to_unary(vass: Vass) -> Vass:
    """Expand every non-unary transition into a chain of unit steps.

    Within one chain all decrements come before all increments, so the chain
    can be traversed exactly when the original transition can fire, and no
    intermediate value exceeds the endpoint values.
    """
    if vass.is_unary:
        return vass
    states = list(vass.states)
    taken = set(states)
    transitions: list[Transition] = []
    for idx, t in enumerate(vass.transitions):
        if t.is_unary:
            transitions.append(t)
            continue
        units: list[Vector] = []
        for sign in (-1, 1):
            for i, x in enumerate(t.update):
                if x * sign > 0:
                    unit = tuple(sign if j == i else 0 for j in range(vass.dimension))
                    units.extend([unit] * abs(x))
        chain = [t.source]
        for k in range(1, len(units)):
            name = f"{t.source}~{idx}.{k}"
            while name in taken:
                name += "'"
            taken.add(name)
            states.append(name)
            chain.append(name)
        chain.append(t.target)
        for k, unit in enumerate(units):
            transitions.append(Transition(chain[k], unit, chain[k + 1]))
    return Vass(vass.dimension, tuple(states), tuple(transitions))
