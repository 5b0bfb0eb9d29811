"""Witness-length bounds based on thin configurations.

``L_i = n ** (4 ** i)`` caps the length of a minimal covering run in
dimension i; ``M_0 = n`` and ``M_i = L_{i-1} * n`` are the per-slot
thresholds of the thin-configuration test.  Everything is exact Python
integers, so ``L_d`` is fine to compute for small n and d but grows as a
tower; keep ``d`` small when printing it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Configuration, Instance, Run, StepFailed, VassError, apply_path, instance_size


class InstanceTooSmall(VassError):
    def __init__(self, n: int):
        super().__init__(f"instance size must be at least 2, got {n}")


class NotAWitness(VassError):
    pass


@dataclass(frozen=True)
class ThinProfile:
    n: int
    d: int
    L: tuple[int, ...]
    M: tuple[int, ...]

    @property
    def length_bound(self) -> int:
        return self.L[self.d]


def thin_profile(n: int, d: int) -> ThinProfile:
    if n < 2:
        raise InstanceTooSmall(n)
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    L = tuple(n ** (4 ** i) for i in range(d + 1))
    M = (n,) + tuple(L[i - 1] * n for i in range(1, d + 1))
    return ThinProfile(n, d, L, M)


def is_thin(counters: Sequence[int], profile: ThinProfile) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Return (thin?, sigma) where sigma[i-1] is the counter placed in slot i.

    Greedy: the i-th smallest counter goes to slot i.  Since M_1 <= M_2 <= ...,
    a valid assignment exists iff the sorted one is valid.
    """
    if len(counters) != profile.d:
        raise ValueError("counter vector length must equal the profile dimension")
    order = sorted(range(profile.d), key=lambda j: (counters[j], j))
    for slot, j in enumerate(order, start=1):
        if counters[j] >= profile.M[slot]:
            return False, None
    return True, tuple(order)


@dataclass(frozen=True)
class ThinSplit:
    thin: tuple[Configuration, ...]
    tail: tuple[Configuration, ...]
    index: int


def split_thin(run: Run, profile: ThinProfile) -> ThinSplit:
    """Split a run at its first non-thin configuration."""
    configs = run.configurations
    t = len(configs)
    for i, c in enumerate(configs):
        if not is_thin(c.counters, profile)[0]:
            t = i
            break
    return ThinSplit(configs[:t], configs[t:], t)


def thin_length_bound(profile: ThinProfile) -> int:
    """d! * n^d * L_{d-1} * ... * L_0, the number of thin counter vectors."""
    d = profile.d
    return math.factorial(d) * profile.n ** d * math.prod(profile.L[:d])


def tail_length_bound(profile: ThinProfile) -> int:
    # no L_{-1}: in dimension 0 every configuration is thin and the tail is empty
    return profile.L[profile.d - 1] if profile.d >= 1 else 0


@dataclass(frozen=True)
class AuditReport:
    n: int
    d: int
    length: int
    length_bound: int
    thin_length: int
    thin_bound: int
    tail_length: int
    tail_bound: int
    split_index: int
    distinct: bool

    @property
    def within_length_bound(self) -> bool:
        return self.length <= self.length_bound

    @property
    def within_thin_bound(self) -> bool:
        return self.thin_length <= self.thin_bound

    @property
    def within_tail_bound(self) -> bool:
        return self.tail_length <= self.tail_bound

    @property
    def ok(self) -> bool:
        return self.within_length_bound and self.within_thin_bound and self.within_tail_bound

    def lines(self) -> list[str]:
        return [
            f"n={self.n}",
            f"d={self.d}",
            f"len={self.length}",
            f"L_d={self.length_bound}",
            f"len_ok={str(self.within_length_bound).lower()}",
            f"split={self.split_index}",
            f"thin_len={self.thin_length}",
            f"thin_bound={self.thin_bound}",
            f"thin_ok={str(self.within_thin_bound).lower()}",
            f"tail_len={self.tail_length}",
            f"tail_bound={self.tail_bound}",
            f"tail_ok={str(self.within_tail_bound).lower()}",
            f"distinct={str(self.distinct).lower()}",
        ]


def audit_witness(instance: Instance, run: Run) -> AuditReport:
    """Check a covering run against the L_d, thin-prefix and tail bounds."""
    if run.first != instance.init or not run.last.covers(instance.target):
        raise NotAWitness("run does not lead from the initial configuration to a cover of the target")
    try:
        replay = apply_path(run.first, run.path, instance.bound)
    except StepFailed as exc:
        raise NotAWitness(f"run is not executable: {exc}") from exc
    if replay != run:
        raise NotAWitness("recorded configurations do not match the path")
    n = instance_size(instance)
    profile = thin_profile(n, instance.dimension)
    split = split_thin(run, profile)
    return AuditReport(
        n=n,
        d=profile.d,
        length=len(run),
        length_bound=profile.length_bound,
        thin_length=len(split.thin),
        thin_bound=thin_length_bound(profile),
        tail_length=len(split.tail),
        tail_bound=tail_length_bound(profile),
        split_index=split.index,
        distinct=len(set(run.configurations)) == len(run),
    )
