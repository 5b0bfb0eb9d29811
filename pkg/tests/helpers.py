"""Small independent oracles shared by the tests."""

import itertools

from vasscov.core import COVER, Configuration, Instance, Transition, Vass


def inst(d, states, transitions, init, target, mode=COVER, bound=None):
    vass = Vass(d, tuple(states), tuple(
        t if isinstance(t, Transition) else Transition(t[0], tuple(t[1]), t[2], *t[3:])
        for t in transitions))
    return Instance(vass, Configuration(*init), Configuration(*target), mode, bound)


def paths_up_to(instance, max_steps):
    """Every executable transition sequence of length <= max_steps (naive enumeration)."""
    trans = instance.vass.transitions
    bound = instance.bound

    def ok(c, t):
        if c.state != t.source:
            return None
        if t.guard is not None and c.counters[t.guard] != 0:
            return None
        new = tuple(a + b for a, b in zip(c.counters, t.update))
        if any(v < 0 for v in new) or (bound is not None and any(v > bound for v in new)):
            return None
        return Configuration(t.target, new)

    frontier = [(instance.init,)]
    yield frontier[0]
    for _ in range(max_steps):
        nxt = []
        for seq in frontier:
            for t in trans:
                c = ok(seq[-1], t)
                if c is not None:
                    nxt.append(seq + (c,))
        for seq in nxt:
            yield seq
        frontier = nxt


def naive_shortest(instance, max_steps):
    """Length (configurations) of the shortest accepting sequence within max_steps, or None."""
    for seq in paths_up_to(instance, max_steps):
        if instance.accepts(seq[-1]):
            return len(seq)
    return None


def all_permutations_thin(counters, M):
    d = len(counters)
    return any(all(counters[s[i]] < M[i + 1] for i in range(d))
               for s in itertools.permutations(range(d)))


def trial_division_primes(m):
    out, k = [], 2
    while len(out) < m:
        if all(k % p for p in out if p * p <= k):
            out.append(k)
        k += 1
    return out
