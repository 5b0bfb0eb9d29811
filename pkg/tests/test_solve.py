import random

import pytest
from hypothesis import given, settings, strategies as st

from vasscov.core import COVER, REACH, Configuration, Instance, apply_path
from vasscov.reduce import CounterProgram, Divide, Multiply, compile_program
from vasscov.solve import (
    BudgetExhausted,
    MissingBound,
    ModeMismatch,
    Status,
    UnsupportedBound,
    UnsupportedGuards,
    UpwardClosedSet,
    backward_cover,
    bounded_dfs,
    forward_cover,
    predecessor_basis,
    reachable_configurations,
    shortest_witness_oracle,
    ztest_bounded_search,
)
from vasscov.suites import random_bounded_instance

from .helpers import inst, naive_shortest

LOOP = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (3,)))


class TestForward:
    def test_unit_increments(self):
        r = forward_cover(LOOP)
        assert r.status is Status.FOUND
        assert len(r.witness.run) == 4

    def test_already_covered(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (5,)), ("p", (3,)))
        r = forward_cover(i)
        assert r.found and len(r.witness.run) == 1

    def test_only_decrements(self):
        i = inst(1, ["p"], [("p", (-1,), "p")], ("p", (2,)), ("p", (3,)))
        r = forward_cover(i)
        assert r.status is Status.DEFINITIVE_NO

    def test_cap_counts_configurations(self):
        assert forward_cover(LOOP, cap=4).found
        r = forward_cover(LOOP, cap=3)
        assert r.status is Status.NOT_FOUND_WITHIN_CAP and not r.budget_limited

    def test_node_budget(self):
        r = forward_cover(LOOP, max_nodes=1)
        assert r.status is Status.NOT_FOUND_WITHIN_CAP and r.budget_limited

    def test_default_cap_is_L_d(self):
        assert forward_cover(LOOP).cap == 6 ** 4

    def test_errors(self):
        with pytest.raises(ModeMismatch):
            forward_cover(LOOP.with_mode(REACH))
        with pytest.raises(UnsupportedBound):
            forward_cover(LOOP.with_bound(5))
        g = inst(1, ["p"], [("p", (0,), "p", 0)], ("p", (0,)), ("p", (0,)))
        with pytest.raises(UnsupportedGuards):
            forward_cover(g)

    def test_declaration_order_tiebreak(self):
        # two shortest witnesses of length 2; the first declared transition wins
        i = inst(1, ["p", "a", "b"], [("p", (1,), "a"), ("p", (1,), "b"), ("a", (0,), "b")],
                 ("p", (0,)), ("b", (1,)))
        r = forward_cover(i)
        assert len(r.witness.run) == 2
        assert r.witness.run.path[0] == i.vass.transitions[1]


class TestBackward:
    def test_loop(self):
        r = backward_cover(LOOP)
        assert r.covered
        assert r.basis.elements() == [("p", (0,))]

    def test_disconnected_target(self):
        i = inst(1, ["p", "q"], [("p", (1,), "p")], ("p", (0,)), ("q", (0,)))
        r = backward_cover(i)
        assert not r.covered
        assert {q for q, _ in r.basis.elements()} == {"q"}

    def test_predecessor_arithmetic(self):
        assert predecessor_basis((2, 0), (-1, 3)) == (3, 0)

    def test_errors(self):
        with pytest.raises(ModeMismatch):
            backward_cover(LOOP.with_mode(REACH))
        with pytest.raises(UnsupportedBound):
            backward_cover(LOOP.with_bound(3))

    def test_antichain_every_round(self):
        rng = random.Random(7)
        for _ in range(40):
            i = random_bounded_instance(rng).with_bound(None)
            seen = []
            backward_cover(i, on_round=lambda k, u: seen.append(u.is_antichain()))
            assert all(seen)

    def test_basis_is_upward_consistent(self):
        rng = random.Random(11)
        for _ in range(40):
            i = random_bounded_instance(rng).with_bound(None)
            basis = backward_cover(i).basis
            for q, m in basis.elements():
                bumped = tuple(v + rng.randint(0, 2) for v in m)
                probe = Instance(i.vass, Configuration(q, bumped), i.target, COVER)
                assert forward_cover(probe).found


class TestUpwardClosedSet:
    def test_minimization(self):
        u = UpwardClosedSet(2)
        assert u.add("p", (2, 2))
        assert not u.add("p", (3, 2))
        assert u.add("p", (1, 5))
        assert u.add("p", (1, 1))
        assert u.elements() == [("p", (1, 1))]
        assert Configuration("p", (4, 1)) in u
        assert Configuration("q", (4, 1)) not in u


class TestBoundedDfs:
    def test_envelope_shape(self):
        i = inst(2, ["a", "b", "c"],
                 [("a", (1, 0), "b"), ("b", (0, 1), "c"), ("c", (-1, 0), "a"), ("a", (0, -1), "a")],
                 ("a", (0, 0)), ("c", (9, 9)), bound=1)
        r = bounded_dfs(i)
        assert r.status is Status.DEFINITIVE_NO
        assert r.extra["envelope"] == 12 and r.expanded <= 12

    def test_reach_within_bound(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (5,)), REACH, 5)
        r = bounded_dfs(i)
        assert r.found and r.witness.max_counters == (5,)

    def test_bound_blocks(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (6,)), REACH, 5)
        assert bounded_dfs(i).status is Status.DEFINITIVE_NO

    def test_missing_bound(self):
        with pytest.raises(MissingBound):
            bounded_dfs(LOOP)

    def test_budget(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (50,)), REACH, 60)
        with pytest.raises(BudgetExhausted):
            bounded_dfs(i, max_nodes=10)

    def test_prune_discards(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (5,)), REACH, 5)
        assert bounded_dfs(i, prune=lambda q, c: c[0] > 3).status is Status.DEFINITIVE_NO

    def test_guards_rejected(self):
        g = inst(1, ["p"], [("p", (0,), "p", 0)], ("p", (0,)), ("p", (0,)), bound=2)
        with pytest.raises(UnsupportedGuards):
            bounded_dfs(g)


def gadget(cls, v, p):
    return compile_program(CounterProgram(("x", "y"), (cls("x", p),)), init=(v, 0)).with_bound(40)


def exits(i):
    return {c.counters for c in reachable_configurations(i) if c.state == i.target.state}


class TestZeroTestSearch:
    def test_divide_even(self):
        assert exits(gadget(Divide, 6, 2)) == {(3, 0)}

    def test_divide_odd_stuck(self):
        i = gadget(Divide, 5, 2)
        assert exits(i) == set()
        assert ztest_bounded_search(i).status is Status.DEFINITIVE_NO

    def test_multiply_guard_count(self):
        i = gadget(Multiply, 3, 2)
        assert exits(i) == {(6, 0)}
        r = ztest_bounded_search(i)
        assert r.found and r.witness.guarded_steps == 2

    def test_missing_bound(self):
        with pytest.raises(MissingBound):
            ztest_bounded_search(gadget(Multiply, 1, 2).with_bound(None))


class TestOracle:
    def test_prefers_shorter(self):
        i = inst(1, ["p", "a", "b", "c", "q"],
                 [("p", (0,), "a"), ("a", (0,), "b"), ("b", (0,), "c"), ("c", (0,), "q"),
                  ("p", (0,), "b"), ("b", (0,), "q")],
                 ("p", (0,)), ("q", (0,)))
        assert len(shortest_witness_oracle(i)) == 3

    def test_exhausted_reachable_set(self):
        i = inst(1, ["p", "q"], [("p", (-1,), "p")], ("p", (3,)), ("q", (0,)))
        assert shortest_witness_oracle(i) is None

    def test_budget(self):
        with pytest.raises(BudgetExhausted):
            shortest_witness_oracle(inst(1, ["p", "q"], [("p", (1,), "p")], ("p", (0,)),
                                         ("q", (0,))), budget=50)

    def test_against_naive_enumeration(self):
        rng = random.Random(5)
        for _ in range(60):
            i = random_bounded_instance(rng, dims=(1, 2), max_states=3, max_transitions=3)
            run = shortest_witness_oracle(i)
            naive = naive_shortest(i, 7)
            if run is None:
                assert naive is None
            elif len(run) <= 8:
                assert naive == len(run)
                assert apply_path(run.first, run.path, i.bound) == run


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_forward_matches_oracle(seed):
    i = random_bounded_instance(random.Random(seed))
    oracle = shortest_witness_oracle(i)
    fwd = forward_cover(i.with_bound(None))
    assert fwd.found == (oracle is not None)
    assert backward_cover(i.with_bound(None)).covered == fwd.found
    assert bounded_dfs(i).found == fwd.found
    if oracle is not None:
        assert len(fwd.witness.run) == len(oracle)
