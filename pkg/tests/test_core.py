import pytest
from hypothesis import given, strategies as st

from vasscov.core import (
    COVER,
    REACH,
    BadGuard,
    Configuration,
    DimensionMismatch,
    EmptyStates,
    EmptyTransitions,
    GuardFailed,
    BoundExceeded,
    Instance,
    NegativeCounter,
    StepFailed,
    Transition,
    UnknownState,
    ValidationError,
    WrongSourceState,
    apply_path,
    instance_size,
    norm,
    step,
    to_unary,
    validate,
)
from vasscov.solve import reachable_configurations

from .helpers import inst


def kinds(exc):
    return [type(p) for p in exc.value.problems]


class TestValidate:
    def test_smallest_vass(self):
        v = validate(1, ["p"], [("p", (1,), "p")])
        assert v.norm() == 2

    def test_unknown_state(self):
        with pytest.raises(ValidationError) as exc:
            validate(1, ["p"], [("p", (1,), "r")])
        assert kinds(exc) == [UnknownState]
        assert exc.value.problems[0].state == "r"

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError) as exc:
            validate(2, ["p"], [("p", (1, 0, 0), "p")])
        assert kinds(exc) == [DimensionMismatch]

    def test_empty_sets_reported_together(self):
        with pytest.raises(ValidationError) as exc:
            validate(1, [], [])
        assert kinds(exc) == [EmptyStates, EmptyTransitions]

    def test_every_violation_listed(self):
        with pytest.raises(ValidationError) as exc:
            validate(1, ["p"], [("p", (1, 1), "q"), ("r", (0,), "p")])
        assert kinds(exc) == [DimensionMismatch, UnknownState, UnknownState]

    def test_guard_checks(self):
        with pytest.raises(ValidationError) as exc:
            validate(1, ["p"], [("p", (0,), "p", 3), ("p", (1,), "p", 0)])
        assert kinds(exc) == [BadGuard, BadGuard]

    def test_duplicates_counted_separately(self):
        v = validate(1, ["p"], [("p", (2,), "p"), ("p", (2,), "p")])
        assert v.norm() == 1 + 2 + 2

    def test_zero_update_has_norm_one(self):
        assert norm((0, 0)) == 1
        assert norm(()) == 1
        assert norm((-4, 2)) == 4


class TestStep:
    def test_arithmetic(self):
        t = Transition("p", (-1, 1), "q")
        assert step(Configuration("p", (2, 0)), t) == Configuration("q", (1, 1))

    def test_negative(self):
        with pytest.raises(NegativeCounter) as exc:
            step(Configuration("p", (0, 0)), Transition("p", (-1, 0), "q"))
        assert exc.value.index == 0
        assert "counter 1" in str(exc.value)

    def test_guard(self):
        with pytest.raises(GuardFailed) as exc:
            step(Configuration("p", (1,)), Transition("p", (0,), "q", 0))
        assert exc.value.index == 0

    def test_guard_passes_at_zero(self):
        assert step(Configuration("p", (0,)), Transition("p", (0,), "q", 0)).state == "q"

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            step(Configuration("p", (3,)), Transition("p", (1,), "p"), bound=3)

    def test_wrong_source(self):
        with pytest.raises(WrongSourceState):
            step(Configuration("q", (0,)), Transition("p", (1,), "p"))


class TestApplyPath:
    loop = Transition("p", (1,), "p")

    def test_two_increments(self):
        run = apply_path(Configuration("p", (0,)), [self.loop, self.loop])
        assert len(run) == 3
        assert run.last == Configuration("p", (2,))

    def test_failure_index(self):
        with pytest.raises(StepFailed) as exc:
            apply_path(Configuration("p", (0,)), [Transition("p", (-1,), "p")])
        assert exc.value.index == 0
        assert isinstance(exc.value.cause, NegativeCounter)

    def test_empty_path(self):
        run = apply_path(Configuration("p", (4, 1)), [])
        assert len(run) == 1
        assert run.effect() == (0, 0)


class TestInstanceSize:
    def test_zero_vectors(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (0,)))
        assert instance_size(i) == 4

    def test_formula(self):
        # ||V|| = 10: 4 states + transitions of norm 3, 2, 1
        i = inst(2, ["a", "b", "c", "d"],
                 [("a", (3, 0), "b"), ("b", (0, -2), "c"), ("c", (0, 0), "d")],
                 ("a", (3, 0)), ("d", (5, 5)))
        assert i.vass.norm() == 10
        assert instance_size(i) == 18

    def test_rejects_bad_endpoints(self):
        with pytest.raises(DimensionMismatch):
            inst(1, ["p"], [("p", (1,), "p")], ("p", (0, 0)), ("p", (0,)))
        with pytest.raises(UnknownState):
            inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("z", (0,)))

    def test_accepts(self):
        i = inst(1, ["p"], [("p", (1,), "p")], ("p", (0,)), ("p", (2,)))
        assert i.accepts(Configuration("p", (3,)))
        assert not i.with_mode(REACH).accepts(Configuration("p", (3,)))


class TestToUnary:
    def test_chain_of_three(self):
        v = validate(1, ["p", "q"], [("p", (3,), "q")])
        u = to_unary(v)
        assert len(u.states) == 4
        assert [t.update for t in u.transitions] == [(1,), (1,), (1,)]
        assert u.transitions[0].source == "p" and u.transitions[-1].target == "q"

    def test_unary_unchanged(self):
        v = validate(2, ["p"], [("p", (1, -1), "p")])
        assert to_unary(v) is v

    def test_mixed_update_decrements_first(self):
        v = validate(2, ["p", "q"], [("p", (2, -2), "q")])
        u = to_unary(v)
        assert [t.update for t in u.transitions] == [(0, -1), (0, -1), (1, 0), (1, 0)]
        i = Instance(u, Configuration("p", (0, 2)), Configuration("q", (2, 0)), REACH, 8)
        assert Configuration("q", (2, 0)) in reachable_configurations(i)

    def test_fresh_names_avoid_clashes(self):
        v = validate(1, ["p", "q", "p~0.1"], [("p", (2,), "q")])
        u = to_unary(v)
        assert len(set(u.states)) == len(u.states) == 4


updates = st.lists(st.integers(-3, 3), min_size=1, max_size=2)


@st.composite
def small_instances(draw):
    d = draw(st.integers(1, 2))
    states = [f"s{i}" for i in range(draw(st.integers(1, 3)))]
    trans = draw(st.lists(
        st.tuples(st.sampled_from(states), st.lists(st.integers(-3, 3), min_size=d, max_size=d),
                  st.sampled_from(states)), min_size=1, max_size=4))
    init = tuple(draw(st.lists(st.integers(0, 3), min_size=d, max_size=d)))
    target = (draw(st.sampled_from(states)),
              tuple(draw(st.lists(st.integers(0, 4), min_size=d, max_size=d))))
    return inst(d, states, trans, (states[0], init), target, COVER, bound=8)


def covered(instance):
    return any(c.covers(instance.target) for c in reachable_configurations(instance))


@given(small_instances())
def test_to_unary_preserves_coverability(i):
    u = Instance(to_unary(i.vass), i.init, i.target, i.mode, i.bound)
    assert u.vass.is_unary
    assert covered(i) == covered(u)
    # a non-unary x becomes |x|_1 unit steps through |x|_1 - 1 fresh states
    def cost(x):
        return 1 if max(map(abs, x)) <= 1 else 2 * sum(map(abs, x)) - 1
    expected = len(i.vass.states) + sum(cost(t.update) for t in i.vass.transitions)
    assert u.vass.norm() == expected
    assert u.vass.norm() <= 2 * i.vass.dimension * i.vass.norm()


@given(small_instances(), st.lists(st.integers(0, 3), max_size=6))
def test_apply_path_effect_and_nonnegativity(i, picks):
    ts = i.vass.transitions
    c = i.init
    path = []
    for k in picks:
        cand = [t for t in ts if t.source == c.state]
        if not cand:
            break
        t = cand[k % len(cand)]
        try:
            c = step(c, t)
        except NegativeCounter:
            break
        path.append(t)
    run = apply_path(i.init, path)
    assert all(v >= 0 for conf in run.configurations for v in conf.counters)
    assert tuple(a + e for a, e in zip(run.first.counters, run.effect())) == run.last.counters
    assert len(run) == len(path) + 1
