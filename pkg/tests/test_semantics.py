import random

import pytest

from mvnabs import (
    GuardExceeded,
    attractor_of,
    attractors,
    iter_language,
    language,
    parse_state,
    reachable,
    state_graph_dot,
    state_space,
    state_space_size,
    successor,
    trace_from,
)
from modelgen import (
    is_canonical,
    random_model,
    ref_attractors,
    ref_language,
    ref_states,
    ref_successor,
    ref_trace,
)


def states_of(m, *texts):
    return tuple(parse_state(m, t) for t in texts)


def trace_states(m, *texts):
    return states_of(m, *texts)


class TestGroundTruth:
    def test_ex1_language(self, ex1):
        expected = {
            trace_states(ex1, "00", "11", "10", "10"),
            trace_states(ex1, "01", "12", "01"),
            trace_states(ex1, "02", "02"),
            trace_states(ex1, "10", "10"),
            trace_states(ex1, "11", "10", "10"),
            trace_states(ex1, "12", "01", "12"),
        }
        assert {t.states for t in language(ex1)} == expected

    def test_ex1_attractors(self, ex1):
        expected = {
            states_of(ex1, "10"),
            states_of(ex1, "02"),
            states_of(ex1, "01", "12"),
        }
        assert {a.cycle for a in attractors(ex1)} == expected

    def test_ex2_attractors(self, ex2):
        expected = {
            states_of(ex2, "01"),
            states_of(ex2, "10"),
            states_of(ex2, "00", "11"),
        }
        assert {a.cycle for a in attractors(ex2)} == expected

    def test_pl2_attractors(self, pl2):
        expected = {
            states_of(pl2, "10"),
            states_of(pl2, "00", "11"),
            states_of(pl2, "01", "02"),
        }
        assert {a.cycle for a in attractors(pl2)} == expected

    def test_pl4_state_space_and_attractors(self, pl4):
        assert state_space_size(pl4) == 48
        expected = {
            states_of(pl4, "0300", "0200"),
            states_of(pl4, "1000", "2100"),
            states_of(pl4, "2000"),
        }
        got = {tuple(sorted(a.cycle)) for a in attractors(pl4)}
        assert got == {tuple(sorted(c)) for c in expected}

    def test_pl4_cycle_order_follows_the_step_relation(self, pl4):
        by_min = {a.cycle[0]: a for a in attractors(pl4)}
        two = by_min[parse_state(pl4, "0200")]
        assert two.cycle == states_of(pl4, "0200", "0300")
        assert successor(pl4, two.cycle[0]) == two.cycle[1]


class TestAgainstReference:
    @pytest.mark.parametrize("name", ("ex1", "ex2", "ex3", "pl2", "apl2", "pl4"))
    def test_bundled_models(self, bundled, name):
        m = bundled[name]
        for s in ref_states(m):
            assert successor(m, s) == ref_successor(m, s)
        assert {t.states for t in language(m)} == ref_language(m)
        assert {a.cycle for a in attractors(m)} == ref_attractors(m)

    def test_random_models(self):
        rng = random.Random(20250819)
        for _ in range(40):
            m = random_model(rng)
            assert {t.states for t in language(m)} == ref_language(m)
            assert {a.cycle for a in attractors(m)} == ref_attractors(m)

    def test_trace_from_is_the_reference_orbit(self, ex1):
        for s in ref_states(ex1):
            assert trace_from(ex1, s).states == ref_trace(ex1, s)


class TestLaws:
    @pytest.mark.parametrize("name", ("ex1", "pl2", "pl4"))
    def test_language_size_equals_state_count(self, bundled, name):
        m = bundled[name]
        assert len(list(iter_language(m))) == state_space_size(m)

    def test_language_dedup_is_by_trace(self, ex1):
        assert len(language(ex1)) == 6

    def test_traces_are_canonical(self, pl4):
        for t in iter_language(pl4):
            assert is_canonical(t.states)

    def test_iter_language_in_encoding_order(self, ex1):
        starts = [t.initial for t in iter_language(ex1)]
        assert starts == list(state_space(ex1))

    def test_attractor_states_cycle_back(self, pl4):
        for a in attractors(pl4):
            s = a.cycle[0]
            for _ in range(a.period):
                s = successor(pl4, s)
            assert s == a.cycle[0]

    def test_attractor_of_trace(self, ex1):
        t = trace_from(ex1, parse_state(ex1, "00"))
        assert attractor_of(t).cycle == states_of(ex1, "10")


class TestReach:
    def test_ex1_positive(self, ex1):
        assert reachable(ex1, parse_state(ex1, "00"), parse_state(ex1, "10"))

    def test_ex1_negative(self, ex1):
        assert not reachable(ex1, parse_state(ex1, "10"), parse_state(ex1, "00"))

    def test_matches_orbit_membership(self, pl2):
        for s in ref_states(pl2):
            orbit = set(ref_trace(pl2, s))
            for t in ref_states(pl2):
                assert reachable(pl2, s, t) == (t in orbit)


class TestGuardsAndDot:
    def test_language_guard(self, pl4):
        with pytest.raises(GuardExceeded) as info:
            list(iter_language(pl4, max_states=47))
        assert "48" in str(info.value)

    def test_dot_output(self, ex1):
        dot = state_graph_dot(ex1)
        assert dot.startswith("digraph")
        assert dot.count("->") == state_space_size(ex1)
        assert '"10" [shape=doublecircle]' in dot
        assert '"00" -> "11"' in dot
        assert state_graph_dot(ex1) == dot
