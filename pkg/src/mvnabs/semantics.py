"""Synchronous trace semantics: successors, traces, attractors, reachability.

Every entity updates simultaneously from its table, so each global state has
exactly one successor and every trace eventually closes a cycle. The canonical
trace from a state runs until the first repeated global state.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from . import _kernels
from .model import (
    Attractor,
    Mvn,
    State,
    Trace,
    check_state,
    check_state_limit,
    decode_state,
    format_state,
)


def successor(m: Mvn, state: Sequence[int]) -> State:
    """One synchronous step from a global state."""
    state = check_state(m, state)
    out = []
    for i in range(len(m.entities)):
        pos = 0
        for j, stride in zip(m.input_indices[i], m.table_strides[i]):
            pos += state[j] * stride
        out.append(m.dense_tables[i][pos])
    return tuple(out)


def trace_from(m: Mvn, state: Sequence[int]) -> Trace:
    """The canonical trace from a state: run until the first repeat."""
    state = check_state(m, state)
    seen = {state}
    states = [state]
    while True:
        state = successor(m, state)
        states.append(state)
        if state in seen:
            return Trace(tuple(states))
        seen.add(state)


def successor_indices(m: Mvn, *, max_states: int | None = None):
    """Successor array over encoded states (the full transition graph)."""
    check_state_limit(m, max_states)
    return _kernels.successor_array(m._layout)


def iter_language(m: Mvn, *, max_states: int | None = None) -> Iterator[Trace]:
    """One canonical trace per initial state, in state encoding order."""
    check_state_limit(m, max_states)
    succ = _kernels.successor_array(m._layout)
    flat, offsets = _kernels.all_traces(succ)
    decoded: dict[int, State] = {}
    for s in range(len(succ)):
        states = []
        for p in range(offsets[s], offsets[s + 1]):
            x = flat[p]
            st = decoded.get(x)
            if st is None:
                st = decode_state(m, x)
                decoded[x] = st
            states.append(st)
        yield Trace(tuple(states))


def language(m: Mvn, *, max_states: int | None = None) -> frozenset:
    """The trace language: the set of canonical traces from every state."""
    return frozenset(iter_language(m, max_states=max_states))


def attractor_of(trace: Trace) -> Attractor:
    """The cycle a trace settles into, in canonical rotation."""
    return Attractor.from_states(trace.cycle)


def attractors(m: Mvn, *, max_states: int | None = None) -> frozenset:
    """All attractors, deduplicated across rotations."""
    return frozenset(attractor_of(t) for t in iter_language(m, max_states=max_states))


def reachable(m: Mvn, source: Sequence[int], target: Sequence[int]) -> bool:
    """Whether the synchronous run from source ever visits target."""
    target = check_state(m, target)
    return target in trace_from(m, source).states


def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def _dot_lines(m: Mvn, max_states: int | None) -> Iterator[str]:
    check_state_limit(m, max_states)
    succ = _kernels.successor_array(m._layout)
    flat, offsets = _kernels.all_traces(succ)
    on_cycle: set = set()
    for s in range(len(succ)):
        run = flat[offsets[s]:offsets[s + 1]]
        entry = list(run).index(run[-1])
        on_cycle.update(run[entry:-1])
    yield f"digraph {_quote(m.name)} {{"
    yield "  rankdir=LR;"
    yield "  node [shape=circle];"
    for x in range(len(succ)):
        label = _quote(format_state(m, decode_state(m, x)))
        shape = " [shape=doublecircle]" if x in on_cycle else ""
        yield f"  {label}{shape};"
    for x in range(len(succ)):
        a = _quote(format_state(m, decode_state(m, x)))
        b = _quote(format_state(m, decode_state(m, succ[x])))
        yield f"  {a} -> {b};"
    yield "}"


def state_graph_dot(m: Mvn, *, max_states: int | None = None) -> str:
    """GraphViz source for the full state transition graph.

    States on an attractor are drawn with double circles.
    """
    return "\n".join(_dot_lines(m, max_states)) + "\n"
