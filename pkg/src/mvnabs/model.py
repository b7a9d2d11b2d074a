"""Core types for multi-valued networks.

A network is a finite set of entities, each with a state range 0..m (m >= 1),
an ordered neighbourhood of input entities, and a total next-state table over
the neighbourhood's joint states. Global states are tuples aligned with the
entity order; they encode to integers in mixed radix with the first entity
most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from . import _kernels
from .errors import GuardExceeded

State = tuple[int, ...]
Row = tuple[tuple[int, ...], int]

# Refuse to enumerate state spaces larger than this unless told otherwise.
DEFAULT_STATE_LIMIT = 1 << 24


def _per_entity(arg, entities: Sequence[str], what: str) -> list:
    """Normalize a mapping or aligned sequence of per-entity data to a list."""
    if isinstance(arg, Mapping):
        unknown = set(arg) - set(entities)
        if unknown:
            raise ValueError(f"{what} given for unknown entities: {sorted(unknown)}")
        missing = [g for g in entities if g not in arg]
        if missing:
            raise ValueError(f"{what} missing for entities: {missing}")
        return [arg[g] for g in entities]
    arg = list(arg)
    if len(arg) != len(entities):
        raise ValueError(f"expected {what} for {len(entities)} entities, got {len(arg)}")
    return arg


@dataclass(frozen=True)
class Mvn:
    """A multi-valued network with total deterministic next-state tables.

    tables holds one row tuple per entity; a row pairs an input tuple (aligned
    with the entity's neighbourhood) with the successor state of that entity.
    Construction does not validate totality; run validate_model for that. The
    factories from_tables and from_dense produce canonical row order, which the
    generated equality and hashing rely on.
    """

    name: str
    entities: tuple[str, ...]
    state_maxes: tuple[int, ...]  # inclusive upper bounds; states run 0..max
    neighbourhoods: tuple[tuple[str, ...], ...]
    tables: tuple[tuple[Row, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "state_maxes", tuple(int(v) for v in self.state_maxes))
        object.__setattr__(
            self, "neighbourhoods", tuple(tuple(n) for n in self.neighbourhoods)
        )
        object.__setattr__(
            self,
            "tables",
            tuple(
                tuple((tuple(inputs), int(out)) for inputs, out in rows)
                for rows in self.tables
            ),
        )

    @classmethod
    def from_tables(
        cls,
        name: str,
        entities: Sequence[str],
        state_maxes,
        neighbourhoods,
        tables,
    ) -> "Mvn":
        """Build a network from per-entity dicts or aligned sequences.

        state_maxes, neighbourhoods and tables may each be a mapping keyed by
        entity name or a sequence aligned with entities. Each table maps input
        tuples (a bare int is accepted for single-input entities) to outputs.
        """
        entities = tuple(entities)
        maxes = _per_entity(state_maxes, entities, "state range")
        neighs = [tuple(n) for n in _per_entity(neighbourhoods, entities, "neighbourhood")]
        raw_tables = _per_entity(tables, entities, "table")
        rows_per_entity = []
        for table in raw_tables:
            items = table.items() if isinstance(table, Mapping) else table
            rows = []
            for inputs, out in items:
                if isinstance(inputs, int):
                    inputs = (inputs,)
                rows.append((tuple(inputs), int(out)))
            rows_per_entity.append(tuple(sorted(set(rows))))
        return cls(name, entities, tuple(maxes), tuple(neighs), tuple(rows_per_entity))

    @classmethod
    def from_dense(
        cls,
        name: str,
        entities: Sequence[str],
        state_maxes: Sequence[int],
        neighbourhoods: Sequence[Sequence[str]],
        dense_tables: Sequence[Sequence[int]],
    ) -> "Mvn":
        """Build a network from dense tables (outputs in lexicographic row order)."""
        entities = tuple(entities)
        maxes = tuple(state_maxes)
        neighs = tuple(tuple(n) for n in neighbourhoods)
        index = {g: i for i, g in enumerate(entities)}
        tables = []
        for i, outputs in enumerate(dense_tables):
            ranges = [range(maxes[index[g]] + 1) for g in neighs[i]]
            domain = list(product(*ranges))
            outputs = list(outputs)
            if len(outputs) != len(domain):
                raise ValueError(
                    f"{entities[i]}: dense table has {len(outputs)} outputs, "
                    f"expected {len(domain)}"
                )
            tables.append(tuple(zip(domain, outputs)))
        return cls(name, entities, maxes, neighs, tuple(tables))

    @cached_property
    def entity_index(self) -> dict:
        return {g: i for i, g in enumerate(self.entities)}

    @cached_property
    def radices(self) -> tuple[int, ...]:
        return tuple(m + 1 for m in self.state_maxes)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        # mixed radix, first entity most significant
        strides = [1] * len(self.radices)
        for i in range(len(self.radices) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.radices[i + 1]
        return tuple(strides)

    @cached_property
    def input_indices(self) -> tuple[tuple[int, ...], ...]:
        idx = self.entity_index
        return tuple(tuple(idx[g] for g in neigh) for neigh in self.neighbourhoods)

    @cached_property
    def table_strides(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for inputs in self.input_indices:
            radii = [self.radices[j] for j in inputs]
            strides = [1] * len(radii)
            for t in range(len(radii) - 2, -1, -1):
                strides[t] = strides[t + 1] * radii[t + 1]
            out.append(tuple(strides))
        return tuple(out)

    @cached_property
    def dense_tables(self) -> tuple[tuple[int, ...], ...]:
        """Per-entity output arrays indexed by the mixed-radix row encoding."""
        dense = []
        for i in range(len(self.entities)):
            strides = self.table_strides[i]
            size = 1
            for j in self.input_indices[i]:
                size *= self.radices[j]
            outputs: list = [None] * size
            for inputs, out in self.tables[i]:
                if len(inputs) != len(strides):
                    raise ValueError(
                        f"{self.entities[i]}: row {inputs} does not match the "
                        f"neighbourhood arity; run validate_model"
                    )
                pos = 0
                for v, stride, j in zip(inputs, strides, self.input_indices[i]):
                    if not 0 <= v < self.radices[j]:
                        raise ValueError(
                            f"{self.entities[i]}: row {inputs} is outside the "
                            f"input ranges; run validate_model"
                        )
                    pos += v * stride
                if outputs[pos] is not None and outputs[pos] != out:
                    raise ValueError(
                        f"{self.entities[i]}: conflicting rows for {inputs}; "
                        f"run validate_model"
                    )
                outputs[pos] = out
            if any(o is None for o in outputs):
                raise ValueError(
                    f"{self.entities[i]}: table is not total; run validate_model"
                )
            dense.append(tuple(outputs))
        return tuple(dense)

    @cached_property
    def _layout(self):
        return _kernels.make_layout(self.radices, self.input_indices, self.dense_tables)

    def output(self, entity: str, inputs: Sequence[int]) -> int:
        """Look up one table row: the successor of entity at the given inputs."""
        i = self.entity_index[entity]
        strides = self.table_strides[i]
        inputs = tuple(inputs)
        if len(inputs) != len(strides):
            raise ValueError(
                f"{entity} takes {len(strides)} inputs, got {len(inputs)}"
            )
        pos = 0
        for v, stride, j in zip(inputs, strides, self.input_indices[i]):
            if not 0 <= v < self.radices[j]:
                raise ValueError(f"input value {v} out of range for {entity}")
            pos += v * stride
        return self.dense_tables[i][pos]


@dataclass(frozen=True)
class Trace:
    """A canonical trace: distinct states followed by one closing repeat.

    states[0..n-1] are pairwise distinct and states[n] equals states[i] for
    exactly one i < n, so the suffix from that i is the trace's cycle.
    """

    states: tuple[State, ...]

    def __post_init__(self):
        states = tuple(tuple(s) for s in self.states)
        object.__setattr__(self, "states", states)
        if len(states) < 2:
            raise ValueError("a trace has at least an initial state and its repeat")
        prefix = states[:-1]
        if len(set(prefix)) != len(prefix):
            raise ValueError("trace prefix states must be pairwise distinct")
        if states[-1] not in prefix:
            raise ValueError("the final trace state must repeat an earlier state")
        if len({len(s) for s in states}) != 1:
            raise ValueError("all trace states must have the same arity")

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def initial(self) -> State:
        return self.states[0]

    @property
    def cycle_entry(self) -> int:
        """Index of the state the trace loops back to."""
        return self.states.index(self.states[-1])

    @property
    def cycle(self) -> tuple[State, ...]:
        return self.states[self.cycle_entry:-1]


@dataclass(frozen=True)
class Attractor:
    """A periodic cycle of states, rotated so the smallest state comes first."""

    cycle: tuple[State, ...]

    def __post_init__(self):
        cycle = tuple(tuple(s) for s in self.cycle)
        object.__setattr__(self, "cycle", cycle)
        if not cycle:
            raise ValueError("an attractor has at least one state")
        if len(set(cycle)) != len(cycle):
            raise ValueError("attractor states must be pairwise distinct")
        if cycle[0] != min(cycle):
            raise ValueError("attractor cycles start at their smallest state")

    @classmethod
    def from_states(cls, states: Sequence[State]) -> "Attractor":
        """Canonicalize a cycle given in orbit order."""
        states = [tuple(s) for s in states]
        k = states.index(min(states))
        return cls(tuple(states[k:] + states[:k]))

    @property
    def period(self) -> int:
        return len(self.cycle)


TraceSet = frozenset


def state_space_size(m: Mvn) -> int:
    size = 1
    for r in m.radices:
        size *= r
    return size


def state_space(m: Mvn) -> Iterator[State]:
    """All global states in encoding (lexicographic) order."""
    return product(*(range(r) for r in m.radices))


def check_state(m: Mvn, state: Sequence[int]) -> State:
    """Return the state as a tuple, or raise ValueError if it is not valid."""
    state = tuple(state)
    if len(state) != len(m.entities):
        raise ValueError(
            f"state has {len(state)} components, model has {len(m.entities)} entities"
        )
    for g, v, mx in zip(m.entities, state, m.state_maxes):
        if not 0 <= v <= mx:
            raise ValueError(f"{g} = {v} is outside the range 0..{mx}")
    return state


def encode_state(m: Mvn, state: Sequence[int]) -> int:
    """Mixed-radix encoding of a global state, first entity most significant."""
    state = check_state(m, state)
    return sum(v * s for v, s in zip(state, m.strides))


def decode_state(m: Mvn, index: int) -> State:
    if not 0 <= index < state_space_size(m):
        raise ValueError(f"state index {index} out of range")
    return tuple((index // s) % r for s, r in zip(m.strides, m.radices))


def format_state(m: Mvn, state: Sequence[int]) -> str:
    """Digit string when every range fits one digit, else comma-separated."""
    if all(r <= 10 for r in m.radices):
        return "".join(str(v) for v in state)
    return ",".join(str(v) for v in state)


def parse_state(m: Mvn, text: str) -> State:
    """Parse a state written as digits (e.g. 0300) or comma-separated values."""
    text = text.strip()
    if "," in text:
        try:
            values = [int(part) for part in text.split(",")]
        except ValueError:
            raise ValueError(f"malformed state {text!r}") from None
    elif text.isdigit() and all(r <= 10 for r in m.radices):
        values = [int(ch) for ch in text]
    else:
        try:
            values = [int(text)]
        except ValueError:
            raise ValueError(f"malformed state {text!r}") from None
    return check_state(m, values)


@dataclass(frozen=True)
class Violation:
    """One well-formedness defect found by validate_model."""

    kind: str
    entity: str | None
    detail: str

    def __str__(self) -> str:
        where = f" [{self.entity}]" if self.entity else ""
        return f"{self.kind}{where}: {self.detail}"


def validate_model(m: Mvn) -> list[Violation]:
    """Check every well-formedness rule; an empty result means the model is valid.

    Rules: at least one entity, unique entity names, state ranges 0..max with
    max >= 1, neighbourhoods over declared entities, and per entity a table
    with exactly one output row for every joint input state, outputs within
    the entity's range.
    """
    problems: list[Violation] = []
    if not m.entities:
        problems.append(Violation("empty-model", None, "no entities declared"))
    k = len(m.entities)
    for field_name, field in (
        ("state ranges", m.state_maxes),
        ("neighbourhoods", m.neighbourhoods),
        ("tables", m.tables),
    ):
        if len(field) != k:
            problems.append(
                Violation(
                    "shape-mismatch",
                    None,
                    f"{field_name} cover {len(field)} entities, expected {k}",
                )
            )
    if problems:
        return problems

    seen = set()
    for g in m.entities:
        if g in seen:
            problems.append(Violation("duplicate-entity", g, "declared twice"))
        seen.add(g)
    for g, mx in zip(m.entities, m.state_maxes):
        if mx < 1:
            problems.append(
                Violation("bad-state-range", g, f"range 0..{mx} has fewer than two states")
            )
    for g, neigh in zip(m.entities, m.neighbourhoods):
        for h in neigh:
            if h not in seen:
                problems.append(Violation("unknown-input", g, f"input {h} is not declared"))
    if problems:
        return problems

    for i, g in enumerate(m.entities):
        neigh = m.neighbourhoods[i]
        ranges = [range(m.state_maxes[m.entity_index[h]] + 1) for h in neigh]
        outputs: dict[tuple[int, ...], int] = {}
        for inputs, out in m.tables[i]:
            if len(inputs) != len(neigh):
                problems.append(
                    Violation(
                        "row-arity", g,
                        f"row {inputs} has {len(inputs)} inputs, expected {len(neigh)}",
                    )
                )
                continue
            if any(v not in rng for v, rng in zip(inputs, ranges)):
                problems.append(
                    Violation("input-out-of-range", g, f"row {inputs} is outside the input ranges")
                )
                continue
            if inputs in outputs and outputs[inputs] != out:
                problems.append(
                    Violation(
                        "conflicting-row", g,
                        f"rows give outputs {outputs[inputs]} and {out} for inputs {inputs}",
                    )
                )
                continue
            outputs[inputs] = out
            if not 0 <= out <= m.state_maxes[i]:
                problems.append(
                    Violation(
                        "output-out-of-range", g,
                        f"output {out} for inputs {inputs} exceeds 0..{m.state_maxes[i]}",
                    )
                )
        for inputs in product(*ranges):
            if inputs not in outputs:
                problems.append(
                    Violation("missing-row", g, f"no row for inputs {inputs}")
                )
    return problems


def structural_key(m: Mvn):
    """Everything that defines behaviour; excludes the name."""
    return (m.entities, m.state_maxes, m.neighbourhoods, m.tables)


def structurally_equal(a: Mvn, b: Mvn) -> bool:
    return structural_key(a) == structural_key(b)


def check_state_limit(m: Mvn, max_states: int | None) -> int:
    """Return the state space size, raising GuardExceeded when over the limit."""
    size = state_space_size(m)
    limit = DEFAULT_STATE_LIMIT if max_states is None else max_states
    if size > limit:
        raise GuardExceeded("state space size", size, limit)
    return size
