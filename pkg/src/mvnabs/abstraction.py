"""State-merging abstractions of multi-valued networks.

A state mapping collapses one entity's range onto a smaller one; an
abstraction mapping applies such mappings to at least one entity and leaves
the rest unchanged. Traces map pointwise; the image is only kept when no two
merged states disagree on their successors. A smaller network abstracts a
concrete one when its whole trace language is contained in the image of the
concrete language.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .model import Mvn, State, Trace
from .semantics import iter_language, language


@dataclass(frozen=True)
class StateMapping:
    """A surjection of one entity's states 0..m onto 0..n with 0 < n < m.

    table[source] = target. Surjectivity onto a contiguous range keeps the
    target usable as a state range; n < m means at least two states merge.
    """

    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        m = len(table) - 1
        if m < 2:
            raise ValueError("only entities with at least three states can be merged")
        n = max(table)
        if set(table) != set(range(n + 1)):
            raise ValueError("targets must cover a contiguous range 0..n")
        if n < 1:
            raise ValueError("the target range needs at least two states")
        if n >= m:
            raise ValueError("a state mapping must merge at least two states")

    @property
    def source_max(self) -> int:
        return len(self.table) - 1

    @property
    def target_max(self) -> int:
        return max(self.table)

    def describe(self) -> str:
        return ", ".join(f"{s}->{t}" for s, t in enumerate(self.table))


def enumerate_state_mappings(m: int, n: int) -> tuple[StateMapping, ...]:
    """All mappings of m source states onto n target states, in lexicographic
    order of their value tables. Requires m >= 3 and 1 < n < m; the count is
    n! times the Stirling partition number S(m, n).
    """
    if m < 3:
        raise ValueError("the source range needs at least three states")
    if not 1 < n < m:
        raise ValueError("the target state count must satisfy 1 < n < m")
    return tuple(
        StateMapping(table)
        for table in product(range(n), repeat=m)
        if len(set(table)) == n
    )


@dataclass(frozen=True)
class AbstractionMapping:
    """Per-entity state mappings aligned with a model's entity order.

    None leaves an entity's states unchanged; at least one entry must be a
    proper state mapping.
    """

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not any(e is not None for e in self.entries):
            raise ValueError("an abstraction mapping must merge at least one entity")

    @classmethod
    def from_dict(cls, m: Mvn, entries: Mapping) -> "AbstractionMapping":
        """Build a mapping from {entity name: StateMapping or value table}."""
        aligned: list = [None] * len(m.entities)
        for name, sm in entries.items():
            if name not in m.entity_index:
                raise ValueError(f"unknown entity {name!r}")
            if not isinstance(sm, StateMapping):
                sm = StateMapping(tuple(sm))
            aligned[m.entity_index[name]] = sm
        phi = cls(tuple(aligned))
        problems = phi.fit_errors(m)
        if problems:
            raise ValueError("; ".join(problems))
        return phi

    def fit_errors(self, m: Mvn) -> list[str]:
        """Reasons this mapping does not fit the model; empty when it does."""
        if len(self.entries) != len(m.entities):
            return [
                f"mapping covers {len(self.entries)} entities, "
                f"model has {len(m.entities)}"
            ]
        errs = []
        for name, mx, entry in zip(m.entities, m.state_maxes, self.entries):
            if entry is not None and entry.source_max != mx:
                errs.append(
                    f"{name}: mapping domain 0..{entry.source_max} "
                    f"does not match the state range 0..{mx}"
                )
        return errs

    def target_maxes(self, m: Mvn) -> tuple[int, ...]:
        """The abstract state ranges induced on the model."""
        return tuple(
            e.target_max if e is not None else mx
            for e, mx in zip(self.entries, m.state_maxes)
        )

    def value_tables(self, m: Mvn) -> tuple[tuple[int, ...], ...]:
        """Full per-entity value maps, identity entries expanded."""
        return tuple(
            e.table if e is not None else tuple(range(mx + 1))
            for e, mx in zip(self.entries, m.state_maxes)
        )

    def describe(self, m: Mvn) -> str:
        parts = [
            f"{name}: {e.describe()}"
            for name, e in zip(m.entities, self.entries)
            if e is not None
        ]
        return "; ".join(parts)


def apply_to_state(phi: AbstractionMapping, state: Sequence[int]) -> State:
    """Map a global state pointwise."""
    state = tuple(state)
    if len(state) != len(phi.entries):
        raise ValueError(
            f"state has {len(state)} components, mapping covers {len(phi.entries)}"
        )
    out = []
    for v, entry in zip(state, phi.entries):
        if entry is None:
            out.append(v)
        else:
            if not 0 <= v <= entry.source_max:
                raise ValueError(f"state component {v} outside the mapping domain")
            out.append(entry.table[v])
    return tuple(out)


def corresponding_states(abstract_state: Sequence[int], concrete_state: Sequence[int],
                         phi: AbstractionMapping) -> bool:
    """Whether the abstract state is the image of the concrete one."""
    return tuple(abstract_state) == apply_to_state(phi, concrete_state)


def _abstract_sequence(mapped: Sequence):
    """Validity scan and canonicalization shared by all trace-image paths.

    mapped is the pointwise image of a canonical trace (any hashable states).
    Returns (valid, canonical prefix ending at the first repeat, conflict):
    conflict is the first pair of positions (i, j) holding equal states whose
    successors differ, and None when the image is consistent.
    """
    succ_at: dict = {}
    for j in range(len(mapped) - 1):
        prev = succ_at.get(mapped[j])
        if prev is None:
            succ_at[mapped[j]] = (mapped[j + 1], j)
        elif prev[0] != mapped[j + 1]:
            return False, None, (prev[1], j)
    seen = set()
    for j, s in enumerate(mapped):
        if s in seen:
            return True, tuple(mapped[: j + 1]), None
        seen.add(s)
    raise AssertionError("the image of a canonical trace always repeats a state")


@dataclass(frozen=True)
class AbstractedTrace:
    """Outcome of mapping a trace pointwise.

    When the image is consistent, trace holds the canonical result (cut at the
    first repeated state). Otherwise conflict names the two positions whose
    equal states step to different successors.
    """

    mapped: tuple[State, ...]
    valid: bool
    trace: Trace | None
    conflict: tuple[int, int] | None

    @property
    def witness_state(self) -> State | None:
        """The repeated state behind an inconsistency, if any."""
        return self.mapped[self.conflict[0]] if self.conflict else None


def abstract_trace(phi: AbstractionMapping, trace: Trace) -> AbstractedTrace:
    """Map a canonical trace pointwise and re-canonicalize the image."""
    mapped = tuple(apply_to_state(phi, s) for s in trace.states)
    valid, canonical, conflict = _abstract_sequence(mapped)
    return AbstractedTrace(
        mapped, valid, Trace(canonical) if valid else None, conflict
    )


def abstract_language(phi: AbstractionMapping, traces: Iterable[Trace]) -> frozenset:
    """The set of valid abstracted traces; inconsistent images are dropped."""
    out = set()
    for t in traces:
        result = abstract_trace(phi, t)
        if result.valid:
            out.add(result.trace)
    return frozenset(out)


@dataclass(frozen=True)
class AbstractionCheck:
    """Verdict of the abstraction check, with evidence for failures.

    structural_errors reports mismatched entities, neighbourhoods, ranges or
    an ill-fitting mapping; witness is a trace of the candidate that the
    abstracted concrete language does not contain.
    """

    holds: bool
    structural_errors: tuple[str, ...] = ()
    witness: Trace | None = None


def structural_errors(abstract: Mvn, concrete: Mvn, phi: AbstractionMapping) -> list[str]:
    """Structure clauses of the abstraction check, reported individually."""
    errs = list(phi.fit_errors(concrete))
    if abstract.entities != concrete.entities:
        errs.append("entity lists differ")
    if abstract.neighbourhoods != concrete.neighbourhoods:
        errs.append("neighbourhoods differ")
    if not errs and abstract.state_maxes != phi.target_maxes(concrete):
        errs.append(
            f"abstract state ranges {abstract.state_maxes} do not match "
            f"the mapping targets {phi.target_maxes(concrete)}"
        )
    return errs


def check_abstraction(abstract: Mvn, concrete: Mvn, phi: AbstractionMapping,
                      *, max_states: int | None = None) -> AbstractionCheck:
    """Decide whether abstract abstracts concrete under phi.

    Holds when both networks share entities and neighbourhoods, the abstract
    state ranges equal the mapping targets, and every trace of the abstract
    network is the valid image of some concrete trace.
    """
    errs = structural_errors(abstract, concrete, phi)
    if errs:
        return AbstractionCheck(False, tuple(errs), None)
    reference = abstract_language(phi, iter_language(concrete, max_states=max_states))
    for t in iter_language(abstract, max_states=max_states):
        if t not in reference:
            return AbstractionCheck(False, (), t)
    return AbstractionCheck(True, (), None)


@dataclass(frozen=True)
class ExactnessCheck:
    """Verdict of the exactness check.

    invalid_source is a concrete trace whose image is inconsistent; missing is
    a valid abstracted trace the candidate's language lacks. Either breaks
    exactness even when the plain abstraction check holds.
    """

    holds: bool
    abstraction: AbstractionCheck
    invalid_source: Trace | None = None
    missing: Trace | None = None


def check_exact(abstract: Mvn, concrete: Mvn, phi: AbstractionMapping,
                *, max_states: int | None = None) -> ExactnessCheck:
    """Decide exact abstraction: the languages correspond one-to-one.

    Requires the plain check to hold, every concrete trace to map to a valid
    image, and every image to appear in the abstract language.
    """
    ab = check_abstraction(abstract, concrete, phi, max_states=max_states)
    if not ab.holds:
        return ExactnessCheck(False, ab)
    abstract_traces = language(abstract, max_states=max_states)
    for t in iter_language(concrete, max_states=max_states):
        result = abstract_trace(phi, t)
        if not result.valid:
            return ExactnessCheck(False, ab, invalid_source=t)
        if result.trace not in abstract_traces:
            return ExactnessCheck(False, ab, missing=result.trace)
    return ExactnessCheck(True, ab)
