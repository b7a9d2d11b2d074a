"""Search for the abstractions of a network.

Mapping the concrete tables row by row yields non-deterministic abstract
tables: an abstract input row collects every output its concrete preimages
can produce. Every abstraction under the mapping is a deterministic
restriction of those tables, so the search enumerates restrictions and keeps
the ones whose full trace language lands inside the abstracted concrete
language. A brute-force enumeration over all total tables is kept alongside
as an independent cross-check of the pruning.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator

from . import _kernels
from .abstraction import (
    AbstractionMapping,
    _abstract_sequence,
    abstract_language,
    enumerate_state_mappings,
)
from .errors import GuardExceeded
from .model import Mvn, check_state_limit, encode_state
from .semantics import iter_language

DEFAULT_CANDIDATE_LIMIT = 1 << 20
DEFAULT_ORACLE_LIMIT = 1 << 16


@dataclass(frozen=True)
class CandidateTableSet:
    """Non-deterministic abstract tables induced by a mapping.

    outputs[i][r] is the sorted tuple of outputs entity i can take on its
    r-th abstract input row (rows in mixed-radix order over the abstract
    input ranges). Deterministic restrictions are indexed lexicographically:
    entity-major, then row-major, outputs ascending.
    """

    model: Mvn
    mapping: AbstractionMapping
    target_maxes: tuple[int, ...]
    outputs: tuple

    @cached_property
    def choices(self) -> tuple[int, ...]:
        """Per-entity count of deterministic restrictions."""
        counts = []
        for rows in self.outputs:
            c = 1
            for outs in rows:
                c *= len(outs)
            counts.append(c)
        return tuple(counts)

    @cached_property
    def candidate_count(self) -> int:
        total = 1
        for c in self.choices:
            total *= c
        return total

    @cached_property
    def _row_sizes(self) -> tuple[int, ...]:
        return tuple(len(outs) for rows in self.outputs for outs in rows)

    def candidate_tables(self, index: int) -> tuple[tuple[int, ...], ...]:
        """Dense tables of the index-th restriction."""
        if not 0 <= index < self.candidate_count:
            raise IndexError(f"candidate index {index} out of range")
        digits = []
        for size in reversed(self._row_sizes):
            index, d = divmod(index, size)
            digits.append(d)
        digits.reverse()
        tables = []
        at = 0
        for rows in self.outputs:
            tables.append(tuple(outs[digits[at + r]] for r, outs in enumerate(rows)))
            at += len(rows)
        return tuple(tables)

    def candidate(self, index: int) -> Mvn:
        """The index-th restriction as a network, named <model>_ab<index+1>."""
        return Mvn.from_dense(
            f"{self.model.name}_ab{index + 1}",
            self.model.entities,
            self.target_maxes,
            self.model.neighbourhoods,
            self.candidate_tables(index),
        )

    def abstract_row(self, entity: str, inputs: tuple) -> tuple[int, ...]:
        """The output set of one abstract table row."""
        i = self.model.entity_index[entity]
        radii = [self.target_maxes[j] + 1 for j in self.model.input_indices[i]]
        pos = 0
        for v, r in zip(inputs, radii):
            pos = pos * r + v
        return self.outputs[i][pos]


def abstract_tables(m: Mvn, phi: AbstractionMapping) -> CandidateTableSet:
    """Map every concrete table row through phi and collect the output sets."""
    errs = phi.fit_errors(m)
    if errs:
        raise ValueError("; ".join(errs))
    value_tables = phi.value_tables(m)
    target_maxes = phi.target_maxes(m)
    outputs = []
    for i in range(len(m.entities)):
        inputs = m.input_indices[i]
        size = 1
        for j in inputs:
            size *= target_maxes[j] + 1
        tstrides = [1] * len(inputs)
        for t in range(len(inputs) - 2, -1, -1):
            tstrides[t] = tstrides[t + 1] * (target_maxes[inputs[t + 1]] + 1)
        rows = [set() for _ in range(size)]
        dense = m.dense_tables[i]
        for row_idx, concrete in enumerate(
            product(*(range(m.radices[j]) for j in inputs))
        ):
            pos = 0
            for v, stride, j in zip(concrete, tstrides, inputs):
                pos += value_tables[j][v] * stride
            rows[pos].add(value_tables[i][dense[row_idx]])
        outputs.append(tuple(tuple(sorted(s)) for s in rows))
    return CandidateTableSet(m, phi, target_maxes, tuple(outputs))


def enumerate_candidates(
    cts: CandidateTableSet, *, max_candidates: int | None = None
) -> Iterator[Mvn]:
    """All deterministic restrictions, in lexicographic choice order."""
    limit = DEFAULT_CANDIDATE_LIMIT if max_candidates is None else max_candidates
    if cts.candidate_count > limit:
        raise GuardExceeded("candidate tables", cts.candidate_count, limit)
    for i in range(cts.candidate_count):
        yield cts.candidate(i)


# ---------------------------------------------------------------------------
# trace-inclusion filtering

def _concrete_walks(m: Mvn, max_states: int | None):
    """Successor array and per-start canonical index runs of the model."""
    check_state_limit(m, max_states)
    succ = _kernels.successor_array(m._layout)
    flat, offsets = _kernels.all_traces(succ)
    return succ, flat, offsets


def _reference_from_walks(m: Mvn, walks, phi: AbstractionMapping) -> frozenset:
    """The abstracted concrete language as abstract state-index tuples."""
    _, flat, offsets = walks
    target_maxes = phi.target_maxes(m)
    phi_map = _kernels.state_map(
        m.radices, phi.value_tables(m), [mx + 1 for mx in target_maxes]
    )
    reference = set()
    for s in range(len(offsets) - 1):
        mapped = [phi_map[flat[p]] for p in range(offsets[s], offsets[s + 1])]
        valid, canonical, _ = _abstract_sequence(mapped)
        if valid:
            reference.add(canonical)
    return frozenset(reference)


def _abstract_skeleton(cts: CandidateTableSet) -> _kernels.Layout:
    radices = tuple(mx + 1 for mx in cts.target_maxes)
    return _kernels.make_layout(
        radices, cts.model.input_indices, cts.candidate_tables(0)
    )


def _language_included(succ, reference: frozenset) -> bool:
    """Whether every canonical trace over succ is in the reference set."""
    for s in range(len(succ)):
        x = s
        run = [x]
        seen = {x}
        while True:
            x = succ[x]
            run.append(x)
            if x in seen:
                break
            seen.add(x)
        if tuple(run) not in reference:
            return False
    return True


def _scan(cts: CandidateTableSet, reference: frozenset, lo: int, hi: int) -> list[int]:
    skeleton = _abstract_skeleton(cts)
    found = []
    for i in range(lo, hi):
        layout = _kernels.with_tables(skeleton, cts.candidate_tables(i))
        succ = _kernels.successor_array(layout)
        if _language_included(succ, reference):
            found.append(i)
    return found


def _scan_chunk(args) -> list[int]:
    m, phi, lo, hi, max_states = args
    cts = abstract_tables(m, phi)
    reference = _reference_from_walks(m, _concrete_walks(m, max_states), phi)
    return _scan(cts, reference, lo, hi)


def find_abstractions(
    m: Mvn,
    phi: AbstractionMapping,
    *,
    max_candidates: int | None = None,
    max_states: int | None = None,
    workers: int = 1,
) -> tuple[Mvn, ...]:
    """Every abstraction of m under phi, in candidate order.

    Complete by construction: any abstraction's tables must pick, row by row,
    outputs the concrete tables can produce, so enumerating restrictions of
    the abstract tables covers them all. The trace-inclusion reference is
    computed once and shared across candidates. workers > 1 splits the
    candidate range over processes; results are identical to workers=1.
    """
    cts = abstract_tables(m, phi)
    limit = DEFAULT_CANDIDATE_LIMIT if max_candidates is None else max_candidates
    if cts.candidate_count > limit:
        raise GuardExceeded("candidate tables", cts.candidate_count, limit)
    count = cts.candidate_count
    if workers > 1 and count >= workers:
        step = -(-count // workers)
        chunks = [
            (m, phi, lo, min(lo + step, count), max_states)
            for lo in range(0, count, step)
        ]
        found: list[int] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_chunk, chunks):
                found.extend(part)
        found.sort()
    else:
        reference = _reference_from_walks(m, _concrete_walks(m, max_states), phi)
        found = _scan(cts, reference, 0, count)
    return tuple(cts.candidate(i) for i in found)


def find_exact(
    m: Mvn, phi: AbstractionMapping, *, max_states: int | None = None
) -> Mvn | None:
    """The exact abstraction of m under phi, or None.

    One exists precisely when the abstract tables are already deterministic;
    the single restriction is then the exact abstraction.
    """
    cts = abstract_tables(m, phi)
    if cts.candidate_count != 1:
        return None
    return cts.candidate(0)


# ---------------------------------------------------------------------------
# all mapping families

@dataclass(frozen=True)
class MappingSearch:
    """The abstractions found under one mapping family."""

    mapping: AbstractionMapping
    abstractions: tuple


@dataclass(frozen=True)
class MappingSearchReport:
    """Results of searching every mapping family of a model."""

    searches: tuple

    @property
    def none_found(self) -> bool:
        return all(not s.abstractions for s in self.searches)

    @property
    def found(self) -> tuple:
        return tuple(s for s in self.searches if s.abstractions)


def _stirling2(m: int, n: int) -> int:
    table = [1] + [0] * n
    for _ in range(m):
        table = [0] + [table[j - 1] + (j) * table[j] for j in range(1, n + 1)]
    return table[n]


def _family_count(m: Mvn) -> int:
    total = 1
    for mx in m.state_maxes:
        options = 1
        for n in range(2, mx + 1):
            count = _stirling2(mx + 1, n)
            for f in range(2, n + 1):
                count *= f
            options += count
        total *= options
    return total - 1  # the all-identity combination is excluded


def mapping_families(m: Mvn) -> Iterator[AbstractionMapping]:
    """Every combination of per-entity state mappings, identities aside.

    Per entity the options are identity first, then mappings ordered by
    target size and value table; the last entity varies fastest.
    """
    options = []
    for mx in m.state_maxes:
        opts: list = [None]
        for n in range(2, mx + 1):
            opts.extend(enumerate_state_mappings(mx + 1, n))
        options.append(opts)
    for combo in product(*options):
        if any(e is not None for e in combo):
            yield AbstractionMapping(combo)


def find_abstractions_all_mappings(
    m: Mvn,
    *,
    max_candidates: int | None = None,
    max_states: int | None = None,
) -> MappingSearchReport:
    """Run the search under every mapping family of the model.

    max_candidates bounds the total candidate count summed over families.
    Raises ValueError when no entity has more than two states.
    """
    if all(mx < 2 for mx in m.state_maxes):
        raise ValueError("no entity has more than two states, so nothing can be merged")
    limit = DEFAULT_CANDIDATE_LIMIT if max_candidates is None else max_candidates
    families_total = _family_count(m)
    if families_total > limit:
        raise GuardExceeded("mapping families", families_total, limit)
    families = list(mapping_families(m))
    table_sets = [abstract_tables(m, phi) for phi in families]
    total = sum(cts.candidate_count for cts in table_sets)
    if total > limit:
        raise GuardExceeded("candidate tables across all mappings", total, limit)
    walks = _concrete_walks(m, max_states)
    searches = []
    for phi, cts in zip(families, table_sets):
        reference = _reference_from_walks(m, walks, phi)
        found = _scan(cts, reference, 0, cts.candidate_count)
        searches.append(
            MappingSearch(phi, tuple(cts.candidate(i) for i in found))
        )
    return MappingSearchReport(tuple(searches))


# ---------------------------------------------------------------------------
# brute-force oracle

def total_model_count(m: Mvn, phi: AbstractionMapping) -> int:
    """How many total deterministic networks exist over the abstract structure."""
    errs = phi.fit_errors(m)
    if errs:
        raise ValueError("; ".join(errs))
    target_maxes = phi.target_maxes(m)
    total = 1
    for i, inputs in enumerate(m.input_indices):
        domain = 1
        for j in inputs:
            domain *= target_maxes[j] + 1
        total *= (target_maxes[i] + 1) ** domain
    return total


def brute_force_abstractions(
    m: Mvn,
    phi: AbstractionMapping,
    *,
    max_models: int | None = None,
    max_states: int | None = None,
) -> tuple[Mvn, ...]:
    """Filter every total deterministic network over the abstract structure.

    Enumerates the full function space per entity (no table pruning), so it
    independently cross-checks find_abstractions wherever the guard allows.
    Models are named <model>_bf<index+1> by enumeration order.
    """
    errs = phi.fit_errors(m)
    if errs:
        raise ValueError("; ".join(errs))
    target_maxes = phi.target_maxes(m)
    domains = []
    total = 1
    for i, inputs in enumerate(m.input_indices):
        domain = 1
        for j in inputs:
            domain *= target_maxes[j] + 1
        domains.append(domain)
        total *= (target_maxes[i] + 1) ** domain
    limit = DEFAULT_ORACLE_LIMIT if max_models is None else max_models
    if total > limit:
        raise GuardExceeded("total abstract models", total, limit)

    reference_traces = abstract_language(phi, iter_language(m, max_states=max_states))
    abstract_strides = [1] * len(m.entities)
    for i in range(len(m.entities) - 2, -1, -1):
        abstract_strides[i] = abstract_strides[i + 1] * (target_maxes[i + 1] + 1)
    reference = frozenset(
        tuple(sum(v * s for v, s in zip(state, abstract_strides)) for state in t.states)
        for t in reference_traces
    )

    per_entity = [
        list(product(range(target_maxes[i] + 1), repeat=domains[i]))
        for i in range(len(m.entities))
    ]
    radices = tuple(mx + 1 for mx in target_maxes)
    skeleton = _kernels.make_layout(
        radices, m.input_indices, tuple(tables[0] for tables in per_entity)
    )
    found = []
    for index, combo in enumerate(product(*per_entity)):
        layout = _kernels.with_tables(skeleton, combo)
        succ = _kernels.successor_array(layout)
        if _language_included(succ, reference):
            found.append(
                Mvn.from_dense(
                    f"{m.name}_bf{index + 1}",
                    m.entities,
                    target_maxes,
                    m.neighbourhoods,
                    combo,
                )
            )
    return tuple(found)
