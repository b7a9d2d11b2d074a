"""Independent reference implementations and random model generation.

Everything here recomputes semantics from scratch over plain dicts and
tuples, on purpose: these are the oracles the package is tested against,
so they share no code with the package internals. Keep them simple and
obviously correct rather than fast.
"""

from __future__ import annotations

import random
from itertools import product

from hypothesis import strategies as st

from mvnabs import Mvn

# ---------------------------------------------------------------------------
# reference semantics over plain dicts


def as_dicts(m: Mvn):
    """Project a model to (entities, maxes, neighbourhoods, table dicts)."""
    tables = {}
    for i, g in enumerate(m.entities):
        tables[g] = {inputs: out for inputs, out in m.tables[i]}
    maxes = dict(zip(m.entities, m.state_maxes))
    neigh = dict(zip(m.entities, m.neighbourhoods))
    return list(m.entities), maxes, neigh, tables


def ref_successor(m: Mvn, state):
    """Successor by direct dict lookup, one entity at a time."""
    entities, _, neigh, tables = as_dicts(m)
    pos = {g: i for i, g in enumerate(entities)}
    out = []
    for g in entities:
        inputs = tuple(state[pos[h]] for h in neigh[g])
        out.append(tables[g][inputs])
    return tuple(out)


def ref_trace(m: Mvn, state):
    """Canonical trace by list scan: extend until the state already occurred."""
    seq = [tuple(state)]
    while seq.count(seq[-1]) == 1:
        seq.append(ref_successor(m, seq[-1]))
    return tuple(seq)


def ref_states(m: Mvn):
    return list(product(*(range(mx + 1) for mx in m.state_maxes)))


def ref_language(m: Mvn):
    return {ref_trace(m, s) for s in ref_states(m)}


def ref_attractors(m: Mvn):
    """Attractor cycles via the functional graph, canonicalized by rotation."""
    found = set()
    for s in ref_states(m):
        seen = []
        while s not in seen:
            seen.append(s)
            s = ref_successor(m, s)
        cycle = seen[seen.index(s):]
        k = cycle.index(min(cycle))
        found.add(tuple(cycle[k:] + cycle[:k]))
    return found


def ref_abstract(value_maps, seq):
    """Map a state sequence pointwise, then canonicalize at the first repeat.

    Returns (valid, canonical). Valid means no two equal mapped states are
    followed by different mapped states.
    """
    mapped = [tuple(vm[v] for vm, v in zip(value_maps, s)) for s in seq]
    for i in range(len(mapped) - 1):
        for j in range(i + 1, len(mapped) - 1):
            if mapped[i] == mapped[j] and mapped[i + 1] != mapped[j + 1]:
                return False, None
    prefix = []
    for s in mapped:
        if s in prefix:
            prefix.append(s)
            return True, tuple(prefix)
        prefix.append(s)
    raise AssertionError("sequence never repeats")


def is_canonical(seq) -> bool:
    """Definition check: distinct prefix, last state repeats an earlier one."""
    if len(seq) < 2:
        return False
    prefix = seq[:-1]
    return len(set(prefix)) == len(prefix) and seq[-1] in prefix


# ---------------------------------------------------------------------------
# random models and mappings


def random_model(rng: random.Random, *, max_entities=3, max_state=3, name="rnd") -> Mvn:
    """A small random network: total tables over random neighbourhoods."""
    k = rng.randint(1, max_entities)
    entities = [f"g{i + 1}" for i in range(k)]
    maxes = {g: rng.randint(1, max_state) for g in entities}
    neigh = {}
    for g in entities:
        size = rng.randint(1, min(k, 2))
        neigh[g] = tuple(rng.sample(entities, size))
    tables = {}
    for g in entities:
        domain = product(*(range(maxes[h] + 1) for h in neigh[g]))
        tables[g] = {inputs: rng.randint(0, maxes[g]) for inputs in domain}
    return Mvn.from_tables(name, entities, maxes, neigh, tables)


def random_mapping_dict(rng: random.Random, m: Mvn):
    """A random legal mapping for m: per-entity merge tables, at least one.

    Returns {entity: tuple} or None when no entity has three or more states.
    """
    mergeable = [g for g, mx in zip(m.entities, m.state_maxes) if mx >= 2]
    if not mergeable:
        return None
    chosen = rng.sample(mergeable, rng.randint(1, len(mergeable)))
    entries = {}
    maxes = dict(zip(m.entities, m.state_maxes))
    for g in chosen:
        mx = maxes[g]
        n = rng.randint(1, mx - 1)
        while True:
            table = tuple(rng.randint(0, n) for _ in range(mx + 1))
            if len(set(table)) == n + 1:
                break
        entries[g] = table
    return entries


# ---------------------------------------------------------------------------
# hypothesis strategies

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def models(draw, max_entities=3, max_state=3):
    rng = random.Random(draw(seeds))
    return random_model(rng, max_entities=max_entities, max_state=max_state)


@st.composite
def models_with_mappings(draw, max_entities=3, max_state=3):
    """(model, mapping dict) pairs where the model has something to merge."""
    rng = random.Random(draw(seeds))
    while True:
        m = random_model(rng, max_entities=max_entities, max_state=max_state)
        entries = random_mapping_dict(rng, m)
        if entries is not None:
            return m, entries
