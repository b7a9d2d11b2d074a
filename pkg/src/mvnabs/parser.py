"""Line-oriented text format for networks (.mvn) and mappings (.map).

Model files:

    # comment (anywhere; the rest of the line is ignored)
    mvn <name>
    entity <id> states 0..<max> inputs <id> ...
    table <id>
    <v> <v> ... -> <out>

The mvn header comes first. Entities may reference inputs declared later.
Table rows list one column per input; a column may be a comma-separated list
of values as shorthand for every combination, e.g. "0,1 2 -> 0" expands to
(0,2)->0 and (1,2)->0. Identical duplicate rows collapse; conflicting rows
are errors. Every table must cover its whole input domain.

Mapping files:

    abstraction <name> for <model>
    map <entity>: <src>-><dst>, <src>-><dst>, ...

Each map line gives a total, surjective mapping of the entity's states onto a
strictly smaller contiguous range 0..n (n >= 1). Entities without a map line
keep their states; at least one map line is required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

from .abstraction import AbstractionMapping, StateMapping
from .errors import ParseError
from .model import Mvn

# ---------------------------------------------------------------------------
# line patterns

_MVN_RE = re.compile(r"^mvn\s+([A-Za-z_]\w*)$")
_ENTITY_RE = re.compile(
    r"^entity\s+([A-Za-z_]\w*)\s+states\s+(\d+)\.\.(\d+)\s+inputs\b\s*(.*)$"
)
_TABLE_RE = re.compile(r"^table\s+([A-Za-z_]\w*)$")
_ROW_RE = re.compile(r"^(.*?)->\s*(\d+)$")
_COLUMN_RE = re.compile(r"^\d+(,\d+)*$")
_ABSTRACTION_RE = re.compile(r"^abstraction\s+([A-Za-z_]\w*)\s+for\s+([A-Za-z_]\w*)$")
_MAP_RE = re.compile(r"^map\s+([A-Za-z_]\w*)\s*:\s*(.+)$")
_PAIR_RE = re.compile(r"^(\d+)\s*->\s*(\d+)$")
_ID_RE = re.compile(r"^[A-Za-z_]\w*$")


def _content_lines(text: str):
    for number, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


# ---------------------------------------------------------------------------
# model files

@dataclass
class ModelDocument:
    """A parsed model file: the resolved network plus row provenance.

    row_lines maps (entity, input tuple) to the line the row came from, for
    diagnostics on files that expanded shorthand columns.
    """

    text: str
    model: Mvn
    row_lines: dict = field(default_factory=dict)


def _expand_row(line_no: int, body: str, expected: int):
    match = _ROW_RE.match(body)
    if match is None:
        raise ParseError(line_no, f"malformed table row {body!r}")
    left, out = match.group(1).strip(), int(match.group(2))
    columns = left.split() if left else []
    if len(columns) != expected:
        raise ParseError(
            line_no,
            f"row has {len(columns)} input columns, expected {expected}",
        )
    for col in columns:
        if not _COLUMN_RE.match(col):
            raise ParseError(line_no, f"malformed input column {col!r}")
    choices = [[int(v) for v in col.split(",")] for col in columns]
    return [tuple(combo) for combo in product(*choices)], out


def parse_model_document(text: str) -> ModelDocument:
    """Parse a model file, keeping per-row line provenance."""
    name: str | None = None
    # entity name -> (max state, inputs, line)
    declared: dict[str, tuple[int, tuple[str, ...], int]] = {}
    order: list[str] = []
    table_lines: dict[str, int] = {}
    raw_rows: dict[str, list] = {}
    current: str | None = None
    last_line = 1

    for line_no, line in _content_lines(text):
        last_line = line_no
        if match := _MVN_RE.match(line):
            if name is not None:
                raise ParseError(line_no, "duplicate mvn header")
            name = match.group(1)
            continue
        if name is None:
            raise ParseError(line_no, "expected the mvn header before anything else")
        if match := _ENTITY_RE.match(line):
            current = None
            entity, low, high, inputs_part = match.groups()
            if entity in declared:
                raise ParseError(line_no, f"entity {entity} declared twice")
            if int(low) != 0:
                raise ParseError(line_no, f"state ranges start at 0, got {low}..{high}")
            if int(high) < 1:
                raise ParseError(
                    line_no, f"entity {entity} needs at least two states, got 0..{high}"
                )
            inputs = tuple(inputs_part.split())
            for h in inputs:
                if not _ID_RE.match(h):
                    raise ParseError(line_no, f"malformed input name {h!r}")
            declared[entity] = (int(high), inputs, line_no)
            order.append(entity)
            continue
        if match := _TABLE_RE.match(line):
            current = match.group(1)
            table_lines.setdefault(current, line_no)
            raw_rows.setdefault(current, [])
            continue
        if "->" in line:
            if current is None:
                raise ParseError(line_no, "table row outside a table block")
            raw_rows[current].append((line_no, line))
            continue
        raise ParseError(line_no, f"unrecognized line {line!r}")

    if name is None:
        raise ParseError(last_line, "missing mvn header")
    if not order:
        raise ParseError(last_line, "no entities declared")

    for entity, (_, inputs, line_no) in declared.items():
        for h in inputs:
            if h not in declared:
                raise ParseError(line_no, f"{entity} reads undeclared entity {h}")
    for entity in raw_rows:
        if entity not in declared:
            raise ParseError(table_lines[entity], f"table for undeclared entity {entity}")
    for entity in order:
        if entity not in raw_rows:
            raise ParseError(declared[entity][2], f"no table for entity {entity}")

    # entity -> {inputs: (output, line)}
    rows: dict[str, dict] = {g: {} for g in order}
    for entity in order:
        mx, inputs, _ = declared[entity]
        header = table_lines[entity]
        ranges = [range(declared[h][0] + 1) for h in inputs]
        for line_no, body in raw_rows[entity]:
            expanded, out = _expand_row(line_no, body, len(inputs))
            if not 0 <= out <= mx:
                raise ParseError(
                    line_no, f"output {out} for {entity} is outside 0..{mx}"
                )
            for input_tuple in expanded:
                for v, rng, h in zip(input_tuple, ranges, inputs):
                    if v not in rng:
                        raise ParseError(
                            line_no,
                            f"input value {v} for {h} is outside 0..{rng[-1]}",
                        )
                known = rows[entity].get(input_tuple)
                if known is not None and known[0] != out:
                    raise ParseError(
                        line_no,
                        f"conflicting row for {entity} {input_tuple}: -> {out} "
                        f"but line {known[1]} gave -> {known[0]}",
                    )
                if known is None:
                    rows[entity][input_tuple] = (out, line_no)
        missing = [t for t in product(*ranges) if t not in rows[entity]]
        if missing:
            more = f" and {len(missing) - 1} more" if len(missing) > 1 else ""
            raise ParseError(
                header,
                f"table for {entity} is missing a row for inputs {missing[0]}{more}",
            )

    model = Mvn.from_tables(
        name,
        order,
        {g: declared[g][0] for g in order},
        {g: declared[g][1] for g in order},
        {g: {t: out for t, (out, _) in rows[g].items()} for g in order},
    )
    row_lines = {
        (g, t): line for g in order for t, (_, line) in rows[g].items()
    }
    return ModelDocument(text, model, row_lines)


def parse_model(text: str) -> Mvn:
    """Parse a model file; the result always passes validate_model."""
    return parse_model_document(text).model


def serialize_model(m: Mvn) -> str:
    """Render a model in the .mvn format with explicit rows in row order."""
    lines = [f"mvn {m.name}"]
    for entity, mx, neigh in zip(m.entities, m.state_maxes, m.neighbourhoods):
        inputs = (" " + " ".join(neigh)) if neigh else ""
        lines.append(f"entity {entity} states 0..{mx} inputs{inputs}")
    for i, entity in enumerate(m.entities):
        lines.append("")
        lines.append(f"table {entity}")
        for inputs, out in sorted(m.tables[i]):
            left = " ".join(str(v) for v in inputs)
            lines.append(f"{left} -> {out}" if left else f"-> {out}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mapping files

@dataclass
class MappingDocument:
    """A parsed mapping file before resolution against a model."""

    name: str
    model_name: str
    header_line: int
    # entity -> (value pairs, line)
    entries: dict


def parse_mapping_document(text: str) -> MappingDocument:
    doc: MappingDocument | None = None
    last_line = 1
    for line_no, line in _content_lines(text):
        last_line = line_no
        if match := _ABSTRACTION_RE.match(line):
            if doc is not None:
                raise ParseError(line_no, "duplicate abstraction header")
            doc = MappingDocument(match.group(1), match.group(2), line_no, {})
            continue
        if doc is None:
            raise ParseError(line_no, "expected the abstraction header before anything else")
        if match := _MAP_RE.match(line):
            entity, body = match.groups()
            if entity in doc.entries:
                raise ParseError(line_no, f"duplicate map line for {entity}")
            pairs = []
            for part in body.split(","):
                pair = _PAIR_RE.match(part.strip())
                if pair is None:
                    raise ParseError(line_no, f"malformed mapping entry {part.strip()!r}")
                pairs.append((int(pair.group(1)), int(pair.group(2))))
            doc.entries[entity] = (pairs, line_no)
            continue
        raise ParseError(line_no, f"unrecognized line {line!r}")
    if doc is None:
        raise ParseError(last_line, "missing abstraction header")
    if not doc.entries:
        raise ParseError(
            doc.header_line, "the mapping has no map lines, so it merges nothing"
        )
    return doc


def parse_mapping(text: str, m: Mvn) -> AbstractionMapping:
    """Parse a mapping file and resolve it against the model it names."""
    doc = parse_mapping_document(text)
    if doc.model_name != m.name:
        raise ParseError(
            doc.header_line,
            f"mapping is for model {doc.model_name}, not {m.name}",
        )
    aligned: list = [None] * len(m.entities)
    for entity, (pairs, line_no) in doc.entries.items():
        if entity not in m.entity_index:
            raise ParseError(line_no, f"unknown entity {entity}")
        mx = m.state_maxes[m.entity_index[entity]]
        if mx < 2:
            raise ParseError(
                line_no,
                f"{entity} has only two states; state mappings need at least three",
            )
        sources = [s for s, _ in pairs]
        if sorted(sources) != list(range(mx + 1)):
            raise ParseError(
                line_no,
                f"the mapping for {entity} must list each state 0..{mx} exactly once",
            )
        table = [0] * (mx + 1)
        for s, t in pairs:
            table[s] = t
        targets = set(table)
        n = max(table)
        if targets != set(range(n + 1)):
            raise ParseError(
                line_no,
                f"the targets for {entity} must cover a contiguous range 0..n",
            )
        if n < 1:
            raise ParseError(
                line_no, f"the mapping for {entity} collapses everything to one state"
            )
        if n >= mx:
            raise ParseError(
                line_no,
                f"the mapping for {entity} merges nothing; drop the line to keep it unchanged",
            )
        aligned[m.entity_index[entity]] = StateMapping(tuple(table))
    return AbstractionMapping(tuple(aligned))


def serialize_mapping(phi: AbstractionMapping, m: Mvn, name: str = "phi") -> str:
    """Render a mapping in the .map format (identity entries are omitted)."""
    lines = [f"abstraction {name} for {m.name}"]
    for entity, entry in zip(m.entities, phi.entries):
        if entry is not None:
            lines.append(f"map {entity}: {entry.describe()}")
    return "\n".join(lines) + "\n"
