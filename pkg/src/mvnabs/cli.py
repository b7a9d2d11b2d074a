"""Command-line interface.

Exit codes: 0 for success, a holding check, or a non-empty search; 1 for a
failed check, an empty search, or an invalid model; 2 for usage and parse
errors; 3 when a guard refused the computation.

States on the command line use digit strings (e.g. 0300) whenever every
entity range fits a single digit; comma-separated values always work.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from .abstraction import check_abstraction
from .errors import GuardExceeded, ParseError
from .model import (
    Mvn,
    format_state,
    parse_state,
    state_space_size,
    structural_key,
    validate_model,
)
from .parser import (
    parse_mapping,
    parse_mapping_document,
    parse_model,
    serialize_model,
)
from .search import (
    abstract_tables,
    brute_force_abstractions,
    find_abstractions,
    find_abstractions_all_mappings,
    find_exact,
    total_model_count,
)
from .semantics import attractors, reachable, state_graph_dot, trace_from
from .abstraction import enumerate_state_mappings

# ---------------------------------------------------------------------------
# serialization of results (the documented JSON schema)


def model_to_json(m: Mvn) -> dict:
    return {
        "name": m.name,
        "entities": [
            {"id": g, "max_state": mx, "inputs": list(neigh)}
            for g, mx, neigh in zip(m.entities, m.state_maxes, m.neighbourhoods)
        ],
        "tables": {
            g: [
                {"inputs": list(inputs), "output": out}
                for inputs, out in sorted(m.tables[i])
            ]
            for i, g in enumerate(m.entities)
        },
    }


def model_from_json(obj: dict) -> Mvn:
    entities = [e["id"] for e in obj["entities"]]
    return Mvn.from_tables(
        obj["name"],
        entities,
        {e["id"]: e["max_state"] for e in obj["entities"]},
        {e["id"]: tuple(e["inputs"]) for e in obj["entities"]},
        {
            g: {tuple(row["inputs"]): row["output"] for row in obj["tables"][g]}
            for g in entities
        },
    )


def trace_to_json(t) -> dict:
    return {"states": [list(s) for s in t.states]}


def attractor_to_json(a) -> dict:
    return {"cycle": [list(s) for s in a.cycle]}


def mapping_to_json(phi, m: Mvn) -> dict:
    return {
        g: list(e.table)
        for g, e in zip(m.entities, phi.entries)
        if e is not None
    }


# ---------------------------------------------------------------------------
# helpers


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_model(path: str) -> Mvn:
    try:
        return parse_model(_read(path))
    except ParseError as e:
        raise ParseError(e.line, e.message, source=path) from None


def _load_mapping(path: str, m: Mvn):
    """Parse a mapping file against a model; returns (mapping, mapping name)."""
    text = _read(path)
    try:
        name = parse_mapping_document(text).name
        return parse_mapping(text, m), name
    except ParseError as e:
        raise ParseError(e.line, e.message, source=path) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    elif text:
        print(text)


def _write_dot(args, m: Mvn) -> None:
    if getattr(args, "dot", None):
        Path(args.dot).write_text(
            state_graph_dot(m, max_states=getattr(args, "max_states", None))
        )


def _serialized_block(models) -> str:
    return "\n\n".join(serialize_model(x).rstrip("\n") for x in models)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    try:
        m = parse_model(_read(args.model))
    except ParseError as e:
        print(f"{args.model}:{e.line}: {e.message}", file=sys.stderr)
        return 1
    problems = validate_model(m)
    if problems:
        for v in problems:
            print(f"{args.model}: {v}", file=sys.stderr)
        return 1
    size = state_space_size(m)
    _emit(
        args,
        {"name": m.name, "valid": True, "entities": len(m.entities), "states": size},
        f"ok {m.name}: {len(m.entities)} entities, {size} states",
    )
    return 0


def cmd_trace(args) -> int:
    m = _load_model(args.model)
    t = trace_from(m, parse_state(m, args.from_state))
    _write_dot(args, m)
    _emit(args, trace_to_json(t), " ".join(format_state(m, s) for s in t.states))
    return 0


def cmd_attractors(args) -> int:
    m = _load_model(args.model)
    found = sorted(attractors(m, max_states=args.max_states), key=lambda a: a.cycle)
    _write_dot(args, m)
    lines = [
        " -> ".join(format_state(m, s) for s in a.cycle + (a.cycle[0],))
        for a in found
    ]
    _emit(args, {"attractors": [attractor_to_json(a) for a in found]}, "\n".join(lines))
    return 0


def cmd_reach(args) -> int:
    m = _load_model(args.model)
    if args.via_abstraction:
        abstract_path, map_path = args.via_abstraction
        a = _load_model(abstract_path)
        phi, _ = _load_mapping(map_path, m)
        verdict = check_abstraction(a, m, phi, max_states=args.max_states)
        if not verdict.holds:
            print(
                f"error: {a.name} is not an abstraction of {m.name} "
                f"under the given mapping",
                file=sys.stderr,
            )
            return 1
        source = parse_state(a, args.from_state)
        target = parse_state(a, args.to_state)
        holds = reachable(a, source, target)
        if holds:
            text = (
                f"HOLDS (transferred from abstraction {a.name}): states of "
                f"{m.name} mapping to the source reach states mapping to the target"
            )
        else:
            text = f"NOT-REACHABLE in {a.name}: inconclusive for the concrete model"
        _emit(args, {"holds": holds, "via": a.name, "inconclusive": not holds}, text)
        return 0 if holds else 1
    source = parse_state(m, args.from_state)
    target = parse_state(m, args.to_state)
    holds = reachable(m, source, target)
    _emit(args, {"holds": holds}, "HOLDS" if holds else "NOT-REACHABLE")
    return 0 if holds else 1


def cmd_abstract_apply(args) -> int:
    m = _load_model(args.model)
    phi, name = _load_mapping(args.map, m)
    cts = abstract_tables(m, phi)
    _write_dot(args, m)
    tables_json: dict = {}
    lines = [f"abstract tables for {m.name} under {name}"]
    for i, g in enumerate(m.entities):
        lines.append(f"table {g}")
        ranges = [range(cts.target_maxes[j] + 1) for j in m.input_indices[i]]
        rows_json = []
        for row, inputs in zip(cts.outputs[i], product(*ranges)):
            rows_json.append({"inputs": list(inputs), "outputs": list(row)})
            left = " ".join(str(v) for v in inputs)
            outs = "{" + ", ".join(str(o) for o in row) + "}"
            mark = " *" if len(row) > 1 else ""
            lines.append(f"  {left} -> {outs}{mark}" if left else f"  -> {outs}{mark}")
        tables_json[g] = rows_json
    choice_text = ", ".join(
        f"{g}={c}" for g, c in zip(m.entities, cts.choices)
    )
    lines.append(f"choices: {choice_text}")
    lines.append(f"candidates: {cts.candidate_count}")
    payload = {
        "model": m.name,
        "mapping": mapping_to_json(phi, m),
        "tables": tables_json,
        "choices": {g: c for g, c in zip(m.entities, cts.choices)},
        "candidate_count": cts.candidate_count,
    }
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_abstract_check(args) -> int:
    a = _load_model(args.abstract)
    m = _load_model(args.model)
    phi, name = _load_mapping(args.map, m)
    _write_dot(args, m)
    verdict = check_abstraction(a, m, phi, max_states=args.max_states)
    payload = {
        "holds": verdict.holds,
        "structural_errors": list(verdict.structural_errors),
        "witness": trace_to_json(verdict.witness) if verdict.witness else None,
    }
    if verdict.holds:
        text = f"HOLDS: {a.name} abstracts {m.name} under {name}"
    elif verdict.structural_errors:
        text = "FAILS: structural mismatch:\n" + "\n".join(
            f"  - {err}" for err in verdict.structural_errors
        )
    else:
        witness = " ".join(format_state(a, s) for s in verdict.witness.states)
        text = (
            f"FAILS: trace of {a.name} not in the abstracted language of "
            f"{m.name}: {witness}"
        )
    _emit(args, payload, text)
    return 0 if verdict.holds else 1


def cmd_abstract_find(args) -> int:
    m = _load_model(args.model)
    phi, _ = _load_mapping(args.map, m)
    _write_dot(args, m)
    cts = abstract_tables(m, phi)
    payload: dict = {
        "candidate_count": cts.candidate_count,
        "abstractions": [],
        "guard_exceeded": False,
    }
    try:
        models = find_abstractions(
            m,
            phi,
            max_candidates=args.max_candidates,
            max_states=args.max_states,
            workers=args.workers,
        )
    except GuardExceeded as e:
        payload["guard_exceeded"] = True
        if args.json:
            print(json.dumps(payload, indent=2))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 3
    payload["abstractions"] = [model_to_json(x) for x in models]
    choice_text = ", ".join(f"{g}={c}" for g, c in zip(m.entities, cts.choices))
    lines = [f"candidates: {cts.candidate_count} ({choice_text})"]
    if models:
        lines.append(f"found {len(models)} abstraction(s)")
        lines.append("")
        lines.append(_serialized_block(models))
    else:
        lines.append("no abstractions found")
    status = 0 if models else 1

    if args.oracle:
        try:
            oracle_models = brute_force_abstractions(
                m, phi, max_models=args.max_oracle_models, max_states=args.max_states
            )
        except GuardExceeded as e:
            payload["oracle"] = {"ran": False, "reason": str(e)}
            lines.append(f"oracle: skipped ({e})")
        else:
            agrees = {structural_key(x) for x in models} == {
                structural_key(x) for x in oracle_models
            }
            checked = total_model_count(m, phi)
            payload["oracle"] = {"ran": True, "agrees": agrees, "models_checked": checked}
            lines.append(
                f"oracle: agreement ({checked} models checked)"
                if agrees
                else "oracle: MISMATCH"
            )
            if not agrees:
                status = 1

    _emit(args, payload, "\n".join(lines))
    return status


def cmd_abstract_find_exact(args) -> int:
    m = _load_model(args.model)
    phi, _ = _load_mapping(args.map, m)
    _write_dot(args, m)
    cts = abstract_tables(m, phi)
    model = find_exact(m, phi, max_states=args.max_states)
    payload = {
        "candidate_count": cts.candidate_count,
        "exact": model_to_json(model) if model else None,
    }
    if model:
        text = "exact abstraction (unique candidate)\n\n" + serialize_model(model).rstrip("\n")
    else:
        text = f"no exact abstraction (candidate count {cts.candidate_count})"
    _emit(args, payload, text)
    return 0 if model else 1


def cmd_abstract_find_all(args) -> int:
    m = _load_model(args.model)
    _write_dot(args, m)
    payload: dict = {"searches": [], "none_found": True, "guard_exceeded": False}
    try:
        report = find_abstractions_all_mappings(
            m, max_candidates=args.max_candidates, max_states=args.max_states
        )
    except GuardExceeded as e:
        payload["guard_exceeded"] = True
        if args.json:
            print(json.dumps(payload, indent=2))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 3
    payload["searches"] = [
        {
            "mapping": mapping_to_json(s.mapping, m),
            "abstractions": [model_to_json(x) for x in s.abstractions],
        }
        for s in report.searches
    ]
    payload["none_found"] = report.none_found
    lines = []
    for s in report.searches:
        lines.append(f"mapping {s.mapping.describe(m)}: {len(s.abstractions)} found")
        for x in s.abstractions:
            block = serialize_model(x).rstrip("\n")
            lines.append("")
            lines.extend(f"  {row}" if row else "" for row in block.split("\n"))
            lines.append("")
    if report.none_found:
        lines.append("no abstraction exists under any mapping")
    _emit(args, payload, "\n".join(lines))
    return 1 if report.none_found else 0


def cmd_abstract_mappings(args) -> int:
    mappings = enumerate_state_mappings(args.m, args.n)
    payload = {"count": len(mappings), "mappings": [list(sm.table) for sm in mappings]}
    _emit(args, payload, "\n".join(sm.describe() for sm in mappings))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp, *, dot: bool = True) -> None:
    sp.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sp.add_argument(
        "--max-states",
        type=int,
        default=None,
        metavar="N",
        help="largest state space the command may enumerate",
    )
    if dot:
        sp.add_argument(
            "--dot",
            metavar="PATH",
            help="also write the model's state transition graph in GraphViz format",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvnabs",
        description="Multi-valued networks: traces, attractors and abstractions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a model file and check well-formedness")
    p.add_argument("model")
    _add_common(p, dot=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("trace", help="the canonical trace from a state")
    p.add_argument("model")
    p.add_argument("--from", dest="from_state", required=True, metavar="STATE")
    _add_common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("attractors", help="all attractors, canonical and sorted")
    p.add_argument("model")
    _add_common(p)
    p.set_defaults(func=cmd_attractors)

    p = sub.add_parser("reach", help="does one state reach another")
    p.add_argument("model")
    p.add_argument("--from", dest="from_state", required=True, metavar="STATE")
    p.add_argument("--to", dest="to_state", required=True, metavar="STATE")
    p.add_argument(
        "--via-abstraction",
        nargs=2,
        metavar=("ABSTRACT", "MAP"),
        help="answer on the abstraction and transfer positive results",
    )
    _add_common(p, dot=False)
    p.set_defaults(func=cmd_reach)

    abstract = sub.add_parser("abstract", help="abstraction tables, checks and searches")
    asub = abstract.add_subparsers(dest="subcommand", required=True)

    p = asub.add_parser("apply", help="non-deterministic abstract tables under a mapping")
    p.add_argument("model")
    p.add_argument("map")
    _add_common(p)
    p.set_defaults(func=cmd_abstract_apply)

    p = asub.add_parser("check", help="is one model an abstraction of another")
    p.add_argument("abstract")
    p.add_argument("model")
    p.add_argument("map")
    _add_common(p)
    p.set_defaults(func=cmd_abstract_check)

    p = asub.add_parser("find", help="all abstractions under a mapping")
    p.add_argument("model")
    p.add_argument("map")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.add_argument(
        "--max-candidates",
        type=int,
        default=None,
        metavar="N",
        help="largest candidate set the search may enumerate",
    )
    p.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check against brute-force enumeration where feasible",
    )
    p.add_argument(
        "--max-oracle-models",
        type=int,
        default=None,
        metavar="N",
        help="largest model count the oracle may enumerate",
    )
    _add_common(p)
    p.set_defaults(func=cmd_abstract_find)

    p = asub.add_parser("find-exact", help="the exact abstraction, if one exists")
    p.add_argument("model")
    p.add_argument("map")
    _add_common(p)
    p.set_defaults(func=cmd_abstract_find_exact)

    p = asub.add_parser("find-all", help="search every mapping family of a model")
    p.add_argument("model")
    p.add_argument(
        "--max-candidates",
        type=int,
        default=None,
        metavar="N",
        help="largest candidate total, summed over families",
    )
    _add_common(p)
    p.set_defaults(func=cmd_abstract_find_all)

    p = asub.add_parser("mappings", help="enumerate state mappings of m states onto n")
    p.add_argument("--m", type=int, required=True, help="source state count")
    p.add_argument("--n", type=int, required=True, help="target state count")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_abstract_mappings)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GuardExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
