"""Compare the compiled kernels against the pure-Python fallbacks.

Times the two hot kernels (successor-array construction and the all-traces
walk) on synthetic networks of growing size, plus an end-to-end abstraction
search on the bundled four-entity model. Run:

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time
from itertools import product

from mvnabs import Mvn, find_abstractions, parse_mapping, parse_model
from mvnabs import _kernels, models


def synthetic(entities: int, max_state: int, inputs: int, seed: int) -> Mvn:
    rng = random.Random(seed)
    names = [f"g{i}" for i in range(entities)]
    neigh = {
        g: tuple(rng.sample(names, min(inputs, entities))) for g in names
    }
    tables = {}
    for g in names:
        domain = product(*(range(max_state + 1) for _ in neigh[g]))
        tables[g] = {row: rng.randint(0, max_state) for row in domain}
    return Mvn.from_tables(
        f"syn{entities}", names, {g: max_state for g in names}, neigh, tables
    )


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def run_backend(name, repeat, model):
    _kernels.set_backend(name)
    build = best_of(repeat, _kernels.successor_array, model._layout)
    succ = _kernels.successor_array(model._layout)
    walk = best_of(repeat, _kernels.all_traces, succ)
    return build, walk


def run_search(name, repeat, m, phi):
    _kernels.set_backend(name)
    return best_of(repeat, find_abstractions, m, phi)


def report(label, pure, native):
    speedup = pure / native if native else float("inf")
    print(f"  {label:<24} pure {pure * 1e3:9.3f} ms"
          f"   native {native * 1e3:9.3f} ms   speedup {speedup:6.1f}x")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, metavar="N",
                        help="repetitions per measurement; best time wins")
    args = parser.parse_args()

    if "native" not in _kernels.available_backends():
        print("compiled backend unavailable; nothing to compare")
        return 1
    previous = _kernels.backend()

    cases = [
        ("12 entities, 2 states", synthetic(12, 1, 3, seed=1)),   # 4096 states
        ("8 entities, 3 states", synthetic(8, 2, 3, seed=2)),     # 6561 states
        ("10 entities, 2 states, dense", synthetic(10, 1, 6, seed=3)),
    ]
    try:
        print("kernels (successor array build / full trace walk)")
        for label, m in cases:
            nb, nw = run_backend("native", args.repeat, m)
            pb, pw = run_backend("pure", args.repeat, m)
            print(f"{label} ({len(m.radices)} entities,"
                  f" {m.strides[0] * m.radices[0]} states)")
            report("successor array", pb, nb)
            report("trace walk", pw, nw)

        print("end-to-end abstraction search (bundled 4-entity model)")
        m = parse_model(models.read("pl4.mvn"))
        phi = parse_mapping(models.read("phi_pl4.map"), m)
        native = run_search("native", args.repeat, m, phi)
        pure = run_search("pure", args.repeat, m, phi)
        report("find_abstractions", pure, native)
    finally:
        _kernels.set_backend(previous)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
