"""Kernel backends: a compiled extension with a pure-Python fallback.

The compiled backend is picked at import when available. Set
MVNABS_PURE_KERNELS=1 in the environment, or call set_backend("pure"), to
force the fallback; benchmarks and tests use this to compare the two.
"""

from __future__ import annotations

import os
from array import array
from typing import NamedTuple

from . import pure

_BACKENDS = {"pure": pure}
try:
    from . import _native

    _BACKENDS["native"] = _native
except ImportError:  # extension not built; the fallback covers everything
    pass

_active = "native" if "native" in _BACKENDS else "pure"
if os.environ.get("MVNABS_PURE_KERNELS"):
    _active = "pure"


def backend() -> str:
    """Name of the backend in use: "native" or "pure"."""
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _active = name


class Layout(NamedTuple):
    """A model flattened into the arrays the kernels consume."""

    radices: array
    strides: array
    neigh_flat: array
    neigh_off: array
    tstride_flat: array
    tab_flat: array
    tab_off: array
    size: int


def make_layout(radices, input_indices, dense_tables) -> Layout:
    k = len(radices)
    strides = [1] * k
    for i in range(k - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    size = strides[0] * radices[0] if k else 1
    neigh_flat: list[int] = []
    neigh_off = [0]
    tstride_flat: list[int] = []
    tab_flat: list[int] = []
    tab_off = [0]
    for i in range(k):
        inputs = input_indices[i]
        radii = [radices[j] for j in inputs]
        tstrides = [1] * len(inputs)
        for t in range(len(inputs) - 2, -1, -1):
            tstrides[t] = tstrides[t + 1] * radii[t + 1]
        neigh_flat.extend(inputs)
        tstride_flat.extend(tstrides)
        neigh_off.append(len(neigh_flat))
        tab_flat.extend(dense_tables[i])
        tab_off.append(len(tab_flat))
    return Layout(
        array("q", radices),
        array("q", strides),
        array("q", neigh_flat),
        array("q", neigh_off),
        array("q", tstride_flat),
        array("q", tab_flat),
        array("q", tab_off),
        size,
    )


def with_tables(layout: Layout, dense_tables) -> Layout:
    """The same structure with different table contents (for candidate scans)."""
    flat: list[int] = []
    for table in dense_tables:
        flat.extend(table)
    return layout._replace(tab_flat=array("q", flat))


def successor_array(layout: Layout):
    """Successor state index for every global state index."""
    impl = _BACKENDS[_active]
    return impl.successor_array(
        layout.radices,
        layout.strides,
        layout.neigh_flat,
        layout.neigh_off,
        layout.tstride_flat,
        layout.tab_flat,
        layout.tab_off,
    )


def all_traces(succ):
    """Canonical traces (as index runs) from every start state.

    Returns (flat, offsets): the trace from state s is flat[offsets[s]:offsets[s+1]],
    ending with the first repeated state.
    """
    return _BACKENDS[_active].all_traces(succ)


def state_map(src_radices, value_maps, dst_radices):
    """Array sending each source state index to the index of its image."""
    k = len(src_radices)
    dst_strides = [1] * k
    for i in range(k - 2, -1, -1):
        dst_strides[i] = dst_strides[i + 1] * dst_radices[i + 1]
    maps_flat: list[int] = []
    maps_off = [0]
    for vm in value_maps:
        maps_flat.extend(vm)
        maps_off.append(len(maps_flat))
    return _BACKENDS[_active].map_states(
        array("q", src_radices),
        array("q", maps_flat),
        array("q", maps_off),
        array("q", dst_strides),
    )
