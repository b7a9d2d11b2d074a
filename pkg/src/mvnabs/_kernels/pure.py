"""Pure-Python kernels. Contracts mirror the compiled backend in _native.pyx.

All functions take and return array('q') buffers so the two backends are
interchangeable.
"""

from __future__ import annotations

from array import array
from itertools import product


def successor_array(radices, strides, neigh_flat, neigh_off, tstride_flat, tab_flat, tab_off):
    k = len(radices)
    size = 1
    for r in radices:
        size *= r
    out = array("q", bytes(8 * size))
    for x, digits in enumerate(product(*(range(r) for r in radices))):
        y = 0
        for i in range(k):
            t = tab_off[i]
            for p in range(neigh_off[i], neigh_off[i + 1]):
                t += digits[neigh_flat[p]] * tstride_flat[p]
            y += tab_flat[t] * strides[i]
        out[x] = y
    return out


def all_traces(succ):
    size = len(succ)
    mark = array("q", [-1]) * size
    flat = array("q")
    offsets = array("q", [0])
    for s in range(size):
        x = s
        while mark[x] != s:
            mark[x] = s
            flat.append(x)
            x = succ[x]
        flat.append(x)
        offsets.append(len(flat))
    return flat, offsets


def map_states(src_radices, maps_flat, maps_off, dst_strides):
    k = len(src_radices)
    size = 1
    for r in src_radices:
        size *= r
    out = array("q", bytes(8 * size))
    for x, digits in enumerate(product(*(range(r) for r in src_radices))):
        y = 0
        for i in range(k):
            y += maps_flat[maps_off[i] + digits[i]] * dst_strides[i]
        out[x] = y
    return out
