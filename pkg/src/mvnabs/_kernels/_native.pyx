# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Contracts mirror mvnabs._kernels.pure."""

from cpython cimport array
import array

from libcpp.vector cimport vector

cdef array.array _template = array.array("q", [])


def successor_array(long long[::1] radices, long long[::1] strides,
                    long long[::1] neigh_flat, long long[::1] neigh_off,
                    long long[::1] tstride_flat, long long[::1] tab_flat,
                    long long[::1] tab_off):
    cdef Py_ssize_t k = radices.shape[0]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t i, p
    cdef long long x, y, t
    for i in range(k):
        size *= <Py_ssize_t>radices[i]
    cdef array.array out = array.clone(_template, size, zero=False)
    cdef long long[::1] o = out
    with nogil:
        for x in range(size):
            y = 0
            for i in range(k):
                t = tab_off[i]
                for p in range(<Py_ssize_t>neigh_off[i], <Py_ssize_t>neigh_off[i + 1]):
                    t += ((x / strides[neigh_flat[p]]) % radices[neigh_flat[p]]) * tstride_flat[p]
                y += tab_flat[t] * strides[i]
            o[x] = y
    return out


def all_traces(long long[::1] succ):
    cdef Py_ssize_t size = succ.shape[0]
    cdef array.array mark_a = array.clone(_template, size, zero=False)
    cdef long long[::1] mark = mark_a
    cdef array.array offsets_a = array.clone(_template, size + 1, zero=False)
    cdef long long[::1] offsets = offsets_a
    cdef vector[long long] flat
    cdef long long s, x
    cdef Py_ssize_t i
    for i in range(size):
        mark[i] = -1
    offsets[0] = 0
    with nogil:
        for s in range(size):
            x = s
            while mark[x] != s:
                mark[x] = s
                flat.push_back(x)
                x = succ[x]
            flat.push_back(x)
            offsets[s + 1] = <long long>flat.size()
    cdef array.array flat_a = array.clone(_template, <Py_ssize_t>flat.size(), zero=False)
    cdef long long[::1] fv = flat_a
    for i in range(<Py_ssize_t>flat.size()):
        fv[i] = flat[i]
    return flat_a, offsets_a


def map_states(long long[::1] src_radices, long long[::1] maps_flat,
               long long[::1] maps_off, long long[::1] dst_strides):
    cdef Py_ssize_t k = src_radices.shape[0]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t i
    cdef long long x, y, v, rest
    for i in range(k):
        size *= <Py_ssize_t>src_radices[i]
    cdef array.array out = array.clone(_template, size, zero=False)
    cdef long long[::1] o = out
    with nogil:
        for x in range(size):
            y = 0
            rest = x
            for i in range(k - 1, -1, -1):
                v = rest % src_radices[i]
                rest = rest / src_radices[i]
                y += maps_flat[maps_off[i] + v] * dst_strides[i]
            o[x] = y
    return out
