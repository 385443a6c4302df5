# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled collection kernel with an int64 fast path.

Distinct alphas are numbered in order of first appearance, so a correction is
addressed by a pair of small indices: a dense matrix when few alphas are
distinct, a hash map otherwise. Anything that leaves int64 makes the call
replay through the pure-Python kernel.
"""
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref, preincrement as inc

from . import _pykernels

cdef extern from *:
    bint add_ovf "__builtin_add_overflow"(long long a, long long b, long long* r) nogil
    bint mul_ovf "__builtin_mul_overflow"(long long a, long long b, long long* r) nogil
    bint sub_ovf "__builtin_sub_overflow"(long long a, long long b, long long* r) nogil

# dense D x D matrix up to 32 MiB
cdef size_t DENSE_LIMIT = 1 << 22


cdef int _number(vector[long long]& al, vector[long long]& kv, vector[size_t]& idx,
                 vector[long long]& dal) nogil:
    cdef unordered_map[long long, size_t] where
    cdef unordered_map[long long, size_t].iterator it
    cdef size_t j
    for j in range(al.size()):
        if kv[j] == 0:
            idx.push_back(<size_t>-1)
            continue
        it = where.find(al[j])
        if it == where.end():
            where[al[j]] = dal.size()
            idx.push_back(dal.size())
            dal.push_back(al[j])
        else:
            idx.push_back(deref(it).second)
    return 0


cdef int _collect_dense(vector[long long]& al, vector[long long]& kv, vector[size_t]& idx,
                        vector[long long]& dal, vector[long long]& pool,
                        vector[long long]& mat) nogil:
    cdef size_t j, d, D = dal.size(), row
    cdef long long aj, kj, prod
    for j in range(al.size()):
        kj = kv[j]
        if kj == 0:
            continue
        aj = al[j]
        row = idx[j] * D
        for d in range(D):
            if pool[d] != 0 and dal[d] < aj:
                if mul_ovf(pool[d], kj, &prod) or add_ovf(mat[row + d], prod, &mat[row + d]):
                    return -1
        if add_ovf(pool[idx[j]], kj, &pool[idx[j]]):
            return -1
    return 0


cdef int _collect_sparse(vector[long long]& al, vector[long long]& kv, vector[size_t]& idx,
                         vector[long long]& dal, vector[long long]& pool,
                         unordered_map[size_t, long long]& acc) nogil:
    cdef size_t j, d, D = dal.size(), row
    cdef long long aj, kj, prod
    cdef long long* slot
    for j in range(al.size()):
        kj = kv[j]
        if kj == 0:
            continue
        aj = al[j]
        row = idx[j] * D
        for d in range(D):
            if pool[d] != 0 and dal[d] < aj:
                slot = &acc[row + d]
                if mul_ovf(pool[d], kj, &prod) or add_ovf(slot[0], prod, slot):
                    return -1
        if add_ovf(pool[idx[j]], kj, &pool[idx[j]]):
            return -1
    return 0


def collect(alphas, ks):
    """Same contract as :func:`wreathlog._pykernels.collect`."""
    cdef vector[long long] al, kv, dal, pool, mat
    cdef vector[size_t] idx
    cdef unordered_map[size_t, long long] acc
    cdef unordered_map[size_t, long long].iterator it
    cdef size_t D, d, e, cell
    cdef long long beta
    cdef int status
    cdef bint dense
    try:
        al = alphas
        kv = ks
    except OverflowError:
        return _pykernels.collect(alphas, ks)
    with nogil:
        _number(al, kv, idx, dal)
        D = dal.size()
        pool.resize(D, 0)
        dense = D * D <= DENSE_LIMIT
        if dense:
            mat.resize(D * D, 0)
            status = _collect_dense(al, kv, idx, dal, pool, mat)
        else:
            status = _collect_sparse(al, kv, idx, dal, pool, acc)
    if status:
        return _pykernels.collect(alphas, ks)

    degrees = {}
    for d in range(D):
        degrees[dal[d]] = pool[d]
    corrections = {}
    if dense:
        for e in range(D):
            for d in range(D):
                cell = e * D + d
                if mat[cell] != 0:
                    if sub_ovf(dal[e], dal[d], &beta):
                        return _pykernels.collect(alphas, ks)
                    corrections[(beta, dal[d])] = mat[cell]
    else:
        it = acc.begin()
        while it != acc.end():
            if deref(it).second != 0:
                e, d = deref(it).first // D, deref(it).first % D
                if sub_ovf(dal[e], dal[d], &beta):
                    return _pykernels.collect(alphas, ks)
                corrections[(beta, dal[d])] = deref(it).second
            inc(it)
    return degrees, corrections
