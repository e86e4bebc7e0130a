# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; semantics match _pykernels exactly."""


def score_candidates(double[::1] degree_values, double[::1] in_degrees,
                     long long[::1] hist_counts, long long rept_m,
                     double omega, double[::1] out):
    cdef Py_ssize_t i, n = out.shape[0]
    cdef double total = 0.0
    cdef double m = <double> rept_m
    cdef long long c
    cdef double score
    for i in range(n):
        c = hist_counts[i]
        if c > rept_m:
            c = rept_m
        score = omega * degree_values[i] * (m - <double> c) / (m * in_degrees[i])
        out[i] = score
        total += score
    return total


def lcs_length(long long[::1] a, long long[::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    if n == 0 or m == 0:
        return 0
    import numpy as np
    buf = np.zeros(2 * (m + 1), dtype=np.int64)
    cdef long long[::1] rows = buf
    cdef Py_ssize_t i, j, prev_off = 0, cur_off = m + 1, tmp
    cdef long long ai
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                rows[cur_off + j] = rows[prev_off + j - 1] + 1
            elif rows[prev_off + j] >= rows[cur_off + j - 1]:
                rows[cur_off + j] = rows[prev_off + j]
            else:
                rows[cur_off + j] = rows[cur_off + j - 1]
        tmp = prev_off
        prev_off = cur_off
        cur_off = tmp
    return int(rows[prev_off + m])


def jaccard_best(long long[::1] query_ids, long long n_extra,
                 long long[::1] token_ids, long long[::1] offsets,
                 long long[::1] degrees):
    cdef Py_ssize_t n_nodes = offsets.shape[0] - 1
    if n_nodes <= 0:
        return -1
    cdef Py_ssize_t nq = query_ids.shape[0]
    cdef Py_ssize_t best_idx = -1
    cdef long long best_inter = 0, best_union = 1, best_degree = 0
    cdef Py_ssize_t k, i, j, lo, hi
    cdef long long inter, union_, deg, lhs, rhs, qi, tj
    for k in range(n_nodes):
        lo = <Py_ssize_t> offsets[k]
        hi = <Py_ssize_t> offsets[k + 1]
        inter = 0
        i = 0
        j = lo
        while i < nq and j < hi:
            qi = query_ids[i]
            tj = token_ids[j]
            if qi == tj:
                inter += 1
                i += 1
                j += 1
            elif qi < tj:
                i += 1
            else:
                j += 1
        union_ = nq + n_extra + (hi - lo) - inter
        if union_ == 0:
            inter = 0
            union_ = 1
        deg = degrees[k]
        if best_idx < 0:
            best_idx = k
            best_inter = inter
            best_union = union_
            best_degree = deg
            continue
        lhs = inter * best_union
        rhs = best_inter * union_
        if lhs > rhs or (lhs == rhs and deg > best_degree):
            best_idx = k
            best_inter = inter
            best_union = union_
            best_degree = deg
    return int(best_idx)
