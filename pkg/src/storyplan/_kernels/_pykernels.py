"""Pure-Python reference implementations of the hot kernels.

Kept loop-for-loop equivalent to the Cython versions so the two backends
can be compared directly; do not vectorize.
"""


def score_candidates(degree_values, in_degrees, hist_counts, rept_m, omega, out):
    """Fill out[i] with omega * degree_values[i] * penalty(i); return the total.

    penalty(i) = (rept_m - min(hist_counts[i], rept_m)) / (rept_m * in_degrees[i]).
    in_degrees[i] must be >= 1 for every candidate (it has an incoming edge).
    """
    total = 0.0
    m = float(rept_m)
    for i in range(len(out)):
        c = hist_counts[i]
        if c > rept_m:
            c = rept_m
        score = omega * degree_values[i] * (m - c) / (m * in_degrees[i])
        out[i] = score
        total += score
    return total


def lcs_length(a, b):
    """Length of the longest common subsequence of two id sequences."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0
    prev = [0] * (m + 1)
    cur = [0] * (m + 1)
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        prev, cur = cur, prev
    return prev[m]


def jaccard_best(query_ids, n_extra, token_ids, offsets, degrees):
    """Index of the node with the highest Jaccard similarity to the query.

    query_ids: sorted unique ids of query tokens present in the vocabulary;
    n_extra counts query tokens outside it (they enlarge the union only).
    token_ids/offsets: CSR layout of sorted unique token ids per node, in
    the graph's lexicographic node order. Ties break toward higher degree,
    then toward the earlier (lexicographically smaller) node. Similarity
    comparison uses exact integer cross-multiplication.
    """
    n_nodes = len(offsets) - 1
    if n_nodes <= 0:
        return -1
    nq = len(query_ids)
    best_idx = -1
    best_inter = 0
    best_union = 1
    best_degree = 0
    for k in range(n_nodes):
        lo = offsets[k]
        hi = offsets[k + 1]
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
        union = nq + n_extra + (hi - lo) - inter
        if union == 0:
            # empty query against an empty node counts as similarity 0
            inter, union = 0, 1
        deg = degrees[k]
        if best_idx < 0:
            best_idx = k
            best_inter, best_union, best_degree = inter, union, deg
            continue
        lhs = inter * best_union
        rhs = best_inter * union
        if lhs > rhs or (lhs == rhs and deg > best_degree):
            best_idx = k
            best_inter, best_union, best_degree = inter, union, deg
    return best_idx
