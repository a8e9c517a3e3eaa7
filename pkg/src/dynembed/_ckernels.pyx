# cython: language_level=3
"""Compiled walk and SGNS kernels.

Mirror of _pykernels.py: identical splitmix64 streams and identical floating
point operation order, so results are bit-for-bit interchangeable with the
pure-Python fallback. Keep the two files in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

COMPILED = True

cdef extern from *:
    """
    #include <stdint.h>
    static const uint64_t DYNEMBED_GOLDEN = 0x9E3779B97F4A7C15ULL;
    static const uint64_t DYNEMBED_MIX1 = 0xBF58476D1CE4E5B9ULL;
    static const uint64_t DYNEMBED_MIX2 = 0x94D049BB133111EBULL;
    """
    cdef unsigned long long DYNEMBED_GOLDEN
    cdef unsigned long long DYNEMBED_MIX1
    cdef unsigned long long DYNEMBED_MIX2

ctypedef unsigned long long u64
ctypedef long long i64

cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef u64 TRAIN_STREAM = 0x53474E53


cdef inline u64 sm_next(u64 *state) nogil:
    state[0] = state[0] + DYNEMBED_GOLDEN
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * DYNEMBED_MIX1
    z = (z ^ (z >> 27)) * DYNEMBED_MIX2
    return z ^ (z >> 31)


cdef inline u64 stream_state(u64 seed, u64 index) nogil:
    cdef u64 s = seed
    cdef u64 a = sm_next(&s)
    s = index
    cdef u64 b = sm_next(&s)
    s = a ^ b
    return sm_next(&s)


cdef inline double to_unit(u64 z) nogil:
    return (z >> 11) * INV_2_53


def build_alias(values, segment_ptr):
    """Vose alias tables for one discrete distribution per segment."""
    cdef const double[::1] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef const i64[::1] ptr = np.ascontiguousarray(segment_ptr, dtype=np.int64)
    prob_arr = np.empty(vals.shape[0], dtype=np.float64)
    alias_arr = np.zeros(vals.shape[0], dtype=np.int64)
    cdef double[::1] prob = prob_arr
    cdef i64[::1] alias = alias_arr
    cdef double[::1] scaled = np.empty(vals.shape[0], dtype=np.float64)
    cdef i64[::1] small = np.empty(vals.shape[0], dtype=np.int64)
    cdef i64[::1] large = np.empty(vals.shape[0], dtype=np.int64)
    cdef i64 seg, start, end, m, i, s, big, n_small, n_large
    cdef double total
    for seg in range(ptr.shape[0] - 1):
        start = ptr[seg]
        end = ptr[seg + 1]
        m = end - start
        if m == 0:
            continue
        total = 0.0
        for i in range(start, end):
            total += vals[i]
        if total <= 0.0:
            for i in range(start, end):
                prob[i] = 1.0
                alias[i] = i - start
            continue
        n_small = 0
        n_large = 0
        for i in range(m):
            scaled[i] = vals[start + i] * m / total
            if scaled[i] < 1.0:
                small[n_small] = i
                n_small += 1
            else:
                large[n_large] = i
                n_large += 1
        while n_small > 0 and n_large > 0:
            n_small -= 1
            s = small[n_small]
            n_large -= 1
            big = large[n_large]
            prob[start + s] = scaled[s]
            alias[start + s] = big
            scaled[big] = (scaled[big] + scaled[s]) - 1.0
            if scaled[big] < 1.0:
                small[n_small] = big
                n_small += 1
            else:
                large[n_large] = big
                n_large += 1
        while n_large > 0:
            n_large -= 1
            i = large[n_large]
            prob[start + i] = 1.0
            alias[start + i] = i
        while n_small > 0:
            n_small -= 1
            i = small[n_small]
            prob[start + i] = 1.0
            alias[start + i] = i
    return prob_arr, alias_arr


cdef inline bint has_edge(const i64[::1] indptr, const i64[::1] indices, i64 a, i64 b) nogil:
    cdef i64 lo = indptr[a]
    cdef i64 hi = indptr[a + 1]
    cdef i64 mid, v
    while lo < hi:
        mid = (lo + hi) // 2
        v = indices[mid]
        if v == b:
            return True
        if v < b:
            lo = mid + 1
        else:
            hi = mid
    return False


def simulate_walks(
    indptr,
    indices,
    prob,
    alias,
    int walks_per_node,
    int walk_length,
    double p_return,
    double q_inout,
    seed,
):
    """Second-order biased random walks from every non-isolated node."""
    cdef const i64[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] pr = np.ascontiguousarray(prob, dtype=np.float64)
    cdef const i64[::1] al = np.ascontiguousarray(alias, dtype=np.int64)
    starts_arr = np.flatnonzero(np.diff(np.asarray(indptr)) > 0).astype(np.int64)
    cdef i64[::1] starts = starts_arr
    walks_arr = np.empty(
        (starts_arr.size * walks_per_node, walk_length), dtype=np.int64
    )
    cdef i64[:, ::1] walks = walks_arr
    cdef bint unbiased = p_return == 1.0 and q_inout == 1.0
    cdef double max_bias = max(1.0, max(1.0 / p_return, 1.0 / q_inout))
    cdef u64 seed64 = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 state, z
    cdef i64 si, node, rep, row, cur, prev, step, off, deg, slot, cand
    cdef double bias
    with nogil:
        for si in range(starts.shape[0]):
            node = starts[si]
            for rep in range(walks_per_node):
                row = si * walks_per_node + rep
                state = stream_state(seed64, <u64> (node * walks_per_node + rep))
                cur = node
                prev = -1
                walks[row, 0] = cur
                for step in range(1, walk_length):
                    off = iptr[cur]
                    deg = iptr[cur + 1] - off
                    while True:
                        z = sm_next(&state)
                        slot = <i64> (z % <u64> deg)
                        z = sm_next(&state)
                        if to_unit(z) >= pr[off + slot]:
                            slot = al[off + slot]
                        cand = idx[off + slot]
                        if prev < 0 or unbiased:
                            break
                        if cand == prev:
                            bias = 1.0 / p_return
                        elif has_edge(iptr, idx, prev, cand):
                            bias = 1.0
                        else:
                            bias = 1.0 / q_inout
                        z = sm_next(&state)
                        if to_unit(z) * max_bias < bias:
                            break
                    walks[row, step] = cand
                    prev = cur
                    cur = cand
    return walks_arr


cdef inline double sigmoid(double f) nogil:
    cdef double e
    if f >= 0.0:
        return 1.0 / (1.0 + exp(-f))
    e = exp(f)
    return e / (1.0 + e)


def train_sgns(
    walks,
    int window,
    int negatives,
    int epochs,
    double lr_initial,
    seed,
    noise_prob,
    noise_alias,
    w_in,
    w_out,
):
    """Skip-gram negative-sampling SGD over the walk corpus, in place."""
    cdef const i64[:, ::1] wk_ = np.ascontiguousarray(walks, dtype=np.int64)
    cdef const double[::1] nprob = np.ascontiguousarray(noise_prob, dtype=np.float64)
    cdef const i64[::1] nalias = np.ascontiguousarray(noise_alias, dtype=np.int64)
    cdef double[:, ::1] win = w_in
    cdef double[:, ::1] wout = w_out
    cdef i64 n_walks = wk_.shape[0]
    cdef i64 length = wk_.shape[1]
    cdef i64 vocab = win.shape[0]
    cdef i64 d = win.shape[1]
    cdef double[::1] neu = np.zeros(d, dtype=np.float64)
    cdef i64 total_steps = n_walks * length * epochs
    cdef double min_lr = lr_initial * 1e-4
    cdef u64 seed64 = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 state = stream_state(seed64, TRAIN_STREAM)
    cdef u64 z
    cdef i64 step = 0
    cdef i64 epoch, w, i, j, lo, hi, span, center, context, target, neg, slot, k
    cdef double alpha, f, g, label, tmp
    with nogil:
        for epoch in range(epochs):
            for w in range(n_walks):
                for i in range(length):
                    center = wk_[w, i]
                    alpha = lr_initial * (1.0 - (<double> step) / (<double> total_steps))
                    if alpha < min_lr:
                        alpha = min_lr
                    step += 1
                    z = sm_next(&state)
                    span = <i64> (1 + z % <u64> window)
                    lo = i - span if i - span > 0 else 0
                    hi = i + span + 1 if i + span + 1 < length else length
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        context = wk_[w, j]
                        for k in range(d):
                            neu[k] = 0.0
                        for neg in range(negatives + 1):
                            if neg == 0:
                                target = context
                                label = 1.0
                            else:
                                z = sm_next(&state)
                                slot = <i64> (z % <u64> vocab)
                                z = sm_next(&state)
                                if to_unit(z) >= nprob[slot]:
                                    slot = nalias[slot]
                                if slot == context:
                                    continue
                                target = slot
                                label = 0.0
                            f = 0.0
                            for k in range(d):
                                f += win[center, k] * wout[target, k]
                            g = (label - sigmoid(f)) * alpha
                            for k in range(d):
                                tmp = g * wout[target, k]
                                wout[target, k] += g * win[center, k]
                                neu[k] += tmp
                        for k in range(d):
                            win[center, k] += neu[k]
