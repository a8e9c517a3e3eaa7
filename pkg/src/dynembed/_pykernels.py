"""Pure-Python walk and SGNS kernels.

Import-time fallback when the compiled extension is unavailable, and the
reference the extension is tested against: given the same inputs and seed the
two produce bit-identical output, so everything here is written as explicit
sequential loops mirroring _ckernels.pyx line by line. Orders of magnitude
slower than the extension; fine for tests and small graphs.
"""

from __future__ import annotations

import math

import numpy as np

from ._rng import TRAIN_STREAM, sm_next, stream_state, to_unit

COMPILED = False


def build_alias(values: np.ndarray, segment_ptr: np.ndarray):
    """Vose alias tables for one discrete distribution per segment.

    ``values`` holds unnormalized non-negative weights; ``segment_ptr`` its
    segment boundaries (CSR indptr layout). Returns (prob, alias) aligned
    with ``values``, alias entries being local slot indices.
    """
    values = np.asarray(values, dtype=np.float64)
    segment_ptr = np.asarray(segment_ptr, dtype=np.int64)
    prob = np.empty(values.size, dtype=np.float64)
    alias = np.zeros(values.size, dtype=np.int64)
    scaled = np.empty(values.size, dtype=np.float64)
    small = np.empty(values.size, dtype=np.int64)
    large = np.empty(values.size, dtype=np.int64)
    for seg in range(segment_ptr.size - 1):
        start = int(segment_ptr[seg])
        end = int(segment_ptr[seg + 1])
        m = end - start
        if m == 0:
            continue
        total = 0.0
        for i in range(start, end):
            total += values[i]
        if total <= 0.0:
            for i in range(start, end):
                prob[i] = 1.0
                alias[i] = i - start
            continue
        n_small = 0
        n_large = 0
        for i in range(m):
            scaled[i] = values[start + i] * m / total
            if scaled[i] < 1.0:
                small[n_small] = i
                n_small += 1
            else:
                large[n_large] = i
                n_large += 1
        while n_small > 0 and n_large > 0:
            n_small -= 1
            s = int(small[n_small])
            n_large -= 1
            big = int(large[n_large])
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
            i = int(large[n_large])
            prob[start + i] = 1.0
            alias[start + i] = i
        while n_small > 0:  # numerical leftovers
            n_small -= 1
            i = int(small[n_small])
            prob[start + i] = 1.0
            alias[start + i] = i
    return prob, alias


def _has_edge(indptr, indices, a: int, b: int) -> bool:
    lo = int(indptr[a])
    hi = int(indptr[a + 1])
    while lo < hi:
        mid = (lo + hi) // 2
        v = int(indices[mid])
        if v == b:
            return True
        if v < b:
            lo = mid + 1
        else:
            hi = mid
    return False


def simulate_walks(
    indptr: np.ndarray,
    indices: np.ndarray,
    prob: np.ndarray,
    alias: np.ndarray,
    walks_per_node: int,
    walk_length: int,
    p_return: float,
    q_inout: float,
    seed: int,
) -> np.ndarray:
    """Second-order biased random walks from every non-isolated node.

    One walk per (start node, repeat) pair, each driven by its own stream
    derived from (seed, node * walks_per_node + repeat), so walk content does
    not depend on generation order. Weighted neighbor proposals come from the
    per-node alias tables; the (p, q) bias is applied by rejection.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    degrees = np.diff(indptr)
    starts = np.flatnonzero(degrees > 0)
    walks = np.empty((starts.size * walks_per_node, walk_length), dtype=np.int64)
    unbiased = p_return == 1.0 and q_inout == 1.0
    max_bias = max(1.0, 1.0 / p_return, 1.0 / q_inout)
    for si in range(starts.size):
        node = int(starts[si])
        for rep in range(walks_per_node):
            row = si * walks_per_node + rep
            state = stream_state(seed, node * walks_per_node + rep)
            cur = node
            prev = -1
            walks[row, 0] = cur
            for step in range(1, walk_length):
                off = int(indptr[cur])
                deg = int(indptr[cur + 1]) - off
                while True:
                    state, z = sm_next(state)
                    slot = z % deg
                    state, z = sm_next(state)
                    if to_unit(z) >= prob[off + slot]:
                        slot = int(alias[off + slot])
                    cand = int(indices[off + slot])
                    if prev < 0 or unbiased:
                        break
                    if cand == prev:
                        bias = 1.0 / p_return
                    elif _has_edge(indptr, indices, prev, cand):
                        bias = 1.0
                    else:
                        bias = 1.0 / q_inout
                    state, z = sm_next(state)
                    if to_unit(z) * max_bias < bias:
                        break
                walks[row, step] = cand
                prev = cur
                cur = cand
    return walks


def _sigmoid(f: float) -> float:
    if f >= 0.0:
        return 1.0 / (1.0 + math.exp(-f))
    e = math.exp(f)
    return e / (1.0 + e)


def train_sgns(
    walks: np.ndarray,
    window: int,
    negatives: int,
    epochs: int,
    lr_initial: float,
    seed: int,
    noise_prob: np.ndarray,
    noise_alias: np.ndarray,
    w_in: np.ndarray,
    w_out: np.ndarray,
) -> None:
    """Skip-gram negative-sampling SGD over the walk corpus, in place.

    Single-threaded and fully deterministic: one splitmix64 stream drives the
    window shrink and the negative draws; the learning rate decays linearly
    per center position with a 1e-4 floor.
    """
    n_walks, length = walks.shape
    vocab, d = w_in.shape
    neu = np.zeros(d, dtype=np.float64)
    total_steps = n_walks * length * epochs
    min_lr = lr_initial * 1e-4
    state = stream_state(seed, TRAIN_STREAM)
    step = 0
    for _epoch in range(epochs):
        for wk in range(n_walks):
            for i in range(length):
                center = int(walks[wk, i])
                alpha = lr_initial * (1.0 - step / total_steps)
                if alpha < min_lr:
                    alpha = min_lr
                step += 1
                state, z = sm_next(state)
                span = 1 + z % window
                lo = i - span if i - span > 0 else 0
                hi = i + span + 1 if i + span + 1 < length else length
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = int(walks[wk, j])
                    for k in range(d):
                        neu[k] = 0.0
                    for neg in range(negatives + 1):
                        if neg == 0:
                            target = context
                            label = 1.0
                        else:
                            state, z = sm_next(state)
                            slot = z % vocab
                            state, z = sm_next(state)
                            if to_unit(z) >= noise_prob[slot]:
                                slot = int(noise_alias[slot])
                            if slot == context:
                                continue
                            target = slot
                            label = 0.0
                        f = 0.0
                        for k in range(d):
                            f += w_in[center, k] * w_out[target, k]
                        g = (label - _sigmoid(f)) * alpha
                        for k in range(d):
                            tmp = g * w_out[target, k]
                            w_out[target, k] += g * w_in[center, k]
                            neu[k] += tmp
                    for k in range(d):
                        w_in[center, k] += neu[k]
