"""Benchmark the compiled walk/SGNS kernels against the pure-Python fallback.

Usage: python3 benchmarks/benchmark_kernels.py [--n 400] [--t 4]

Both backends produce bit-identical output for the same seed (asserted here),
so the comparison is purely about throughput.
"""

import argparse
import time

import numpy as np

from dynembed import SkipGramConfig, SystemPreset, build_preset, sample_network
from dynembed import dilate, unfold
from dynembed import _pykernels
from dynembed.kernels import COMPILED_AVAILABLE
from dynembed.skipgram import NOISE_POWER, _init_vectors


def run_backend(backend, adjacency, config, sgns_walks):
    indptr = adjacency.indptr.astype(np.int64)
    indices = adjacency.indices.astype(np.int64)
    data = np.array(adjacency.data)
    timings = {}

    t0 = time.perf_counter()
    prob, alias = backend.build_alias(data, indptr)
    timings["alias build"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    walks = backend.simulate_walks(
        indptr, indices, prob, alias,
        config.walks_per_node, config.walk_length,
        config.p_return, config.q_inout, config.seed,
    )
    timings["walks"] = time.perf_counter() - t0

    vocab = adjacency.shape[0]
    noise = np.bincount(sgns_walks.ravel(), minlength=vocab).astype(np.float64)
    noise **= NOISE_POWER
    nptr = np.array([0, vocab], dtype=np.int64)
    nprob, nalias = backend.build_alias(noise, nptr)
    w_in = _init_vectors(vocab, config.d, config.seed)
    w_out = np.zeros((vocab, config.d))
    t0 = time.perf_counter()
    backend.train_sgns(
        sgns_walks, config.window, config.negatives_per_positive, config.epochs,
        config.learning_rate_initial, config.seed, nprob, nalias, w_in, w_out,
    )
    timings["sgns"] = time.perf_counter() - t0
    return walks, w_in, timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--t", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not COMPILED_AVAILABLE:
        raise SystemExit("compiled kernels not built; nothing to compare")
    from dynembed import _ckernels

    net = sample_network(build_preset(SystemPreset("moving", n=args.n, T=args.t)),
                         seed=args.seed)
    adjacency = dilate(unfold(net)).data
    config = SkipGramConfig(d=16, walks_per_node=4, walk_length=40, epochs=1,
                            seed=args.seed)
    # a reduced corpus keeps the pure-Python SGNS pass tolerable
    probe_cfg = SkipGramConfig(d=16, walks_per_node=1, walk_length=40, epochs=1,
                               seed=args.seed)
    indptr = adjacency.indptr.astype(np.int64)
    indices = adjacency.indices.astype(np.int64)
    prob, alias = _ckernels.build_alias(np.array(adjacency.data), indptr)
    sgns_walks = _ckernels.simulate_walks(
        indptr, indices, prob, alias, probe_cfg.walks_per_node,
        probe_cfg.walk_length, 1.0, 1.0, probe_cfg.seed,
    )

    print(f"dilated graph: {adjacency.shape[0]} nodes, {adjacency.nnz} nonzeros, "
          f"{sgns_walks.shape[0]} walks x {sgns_walks.shape[1]} for SGNS")
    walks_c, vecs_c, fast = run_backend(_ckernels, adjacency, config, sgns_walks)
    walks_p, vecs_p, slow = run_backend(_pykernels, adjacency, config, sgns_walks)
    assert np.array_equal(walks_c, walks_p), "backend walks diverged"
    assert np.array_equal(vecs_c, vecs_p), "backend embeddings diverged"

    print(f"{'stage':<12} {'compiled':>10} {'pure':>10} {'speedup':>9}")
    for stage in fast:
        ratio = slow[stage] / fast[stage] if fast[stage] > 0 else float("inf")
        print(f"{stage:<12} {fast[stage]:>9.3f}s {slow[stage]:>9.3f}s {ratio:>8.1f}x")
    print("outputs bit-identical across backends")


if __name__ == "__main__":
    main()
