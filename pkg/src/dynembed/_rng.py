"""splitmix64 primitives shared by the walk/SGNS kernels.

Both the compiled and the pure-Python kernels implement exactly this
generator so that, given the same seed, they produce bit-identical walks and
embeddings. Keep the constants and update order in sync with _ckernels.pyx.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
INIT_STREAM = 0x494E4954  # vector initialization
TRAIN_STREAM = 0x53474E53  # SGNS training
INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def sm_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state and return (new_state, output)."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def stream_state(seed: int, index: int) -> int:
    """Initial state of the independent stream (seed, index)."""
    _, a = sm_next(seed & MASK64)
    _, b = sm_next(index & MASK64)
    _, c = sm_next(a ^ b)
    return c


def to_unit(z: int) -> float:
    """Map a 64-bit output to a double in [0, 1)."""
    return (z >> 11) * INV_2_53
