"""Hot numeric kernels: numba-jitted loops with pure numpy/Python fallbacks.

The jitted path is selected automatically when numba imports cleanly; set
``DICESIM_NO_NUMBA=1`` to force the fallback path. ``USING_NUMBA`` reports
which path the public names are bound to. The fallback variants
(``*_numpy`` / ``*_py``) stay importable either way so tests and
``benchmarks/bench_kernels.py`` can compare both paths in one process.

Sequential kernels (feedback trajectories, the LCG-fed stateless pipeline)
share one core function that is either compiled or run as plain Python, so
the two paths cannot drift apart.
"""

from __future__ import annotations

import os

import numpy as np

MASK32 = 0xFFFFFFFF

# Synthetic ADC noise source: classic 32-bit linear congruential generator.
# Samples are the top 16 bits of the state.
LCG_MULT = 1664525
LCG_INC = 1013904223

_FORCED_OFF = os.environ.get("DICESIM_NO_NUMBA", "") not in ("", "0")

try:
    if _FORCED_OFF:
        raise ImportError("numba disabled by DICESIM_NO_NUMBA")
    from numba import njit

    USING_NUMBA = True
except ImportError:
    njit = None
    USING_NUMBA = False


# ======================================================================
#  single-source sequential cores (jitted when numba is active)
# ======================================================================

def _feedback_sequence_core(seed, n, out):
    # successive outputs of the free-running xorshift, starting from seed
    x = seed & MASK32
    for i in range(n):
        x ^= x >> 7
        x = (x ^ (x << 9)) & MASK32
        x ^= x >> 13
        out[i] = x


def _advance_feedback_core(x, steps):
    x &= MASK32
    for _ in range(steps):
        x ^= x >> 7
        x = (x ^ (x << 9)) & MASK32
        x ^= x >> 13
    return x


def _stateless_sequence_core(lcg_state, n, out):
    # as-built pipeline: shift an LCG noise sample into the seed register,
    # output the xorshift of the register, once per step
    x = lcg_state & MASK32
    seed = 0
    for i in range(n):
        x = (LCG_MULT * x + LCG_INC) & MASK32
        seed = ((seed << 16) & MASK32) | ((x >> 16) & 0xFFFF)
        w = seed ^ (seed >> 7)
        w = (w ^ (w << 9)) & MASK32
        w ^= w >> 13
        out[i] = w


def _xorshift_batch_core(words, out):
    for i in range(words.shape[0]):
        x = np.int64(words[i]) & MASK32
        x ^= x >> 7
        x = (x ^ (x << 9)) & MASK32
        x ^= x >> 13
        out[i] = x


if USING_NUMBA:
    _feedback_sequence_impl = njit(cache=True)(_feedback_sequence_core)
    _advance_feedback_impl = njit(cache=True)(_advance_feedback_core)
    _stateless_sequence_impl = njit(cache=True)(_stateless_sequence_core)
    _xorshift_batch_impl = njit(cache=True)(_xorshift_batch_core)
else:
    _feedback_sequence_impl = _feedback_sequence_core
    _advance_feedback_impl = _advance_feedback_core
    _stateless_sequence_impl = _stateless_sequence_core
    _xorshift_batch_impl = _xorshift_batch_core


# ======================================================================
#  pure numpy vectorized variants (always importable)
# ======================================================================

def xorshift_batch_numpy(words) -> np.ndarray:
    """Vectorized xorshift of a uint32 array."""
    x = np.asarray(words, dtype=np.uint32).copy()
    x ^= x >> np.uint32(7)
    x ^= x << np.uint32(9)
    x ^= x >> np.uint32(13)
    return x


def _unshift_right_vec(y: np.ndarray, k: int) -> np.ndarray:
    x = np.zeros_like(y)
    s = 0
    while s < 32:
        x ^= y >> np.uint32(s)
        s += k
    return x


def _unshift_left_vec(y: np.ndarray, k: int) -> np.ndarray:
    x = np.zeros_like(y)
    s = 0
    while s < 32:
        x ^= y << np.uint32(s)
        s += k
    return x


def xorshift_inverse_batch_numpy(words) -> np.ndarray:
    """Vectorized exact inverse of xorshift_batch_numpy."""
    y = np.asarray(words, dtype=np.uint32)
    t2 = _unshift_right_vec(y, 13)
    t1 = _unshift_left_vec(t2, 9)
    return _unshift_right_vec(t1, 7)


def feedback_sequence_py(seed: int, n: int) -> np.ndarray:
    """Fallback feedback trajectory (plain Python loop; inherently sequential)."""
    out = np.empty(n, dtype=np.uint32)
    _feedback_sequence_core(seed, n, out)
    return out


def advance_feedback_py(x: int, steps: int) -> int:
    """Fallback feedback fast-forward."""
    return int(_advance_feedback_core(int(x), int(steps)))


def stateless_sequence_py(lcg_seed: int, n: int) -> np.ndarray:
    """Fallback LCG-fed stateless pipeline."""
    out = np.empty(n, dtype=np.uint32)
    _stateless_sequence_core(lcg_seed, n, out)
    return out


# ======================================================================
#  public names bound to the selected path
# ======================================================================

def feedback_sequence(seed: int, n: int) -> np.ndarray:
    """n successive outputs of the free-running xorshift, starting from seed."""
    out = np.empty(n, dtype=np.uint32)
    _feedback_sequence_impl(int(seed), int(n), out)
    return out


def advance_feedback(x: int, steps: int) -> int:
    """Apply the xorshift transform steps times to one word."""
    return int(_advance_feedback_impl(int(x), int(steps)))


def stateless_sequence(lcg_seed: int, n: int) -> np.ndarray:
    """n outputs of the as-built pipeline fed by the synthetic LCG source."""
    out = np.empty(n, dtype=np.uint32)
    _stateless_sequence_impl(int(lcg_seed), int(n), out)
    return out


def xorshift_batch(words) -> np.ndarray:
    """Element-wise xorshift of a uint32 array (jitted loop or numpy path)."""
    if USING_NUMBA:
        arr = np.ascontiguousarray(words, dtype=np.uint32)
        out = np.empty_like(arr)
        _xorshift_batch_impl(arr, out)
        return out
    return xorshift_batch_numpy(words)


def xorshift_inverse_batch(words) -> np.ndarray:
    """Element-wise exact inverse of xorshift_batch."""
    return xorshift_inverse_batch_numpy(words)


def warmup() -> None:
    """Trigger JIT compilation of every kernel (no-op on the fallback path)."""
    feedback_sequence(1, 2)
    advance_feedback(1, 2)
    stateless_sequence(1, 2)
    xorshift_batch(np.arange(4, dtype=np.uint32))
