"""Compiled exhaustive search over grid unions of up to three intervals.

Candidates are index tuples ``(a1, b1, a2, b2, a3, b3)`` on a grid. With
``seg[l, a] = G(x[a + l]) - G(x[a])`` the potential energy of a candidate is
the sum of its ``seg`` entries, accumulated left to right.

The innermost loop over the last interval's start is split at the origin so
that the convexified competitor's energy is constant on each sub-range; the
sub-range scans are plain min/count reductions. The outer loop over ``a1``
runs in parallel; each iteration keeps its own best, and the reduction is
done in index order so the result does not depend on scheduling.
"""

import numba
import numpy as np
from numba import njit, prange

_NONE = np.iinfo(np.int64).max

# the bundled TBB is too old for numba and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True)
def _lex_less(e, cand, best_e, best):
    if e < best_e:
        return True
    if e > best_e:
        return False
    for i in range(cand.shape[0]):
        if cand[i] < best[i]:
            return True
        if cand[i] > best[i]:
            return False
    return False


@njit(cache=True)
def _neg_steps(a, length, z):
    n = z - a
    if n < 0:
        return 0
    if n > length:
        return length
    return n


@njit(cache=True, fastmath={"nnan", "ninf", "nsz"})
def _scan(row, lo, hi, threshold):
    """min of row[lo:hi] and how many entries are <= threshold."""
    mn = np.inf
    bad = 0
    for a in range(lo, hi):
        v = row[a]
        mn = min(mn, v)
        bad += v <= threshold
    return mn, bad


@njit(cache=True)
def _last(seg, prefix, base, l_last, lo, hi, z, conv, n_prefix, k, cand, state, best, tallies):
    """Score every final interval of length ``l_last`` starting in [lo, hi)."""
    if hi <= lo:
        return
    row = seg[l_last]
    tallies[0] += hi - lo
    tallies[1] += hi - lo
    # the three ranges: wholly left of 0, straddling 0, wholly right of 0
    r1 = min(max(z - l_last + 1, lo), hi)
    r2 = min(max(z, lo), hi)
    mn = np.inf
    if r1 > lo:
        c = conv[n_prefix + l_last]
        m, b = _scan(row, lo, r1, c - base)
        tallies[2] += b
        mn = min(mn, m)
        state[1] = min(state[1], base + m - c)
    for a in range(r1, r2):
        c = conv[n_prefix + z - a]
        d = (base + row[a]) - c
        if d <= 0.0:
            tallies[2] += 1
        state[1] = min(state[1], d)
        mn = min(mn, row[a])
    if hi > r2:
        c = conv[n_prefix]
        m, b = _scan(row, r2, hi, c - base)
        tallies[2] += b
        mn = min(mn, m)
        state[1] = min(state[1], base + m - c)
    if base + mn > state[0]:
        return
    # rescan for the leftmost minimizer in this block
    for a in range(lo, hi):
        e = base + row[a]
        if e <= state[0]:
            cand[0] = k
            for i in range(prefix.shape[0]):
                cand[1 + i] = prefix[i]
            cand[1 + prefix.shape[0]] = a
            cand[2 + prefix.shape[0]] = a + l_last
            for i in range(3 + prefix.shape[0], 7):
                cand[i] = -1
            if _lex_less(e, cand, state[0], best):
                state[0] = e
                best[:] = cand


@njit(parallel=True, cache=True)
def search(gt, n_grid, length, k_max, z, conv):
    """Return per-``a1`` bests and tallies.

    ``conv[n]`` is the energy of the interval ``(-n, length - n)`` in grid
    steps, the convexified competitor of any candidate with ``n`` steps left
    of the origin. Rows of ``best_idx`` are ``[k, a1, b1, a2, b2, a3, b3]``;
    tally columns are candidates, dominance checks and violations;
    ``margins`` holds the smallest energy excess over the convexification.
    """
    n_rows = n_grid + 1
    seg = np.full((length + 1, n_rows), np.inf)
    for l in range(1, length + 1):
        for a in range(0, n_rows - l):
            seg[l, a] = gt[a + l] - gt[a]

    best_e = np.full(n_rows, np.inf)
    best_idx = np.full((n_rows, 7), _NONE, dtype=np.int64)
    tallies = np.zeros((n_rows, 3), dtype=np.int64)
    margins = np.full(n_rows, np.inf)

    for a1 in prange(n_rows):
        cand = np.empty(7, dtype=np.int64)
        best = np.full(7, _NONE, dtype=np.int64)
        state = np.array([np.inf, np.inf])  # best energy, smallest margin
        tal = np.zeros(3, dtype=np.int64)
        prefix2 = np.empty(2, dtype=np.int64)
        prefix4 = np.empty(4, dtype=np.int64)
        # k = 1
        if a1 + length <= n_grid:
            e = 2.0 + seg[length, a1]
            tal[0] += 1
            cand[0] = 1
            cand[1] = a1
            cand[2] = a1 + length
            for i in range(3, 7):
                cand[i] = -1
            if _lex_less(e, cand, state[0], best):
                state[0] = e
                best[:] = cand
        if k_max >= 2:
            for l1 in range(1, length):
                b1 = a1 + l1
                if b1 + 1 + (length - l1) > n_grid:
                    break
                prefix2[0] = a1
                prefix2[1] = b1
                _last(seg, prefix2, 4.0 + seg[l1, a1], length - l1, b1 + 1, n_grid - (length - l1) + 1,
                      z, conv, _neg_steps(a1, l1, z), 2, cand, state, best, tal)
        if k_max >= 3:
            for l1 in range(1, length - 1):
                b1 = a1 + l1
                if b1 + 1 + (length - l1) + 1 > n_grid:
                    break
                p1 = 6.0 + seg[l1, a1]
                n1 = _neg_steps(a1, l1, z)
                for a2 in range(b1 + 1, n_grid + 1):
                    if a2 + (length - l1) + 1 > n_grid:
                        break
                    for l2 in range(1, length - l1):
                        b2 = a2 + l2
                        l3 = length - l1 - l2
                        prefix4[0] = a1
                        prefix4[1] = b1
                        prefix4[2] = a2
                        prefix4[3] = b2
                        _last(seg, prefix4, p1 + seg[l2, a2], l3, b2 + 1, n_grid - l3 + 1,
                              z, conv, n1 + _neg_steps(a2, l2, z), 3, cand, state, best, tal)
        best_e[a1] = state[0]
        best_idx[a1, :] = best
        tallies[a1, :] = tal
        margins[a1] = state[1]
    return best_e, best_idx, tallies, margins


def reduce_rows(best_e, best_idx):
    """Deterministic argmin: lowest energy, then fewer intervals, then leftmost endpoints."""
    found = None
    for row in range(len(best_e)):
        if not np.isfinite(best_e[row]):
            continue
        key = (float(best_e[row]), tuple(int(v) for v in best_idx[row]))
        if found is None or key < found:
            found = key
    return found


def summarize(tallies, margins):
    return int(tallies[:, 0].sum()), int(tallies[:, 1].sum()), int(tallies[:, 2].sum()), float(margins.min())


def set_threads(n):
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
