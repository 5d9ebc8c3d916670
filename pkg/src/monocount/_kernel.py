"""Compiled traversal for formulas with at most 64 variables.

Same tree, same visiting order and same counters as ``counter._Walk``, but
with an explicit stack over uint64 sign masks.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_KERNEL_VARS = 64


@njit(cache=True)
def walk(cpos, cneg, n, prune, head, head_cap, roots):
    """Visit the subtrees under the root children listed in ``roots``.

    Returns (odd, even, nodes, pruned) where odd/even are per-nu tallies.
    """
    m = cpos.shape[0]
    odd = np.zeros(n + 1, dtype=np.int64)
    even = np.zeros(n + 1, dtype=np.int64)
    allowed = np.zeros(m, dtype=np.bool_)
    for r in roots:
        allowed[r] = True
    st_pos = np.zeros(m + 1, dtype=np.uint64)
    st_neg = np.zeros(m + 1, dtype=np.uint64)
    st_next = np.zeros(m + 1, dtype=np.int64)
    st_odd = np.zeros(m + 1, dtype=np.bool_)
    nodes = 0
    pruned = 0
    top = 0  # stack slot 0 is the empty sub-formula
    while top >= 0:
        pos = st_pos[top]
        neg = st_neg[top]
        j = st_next[top]
        while j < m:
            if (cpos[j] & neg) == 0 and (cneg[j] & pos) == 0 and (top > 0 or allowed[j]):
                break
            j += 1
        if j >= m:
            top -= 1
            continue
        st_next[top] = j + 1
        npos = pos | cpos[j]
        nneg = neg | cneg[j]
        union = npos | nneg
        nu = 0
        while union:
            union &= union - np.uint64(1)
            nu += 1
        if j < head and nu >= head_cap:
            pruned += 1
            continue
        nodes += 1
        child_odd = not st_odd[top]
        if prune:
            hit = False
            for i in range(j + 1, m):
                if (cpos[i] & ~npos) == 0 and (cneg[i] & ~nneg) == 0:
                    hit = True
                    break
            if hit:
                pruned += 1
                continue
        if child_odd:
            odd[nu] += 1
        else:
            even[nu] += 1
        top += 1
        st_pos[top] = npos
        st_neg[top] = nneg
        st_next[top] = j + 1
        st_odd[top] = child_odd
    return odd, even, nodes, pruned


def as_uint64(masks) -> np.ndarray:
    return np.array(masks, dtype=np.uint64)
