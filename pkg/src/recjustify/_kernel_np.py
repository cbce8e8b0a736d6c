"""Vectorized power-iteration kernel, used when the compiled extension is absent."""

from __future__ import annotations

import numpy as np


def power_iterate(arc_src, arc_dst, arc_prob, v, damping, tol, max_iter):
    """Fixed point of a damped random walk with restart distribution ``v``.

    Arcs carry transition probabilities normalized per source node. Mass
    sitting at nodes with no outgoing arcs is re-seeded through ``v``, so the
    iterate keeps unit total mass. Convergence is declared when the L1 change
    between consecutive iterates drops below ``tol``.

    Returns ``(scores, iterations_used, converged)``.
    """
    n = v.shape[0]
    s = v.copy()
    base_restart = (1.0 - damping) * v
    for it in range(1, max_iter + 1):
        pushed = np.bincount(arc_dst, weights=s[arc_src] * arc_prob, minlength=n)
        absorbed = 1.0 - pushed.sum()
        nxt = damping * pushed + base_restart + (damping * absorbed) * v
        delta = np.abs(nxt - s).sum()
        s = nxt
        if delta < tol:
            return s, it, True
    return s, max_iter, False
