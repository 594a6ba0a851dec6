"""Shared helpers for the test suite."""

import numpy as np


def central_gradient(f, w, h=1e-6):
    """Central-difference gradient with a step scaled to each coordinate."""
    g = np.empty_like(w)
    for i in range(w.size):
        step = h * max(1.0, abs(w[i]))
        e = np.zeros_like(w)
        e[i] = step
        g[i] = (f(w + e) - f(w - e)) / (2 * step)
    return g


def rel_gap(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def monotone(trace, rel=1e-9):
    t = np.asarray(trace, dtype=float)
    return bool(np.all(np.diff(t) <= rel * np.abs(t[:-1])))
