"""Shared fixtures and the naive oracles the fast implementations are
checked against.

The oracles here are written as plain Python loops on purpose: they share
no code path with the vectorized library routines, so agreement between
the two is meaningful.
"""

import itertools

import numpy as np
import pytest

from qsym import build_space


def subspace(space, indices):
    """The restriction of a space to a tuple of point indices."""
    idx = list(indices)
    labels = [space.labels[i] for i in idx]
    sub = np.asarray(space.dist)[np.ix_(idx, idx)]
    return build_space(labels, sub)


def naive_triangle_margin(space, phi):
    """min over x != y, all z of Phi(d(x,z), d(y,z)) - d(x,y), by loops."""
    d = np.asarray(space.dist)
    n = space.n
    best = np.inf
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            for z in range(n):
                m = float(np.asarray(phi(d[x, z], d[y, z]))) - d[x, y]
                if m < best:
                    best = m
    return best


def naive_minimal_K(space):
    """max over x != y, all z of d(x,y) / (d(x,z) + d(z,y)); 0 for n < 3."""
    d = np.asarray(space.dist)
    n = space.n
    if n < 3:
        return 0.0
    best = 0.0
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            for z in range(n):
                q = d[x, y] / (d[x, z] + d[z, y])
                if q > best:
                    best = float(q)
    return best


def naive_envelope(f):
    """Realized (t, max ratio at or below t) pairs as two sorted lists."""
    d = np.asarray(f.domain.dist)
    r = f.image_matrix()
    n = f.domain.n
    pts = []
    for x in range(n):
        for a in range(n):
            if a == x:
                continue
            for b in range(n):
                if b == x:
                    continue
                pts.append((d[x, a] / d[x, b], r[x, a] / r[x, b]))
    pts.sort(key=lambda p: p[0])
    ts, hs = [], []
    running = 0.0
    for t, q in pts:
        running = max(running, q)
        if ts and t == ts[-1]:
            hs[-1] = running
        else:
            ts.append(t)
            hs.append(running)
    return ts, hs


def naive_ptolemaic(space):
    """Worst Ptolemy margin (rhs - lhs) over all quadruples, by loops."""
    d = np.asarray(space.dist)
    n = space.n
    worst = np.inf
    for q in itertools.combinations(range(n), 4):
        x, y, z, t = q
        pairs = [
            (d[x, z] * d[y, t], d[x, y] * d[z, t] + d[y, z] * d[x, t]),
            (d[x, y] * d[z, t], d[x, z] * d[y, t] + d[y, z] * d[x, t]),
            (d[x, t] * d[y, z], d[x, y] * d[z, t] + d[x, z] * d[y, t]),
        ]
        for lhs, rhs in pairs:
            worst = min(worst, rhs - lhs)
    return worst


def naive_betweenness(space, tol=1e-9):
    """Sorted (x, y, z) with x < z, y between them, by direct loops."""
    d = np.asarray(space.dist)
    n = space.n
    out = []
    for x in range(n):
        for z in range(x + 1, n):
            for y in range(n):
                if y == x or y == z:
                    continue
                if abs(d[x, z] - (d[x, y] + d[y, z])) <= tol * d[x, z]:
                    out.append((x, y, z))
    out.sort()
    return out


@pytest.fixture
def line3():
    from qsym import collinear_space

    return collinear_space([0.0, 1.0, 3.0])


@pytest.fixture
def line4():
    from qsym import collinear_space

    return collinear_space([0.0, 1.0, 3.0, 6.0])
