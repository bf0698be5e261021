"""Hot integer kernels with a numba path and a pure-numpy fallback.

Set ``STCONN_DISABLE_NUMBA=1`` to force the numpy implementations.  Both
paths return identical arrays; the test suite checks this directly.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("STCONN_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False


def _component_labels_np(n, eu, ev, present):
    B, m = present.shape
    labels = np.tile(np.arange(n, dtype=np.int32), (B, 1))
    if m == 0 or n == 0:
        return labels
    big = np.int32(n)
    rows = np.repeat(np.arange(B), m)
    cu = np.tile(eu, B)
    cv = np.tile(ev, B)
    while True:
        low = np.minimum(labels[:, eu], labels[:, ev])
        low = np.where(present, low, big).ravel()
        new = labels.copy()
        np.minimum.at(new, (rows, cu), low)
        np.minimum.at(new, (rows, cv), low)
        # pointer jumping; every label is a vertex whose own label is <= it
        new = np.take_along_axis(new, new, axis=1)
        if np.array_equal(new, labels):
            return labels
        labels = new


def _min_orbit_codes_np(bits, perm_maps, chunk=4096):
    B, m = bits.shape
    if B == 0:
        return np.zeros(0, dtype=np.int64)
    if m == 0:
        return np.zeros(B, dtype=np.int64)
    weights = (np.int64(1) << (m - 1 - perm_maps.astype(np.int64))).T  # (m, P)
    out = np.empty(B, dtype=np.int64)
    for lo in range(0, B, chunk):
        block = bits[lo:lo + chunk].astype(np.int64)
        out[lo:lo + chunk] = (block @ weights).min(axis=1)
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _find(parent, i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    @njit(cache=True)
    def _component_labels_nb(n, eu, ev, present):
        B, m = present.shape
        out = np.empty((B, n), np.int32)
        parent = np.empty(n, np.int32)
        for b in range(B):
            for i in range(n):
                parent[i] = i
            for j in range(m):
                if present[b, j]:
                    a = _find(parent, eu[j])
                    c = _find(parent, ev[j])
                    if a < c:
                        parent[c] = a
                    elif c < a:
                        parent[a] = c
            for i in range(n):
                out[b, i] = _find(parent, i)
        return out

    @njit(cache=True)
    def _min_orbit_codes_nb(bits, perm_maps):
        B, m = bits.shape
        P = perm_maps.shape[0]
        out = np.empty(B, np.int64)
        for b in range(B):
            best = np.int64(-1)
            for p in range(P):
                code = np.int64(0)
                for j in range(m):
                    if bits[b, j]:
                        code |= np.int64(1) << (m - 1 - perm_maps[p, j])
                if best < 0 or code < best:
                    best = code
            out[b] = best if best >= 0 else 0
        return out


def component_labels(n: int, eu, ev, present, *, backend: str | None = None) -> np.ndarray:
    """Connected-component labels for a batch of edge subsets.

    ``present`` has shape ``(B, m)``; row ``b`` selects the edges of graph ``b``.
    Returns ``(B, n)`` int32 labels where each vertex carries the smallest
    vertex id of its component.
    """
    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    present = np.ascontiguousarray(present, dtype=np.bool_)
    if present.ndim != 2 or present.shape[1] != eu.shape[0]:
        raise ValueError("present must have shape (B, m)")
    if _pick(backend) == "numba":
        return _component_labels_nb(np.int64(n), eu, ev, present)
    return _component_labels_np(n, eu, ev, present)


def min_orbit_codes(bits, perm_maps, *, backend: str | None = None) -> np.ndarray:
    """Smallest permuted code of each bit-row under a set of edge permutations.

    A row ``x`` is read as the integer with ``x[0]`` most significant; a
    permutation row ``p`` sends bit ``j`` to position ``p[j]``.
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    perm_maps = np.ascontiguousarray(perm_maps, dtype=np.int64)
    if bits.shape[1] > 62:
        raise ValueError("codes limited to 62 bits")
    if _pick(backend) == "numba":
        return _min_orbit_codes_nb(bits, perm_maps)
    return _min_orbit_codes_np(bits, perm_maps)


def _pick(backend):
    if backend is None:
        return "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable or disabled")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def default_backend() -> str:
    return _pick(None)
