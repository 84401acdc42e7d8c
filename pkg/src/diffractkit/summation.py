"""Deterministic pairwise (tree) reductions.

Every windowed sum in the package goes through :func:`pairwise_sum`. The tree
is fixed by array index alone: level ``j`` adds neighbours ``2i`` and
``2i + 1`` of level ``j - 1``, and an odd tail is padded with an exact zero.
The result therefore does not depend on chunking, threading or the numpy
build, and rounding error grows like ``O(log N)`` rather than ``O(N)``.
"""

import numpy as np


def pairwise_sum(values, axis=-1):
    """Sum ``values`` along ``axis`` with a fixed binary tree.

    Parameters
    ----------
    values : array_like
        Real or complex data.
    axis : int
        Axis to reduce.

    Returns
    -------
    ndarray or scalar
        Same dtype family as ``values``; an empty axis sums to zero.
    """
    a = np.moveaxis(np.asarray(values), axis, -1)
    if a.shape[-1] == 0:
        out = np.zeros(a.shape[:-1], dtype=np.result_type(a.dtype, np.float64))
        return out[()] if out.ndim == 0 else out
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)
            a = np.concatenate([a, pad], axis=-1)
        a = a[..., 0::2] + a[..., 1::2]
    out = a[..., 0]
    return out[()] if out.ndim == 0 else out


def segment_sums(values, starts):
    """Pairwise sums over contiguous segments.

    ``starts`` holds the first index of each segment (strictly increasing,
    beginning at 0); segment ``i`` runs up to ``starts[i + 1]``.
    """
    values = np.asarray(values)
    starts = np.asarray(starts, dtype=np.int64)
    if starts.size == 0:
        return np.zeros(0, dtype=values.dtype)
    ends = np.append(starts[1:], values.shape[0])
    sizes = ends - starts
    out = np.empty(starts.size, dtype=np.result_type(values.dtype, np.float64))
    single = sizes == 1
    out[single] = values[starts[single]]
    for i in np.flatnonzero(~single):
        out[i] = pairwise_sum(values[starts[i]:ends[i]])
    return out


def pairwise_mean(values):
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("mean of an empty array")
    return pairwise_sum(values) / values.size
