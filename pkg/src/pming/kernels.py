"""Posting-list kernels.

Two interchangeable implementations of each kernel: numba-compiled loops
(a merge for single intersections and a byte-map probe for the all-pairs
count), and a pure numpy path.  Set ``PMING_DISABLE_NUMBA=1`` (or run without
numba installed) to use numpy.  Both paths return identical integers; the
test-suite checks this directly.

Posting lists are sorted, duplicate-free ``int64`` arrays of document
indices.  A batch of lists is passed in CSR form: ``indptr`` of length
``n + 1`` and the concatenated ``indices``.
"""

import os

import numpy as np

__all__ = [
    "NUMBA_AVAILABLE",
    "USE_NUMBA",
    "backend",
    "intersect_sorted",
    "intersect_count",
    "pairwise_cooccurrence",
    "to_csr",
]

try:
    import numba
    from numba import njit, prange

    NUMBA_AVAILABLE = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # omp first: thread safe, and skips the TBB version probe warning.
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

_disabled = os.environ.get("PMING_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = NUMBA_AVAILABLE and not _disabled


def backend():
    return "numba" if USE_NUMBA else "numpy"


def to_csr(postings):
    """Pack a sequence of posting arrays into ``(indptr, indices)``."""
    lengths = np.fromiter((len(p) for p in postings), dtype=np.int64, count=len(postings))
    indptr = np.zeros(len(postings) + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    if len(postings):
        indices = np.concatenate([np.asarray(p, dtype=np.int64) for p in postings])
    else:
        indices = np.empty(0, dtype=np.int64)
    return indptr, indices


# ---------------------------------------------------------------------------
# numpy path

def _intersect_sorted_numpy(a, b):
    return np.intersect1d(a, b, assume_unique=True)


def _intersect_count_numpy(a, b):
    return int(np.intersect1d(a, b, assume_unique=True).size)


_DOC_BLOCK = 1 << 16


def _pairwise_cooccurrence_numpy(indptr, indices, n_docs):
    n = len(indptr) - 1
    out = np.zeros((n, n), dtype=np.float64)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    # Dense incidence per block of documents; float64 matmul is exact below 2**53.
    for lo in range(0, max(n_docs, 1), _DOC_BLOCK):
        hi = min(lo + _DOC_BLOCK, n_docs)
        mask = (indices >= lo) & (indices < hi)
        if not mask.any():
            continue
        incidence = np.zeros((n, hi - lo), dtype=np.float64)
        incidence[rows[mask], indices[mask] - lo] = 1.0
        out += incidence @ incidence.T
    return np.rint(out).astype(np.int64)


# ---------------------------------------------------------------------------
# numba path

if NUMBA_AVAILABLE:

    @njit(cache=True, nogil=True)
    def _merge_count(a, a_lo, a_hi, b, b_lo, b_hi):
        i = a_lo
        j = b_lo
        count = 0
        while i < a_hi and j < b_hi:
            va = a[i]
            vb = b[j]
            if va == vb:
                count += 1
                i += 1
                j += 1
            elif va < vb:
                i += 1
            else:
                j += 1
        return count

    @njit(cache=True, nogil=True)
    def _intersect_count_numba(a, b):
        return _merge_count(a, 0, a.shape[0], b, 0, b.shape[0])

    @njit(cache=True, nogil=True)
    def _intersect_sorted_numba(a, b):
        out = np.empty(min(a.shape[0], b.shape[0]), dtype=np.int64)
        i = 0
        j = 0
        k = 0
        while i < a.shape[0] and j < b.shape[0]:
            if a[i] == b[j]:
                out[k] = a[i]
                k += 1
                i += 1
                j += 1
            elif a[i] < b[j]:
                i += 1
            else:
                j += 1
        return out[:k]

    @njit(cache=True, parallel=True, nogil=True)
    def _pairwise_cooccurrence_numba(indptr, indices, n_docs):
        # Mark the documents of list i in a byte map, then probe it with each
        # later list.  Branch-free probing beats a merge loop on dense lists.
        n = indptr.shape[0] - 1
        out = np.zeros((n, n), dtype=np.int64)
        for i in prange(n):
            mark = np.zeros(n_docs, dtype=np.uint8)
            for p in range(indptr[i], indptr[i + 1]):
                mark[indices[p]] = 1
            out[i, i] = indptr[i + 1] - indptr[i]
            for j in range(i + 1, n):
                c = 0
                for p in range(indptr[j], indptr[j + 1]):
                    c += mark[indices[p]]
                out[i, j] = c
        for i in range(n):
            for j in range(i + 1, n):
                out[j, i] = out[i, j]
        return out


def _as_postings(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def intersect_sorted(a, b):
    """Sorted intersection of two posting lists."""
    a, b = _as_postings(a), _as_postings(b)
    if USE_NUMBA:
        return _intersect_sorted_numba(a, b)
    return _intersect_sorted_numpy(a, b)


def intersect_count(a, b):
    """Size of the intersection of two posting lists."""
    a, b = _as_postings(a), _as_postings(b)
    if USE_NUMBA:
        return int(_intersect_count_numba(a, b))
    return _intersect_count_numpy(a, b)


def pairwise_cooccurrence(postings, n_docs):
    """Symmetric matrix of intersection sizes; the diagonal holds list lengths."""
    indptr, indices = to_csr(postings)
    if USE_NUMBA:
        return _pairwise_cooccurrence_numba(indptr, indices, int(n_docs))
    return _pairwise_cooccurrence_numpy(indptr, indices, int(n_docs))
