"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``TWOCAT_PURE=1`` to force the fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("TWOCAT_PURE") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def use(backend):
    """Switch kernels at runtime ("python" or "cython"); used by the benchmark."""
    global _impl, BACKEND
    if backend == "python":
        _impl, BACKEND = _pykernels, "python"
    else:
        from . import _ckernels
        _impl, BACKEND = _ckernels, "cython"


def csr_post(table):
    """Rows of ``y`` with ``table[y, x] >= 0``, indexed by ``x``."""
    return _csr(table.T)


def csr_pre(table):
    """Rows of ``k`` with ``table[x, k] >= 0``, indexed by ``x``."""
    return _csr(table)


def _csr(mat):
    mask = mat >= 0
    counts = mask.sum(axis=1)
    ptr = np.zeros(len(counts) + 1, dtype=np.intc)
    np.cumsum(counts, out=ptr[1:])
    idx = np.nonzero(mask)[1].astype(np.intc)
    return ptr, idx


def associativity_violations(table, limit=1000):
    table = np.ascontiguousarray(table, dtype=np.intc)
    ptr, idx = csr_post(table)
    return _impl.associativity_violations(table, ptr, idx, limit)


def interchange_violations(vcomp, hcomp, limit=1000):
    vcomp = np.ascontiguousarray(vcomp, dtype=np.intc)
    hcomp = np.ascontiguousarray(hcomp, dtype=np.intc)
    vp, vi = csr_post(vcomp)
    hp, hi = csr_post(hcomp)
    return _impl.interchange_violations(vcomp, hcomp, vp, vi, hp, hi, limit)


def congruence_closure(table, pairs):
    """Representative index per morphism for the congruence generated by ``pairs``."""
    table = np.ascontiguousarray(table, dtype=np.intc)
    pp, pi = csr_post(table)
    qp, qi = csr_pre(table)
    arr = np.asarray(list(pairs), dtype=np.intc).reshape(-1, 2)
    return list(_impl.congruence_closure(table, pp, pi, qp, qi, np.ascontiguousarray(arr)))
