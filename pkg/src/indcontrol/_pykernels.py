"""Pure-Python counterparts of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def _mgs_pass(q, k, v):
    for r in range(k):
        v -= (q[r] @ v) * q[r]


def project_out(q, k, v):
    """Remove from ``v`` (in place) its component along rows ``q[:k]``.

    Modified Gram-Schmidt with one re-orthogonalization pass. Returns the
    norm of what is left.
    """
    _mgs_pass(q, k, v)
    _mgs_pass(q, k, v)
    return float(np.sqrt(v @ v))


_IU = {}


def _upper(n):
    if n not in _IU:
        _IU[n] = np.triu_indices(n, 1)
    return _IU[n]


def bracket_coords(a, b, out, traceless=False):
    """Coordinates of ``[a_i, b_j]`` for every pair, written to row ``i * len(b) + j``.

    Only the skew-Hermitian part of each bracket is kept; with ``traceless``
    its trace is dropped too.
    """
    pa, n = a.shape[0], a.shape[1]
    pb = b.shape[0]
    if b.shape[1] != n or out.shape != (pa * pb, n * n):
        raise ValueError("shape mismatch in bracket_coords")
    x, y = a[:, None], b[None, :]
    c = (x @ y - y @ x).reshape(pa * pb, n, n)
    h = -0.5j * (c - c.conj().transpose(0, 2, 1))
    d = h.diagonal(axis1=1, axis2=2).real
    if traceless:
        d = d - d.mean(axis=1, keepdims=True)
    iu = _upper(n)
    off = np.sqrt(2.0) * h[:, iu[0], iu[1]]
    out[:, :n] = d
    out[:, n::2] = off.real
    out[:, n + 1 :: 2] = off.imag
