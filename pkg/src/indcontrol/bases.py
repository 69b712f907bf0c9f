"""Standard operator bases: Pauli matrices and generalized Gell-Mann matrices."""

import numpy as np

from .errors import ValidationError

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(axis, convention="hermitian"):
    """Pauli matrix along ``axis``.

    ``convention="hermitian"`` gives the usual physics matrices.
    ``convention="su2"`` gives ``1j`` times them, the skew-Hermitian form in
    which e.g. sigma_z reads ``diag(i, -i)``. Mixing the two is the classic
    source of stray factors of ``i`` in coupling terms, so callers must pick
    one explicitly when it matters.
    """
    try:
        p = _PAULI[str(axis).lower()]
    except KeyError:
        raise ValidationError(f"invalid Pauli axis {axis!r}; use 'x', 'y' or 'z'") from None
    if convention == "hermitian":
        return p.copy()
    if convention == "su2":
        return 1j * p
    raise ValidationError(f"unknown Pauli convention {convention!r}")


def gell_mann_basis(n):
    """``1j`` times the generalized Gell-Mann matrices: a basis of su(n).

    Order: for each pair ``j < k`` (lexicographic) the symmetric then the
    antisymmetric off-diagonal matrix, followed by the ``n - 1`` diagonal
    ones. Each element has squared Hilbert-Schmidt norm 2; for ``n = 2``
    this is ``1j * (sigma_x, sigma_y, sigma_z)``.
    """
    if n < 2:
        raise ValidationError("gell_mann_basis needs n >= 2")
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=np.complex128)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k], a[k, j] = -1j, 1j
            out += [1j * s, 1j * a]
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1
        d[l] = -l
        out.append(1j * np.sqrt(2.0 / (l * (l + 1))) * np.diag(d).astype(np.complex128))
    return out
