"""Real, complex, quaternion and octonion arithmetic via multiplication tables.

Each algebra of degree ``deg`` in {1, 2, 4, 8} is represented by a structure
tensor ``T`` of shape (deg, deg, deg) with

    u_i * u_j = sum_k T[i, j, k] u_k

for the orthonormal units u_0 = 1, u_1, ..., u_{deg-1}.  The tables are
generated by the Cayley-Dickson doubling

    (a, b)(c, d) = (ac - conj(d) b,  da + b conj(c))

starting from the reals, which yields the standard complex numbers,
Hamilton quaternions (u_1 u_2 = u_3) and octonions.  All four are
composition algebras: |xy| = |x| |y|.
"""

from functools import lru_cache

import numpy as np

DEGREES = (1, 2, 4, 8)


def _double(table: np.ndarray) -> np.ndarray:
    m = table.shape[0]
    out = np.zeros((2 * m, 2 * m, 2 * m))
    conj = np.ones(m)
    conj[1:] = -1.0
    eye = np.eye(m)
    for i in range(2 * m):
        a, b = (eye[i], np.zeros(m)) if i < m else (np.zeros(m), eye[i - m])
        for j in range(2 * m):
            c, d = (eye[j], np.zeros(m)) if j < m else (np.zeros(m), eye[j - m])
            ac = np.einsum("i,j,ijk->k", a, c, table)
            db = np.einsum("i,j,ijk->k", d * conj, b, table)
            da = np.einsum("i,j,ijk->k", d, a, table)
            bc = np.einsum("i,j,ijk->k", b, c * conj, table)
            out[i, j, :m] = ac - db
            out[i, j, m:] = da + bc
    return out


@lru_cache(maxsize=None)
def mult_table(deg: int) -> np.ndarray:
    """Structure tensor of the degree-``deg`` composition algebra (read-only)."""
    if deg not in DEGREES:
        raise ValueError(f"degree must be one of {DEGREES}, got {deg}")
    table = np.ones((1, 1, 1))
    while table.shape[0] < deg:
        table = _double(table)
    table.setflags(write=False)
    return table


def conjugate(x: np.ndarray) -> np.ndarray:
    """Conjugation: negate every unit except the real one (last axis)."""
    out = x.copy()
    out[..., 1:] *= -1.0
    return out


def matmul(x: np.ndarray, y: np.ndarray, deg: int) -> np.ndarray:
    """Matrix product of (r, r, deg) arrays with entries in the algebra.

    Each entry product is a single binary multiplication, so the result is
    well defined even for the non-associative octonions.
    """
    return np.einsum("ajd,jbe,dec->abc", x, y, mult_table(deg))
