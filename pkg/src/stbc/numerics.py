"""Complex/real linearization operators and an unpivoted Gram-Schmidt QR.

The interleaved real picture maps a complex scalar x to the pair
[Re x, Im x] and a complex matrix entry to a 2x2 rotation-like block, so
that complex products become real matrix products:

    tilde(A x)   = check(A) @ tilde(x)
    check(B C)   = check(B) @ check(C)
    bar_check(x) @ tilde(y) = tilde(-(x * conj(y)))

Column order in the QR is semantically significant (the zero pattern of R
drives the reduced-complexity decoder), so no pivoting is ever applied.
"""

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient

#: Default floor on orthogonalized column norms before a column is declared
#: rank deficient.
NORM_FLOOR = 1e-12

#: Relative threshold below which an orthogonalization coefficient is stored
#: as an exact structural zero.
ZERO_TOL = 1e-9


def tilde(x):
    """[Re x, Im x] for a complex scalar."""
    x = complex(x)
    return np.array([x.real, x.imag])


def tilde_vec(x):
    """Interleaved [Re x1, Im x1, Re x2, Im x2, ...] for a complex vector."""
    x = np.asarray(x, dtype=complex).ravel()
    out = np.empty(2 * x.size)
    out[0::2] = x.real
    out[1::2] = x.imag
    return out


def untilde_vec(v):
    """Inverse of tilde_vec."""
    v = np.asarray(v, dtype=float).ravel()
    return v[0::2] + 1j * v[1::2]


def check(x):
    """2x2 real block [[Re, -Im], [Im, Re]] of a complex scalar."""
    x = complex(x)
    return np.array([[x.real, -x.imag], [x.imag, x.real]])


def bar_check(x):
    """2x2 real block [[-Re, -Im], [-Im, Re]] of a complex scalar."""
    x = complex(x)
    return np.array([[-x.real, -x.imag], [-x.imag, x.real]])


def check_mat(a):
    """Blockwise extension of check() to a complex matrix (2m x 2n real)."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, n = a.shape
    out = np.empty((2 * m, 2 * n))
    out[0::2, 0::2] = a.real
    out[0::2, 1::2] = -a.imag
    out[1::2, 0::2] = a.imag
    out[1::2, 1::2] = a.real
    return out


def vec(x):
    """Column-major stacking of a matrix into a vector."""
    return np.asarray(x).ravel(order="F")


def herm_inner(a, b):
    """Hermitian inner product <a, b> = a^T conj(b)."""
    return np.vdot(b, a)


@dataclass(frozen=True)
class QRFactors:
    """QR factors of an equivalent-channel matrix, in original column order.

    q has orthonormal columns, r is upper triangular with nonnegative real
    diagonal; entries below the diagonal are exact zeros.
    """

    q: np.ndarray
    r: np.ndarray
    col_norm_floor: float


def gram_schmidt_qr(f, norm_floor=NORM_FLOOR, zero_tol=ZERO_TOL):
    """Classical Gram-Schmidt QR of f without column pivoting.

    R[i, j] = <f_j, e_i> for i < j and R[i, i] = ||d_i||, where d_i is the
    i-th orthogonalized column.  One re-orthogonalization pass (CGS2) is run
    for numerical robustness; coefficients whose magnitude falls below
    zero_tol times the column norm are stored as exact zeros, so structural
    orthogonality shows up as literal zeros in R.

    Raises RankDeficient(i) when column i collapses below norm_floor.
    """
    f = np.atleast_2d(np.asarray(f))
    if not np.iscomplexobj(f):
        f = f.astype(float)
    m, n = f.shape
    q = np.zeros((m, n), dtype=complex if np.iscomplexobj(f) else float)
    r = np.zeros((n, n), dtype=q.dtype)
    for i in range(n):
        d = f[:, i].copy()
        coeff = np.zeros(i, dtype=q.dtype)
        for _ in range(2):  # CGS2
            proj = q[:, :i].conj().T @ d
            coeff += proj
            d = d - q[:, :i] @ proj
        col_norm = np.linalg.norm(f[:, i])
        coeff[np.abs(coeff) < zero_tol * max(col_norm, norm_floor)] = 0.0
        nrm = np.linalg.norm(d)
        if nrm < norm_floor:
            raise RankDeficient(i)
        r[:i, i] = coeff
        r[i, i] = nrm
        q[:, i] = d / nrm
    return QRFactors(q=q, r=r, col_norm_floor=norm_floor)
