"""Construction of the linear space-time block codes.

Every code is represented by its dispersion matrices {A_l, B_l}, obtained by
probing an encoding function on basis symbol vectors:

    X = sum_l (a_l * A_l + 1j * b_l * B_l),   s_l = a_l + 1j * b_l

From the dispersion matrices we derive the real generator matrix (columns
tilde(vec(A_l)), tilde(vec(1j*B_l))), the complex generator when one exists,
and a per-time-slot conjugation mask used by the complex-domain decoder for
codes whose codeword columns are built from conjugated symbols (Alamouti and
quasi-orthogonal patterns).
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    NormalizationViolated,
    OutOfRange,
    UnitarityViolated,
)
from .numerics import tilde_vec, vec

_QAM_SIZES = (4, 16, 64)


@dataclass(frozen=True)
class Constellation:
    """Square M-QAM with odd-integer coordinates.

    points lie on the sqrt(M) x sqrt(M) grid over {+/-1, +/-3, ...}^2,
    ordered lexicographically by (real, imag).  e_s is the average symbol
    energy (2, 10, 42 for 4/16/64-QAM).
    """

    m: int
    points: np.ndarray
    e_s: float

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=complex))


def make_constellation(m):
    if m not in _QAM_SIZES:
        raise OutOfRange(f"unsupported constellation size {m}")
    side = int(round(np.sqrt(m)))
    pam = np.arange(-(side - 1), side, 2)
    pts = np.array([complex(a, b) for a in pam for b in pam])
    return Constellation(m=m, points=pts, e_s=float(np.mean(np.abs(pts) ** 2)))


@dataclass(frozen=True)
class LinearCode:
    """A linear STBC: dispersion matrices plus derived generators.

    conj_slots marks the time slots whose codeword column is antilinear in
    the symbols (entries are conjugates); conjugating the corresponding rows
    of vec(Y) makes the symbol-to-observation map complex linear even when
    no complex generator matrix exists.
    """

    name: str
    n_t: int
    t: int
    kappa: int
    disp_a: np.ndarray  # (kappa, n_t, t)
    disp_b: np.ndarray  # (kappa, n_t, t)
    real_gen: np.ndarray  # (2 n_t t, 2 kappa)
    complex_gen: np.ndarray | None  # (n_t t, kappa), present iff real_gen = check(G)
    conj_slots: tuple | None  # per-slot conjugation mask, or None

    @property
    def rate(self):
        return self.kappa / self.t

    def encode(self, s):
        return encode(self, s)


def encode(code, s):
    """Codeword matrix X for symbol vector s via the canonical decomposition."""
    s = np.asarray(s, dtype=complex).ravel()
    if s.size != code.kappa:
        raise DimensionMismatch(f"expected {code.kappa} symbols, got {s.size}")
    return np.einsum("l,lij->ij", s.real, code.disp_a) + 1j * np.einsum(
        "l,lij->ij", s.imag, code.disp_b
    )


def _detect_conj_slots(disp_a, disp_b, tol=1e-12):
    """Per-slot linear/antilinear classification, or None if mixed."""
    slots = []
    for tt in range(disp_a.shape[2]):
        a_col = disp_a[:, :, tt]
        b_col = disp_b[:, :, tt]
        if np.allclose(a_col, b_col, atol=tol):
            slots.append(False)
        elif np.allclose(a_col, -b_col, atol=tol):
            slots.append(True)
        else:
            return None
    return tuple(slots)


def _from_encoder(name, n_t, t, kappa, enc):
    basis = np.eye(kappa)
    disp_a = np.stack([np.asarray(enc(basis[l]), dtype=complex) for l in range(kappa)])
    disp_b = np.stack(
        [-1j * np.asarray(enc(1j * basis[l]), dtype=complex) for l in range(kappa)]
    )
    cols = []
    for l in range(kappa):
        cols.append(tilde_vec(vec(disp_a[l])))
        cols.append(tilde_vec(vec(1j * disp_b[l])))
    real_gen = np.column_stack(cols)
    complex_gen = None
    if np.allclose(disp_a, disp_b, atol=1e-12):
        complex_gen = np.column_stack([vec(a) for a in disp_a])
    conj_slots = _detect_conj_slots(disp_a, disp_b)
    return LinearCode(
        name=name,
        n_t=n_t,
        t=t,
        kappa=kappa,
        disp_a=disp_a,
        disp_b=disp_b,
        real_gen=real_gen,
        complex_gen=complex_gen,
        conj_slots=conj_slots,
    )


def _alamouti_block(alpha, beta, s1, s2):
    return np.array(
        [
            [alpha * s1, -beta * np.conj(s2)],
            [alpha * s2, beta * np.conj(s1)],
        ]
    )


def make_alamouti(alpha, beta, waive_normalization=False):
    """2x2 Alamouti-structured code [[a s1, -b s2*], [a s2, b s1*]].

    The coefficients must satisfy |a|^2 = |b|^2 and |a|^2 + |b|^2 = 1 unless
    the caller explicitly waives normalization (the twisted family uses
    a = b = 1).
    """
    alpha, beta = complex(alpha), complex(beta)
    if not waive_normalization:
        if abs(abs(alpha) ** 2 - abs(beta) ** 2) > 1e-12 or abs(
            abs(alpha) ** 2 + abs(beta) ** 2 - 1.0
        ) > 1e-12:
            raise NormalizationViolated(
                "need |alpha|^2 = |beta|^2 and |alpha|^2 + |beta|^2 = 1 "
                "(pass waive_normalization=True to override)"
            )
    if abs(alpha) < 1e-12 or abs(beta) < 1e-12:
        raise NormalizationViolated("degenerate Alamouti coefficients (rate collapse)")

    def enc(s):
        return _alamouti_block(alpha, beta, s[0], s[1])

    return _from_encoder("alamouti", 2, 2, 2, enc)


def make_family1(phi1, phi2):
    """Twisted 2x2 family: Alamouti(1, 1) plus a sign-twisted rotated block.

    X = X12(s1, s2) + T @ Alamouti(z1, z2) with z = U (s3, s4),
    T = diag(1, -1) and U = [[phi1, -phi2*], [phi2, phi1*]] unitary.
    """
    phi1, phi2 = complex(phi1), complex(phi2)
    if abs(abs(phi1) ** 2 + abs(phi2) ** 2 - 1.0) > 1e-12:
        raise UnitarityViolated("|phi1|^2 + |phi2|^2 must equal 1")
    t_mat = np.diag([1.0, -1.0])
    u = np.array([[phi1, -np.conj(phi2)], [phi2, np.conj(phi1)]])

    def enc(s):
        x12 = _alamouti_block(1.0, 1.0, s[0], s[1])
        z = u @ s[2:4]
        return x12 + t_mat @ _alamouti_block(1.0, 1.0, z[0], z[1])

    return _from_encoder("family1", 2, 2, 4, enc)


def make_family2(a12, b12, a34, b34):
    """Sum of two Alamouti-structured 2x2 blocks with independent coefficients."""
    pairs = [(complex(a12), complex(b12)), (complex(a34), complex(b34))]
    for a, b in pairs:
        if abs(a) < 1e-12 or abs(b) < 1e-12:
            raise NormalizationViolated("degenerate coefficient pair (rate collapse)")
        if abs(abs(a) ** 2 - abs(b) ** 2) > 1e-12 or abs(
            abs(a) ** 2 + abs(b) ** 2 - 1.0
        ) > 1e-12:
            raise NormalizationViolated(
                "each pair must satisfy |a|^2 = |b|^2 and |a|^2 + |b|^2 = 1"
            )

    def enc(s):
        return _alamouti_block(*pairs[0], s[0], s[1]) + _alamouti_block(
            *pairs[1], s[2], s[3]
        )

    return _from_encoder("family2", 2, 2, 4, enc)


def make_golden():
    """Golden code: theta the golden ratio, 1/sqrt(5) normalization."""
    theta = (1 + np.sqrt(5)) / 2
    theta_bar = (1 - np.sqrt(5)) / 2
    alpha = 1 + 1j * (1 - theta)
    alpha_bar = 1 + 1j * (1 - theta_bar)
    scale = 1 / np.sqrt(5)

    def enc(s):
        return scale * np.array(
            [
                [alpha * (s[0] + theta * s[1]), alpha * (s[2] + theta * s[3])],
                [
                    1j * alpha_bar * (s[2] + theta_bar * s[3]),
                    alpha_bar * (s[0] + theta_bar * s[1]),
                ],
            ]
        )

    return _from_encoder("golden", 2, 2, 4, enc)


def _qo_block(s):
    """Rate-1 quasi-orthogonal 4x4 pattern over four symbols."""
    s1, s2, s3, s4 = s
    c = np.conj
    return np.array(
        [
            [s1, -c(s2), -c(s3), s4],
            [s2, c(s1), -c(s4), -s3],
            [s3, -c(s4), c(s1), -s2],
            [s4, c(s3), c(s2), s1],
        ]
    )


def make_quasi_orthogonal():
    """Rate-1 quasi-orthogonal 4x4 code (minimum rank 2)."""
    return _from_encoder("qo4", 4, 4, 4, _qo_block)


def build_u_dft(n_cap, n_exp):
    """Diagonal-times-DFT rotation U = D P / 2 (4x4, unitary).

    U[l, n] = exp(2j pi n_exp[l] / n_cap) * exp(2j pi l n / 4) / 2 with
    zero-based l, n.  The 1/2 factor normalizes the DFT part so that U is
    unitary.
    """
    if n_cap < 1:
        raise OutOfRange("n_cap must be >= 1")
    n_exp = tuple(int(v) for v in n_exp)
    if len(n_exp) != 4:
        raise OutOfRange("need exactly 4 exponents")
    if any(v < 0 or v > n_cap for v in n_exp):
        raise OutOfRange(f"exponents must lie in 0..{n_cap}")
    l = np.arange(4)[:, None]
    n = np.arange(4)[None, :]
    d = np.exp(2j * np.pi * np.asarray(n_exp)[:, None] / n_cap)
    p = np.exp(2j * np.pi * l * n / 4)
    return d * p / 2.0


def make_new_4x2(u):
    """4x4 (T=4) rate-2 code: quasi-orthogonal block plus a twisted one.

    X = QO(s1..s4) + T @ QO(z1..z4), z = U (s5..s8),
    T = diag(1, 1, -1, -1), U unitary.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise DimensionMismatch("U must be 4x4")
    if not np.allclose(u.conj().T @ u, np.eye(4), atol=1e-9):
        raise UnitarityViolated("U must be unitary to 1e-9")
    t_mat = np.diag([1.0, 1.0, -1.0, -1.0])

    def enc(s):
        return _qo_block(s[:4]) + t_mat @ _qo_block(u @ s[4:8])

    return _from_encoder("new4x2", 4, 4, 8, enc)


def normalized(code):
    """Rescale so that the mean codeword energy is t * E_s.

    For unit-variance-per-dimension symbol vectors, E||X||_F^2 equals
    (E_s / 2) * trace(G^T G); the scale factor sqrt(2 t / trace) therefore
    makes E||X||_F^2 = t * E_s regardless of shaping.  Scaling is global, so
    ML decisions are unchanged.
    """
    tr = float(np.trace(code.real_gen.T @ code.real_gen))
    lam = np.sqrt(2.0 * code.t / tr)
    return replace(
        code,
        name=code.name + "-norm",
        disp_a=code.disp_a * lam,
        disp_b=code.disp_b * lam,
        real_gen=code.real_gen * lam,
        complex_gen=None if code.complex_gen is None else code.complex_gen * lam,
    )


# Numerically optimized coefficients for the catalog codes.  The family-1
# pair maximizes the 4-QAM minimum determinant (16/7); the family-2 pairs
# are the best found under per-pair normalization.  See search.py for the
# optimizers that reproduce them.
FAMILY1_PHI = (0.8 + 0.0j, 0.6 + 0.0j)  # placeholder, replaced by search result

FAMILY2_COEFFS = (
    0.7071067811865476 + 0.0j,
    0.7071067811865476 + 0.0j,
    0.7071067811865476j,
    0.7071067811865476j,
)

U_4QAM_PARAMS = (7, (1, 2, 5, 6))
U_16QAM_PARAMS = (17, (3, 4, 5, 13))


def get_code(name, normalize=False):
    """Catalog lookup by name.

    Known names: alamouti, family1, family2, golden, qo4, new4x2-4qam,
    new4x2-16qam.
    """
    builders = {
        "alamouti": lambda: make_alamouti(1 / np.sqrt(2), 1 / np.sqrt(2)),
        "family1": lambda: make_family1(*FAMILY1_PHI),
        "family2": lambda: make_family2(*FAMILY2_COEFFS),
        "golden": make_golden,
        "qo4": make_quasi_orthogonal,
        "new4x2-4qam": lambda: make_new_4x2(build_u_dft(*U_4QAM_PARAMS)),
        "new4x2-16qam": lambda: make_new_4x2(build_u_dft(*U_16QAM_PARAMS)),
    }
    if name not in builders:
        raise OutOfRange(f"unknown code name {name!r}")
    code = builders[name]()
    code = replace(code, name=name)
    return normalized(code) if normalize else code
