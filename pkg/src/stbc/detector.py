"""ML detection: exhaustive search, reduced-complexity decoding, sphere decoding.

All decoders work on the equivalent-channel view: with vec(Y) (selected time
slots conjugated, see codebook.LinearCode.conj_slots) the observation is

    y = F s + n,     F[:, l] = maskvec(H @ encode(e_l))

which is complex linear in s even for codes built from conjugated symbols.
The QR factorization of F (unpivoted Gram-Schmidt) exposes the zero pattern
of R that lets the leading k' tree levels collapse to independent per-symbol
slicing: for each of the M^(kappa-k') tail vectors, the head symbols are
sliced in k' * M metric evaluations, for a worst-case total of
k' * M^(kappa - k' + 1) instead of M^kappa.

Tie-breaking everywhere: the lexicographically smallest symbol-index vector,
so decoder-equivalence checks can demand exact argmin agreement.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .codebook import encode
from .errors import (
    BudgetExceeded,
    NotFastDecodable,
    WrongStructure,
)
from .numerics import QRFactors, check_mat, gram_schmidt_qr, tilde_vec, vec

DEFAULT_EXHAUSTIVE_BUDGET = 10**6
FAST_STRUCTURE_REL_TOL = 1e-9


@dataclass(frozen=True)
class EquivChannel:
    """Channel-dependent symbol-to-observation maps and their QR factors."""

    f: np.ndarray | None  # complex map (masked vec domain), None if unavailable
    f_real: np.ndarray  # real map on interleaved coordinates
    qr: QRFactors  # of f when available, else of f_real
    k_prime: int
    conj_slots: tuple | None


@dataclass(frozen=True)
class DecodeResult:
    """Decoded symbol indices plus instrumentation counters."""

    s_hat: np.ndarray  # kappa indices into the constellation
    metric: float  # ||Y - H Xhat||_F^2
    metric_evals: int
    nodes_visited: int


def _maskvec(y, conj_slots):
    """Column-major stacking with the masked time slots conjugated."""
    y = np.asarray(y, dtype=complex)
    cols = [y[:, t].conj() if conj_slots[t] else y[:, t] for t in range(y.shape[1])]
    return np.concatenate(cols)


def complex_equivalent(h, code):
    """Masked complex equivalent channel F with vec(Y)|mask = F s + noise.

    Falls back on the plain relation F = diag(H, ..., H) @ G when the code
    has a true complex generator (empty mask).  Returns None when the code
    admits neither form.
    """
    if code.conj_slots is None:
        return None
    h = np.asarray(h, dtype=complex)
    cols = []
    for l in range(code.kappa):
        cols.append(_maskvec(h @ code.disp_a[l], code.conj_slots))
    return np.column_stack(cols)


def real_equivalent(h, code):
    """Real equivalent channel: diag(check(H), ...) @ real_gen."""
    hc = check_mat(h)
    t = code.t
    big = np.zeros((hc.shape[0] * t, hc.shape[1] * t))
    for i in range(t):
        big[i * hc.shape[0] : (i + 1) * hc.shape[0], i * hc.shape[1] : (i + 1) * hc.shape[1]] = hc
    return big @ code.real_gen


def detect_fast_structure(qr, rel_tol=FAST_STRUCTURE_REL_TOL):
    """Largest k' such that the leading k' x k' block of R is diagonal.

    Returns 0 when already <f2, e1> is nonzero (no removable levels).
    """
    r = qr.r
    n = r.shape[0]
    scale = np.max(np.abs(r))
    k = 1
    while k < n:
        block = r[: k + 1, : k + 1]
        off = block[np.triu_indices(k + 1, 1)]
        if np.all(np.abs(off) <= rel_tol * scale):
            k += 1
        else:
            break
    return 0 if k == 1 else k


def equivalent_channel(h, code, rel_tol=FAST_STRUCTURE_REL_TOL):
    """Build the EquivChannel for one channel realization."""
    f = complex_equivalent(h, code)
    f_real = real_equivalent(h, code)
    qr = gram_schmidt_qr(f if f is not None else f_real)
    return EquivChannel(
        f=f,
        f_real=f_real,
        qr=qr,
        k_prime=detect_fast_structure(qr, rel_tol),
        conj_slots=code.conj_slots,
    )


def conjugated_equivalent(h, code):
    """The 4x2 conjugated equivalent channel of a 2x2 Alamouti-structured code.

    Rows follow [y11, y21, y12*, y22*]; multiplying by its Hermitian
    transpose is matched filtering.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2) or code.n_t != 2 or code.t != 2 or code.kappa != 2:
        raise WrongStructure("need a 2x2 code with kappa=2 and a 2x2 channel")
    if code.conj_slots != (False, True):
        raise WrongStructure("code is not Alamouti-structured")
    return complex_equivalent(h, code)


@lru_cache(maxsize=8)
def _index_grid(m, kappa):
    """All symbol-index vectors in lexicographic order, shape (m^kappa, kappa)."""
    grid = np.indices((m,) * kappa).reshape(kappa, -1).T
    grid.setflags(write=False)
    return grid


def _observation(y, h, code):
    """(y_vec, F) pair in whichever domain the code supports."""
    f = complex_equivalent(h, code)
    if f is not None:
        return _maskvec(y, code.conj_slots), f
    return tilde_vec(vec(y)), real_equivalent(h, code)


def _final_metric(y, h, code, points, idx):
    x = encode(code, points[np.asarray(idx)])
    return float(np.sum(np.abs(y - h @ x) ** 2))


def ml_exhaustive(y, h, code, constellation, budget=DEFAULT_EXHAUSTIVE_BUDGET):
    """Globally optimal ML decoding by full enumeration (M^kappa metrics)."""
    m = constellation.m
    total = m**code.kappa
    if total > budget:
        raise BudgetExceeded(f"M^kappa = {total} exceeds budget {budget}")
    pts = constellation.points
    idx = _index_grid(m, code.kappa)
    yv, f = _observation(y, h, code)
    if np.iscomplexobj(f):
        cands = pts[idx]
    else:
        cands = np.empty((idx.shape[0], 2 * code.kappa))
        cands[:, 0::2] = pts[idx].real
        cands[:, 1::2] = pts[idx].imag
    resid = yv[None, :] - cands @ f.T
    metrics = np.sum(np.abs(resid) ** 2, axis=1)
    best = int(np.argmin(metrics))  # first occurrence = lexicographic tie rule
    s_hat = idx[best].copy()
    return DecodeResult(
        s_hat=s_hat,
        metric=_final_metric(y, h, code, pts, s_hat),
        metric_evals=total,
        nodes_visited=total,
    )


def fast_decode(y, h, code, constellation, rel_tol=FAST_STRUCTURE_REL_TOL):
    """Reduced-complexity ML decoding exploiting the diagonal head of R.

    Enumerates the M^(kappa-k') tail vectors; for each, the k' head symbols
    decouple and are sliced independently (k' * M metric evaluations per
    tail).  Exact ML: the decision agrees with ml_exhaustive up to the
    shared lexicographic tie rule.
    """
    eq = equivalent_channel(h, code, rel_tol)
    if eq.f is None:
        raise NotFastDecodable("code has no complex-domain equivalent channel")
    k = eq.k_prime
    if k < 1:
        raise NotFastDecodable("no removable levels (k' = 0)")
    m = constellation.m
    pts = constellation.points
    kappa = code.kappa
    q, r = eq.qr.q, eq.qr.r
    yv = _maskvec(y, code.conj_slots)
    yq = q.conj().T @ yv

    tail_idx = _index_grid(m, kappa - k)  # (n_tail, kappa-k), lexicographic
    tail_s = pts[tail_idx]
    r_head_diag = np.diag(r)[:k]
    r_head_tail = r[:k, k:]
    r_tail_tail = r[k:, k:]

    tail_resid = yq[k:, None] - r_tail_tail @ tail_s.T  # (kappa-k, n_tail)
    tail_cost = np.sum(np.abs(tail_resid) ** 2, axis=0)
    c_head = yq[:k, None] - r_head_tail @ tail_s.T  # (k, n_tail)

    # per-symbol slicing over the full alphabet: |c - R_ii p|^2 for every p
    head_err = (
        np.abs(c_head[:, :, None] - r_head_diag[:, None, None] * pts[None, None, :]) ** 2
    )  # (k, n_tail, m)
    head_best = np.argmin(head_err, axis=2)  # first occurrence = smallest index
    head_cost = np.take_along_axis(head_err, head_best[:, :, None], axis=2)[:, :, 0]

    total = tail_cost + head_cost.sum(axis=0)
    best_val = total.min()
    ties = np.flatnonzero(total == best_val)
    # lexicographic comparison on the full index vector (head symbols first)
    best_tail = min(ties, key=lambda i: (tuple(head_best[:, i]), tuple(tail_idx[i])))
    s_hat = np.concatenate([head_best[:, best_tail], tail_idx[best_tail]])
    return DecodeResult(
        s_hat=s_hat,
        metric=_final_metric(y, h, code, pts, s_hat),
        metric_evals=k * m * tail_idx.shape[0],
        nodes_visited=tail_idx.shape[0],
    )


def sphere_decode(y, h, code, constellation, initial_radius="inf"):
    """Depth-first Schnorr-Euchner sphere decoder; always returns exact ML.

    The search radius starts at the policy value ("inf", or "babai" for the
    metric of the first greedily-extended leaf) and shrinks to every improved
    leaf metric.
    """
    eq = equivalent_channel(h, code)
    m = constellation.m
    pts = constellation.points
    kappa = code.kappa
    q, r = eq.qr.q, eq.qr.r
    if eq.f is not None:
        yv = _maskvec(y, code.conj_slots)
        alphabet = pts
        levels = kappa
    else:
        yv = tilde_vec(vec(y))
        side = int(round(np.sqrt(m)))
        alphabet = np.arange(-(side - 1), side, 2).astype(float)
        levels = 2 * kappa
    yq = q.conj().T @ yv

    proj_resid = float(np.sum(np.abs(yv) ** 2) - np.sum(np.abs(yq) ** 2))
    best_metric = np.inf
    best_vec = None
    nodes = 0
    leaves = 0

    order = [None] * levels
    sym = np.zeros(levels, dtype=alphabet.dtype)

    def visit(level, partial):
        nonlocal best_metric, best_vec, nodes, leaves
        i = level
        c = yq[i] - r[i, i + 1 :] @ sym[i + 1 :]
        errs = np.abs(c - r[i, i] * alphabet) ** 2
        for j in np.argsort(errs, kind="stable"):
            nodes += 1
            d = partial + errs[j]
            if d >= best_metric:
                break  # SE ordering: all later candidates are worse
            sym[i] = alphabet[j]
            order[i] = int(j)
            if i == 0:
                leaves += 1
                if d < best_metric:
                    best_metric = d
                    best_vec = list(order)
            else:
                visit(i - 1, d)

    if initial_radius == "babai":
        # greedy first leaf fixes a finite starting radius
        tmp = np.zeros(levels, dtype=alphabet.dtype)
        dist = 0.0
        first = [0] * levels
        for i in range(levels - 1, -1, -1):
            c = yq[i] - r[i, i + 1 :] @ tmp[i + 1 :]
            errs = np.abs(c - r[i, i] * alphabet) ** 2
            jj = int(np.argmin(errs))
            tmp[i] = alphabet[jj]
            first[i] = jj
            dist += errs[jj]
        best_metric = dist * (1 + 1e-12) + 1e-300
        best_vec = first
    visit(levels - 1, 0.0)

    if eq.f is not None:
        s_hat = np.array(best_vec, dtype=int)
    else:
        # real path: fold PAM index pairs back to constellation indices
        side = int(round(np.sqrt(m)))
        s_hat = np.empty(kappa, dtype=int)
        for l in range(kappa):
            re_i, im_i = best_vec[2 * l], best_vec[2 * l + 1]
            point = alphabet[re_i] + 1j * alphabet[im_i]
            s_hat[l] = int(np.argmin(np.abs(pts - point)))
    _ = proj_resid  # offset between tree metric and Frobenius metric
    return DecodeResult(
        s_hat=s_hat,
        metric=_final_metric(y, h, code, pts, s_hat),
        metric_evals=leaves,
        nodes_visited=nodes,
    )
