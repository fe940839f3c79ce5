"""Distance-spectrum engine: ranks, product distances, multiplicities.

By linearity, the codeword difference X - Xhat equals the codeword of the
symbol difference vector, so the spectrum is enumerated over difference
vectors drawn from the constellation difference set.  The enumeration is
chunked over the leading symbol indices; chunks are independent and their
partial histograms merge associatively, so parallel runs are reproducible.

Counting convention: one count per distinct nonzero difference vector.  The
ordered-codeword-pair weighting (each difference weighted by the number of
symbol pairs producing it) is also reported for rank-deficient events, since
the literature is not always explicit about which convention a multiplicity
table uses.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codebook import encode
from .errors import BudgetExceeded, ZeroDifference

RANK_TOL = 1e-9
#: dets this far (relatively) below the generic scale get an eigenvalue check
DET_SCREEN = 1e-6
DEFAULT_ENUM_BUDGET = 10**8


@dataclass(frozen=True)
class SpectrumEntry:
    """One (rank, product distance, multiplicity) bin."""

    r: int
    delta: float
    count: int
    pair_weighted_count: int = 0


def difference_set(constellation):
    """All pairwise differences of constellation points (deduplicated, with 0)."""
    pts = constellation.points
    d = (pts[:, None] - pts[None, :]).ravel()
    d = np.unique(np.round(d, 9))
    order = np.lexsort((d.imag, d.real))
    return d[order]


def pair_multiplicities(constellation):
    """Map difference -> number of ordered point pairs producing it."""
    pts = constellation.points
    counts = {}
    for p in pts:
        for q in pts:
            key = complex(np.round(p - q, 9))
            counts[key] = counts.get(key, 0) + 1
    return counts


def _bin_key(delta):
    """Product distances rounded to 9 significant digits for binning."""
    return float(np.format_float_positional(delta, precision=9, unique=False, fractional=False))


def codeword_distance(code, ds, rank_tol=RANK_TOL):
    """(rank, product distance, det) of E = X(ds) X(ds)^dagger."""
    ds = np.asarray(ds, dtype=complex)
    if not np.any(ds != 0):
        raise ZeroDifference("difference vector must be nonzero")
    x = encode(code, ds)
    e = x @ x.conj().T
    ev = np.linalg.eigvalsh(e)
    lead = ev[-1]
    nz = ev > rank_tol * lead
    rank = int(np.sum(nz))
    delta = float(np.prod(ev[nz]))
    return rank, delta, float(np.real(np.linalg.det(e)))


def _diff_codewords(real_gen, n_t, t, ds_chunk):
    """Codeword stack (n, n_t, t) for a chunk of difference vectors."""
    n, kappa = ds_chunk.shape
    st = np.empty((n, 2 * kappa))
    st[:, 0::2] = ds_chunk.real
    st[:, 1::2] = ds_chunk.imag
    v = st @ real_gen.T
    z = v[:, 0::2] + 1j * v[:, 1::2]
    return z.reshape(n, t, n_t).transpose(0, 2, 1)


def _det2(x):
    return x[:, 0, 0] * x[:, 1, 1] - x[:, 0, 1] * x[:, 1, 0]


def _det4(x):
    def m2(r0, r1, c0, c1):
        return x[:, r0, c0] * x[:, r1, c1] - x[:, r0, c1] * x[:, r1, c0]

    return (
        m2(0, 1, 0, 1) * m2(2, 3, 2, 3)
        - m2(0, 1, 0, 2) * m2(2, 3, 1, 3)
        + m2(0, 1, 0, 3) * m2(2, 3, 1, 2)
        + m2(0, 1, 1, 2) * m2(2, 3, 0, 3)
        - m2(0, 1, 1, 3) * m2(2, 3, 0, 2)
        + m2(0, 1, 2, 3) * m2(2, 3, 0, 1)
    )


def _batch_det(x):
    if x.shape[1] == 2:
        return _det2(x)
    if x.shape[1] == 4:
        return _det4(x)
    return np.linalg.det(x)


def _batch_abs_det_sq(real_gen, n_t, t, ds_chunk):
    x = _diff_codewords(real_gen, n_t, t, ds_chunk)
    return np.abs(_batch_det(x)) ** 2


def _scan_chunk(args):
    """Min det plus rank-deficient events for one chunk of difference vectors.

    Returns (min_det, argmin_vector, deficient_list) where deficient_list
    holds (rank, delta, ds) for every vector whose E drops rank.
    """
    real_gen, n_t, t, ds_chunk, rank_tol = args
    x = _diff_codewords(real_gen, n_t, t, ds_chunk)
    det_e = np.abs(_batch_det(x)) ** 2
    nz = np.any(ds_chunk != 0, axis=1)
    if not np.any(nz):
        return np.inf, None, []
    det_view = np.where(nz, det_e, np.inf)
    kmin = int(np.argmin(det_view))
    fro2 = np.einsum("nij,nij->n", x.real, x.real) + np.einsum("nij,nij->n", x.imag, x.imag)
    scale = (fro2 / n_t) ** n_t
    cand = nz & (det_e < DET_SCREEN * scale)
    deficient = []
    if np.any(cand):
        xc = x[cand]
        e = xc @ xc.conj().transpose(0, 2, 1)
        ev = np.linalg.eigvalsh(e)
        for row, evs in zip(ds_chunk[cand], ev):
            lead = evs[-1]
            keep = evs > rank_tol * lead
            rank = int(np.sum(keep))
            if rank < n_t:
                deficient.append((rank, float(np.prod(evs[keep])), row.copy()))
    return float(det_view[kmin]), ds_chunk[kmin].copy(), deficient


def _chunk_iter(diffs, kappa, lead=None, chunk_rows=None):
    """Yield the full difference-vector grid as (n, kappa) chunks.

    The grid is split on the leading `lead` symbol indices; every chunk is a
    contiguous block of the lexicographic enumeration, so chunk boundaries
    (and therefore merged results) do not depend on worker scheduling.
    """
    nd = diffs.size
    if lead is None:
        lead = max(0, kappa - 5)
    tail_dims = kappa - lead
    tail = diffs[np.indices((nd,) * tail_dims).reshape(tail_dims, -1).T]
    if lead == 0:
        yield tail
        return
    lead_grid = np.indices((nd,) * lead).reshape(lead, -1).T
    for prefix in lead_grid:
        block = np.empty((tail.shape[0], kappa), dtype=complex)
        block[:, :lead] = diffs[prefix]
        block[:, lead:] = tail
        yield block


def _enum_size(constellation, kappa):
    return difference_set(constellation).size ** kappa


def _scan(code, constellation, threads=None, budget=DEFAULT_ENUM_BUDGET, rank_tol=RANK_TOL):
    """Full enumeration pass: (global min det, argmin, all rank-deficient events)."""
    diffs = difference_set(constellation)
    total = diffs.size**code.kappa
    if total > budget:
        raise BudgetExceeded(
            f"{total} difference vectors exceed enumeration budget {budget}"
        )
    jobs = (
        (code.real_gen, code.n_t, code.t, ds_chunk, rank_tol)
        for ds_chunk in _chunk_iter(diffs, code.kappa)
    )
    best = np.inf
    best_ds = None
    deficient = []
    threads = threads or 1
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = pool.map(_scan_chunk, jobs, chunksize=4)
            for mn, ds, defs in results:
                if mn < best:
                    best, best_ds = mn, ds
                deficient.extend(defs)
    else:
        for job in jobs:
            mn, ds, defs = _scan_chunk(job)
            if mn < best:
                best, best_ds = mn, ds
            deficient.extend(defs)
    return best, best_ds, deficient


def min_determinant(code, constellation, threads=None, budget=DEFAULT_ENUM_BUDGET):
    """Exact minimum of det(E) over all nonzero difference vectors.

    Reports exactly 0.0 when any difference is rank deficient.
    """
    best, _, deficient = _scan(code, constellation, threads, budget)
    if deficient:
        return 0.0
    return float(best)


def rank2_multiplicity(code, constellation, threads=None, budget=DEFAULT_ENUM_BUDGET):
    """(total, histogram) of rank-2 pairwise error events.

    The histogram bins product distances rounded to 9 significant digits;
    each entry also carries the ordered-pair-weighted count for convention
    adjudication.
    """
    _, _, deficient = _scan(code, constellation, threads, budget)
    weights = pair_multiplicities(constellation)
    bins = {}
    total = 0
    for rank, delta, ds in deficient:
        if rank != 2:
            continue
        total += 1
        key = _bin_key(delta)
        w = 1
        for d in ds:
            w *= weights[complex(np.round(d, 9))]
        cnt, wcnt = bins.get(key, (0, 0))
        bins[key] = (cnt + 1, wcnt + w)
    entries = [
        SpectrumEntry(r=2, delta=k, count=c, pair_weighted_count=w)
        for k, (c, w) in sorted(bins.items())
    ]
    return total, entries


def rank_deficient_spectrum(code, constellation, threads=None, budget=DEFAULT_ENUM_BUDGET):
    """All rank-deficient events binned by (rank, delta)."""
    _, _, deficient = _scan(code, constellation, threads, budget)
    bins = {}
    for rank, delta, _ in deficient:
        key = (rank, _bin_key(delta))
        bins[key] = bins.get(key, 0) + 1
    return [
        SpectrumEntry(r=r, delta=d, count=c) for (r, d), c in sorted(bins.items())
    ]


def min_determinant_consistency(code, constellation, target, samples=10**7, seed=0, chunk=1 << 18):
    """Sampled consistency check for enumerations beyond desk scale.

    Verifies that some difference vector achieves `target` and that a random
    sample of difference vectors is full rank with det(E) >= target (up to
    rounding).  Returns (achieved, sampled_min).
    """
    diffs = difference_set(constellation)
    basis = np.zeros(code.kappa, dtype=complex)
    basis[0] = 2.0
    achieved = float(
        _batch_abs_det_sq(code.real_gen, code.n_t, code.t, basis[None, :])[0]
    )
    rng = np.random.default_rng(seed)
    sampled_min = np.inf
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        ds = diffs[rng.integers(0, diffs.size, (n, code.kappa))]
        ds = ds[np.any(ds != 0, axis=1)]
        if ds.size:
            sampled_min = min(
                sampled_min,
                float(np.min(_batch_abs_det_sq(code.real_gen, code.n_t, code.t, ds))),
            )
        done += n
    return achieved, float(sampled_min)


def union_bound_terms(entries):
    """(r, delta, count) rows for the union-bound sum, sorted."""
    return sorted((e.r, e.delta, e.count) for e in entries)


def write_records(path, code_name, constellation, entries, header_lines=()):
    """Persist spectrum entries, one `code mod r delta count` line each."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        for e in entries:
            fh.write(
                f"{code_name} {constellation.m} {e.r} {e.delta:.9g} {e.count}\n"
            )


def read_records(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            name, m, r, delta, count = line.split()
            out.append((name, int(m), int(r), float(delta), int(count)))
    return out
