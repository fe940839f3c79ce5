import sys, time
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from stbc import codebook as cb

code = cb.get_code("new4x2-4qam")
G = code.real_gen  # 32 x 16

ds = np.unique(np.round((cb.make_constellation(4).points[:, None]
                         - cb.make_constellation(4).points[None, :]).ravel(), 9))
assert ds.size == 9

tail = ds[np.indices((9,) * 5).reshape(5, -1).T]  # (59049, 5)


def det4(x):
    """dets of (n,4,4) stack via Laplace on the first two rows."""
    def m2(r0, r1, c0, c1):
        return x[:, r0, c0] * x[:, r1, c1] - x[:, r0, c1] * x[:, r1, c0]
    return (m2(0, 1, 0, 1) * m2(2, 3, 2, 3) - m2(0, 1, 0, 2) * m2(2, 3, 1, 3)
            + m2(0, 1, 0, 3) * m2(2, 3, 1, 2) + m2(0, 1, 1, 2) * m2(2, 3, 0, 3)
            - m2(0, 1, 1, 3) * m2(2, 3, 0, 2) + m2(0, 1, 2, 3) * m2(2, 3, 0, 1))


def chunk_count(prefix):
    """prefix: tuple of 3 diff values for s1..s3."""
    n = tail.shape[0]
    S = np.empty((n, 8), dtype=complex)
    S[:, 0] = prefix[0]; S[:, 1] = prefix[1]; S[:, 2] = prefix[2]
    S[:, 3:] = tail
    st = np.empty((n, 16))
    st[:, 0::2] = S.real; st[:, 1::2] = S.imag
    v = st @ G.T
    z = v[:, 0::2] + 1j * v[:, 1::2]
    X = z.reshape(n, 4, 4).transpose(0, 2, 1)  # vec is column-major
    d = det4(X)
    fro2 = np.einsum("nij,nij->n", X.real, X.real) + np.einsum("nij,nij->n", X.imag, X.imag)
    nz = fro2 > 0
    cand = nz & (np.abs(d) < 1e-6 * (fro2 / 4) ** 2)
    out = []
    if np.any(cand):
        Xc = X[cand]
        E = Xc @ Xc.conj().transpose(0, 2, 1)
        ev = np.linalg.eigvalsh(E)
        for row, evs in zip(S[cand], ev):
            lead = evs[-1]
            r = int(np.sum(evs > 1e-9 * lead))
            if r < 4:
                delta = float(np.prod(evs[evs > 1e-9 * lead]))
                out.append((r, delta))
    return out

t0 = time.time()
pref = [(a, b, c) for a in ds for b in ds for c in ds]
res = []
for i, p in enumerate(pref):
    res.extend(chunk_count(p))
    if i == 26:
        el = time.time() - t0
        print(f"progress {i+1}/729 elapsed {el:.1f}s est total {el/27*729:.0f}s", flush=True)
ranks = {}
hist = {}
for r, delta in res:
    ranks[r] = ranks.get(r, 0) + 1
    if r == 2:
        key = float(np.format_float_positional(delta, precision=9, unique=False, fractional=False))
        hist[key] = hist.get(key, 0) + 1
print("rank counts:", ranks)
print("rank-2 total:", ranks.get(2, 0))
print("histogram:", dict(sorted(hist.items())))
print("total time", time.time() - t0)
