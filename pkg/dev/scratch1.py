import sys, time
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from stbc import codebook as cb
from stbc.numerics import tilde_vec, vec

# --- U matrices vs printed ---
U4 = cb.build_u_dft(7, (1, 2, 5, 6))
print("U 4-QAM:\n", np.round(U4, 2))
P4 = np.array([
    [0.31+0.39j, 0.31+0.39j, 0.31+0.39j, 0.31+0.39j],
    [-0.11+0.49j, -0.49-0.11j, 0.11-0.49j, 0.49+0.11j],
    [-0.11-0.49j, 0.11+0.49j, -0.11-0.49j, 0.11+0.49j],
    [0.31-0.39j, -0.39-0.31j, -0.31+0.39j, 0.39+0.31j]])
print("4QAM max err:", np.max(np.abs(U4 - P4)))

U16 = cb.build_u_dft(17, (3, 4, 5, 13))
P16 = np.array([
    [0.22+0.44j, 0.22+0.44j, 0.22+0.44j, 0.22+0.44j],
    [0.05+0.50j, -0.49+0.05j, -0.05-0.50j, 0.50-0.05j],
    [-0.30-0.40j, 0.30+0.40j, -0.30-0.40j, 0.30+0.40j],
    [0.05-0.50j, -0.50-0.05j, -0.05+0.50j, 0.50+0.05j]])
print("16QAM err per row:", np.max(np.abs(U16 - P16), axis=1))
U16b = cb.build_u_dft(17, (3, 4, 11, 13))
print("16QAM err per row with n3=11:", np.max(np.abs(U16b - P16), axis=1))
print("unitary:", np.max(np.abs(U4.conj().T@U4 - np.eye(4))), np.max(np.abs(U16.conj().T@U16 - np.eye(4))))

# --- encoding identity + conj slots ---
rng = np.random.default_rng(0)
for name in ["alamouti", "family1", "family2", "golden", "qo4", "new4x2-4qam"]:
    code = cb.get_code(name)
    s = rng.standard_normal(code.kappa) + 1j * rng.standard_normal(code.kappa)
    x = code.encode(s)
    err = np.max(np.abs(tilde_vec(vec(x)) - code.real_gen @ tilde_vec(s)))
    GtG = code.real_gen.T @ code.real_gen
    propI = np.max(np.abs(GtG - GtG[0, 0] * np.eye(2 * code.kappa)))
    print(f"{name}: enc-id err {err:.2e}, conj_slots={code.conj_slots}, "
          f"complexG={'Y' if code.complex_gen is not None else 'N'}, "
          f"GtG[0,0]={GtG[0,0]:.4f}, GtG prop-I dev {propI:.2e}")

# --- min determinant helper (vectorized, kappa=4, n_t=2) ---
def diffs(m):
    pts = cb.make_constellation(m).points
    d = np.unique(np.round((pts[:, None] - pts[None, :]).ravel(), 9))
    return d

def mindet2(code, m, chunk=1 << 18):
    ds = diffs(m)
    n = ds.size
    G = code.real_gen
    best = np.inf
    idx = np.indices((n, n, n, n)).reshape(4, -1).T  # may be big for 16qam: 49^4=5.7M x4
    for i0 in range(0, idx.shape[0], chunk):
        I = idx[i0:i0 + chunk]
        S = ds[I]  # (c,4) complex
        st = np.empty((S.shape[0], 8))
        st[:, 0::2] = S.real; st[:, 1::2] = S.imag
        v = st @ G.T
        z = v[:, 0::2] + 1j * v[:, 1::2]  # vec(X): [x11,x21,x12,x22]
        det = z[:, 0] * z[:, 3] - z[:, 1] * z[:, 2]
        dE = np.abs(det) ** 2
        nz = np.any(S != 0, axis=1)
        if np.any(nz):
            best = min(best, dE[nz].min())
    return best

t0 = time.time()
g = cb.get_code("golden")
print("golden mindet 4qam:", mindet2(g, 4), "(expect 3.2)", time.time() - t0)
t0 = time.time()
print("golden mindet 16qam:", mindet2(g, 16), "elapsed", time.time() - t0)
