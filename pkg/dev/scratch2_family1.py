import sys, time
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from scipy.optimize import minimize
from stbc import codebook as cb

pts = cb.make_constellation(4).points
ds = np.unique(np.round((pts[:, None] - pts[None, :]).ravel(), 9))
idx = np.indices((9,) * 4).reshape(4, -1).T
D = ds[idx]
D = D[np.any(D != 0, axis=1)]  # (6560,4)
D1, D2, D3, D4 = D.T


def mindet_batch(phi1, phi2):
    """phi arrays (P,), returns (P,) min |det|^2 over 4-QAM diffs."""
    p1 = phi1[:, None]
    p2 = phi2[:, None]
    z1 = p1 * D3[None, :] - np.conj(p2) * D4[None, :]
    z2 = p2 * D3[None, :] + np.conj(p1) * D4[None, :]
    det = (D1[None, :] + z1) * np.conj(D1[None, :] - z1) + np.conj(
        D2[None, :] + z2
    ) * (D2[None, :] - z2)
    return np.min(np.abs(det) ** 2, axis=1)


def mindet_one(params):
    th, a, b = params
    p1 = np.array([np.cos(th) * np.exp(1j * a)])
    p2 = np.array([np.sin(th) * np.exp(1j * b)])
    return mindet_batch(p1, p2)[0]


t0 = time.time()
nth, na, nb = 40, 40, 80
ths = np.linspace(0.01, np.pi / 2 - 0.01, nth)
aas = np.linspace(0, np.pi / 2, na, endpoint=False)
bbs = np.linspace(0, 2 * np.pi, nb, endpoint=False)
grid = np.array(np.meshgrid(ths, aas, bbs, indexing="ij")).reshape(3, -1).T
best = []
chunk = 512
for i0 in range(0, grid.shape[0], chunk):
    g = grid[i0:i0 + chunk]
    p1 = np.cos(g[:, 0]) * np.exp(1j * g[:, 1])
    p2 = np.sin(g[:, 0]) * np.exp(1j * g[:, 2])
    v = mindet_batch(p1, p2)
    k = np.argmax(v)
    best.append((v[k], tuple(g[i0 + k - i0])))
best.sort(reverse=True)
print("grid time", time.time() - t0, "top:", best[:3])

top = sorted(best, reverse=True)[:5]
results = []
for val, p0 in top:
    res = minimize(lambda p: -mindet_one(p), p0, method="Nelder-Mead",
                   options=dict(xatol=1e-9, fatol=1e-12, maxiter=2000))
    results.append((-res.fun, tuple(res.x)))
results.sort(reverse=True)
print("polished:", results[0])
print("16/7 =", 16 / 7)
th, a, b = results[0][1]
phi1 = np.cos(th) * np.exp(1j * a)
phi2 = np.sin(th) * np.exp(1j * b)
print("phi1,phi2:", phi1, phi2)

# cross-check via full code construction path
code = cb.make_family1(phi1, phi2)
G = code.real_gen
st = np.empty((D.shape[0], 8))
st[:, 0::2] = D.real; st[:, 1::2] = D.imag
v = st @ G.T
z = v[:, 0::2] + 1j * v[:, 1::2]
det = z[:, 0] * z[:, 3] - z[:, 1] * z[:, 2]
print("via code path:", np.min(np.abs(det) ** 2))
print("total", time.time() - t0)
