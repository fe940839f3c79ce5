import sys, time
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from scipy.optimize import minimize

pts4 = np.array([complex(a, b) for a in (-1, 1) for b in (-1, 1)])


def diffvecs(m):
    side = int(round(np.sqrt(m)))
    pam = np.arange(-(side - 1), side, 2)
    pts = np.array([complex(a, b) for a in pam for b in pam])
    ds = np.unique(np.round((pts[:, None] - pts[None, :]).ravel(), 9))
    idx = np.indices((ds.size,) * 4).reshape(4, -1).T
    D = ds[idx]
    return D[np.any(D != 0, axis=1)]


D4 = diffvecs(4)
D1, D2, D3, D4_ = D4.T


def mindet_batch(a1, b1, a2, b2):
    """coefficient arrays (P,); X = Al(a1,b1)(s1,s2)+Al(a2,b2)(s3,s4)."""
    # X = [[a1 d1 + a2 d3, -(b1 d2 + b2 d4)^*], [a1 d2 + a2 d4, (b1 d1 + b2 d3)^*]]
    x11 = a1[:, None] * D1 + a2[:, None] * D3
    x12 = -np.conj(b1[:, None] * D2 + b2[:, None] * D4_)
    x21 = a1[:, None] * D2 + a2[:, None] * D4_
    x22 = np.conj(b1[:, None] * D1 + b2[:, None] * D3)
    det = x11 * x22 - x21 * x12
    return np.min(np.abs(det) ** 2, axis=1)


# Sari/Sezginer published coefficients (literal scaling, pair2 norm 1)
a = c = 1 / np.sqrt(2)
b = ((1 - np.sqrt(7)) + 1j * (1 + np.sqrt(7))) / 4
d = ((1 + np.sqrt(7)) + 1j * (np.sqrt(7) - 1)) / 4
for dd in [d, -d, np.conj(d), ((1+np.sqrt(7)) + 1j*(1-np.sqrt(7)))/4]:
    v = mindet_batch(np.array([a]), np.array([c]), np.array([b]), np.array([dd]))
    print("sari literal variant:", abs(b)**2, abs(dd)**2, v)

# normalized-per-pair search: alpha = e^{ja}/sqrt2 etc
def mindet_one(p):
    a1 = np.array([np.exp(1j * p[0]) / np.sqrt(2)])
    b1 = np.array([np.exp(1j * p[1]) / np.sqrt(2)])
    a2 = np.array([np.exp(1j * p[2]) / np.sqrt(2)])
    b2 = np.array([np.exp(1j * p[3]) / np.sqrt(2)])
    return mindet_batch(a1, b1, a2, b2)[0]


t0 = time.time()
n = 16
ph = np.linspace(0, 2 * np.pi, n, endpoint=False)
g = np.array(np.meshgrid(ph, ph, ph, ph, indexing="ij")).reshape(4, -1).T
bestv, bestp = -1, None
chunk = 1024
for i0 in range(0, g.shape[0], chunk):
    gg = g[i0:i0 + chunk]
    e = np.exp(1j * gg) / np.sqrt(2)
    v = mindet_batch(e[:, 0], e[:, 1], e[:, 2], e[:, 3])
    k = np.argmax(v)
    if v[k] > bestv:
        bestv, bestp = v[k], gg[k]
print("grid best", bestv, bestp, time.time() - t0)
res = minimize(lambda p: -mindet_one(p), bestp, method="Nelder-Mead",
               options=dict(xatol=1e-10, fatol=1e-13, maxiter=4000, maxfev=8000))
print("polished", -res.fun, res.x)
