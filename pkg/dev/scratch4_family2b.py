import sys
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from scipy.optimize import minimize
from stbc import codebook as cb

def diffvecs(m):
    side = int(round(np.sqrt(m)))
    pam = np.arange(-(side - 1), side, 2)
    pts = np.array([complex(a, b) for a in pam for b in pam])
    ds = np.unique(np.round((pts[:, None] - pts[None, :]).ravel(), 9))
    idx = np.indices((ds.size,) * 4).reshape(4, -1).T
    D = ds[idx]
    return D[np.any(D != 0, axis=1)]

def mindet(code, D, chunk=1 << 19):
    G = code.real_gen
    best = np.inf
    for i0 in range(0, D.shape[0], chunk):
        S = D[i0:i0+chunk]
        st = np.empty((S.shape[0], 2 * code.kappa))
        st[:, 0::2] = S.real; st[:, 1::2] = S.imag
        v = st @ G.T
        z = v[:, 0::2] + 1j * v[:, 1::2]
        det = z[:, 0] * z[:, 3] - z[:, 1] * z[:, 2]
        best = min(best, np.abs(det).min() ** 2) if False else min(best, (np.abs(det) ** 2).min())
    return best

D4 = diffvecs(4)

def obj(p):
    co = np.exp(1j * np.array(p)) / np.sqrt(2)
    code = cb.make_family2(co[0], co[1], co[2], co[3])
    return -mindet(code, D4)

p0 = [2.15437749e-04, 4.28846194e+00, 5.85936971e+00, 1.03995650e-04]
res = minimize(obj, p0, method="Nelder-Mead",
               options=dict(xatol=1e-12, fatol=1e-15, maxiter=8000, maxfev=16000))
print("refined:", -res.fun, res.x)
co = np.exp(1j * res.x) / np.sqrt(2)
print("coeffs:", [repr(c) for c in co])
code = cb.make_family2(*co)
D16 = diffvecs(16)
print("mindet 16qam:", mindet(code, D16))
GtG = code.real_gen.T @ code.real_gen
print("GtG prop-I dev:", np.max(np.abs(GtG - GtG[0, 0] * np.eye(8))))
print("phases mod 2pi:", np.mod(res.x, 2*np.pi))
print("phases/pi:", np.mod(res.x, 2*np.pi)/np.pi)
