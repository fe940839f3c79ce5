import sys, time
sys.path.insert(0, "/root/pkg/src")
import numpy as np
from stbc import codebook as cb, detector as det, channel as ch

rng = np.random.default_rng(42)

for name, nr in [("family1", 2), ("family2", 2), ("golden", 2), ("new4x2-4qam", 2), ("alamouti", 2), ("qo4", 2)]:
    code = cb.get_code(name)
    ks = []
    for _ in range(20):
        h = ch.sample_channel(nr, code.n_t, rng)
        eq = det.equivalent_channel(h, code)
        ks.append(eq.k_prime)
    print(name, "k' values:", set(ks))

code = cb.get_code("family1")
h = ch.sample_channel(2, 2, rng)
eq = det.equivalent_channel(h, code)
print("family1 R:\n", np.round(np.abs(eq.qr.r), 4))

# residual check: masked vec(Y) = F s for noiseless
const = cb.make_constellation(4)
for name in ["family1", "family2", "golden", "new4x2-4qam"]:
    code = cb.get_code(name)
    worst = 0
    for _ in range(20):
        h = ch.sample_channel(2, code.n_t, rng)
        s = const.points[rng.integers(0, 4, code.kappa)]
        y = h @ code.encode(s)
        f = det.complex_equivalent(h, code)
        yv = det._maskvec(y, code.conj_slots)
        worst = max(worst, np.max(np.abs(yv - f @ s)))
    print(name, "masked-linearity residual:", worst)

# decoder equivalence on noisy trials
for name, m, trials in [("family1", 4, 100), ("family2", 4, 100), ("golden", 4, 100),
                        ("family1", 16, 30), ("new4x2-4qam", 4, 10)]:
    code = cb.get_code(name, normalize=True)
    const = cb.make_constellation(m)
    n0 = ch.snr_to_n0(10.0, code.n_t, const.e_s)
    dis = 0
    maxev = 0
    t0 = time.time()
    for trial in range(trials):
        crng = ch.channel_rng(1, trial); nrng = ch.noise_rng(1, trial)
        h = ch.sample_channel(2, code.n_t, crng)
        s_idx = crng.integers(0, m, code.kappa)
        x = code.encode(const.points[s_idx])
        y = ch.transmit(x, ch.ChannelRealization(h=h, n0=n0), nrng)
        r_ex = det.ml_exhaustive(y, h, code, const)
        try:
            r_f = det.fast_decode(y, h, code, const)
            maxev = max(maxev, r_f.metric_evals)
            if not np.array_equal(r_f.s_hat, r_ex.s_hat):
                dis += 1
        except det.NotFastDecodable:
            r_f = None
        r_s = det.sphere_decode(y, h, code, const)
        if not np.array_equal(r_s.s_hat, r_ex.s_hat):
            dis += 100
    print(f"{name} M={m}: disagreements={dis} max_fast_evals={maxev} "
          f"bound={2*m**3 if code.kappa==4 else 2*m**7} time={time.time()-t0:.1f}s")
