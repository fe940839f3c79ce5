"""Rayleigh block-fading MIMO channel and reproducible random streams.

The channel stays constant over one codeword and is redrawn independently
per trial.  Channel and noise use separately seeded substreams derived from
(master seed, trial index, role) so that paired decoder comparisons run on
identical realizations and parallel trials never share a stream.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

_CHANNEL_ROLE = 0
_NOISE_ROLE = 1


def channel_rng(seed, trial):
    return np.random.default_rng((int(seed), int(trial), _CHANNEL_ROLE))

def noise_rng(seed, trial):
    return np.random.default_rng((int(seed), int(trial), _NOISE_ROLE))


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw plus the operating noise density."""

    h: np.ndarray
    n0: float

    def __post_init__(self):
        if self.n0 < 0:
            raise ValueError("n0 must be nonnegative")


def sample_channel(n_r, n_t, rng):
    """n_r x n_t matrix of i.i.d. unit-variance circular complex Gaussians."""
    re = rng.standard_normal((n_r, n_t))
    im = rng.standard_normal((n_r, n_t))
    return (re + 1j * im) / np.sqrt(2)


def snr_to_n0(snr_db, n_t, e_s):
    """Noise density from SNR = n_t E_s / N0 (SNR given in dB)."""
    if e_s <= 0:
        raise ValueError("e_s must be positive")
    return n_t * e_s / 10.0 ** (snr_db / 10.0)


def transmit(x, ch, rng):
    """Y = H X + N with i.i.d. complex Gaussian noise of variance n0."""
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != ch.h.shape[1]:
        raise DimensionMismatch(
            f"codeword has {x.shape[0]} rows, channel expects {ch.h.shape[1]}"
        )
    y = ch.h @ x
    if ch.n0 > 0:
        n_r, t = y.shape
        noise = (
            rng.standard_normal((n_r, t)) + 1j * rng.standard_normal((n_r, t))
        ) * np.sqrt(ch.n0 / 2)
        y = y + noise
    return y
