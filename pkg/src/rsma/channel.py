"""Channel realizations for the downlink broadcast and uplink multiple-access links.

A scenario is a set of K complex user channels of length M plus a receiver
noise variance. Channels are normalized to unit average entry power; the
operating SNR is always set through the transmit power budget, never by
rescaling the channel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import generator


@dataclass(frozen=True)
class ChannelMatrix:
    """K complex channel vectors of length M plus the noise variance.

    ``vectors[k]`` is the channel of user k. The array is read-only after
    construction; operations never mutate a channel in place.
    """

    vectors: np.ndarray
    noise_var: float

    def __post_init__(self):
        vec = np.array(self.vectors, dtype=complex)
        if vec.ndim != 2 or vec.shape[0] < 1 or vec.shape[1] < 1:
            raise ValueError(
                f"channel needs at least one user and one antenna, got shape {vec.shape}"
            )
        if not np.all(np.isfinite(vec)):
            raise ValueError("channel entries must be finite")
        if not (np.isfinite(self.noise_var) and self.noise_var > 0):
            raise ValueError(f"noise_var must be positive, got {self.noise_var}")
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "noise_var", float(self.noise_var))

    @property
    def n_users(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_tx(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class CsitModel:
    """Quality of the transmitter's channel knowledge.

    ``error_var`` is the per-entry variance of the additive estimation error.
    The scaling law is error_var = P**(-alpha) for transmit budget P; alpha
    is conventionally in [0, 1] (alpha = 0 keeps the error at unit variance,
    larger alpha means faster-improving CSIT as power grows).
    """

    alpha: float
    error_var: float
    perfect: bool

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.error_var < 0:
            raise ValueError(f"error_var must be nonnegative, got {self.error_var}")
        if self.perfect != (self.error_var == 0.0):
            raise ValueError("perfect CSIT holds exactly when error_var == 0")

    @classmethod
    def ideal(cls) -> "CsitModel":
        """Perfect transmitter knowledge (zero estimation error)."""
        return cls(alpha=0.0, error_var=0.0, perfect=True)


def sample_rayleigh(
    n_tx: int, n_users: int, noise_var: float, seed: int
) -> ChannelMatrix:
    """Draw an i.i.d. Rayleigh-faded channel, entries CN(0, 1).

    Identical (seed, dims) produce identical output bit for bit. Real parts
    are drawn before imaginary parts, each as an (n_users, n_tx) block.
    """
    if n_tx < 1 or n_users < 1:
        raise ValueError(f"dimensions must be positive, got M={n_tx}, K={n_users}")
    rng = generator(seed)
    re = rng.standard_normal((n_users, n_tx))
    im = rng.standard_normal((n_users, n_tx))
    return ChannelMatrix((re + 1j * im) / math.sqrt(2.0), noise_var)


def apply_csit_error(
    truth: ChannelMatrix, alpha: float, power_budget: float, seed: int
) -> tuple[ChannelMatrix, CsitModel]:
    """Corrupt a channel with additive estimation error of variance P**(-alpha).

    Returns the transmitter-side estimate (truth + error, same noise variance)
    together with the CsitModel describing the error statistics. The input
    channel is left untouched.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    if not power_budget > 0:
        raise ValueError(f"power_budget must be positive, got {power_budget}")
    error_var = float(power_budget) ** (-alpha)
    rng = generator(seed)
    shape = truth.vectors.shape
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    err = (re + 1j * im) * math.sqrt(error_var / 2.0)
    estimate = ChannelMatrix(truth.vectors + err, truth.noise_var)
    return estimate, CsitModel(alpha=alpha, error_var=error_var, perfect=False)


def deterministic_channel(rows, noise_var: float) -> ChannelMatrix:
    """Build a channel from explicit per-user vectors (canonical test scenarios)."""
    rows = list(rows)
    if not rows:
        raise ValueError("at least one user vector is required")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ValueError(f"all user vectors must have equal length, got {sorted(lengths)}")
    return ChannelMatrix(np.array(rows, dtype=complex), noise_var)
