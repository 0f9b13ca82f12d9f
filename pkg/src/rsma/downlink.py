"""Analytic evaluation of downlink rate-splitting designs.

A design superposes one common stream (decoded by every user, then removed
by SIC) on top of K private streams. SINRs follow the standard one-layer
rate-splitting expressions:

    common at user k:   |h_k^H p_c|^2 / (sum_i |h_k^H p_i|^2 + noise)
    private at user k:  |h_k^H p_k|^2 / (sum_{i != k} |h_k^H p_i|^2 + noise)

The common rate is log2(1 + min_k common SINR) and is shared across users
through the nonnegative allocation C_k with sum_k C_k <= common rate. User
k's total is its private rate plus its share. Rates are analytic (Gaussian
signalling, ideal SIC); there is no symbol-level simulation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix
from .errors import FeasibilityError

POWER_TOL = 1e-9
SHARE_TOL = 1e-9


@dataclass(frozen=True)
class DownlinkDesign:
    """One complete downlink transmit strategy.

    Fields: the common-stream precoder (length M), the K private precoders
    (rows of a K x M array), the K common-rate shares in bits/s/Hz, and the
    power budget the precoders must respect.
    """

    common_precoder: np.ndarray
    private_precoders: np.ndarray
    common_shares: np.ndarray
    power_budget: float

    def __post_init__(self):
        pc = np.array(self.common_precoder, dtype=complex)
        pp = np.array(self.private_precoders, dtype=complex)
        shares = np.array(self.common_shares, dtype=float)
        if pc.ndim != 1:
            raise ValueError("common_precoder must be a vector")
        if pp.ndim != 2 or pp.shape[1] != pc.shape[0]:
            raise ValueError(
                f"private_precoders must be K x {pc.shape[0]}, got {pp.shape}"
            )
        if shares.shape != (pp.shape[0],):
            raise ValueError(f"need one share per user, got {shares.shape}")
        if not (np.all(np.isfinite(pc)) and np.all(np.isfinite(pp))):
            raise ValueError("precoders must be finite")
        if np.any(shares < 0) or not np.all(np.isfinite(shares)):
            raise ValueError("common shares must be finite and nonnegative")
        if not self.power_budget > 0:
            raise ValueError(f"power_budget must be positive, got {self.power_budget}")
        used = float(np.sum(np.abs(pc) ** 2) + np.sum(np.abs(pp) ** 2))
        if used > self.power_budget + POWER_TOL:
            raise FeasibilityError("power", used - self.power_budget)
        for arr in (pc, pp, shares):
            arr.setflags(write=False)
        object.__setattr__(self, "common_precoder", pc)
        object.__setattr__(self, "private_precoders", pp)
        object.__setattr__(self, "common_shares", shares)
        object.__setattr__(self, "power_budget", float(self.power_budget))

    @property
    def n_users(self) -> int:
        return self.private_precoders.shape[0]

    @property
    def n_tx(self) -> int:
        return self.private_precoders.shape[1]


@dataclass(frozen=True)
class DownlinkRates:
    """Evaluated outcome of a design: per-user SINRs, rates, shares, totals."""

    gamma_common: np.ndarray
    gamma_private: np.ndarray
    rate_private: np.ndarray
    shares: np.ndarray
    rate_total: np.ndarray
    rate_common: float

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.rate_total))

    @property
    def min_rate(self) -> float:
        return float(np.min(self.rate_total))


def _check_dims(channel: ChannelMatrix, design: DownlinkDesign) -> None:
    if design.n_users != channel.n_users or design.n_tx != channel.n_tx:
        raise ValueError(
            f"design is {design.n_users} users x {design.n_tx} antennas, "
            f"channel is {channel.n_users} x {channel.n_tx}"
        )


def total_power(design: DownlinkDesign) -> float:
    """Transmit power consumed: ||p_c||^2 plus the sum of private powers."""
    return float(
        np.sum(np.abs(design.common_precoder) ** 2)
        + np.sum(np.abs(design.private_precoders) ** 2)
    )


def _all_sinrs(
    channel: ChannelMatrix, design: DownlinkDesign
) -> tuple[np.ndarray, np.ndarray]:
    """Common and private SINR vectors for all users at once."""
    conj_h = channel.vectors.conj()
    cross = np.abs(conj_h @ design.private_precoders.T) ** 2  # [k, i] = |h_k^H p_i|^2
    common_gain = np.abs(conj_h @ design.common_precoder) ** 2
    interference = cross.sum(axis=1)
    own = np.diagonal(cross)
    gamma_c = common_gain / (channel.noise_var + interference)
    gamma_p = own / (channel.noise_var + interference - own)
    return gamma_c, gamma_p


def sinr_common(channel: ChannelMatrix, design: DownlinkDesign, user: int) -> float:
    """SINR of the common stream at one user; all private streams interfere."""
    _check_dims(channel, design)
    if not 0 <= user < channel.n_users:
        raise ValueError(f"user index {user} out of range for K={channel.n_users}")
    h = channel.vectors[user]
    num = abs(np.vdot(h, design.common_precoder)) ** 2
    den = channel.noise_var + float(
        np.sum(np.abs(design.private_precoders.conj() @ h) ** 2)
    )
    return float(num / den)


def sinr_private(channel: ChannelMatrix, design: DownlinkDesign, user: int) -> float:
    """SINR of user's own private stream after SIC removal of the common stream."""
    _check_dims(channel, design)
    if not 0 <= user < channel.n_users:
        raise ValueError(f"user index {user} out of range for K={channel.n_users}")
    h = channel.vectors[user]
    gains = np.abs(design.private_precoders.conj() @ h) ** 2
    num = gains[user]
    den = channel.noise_var + float(np.sum(gains)) - float(gains[user])
    return float(num / den)


def common_rate(channel: ChannelMatrix, design: DownlinkDesign) -> float:
    """Achievable common-stream rate, limited by the weakest user."""
    _check_dims(channel, design)
    gamma_c, _ = _all_sinrs(channel, design)
    return float(np.log2(1.0 + np.min(gamma_c)))


def evaluate(
    channel: ChannelMatrix, design: DownlinkDesign, share_tol: float = SHARE_TOL
) -> DownlinkRates:
    """Evaluate a design: SINRs, common rate, and per-user totals.

    Raises FeasibilityError when the requested shares exceed what the common
    stream supports on this channel.
    """
    _check_dims(channel, design)
    gamma_c, gamma_p = _all_sinrs(channel, design)
    rate_c = float(np.log2(1.0 + np.min(gamma_c)))
    share_sum = float(np.sum(design.common_shares))
    if share_sum > rate_c + share_tol:
        raise FeasibilityError(
            "share-sum",
            share_sum - rate_c,
            f"share-sum constraint violated: shares total {share_sum:.12g} "
            f"but the common rate is {rate_c:.12g} (slack {share_sum - rate_c:.6g})",
        )
    rate_p = np.log2(1.0 + gamma_p)
    totals = rate_p + design.common_shares
    return DownlinkRates(
        gamma_common=gamma_c,
        gamma_private=gamma_p,
        rate_private=rate_p,
        shares=design.common_shares.copy(),
        rate_total=totals,
        rate_common=rate_c,
    )


def refit_shares(channel: ChannelMatrix, design: DownlinkDesign) -> DownlinkDesign:
    """Rescale the share vector so it sums to this channel's common rate.

    Used when a design built on a channel estimate is evaluated against the
    true channel: the common stream then supports a different rate, and the
    shares are scaled proportionally onto the new total (the adaptive-rate
    convention). A design with an all-zero share vector is returned as is.
    """
    _check_dims(channel, design)
    share_sum = float(np.sum(design.common_shares))
    if share_sum == 0.0:
        return design
    rate_c = common_rate(channel, design)
    shares = design.common_shares * (rate_c / share_sum)
    return DownlinkDesign(
        design.common_precoder, design.private_precoders, shares, design.power_budget
    )
