"""Reference multiple-access schemes and analytic oracles.

SDMA treats all multi-user interference as noise; two-user downlink NOMA
fully decodes the weak user's stream at both receivers; OMA is equal-share
TDMA with matched-filter beamforming. Both SDMA and NOMA are exact corner
cases of the rate-splitting evaluator, which the tests pin down literally.
For the uplink, the two-user Gaussian MAC pentagon and an unsplit
successive-cancellation evaluator serve as converse and equivalence oracles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix


@dataclass(frozen=True)
class PentagonRegion:
    """Two-user Gaussian MAC capacity region bounds and corner points."""

    r1_max: float
    r2_max: float
    sum_max: float
    corners: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        if self.sum_max > self.r1_max + self.r2_max + 1e-9:
            raise ValueError("sum bound cannot exceed the single-user bounds' total")

    def contains(self, r1: float, r2: float, tol: float = 1e-9) -> bool:
        """Whether a rate pair lies inside the pentagon (within tol)."""
        return (
            r1 >= -tol
            and r2 >= -tol
            and r1 <= self.r1_max + tol
            and r2 <= self.r2_max + tol
            and r1 + r2 <= self.sum_max + tol
        )

    def dominant_face(self, n_points: int) -> np.ndarray:
        """n uniformly spaced points on the constant-sum face between the corners."""
        if n_points < 1:
            raise ValueError(f"n_points must be positive, got {n_points}")
        lo = self.sum_max - self.r2_max
        hi = self.r1_max
        r1 = np.linspace(lo, hi, n_points) if n_points > 1 else np.array([(lo + hi) / 2])
        return np.column_stack([r1, self.sum_max - r1])


def sdma_rates(channel: ChannelMatrix, private_precoders) -> np.ndarray:
    """Linear-precoding rates with all interference treated as noise."""
    prec = np.asarray(private_precoders, dtype=complex)
    if prec.shape != (channel.n_users, channel.n_tx):
        raise ValueError(
            f"need one length-{channel.n_tx} precoder per user, got shape {prec.shape}"
        )
    gains = np.abs(channel.vectors.conj() @ prec.T) ** 2  # [k, i] = |h_k^H p_i|^2
    own = np.diagonal(gains)
    interference = gains.sum(axis=1) - own
    return np.log2(1.0 + own / (channel.noise_var + interference))


def noma_rates_2user(
    channel: ChannelMatrix, precoders, weak_user: int
) -> np.ndarray:
    """Two-user power-domain NOMA rates.

    ``precoders[k]`` carries user k's message. The weak user's stream is
    decoded by both receivers (its rate is the minimum of the two decode
    rates, the strong user treating it as the base layer before SIC); the
    strong user then decodes its own stream free of interference.
    """
    if channel.n_users != 2:
        raise ValueError(f"downlink NOMA baseline supports exactly 2 users, got {channel.n_users}")
    prec = np.asarray(precoders, dtype=complex)
    if prec.shape != (2, channel.n_tx):
        raise ValueError(f"need two length-{channel.n_tx} precoders, got shape {prec.shape}")
    weak = int(weak_user)
    if weak not in (0, 1):
        raise ValueError(f"weak_user must be 0 or 1, got {weak_user}")
    strong = 1 - weak
    p_weak, p_strong = prec[weak], prec[strong]

    weak_sinrs = np.empty(2)
    for j in range(2):
        h = channel.vectors[j]
        num = abs(np.vdot(h, p_weak)) ** 2
        den = channel.noise_var + abs(np.vdot(h, p_strong)) ** 2
        weak_sinrs[j] = num / den
    rate_weak = float(np.log2(1.0 + weak_sinrs.min()))

    h_strong = channel.vectors[strong]
    gamma_strong = abs(np.vdot(h_strong, p_strong)) ** 2 / channel.noise_var
    rate_strong = float(np.log2(1.0 + gamma_strong))

    rates = np.empty(2)
    rates[weak] = rate_weak
    rates[strong] = rate_strong
    return rates


def oma_tdma_rates(
    channel: ChannelMatrix,
    power_budget: float,
    design_channel: ChannelMatrix | None = None,
) -> np.ndarray:
    """Equal-time TDMA with matched-filter beamforming at full power.

    ``design_channel`` supplies the channel knowledge the beams are built
    from; by default the true channel, giving R_k = log2(1 + P ||h_k||^2 /
    noise) / K.
    """
    if not power_budget > 0:
        raise ValueError(f"power_budget must be positive, got {power_budget}")
    K = channel.n_users
    if design_channel is None:
        gains = np.linalg.norm(channel.vectors, axis=1) ** 2
    else:
        if design_channel.n_users != K or design_channel.n_tx != channel.n_tx:
            raise ValueError("design channel dimensions must match the true channel")
        norms = np.linalg.norm(design_channel.vectors, axis=1)
        norms = np.where(norms == 0, 1.0, norms)
        beams = design_channel.vectors / norms[:, None]
        gains = np.abs(np.sum(channel.vectors.conj() * beams, axis=1)) ** 2
    return np.log2(1.0 + power_budget * gains / channel.noise_var) / K


def mac_sum_capacity(channel: ChannelMatrix, powers, noise_var: float | None = None) -> float:
    """log2 det(I + noise^-1 sum_k P_k h_k h_k^H), the MAC sum-rate bound."""
    powers = np.asarray(powers, dtype=float)
    if powers.shape != (channel.n_users,) or np.any(powers < 0):
        raise ValueError("powers must be K nonnegative reals")
    noise = channel.noise_var if noise_var is None else float(noise_var)
    h = channel.vectors
    gram = (h.T * powers) @ h.conj()
    sign, logdet = np.linalg.slogdet(
        np.eye(channel.n_tx, dtype=complex) + gram / noise
    )
    return float(logdet / np.log(2.0))


def mac_pentagon(
    channel: ChannelMatrix, budgets, noise_var: float | None = None
) -> PentagonRegion:
    """Two-user Gaussian MAC capacity pentagon from the channel and budgets."""
    if channel.n_users != 2:
        raise ValueError(f"the pentagon oracle needs exactly 2 users, got {channel.n_users}")
    budgets = np.asarray(budgets, dtype=float)
    if budgets.shape != (2,) or np.any(budgets < 0):
        raise ValueError("budgets must be 2 nonnegative reals")
    r1 = mac_sum_capacity(channel, [budgets[0], 0.0], noise_var)
    r2 = mac_sum_capacity(channel, [0.0, budgets[1]], noise_var)
    total = mac_sum_capacity(channel, budgets, noise_var)
    corners = ((r1, total - r1), (total - r2, r2))
    return PentagonRegion(r1_max=r1, r2_max=r2, sum_max=total, corners=corners)


def uplink_mmse_rates(
    channel: ChannelMatrix,
    powers,
    filter_channel: ChannelMatrix | None = None,
) -> np.ndarray:
    """Linear MMSE rates without any cancellation (the uplink SDMA baseline)."""
    powers = np.asarray(powers, dtype=float)
    if powers.shape != (channel.n_users,) or np.any(powers < 0):
        raise ValueError("powers must be K nonnegative reals")
    src = channel if filter_channel is None else filter_channel
    if src.n_users != channel.n_users or src.n_tx != channel.n_tx:
        raise ValueError("filter channel dimensions must match the true channel")
    rates = np.zeros(channel.n_users)
    for k in range(channel.n_users):
        others = [j for j in range(channel.n_users) if j != k]
        cov = src.noise_var * np.eye(src.n_tx, dtype=complex)
        if others:
            h_others = src.vectors[others]
            cov = cov + (h_others.T * powers[others]) @ h_others.conj()
        d = np.linalg.solve(cov, src.vectors[k])
        num = powers[k] * abs(np.vdot(d, channel.vectors[k])) ** 2
        if num == 0.0:
            continue
        interference = 0.0
        if others:
            gains = np.abs(channel.vectors[others].conj() @ d) ** 2
            interference = float(powers[others] @ gains)
        den = interference + channel.noise_var * float(np.vdot(d, d).real)
        rates[k] = float(np.log2(1.0 + num / den)) if den > 0 else 0.0
    return rates


def uplink_sic_rates(
    channel: ChannelMatrix,
    powers,
    user_order,
    filter_channel: ChannelMatrix | None = None,
) -> np.ndarray:
    """Unsplit MMSE-SIC rates, one stream per user, decoded in the given order.

    The oracle for degenerate power splits: users earlier in the order see
    all later users as interference through the MMSE filter built against
    them.
    """
    powers = np.asarray(powers, dtype=float)
    if powers.shape != (channel.n_users,) or np.any(powers < 0):
        raise ValueError("powers must be K nonnegative reals")
    order = [int(u) for u in user_order]
    if sorted(order) != list(range(channel.n_users)):
        raise ValueError(f"user_order must be a permutation of 0..{channel.n_users - 1}")
    src = channel if filter_channel is None else filter_channel
    if src.n_users != channel.n_users or src.n_tx != channel.n_tx:
        raise ValueError("filter channel dimensions must match the true channel")
    rates = np.zeros(channel.n_users)
    for pos, k in enumerate(order):
        later = order[pos + 1 :]
        cov = src.noise_var * np.eye(src.n_tx, dtype=complex)
        if later:
            h_later = src.vectors[later]
            cov = cov + (h_later.T * powers[later]) @ h_later.conj()
        d = np.linalg.solve(cov, src.vectors[k])
        num = powers[k] * abs(np.vdot(d, channel.vectors[k])) ** 2
        if num == 0.0:
            continue
        interference = 0.0
        if later:
            gains = np.abs(channel.vectors[later].conj() @ d) ** 2
            interference = float(powers[later] @ gains)
        den = interference + channel.noise_var * float(np.vdot(d, d).real)
        rates[k] = float(np.log2(1.0 + num / den)) if den > 0 else 0.0
    return rates
