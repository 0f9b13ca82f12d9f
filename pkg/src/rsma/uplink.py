"""Uplink rate splitting on the Gaussian multiple-access channel.

Each of the first K-1 users splits its message into two streams with powers
(P_k1, P_k2); the last user transmits a single stream. The base station
decodes the 2K-1 streams successively in a chosen order, removing each
decoded stream before the next. Stream (k, i) is labeled by the tuple
``(k, i)`` with parts i in {1, 2}; the unsplit user's single stream carries
part 1.

Receive filters are MMSE against the streams decoded later plus noise. With
that choice the per-stream SINR telescopes, so the sum of all stream rates
equals the MAC sum capacity log2 det(I + sigma^-2 sum_k P_k h_k h_k^H) for
every decoding order and every power split at full budgets. That identity is
what makes every point of the two-user capacity region reachable without
time sharing. A matched-filter mode is available for comparison; it does not
preserve the identity.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix
from .errors import OrderTooLargeError
from .rng import generator

StreamLabel = tuple[int, int]

ORDER_ENUM_MAX_USERS = 4
DEFAULT_SPLIT_GRID = 101


@functools.lru_cache(maxsize=None)
def stream_labels(n_users: int) -> tuple[StreamLabel, ...]:
    """The 2K-1 stream labels: (k, 1), (k, 2) for split users, then the last."""
    if n_users < 1:
        raise ValueError(f"need at least one user, got {n_users}")
    labels: list[StreamLabel] = []
    for k in range(n_users - 1):
        labels.append((k, 1))
        labels.append((k, 2))
    labels.append((n_users - 1, 1))
    return tuple(labels)


@dataclass(frozen=True)
class UplinkDesign:
    """Per-stream transmit powers plus the successive decoding order."""

    split_powers: tuple[tuple[float, float], ...]
    last_power: float
    order: tuple[StreamLabel, ...]

    def __post_init__(self):
        split = tuple((float(a), float(b)) for a, b in self.split_powers)
        for pair in split:
            if not all(math.isfinite(p) and p >= 0 for p in pair):
                raise ValueError(f"stream powers must be finite and nonnegative, got {pair}")
        last = float(self.last_power)
        if not (math.isfinite(last) and last >= 0):
            raise ValueError(f"last user's power must be finite and nonnegative, got {last}")
        order = tuple((int(k), int(i)) for k, i in self.order)
        expected = stream_labels(len(split) + 1)
        if len(order) != len(expected) or set(order) != set(expected):
            raise ValueError(
                f"order must be a permutation of {expected}, got {order}"
            )
        object.__setattr__(self, "split_powers", split)
        object.__setattr__(self, "last_power", last)
        object.__setattr__(self, "order", order)

    @property
    def n_users(self) -> int:
        return len(self.split_powers) + 1

    def power_of(self, label: StreamLabel) -> float:
        k, part = label
        if k == self.n_users - 1 and part == 1:
            return self.last_power
        if 0 <= k < self.n_users - 1 and part in (1, 2):
            return self.split_powers[k][part - 1]
        raise ValueError(f"unknown stream label {label!r}")

    def user_powers(self) -> np.ndarray:
        """Total transmit power per user."""
        totals = [a + b for a, b in self.split_powers]
        totals.append(self.last_power)
        return np.array(totals)


@dataclass(frozen=True)
class UplinkRates:
    """Per-stream rates plus the per-user sums R_k."""

    stream_rates: dict[StreamLabel, float]
    user_rates: np.ndarray

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.user_rates))


def _check_channel(channel: ChannelMatrix, design: UplinkDesign) -> None:
    if channel.n_users != design.n_users:
        raise ValueError(
            f"design has {design.n_users} users, channel has {channel.n_users}"
        )


def receive_filter(
    channel: ChannelMatrix,
    design: UplinkDesign,
    stream_label: StreamLabel,
    filter_channel: ChannelMatrix | None = None,
    filter_mode: str = "mmse",
) -> np.ndarray:
    """Unnormalized receive filter for one stream.

    MMSE against the covariance of the streams decoded later plus noise:
    d = (sum_later P h h^H + noise I)^-1 h. Per-stream SINR is invariant to
    the filter's scale. ``filter_channel`` selects the channel knowledge the
    filter is built from (defaults to the true channel); "matched" mode
    returns the stream's channel vector itself.
    """
    src = channel if filter_channel is None else filter_channel
    _check_channel(src, design)
    try:
        pos = design.order.index(tuple(stream_label))
    except ValueError:
        raise ValueError(f"unknown stream label {stream_label!r}") from None
    if filter_mode not in ("mmse", "matched"):
        raise ValueError(f"filter_mode must be 'mmse' or 'matched', got {filter_mode!r}")
    h = src.vectors[stream_label[0]]
    if filter_mode == "matched":
        return h.astype(complex)
    later = design.order[pos + 1 :]
    cov = src.noise_var * np.eye(src.n_tx, dtype=complex)
    if later:
        users = [lab[0] for lab in later]
        powers = np.array([design.power_of(lab) for lab in later])
        h_later = src.vectors[users]
        cov = cov + (h_later.T * powers) @ h_later.conj()
    return np.linalg.solve(cov, h)


def stream_rate(
    channel: ChannelMatrix,
    design: UplinkDesign,
    stream_label: StreamLabel,
    filter_channel: ChannelMatrix | None = None,
    filter_mode: str = "mmse",
) -> float:
    """Rate of one stream: log2(1 + SINR) after cancelling earlier streams.

    SINR = P |d^H h|^2 / (sum_later P' |d^H h'|^2 + noise ||d||^2); only
    streams decoded later interfere.
    """
    _check_channel(channel, design)
    d = receive_filter(channel, design, stream_label, filter_channel, filter_mode)
    label = tuple(stream_label)
    pos = design.order.index(label)
    num = design.power_of(label) * abs(np.vdot(d, channel.vectors[label[0]])) ** 2
    if num == 0.0:
        return 0.0
    later = design.order[pos + 1 :]
    interference = 0.0
    if later:
        users = [lab[0] for lab in later]
        powers = np.array([design.power_of(lab) for lab in later])
        gains = np.abs(channel.vectors[users].conj() @ d) ** 2
        interference = float(powers @ gains)
    den = interference + channel.noise_var * float(np.vdot(d, d).real)
    if den == 0.0:
        return 0.0
    return float(np.log2(1.0 + num / den))


def evaluate_uplink(
    channel: ChannelMatrix,
    design: UplinkDesign,
    filter_channel: ChannelMatrix | None = None,
    filter_mode: str = "mmse",
) -> UplinkRates:
    """All stream rates for one design, plus the per-user sums.

    Walks the decoding order backwards so the interference covariance is
    built incrementally; each stream's rate follows the same expression as
    ``stream_rate``.
    """
    _check_channel(channel, design)
    if filter_channel is not None:
        _check_channel(filter_channel, design)
    if filter_mode not in ("mmse", "matched"):
        raise ValueError(f"filter_mode must be 'mmse' or 'matched', got {filter_mode!r}")
    src = channel if filter_channel is None else filter_channel
    n = channel.n_tx
    noise = channel.noise_var
    rates: dict[StreamLabel, float] = {}
    cov = src.noise_var * np.eye(n, dtype=complex)
    later_users: list[int] = []
    later_powers: list[float] = []
    for label in reversed(design.order):
        k = label[0]
        power = design.power_of(label)
        h_filter = src.vectors[k]
        if filter_mode == "matched":
            d = h_filter
        else:
            d = np.linalg.solve(cov, h_filter)
        num = power * abs(np.vdot(d, channel.vectors[k])) ** 2
        if num == 0.0:
            rates[label] = 0.0
        else:
            if later_users:
                gains = np.abs(channel.vectors[later_users].conj() @ d) ** 2
                interference = float(np.array(later_powers) @ gains)
            else:
                interference = 0.0
            den = interference + noise * float(np.vdot(d, d).real)
            rates[label] = float(np.log2(1.0 + num / den)) if den > 0.0 else 0.0
        cov = cov + power * np.outer(src.vectors[k], src.vectors[k].conj())
        later_users.insert(0, k)
        later_powers.insert(0, power)
    user_rates = np.zeros(channel.n_users)
    for label, rate in rates.items():
        user_rates[label[0]] += rate
    ordered = {label: rates[label] for label in stream_labels(channel.n_users)}
    return UplinkRates(stream_rates=ordered, user_rates=user_rates)


def enumerate_orders(n_users: int) -> list[tuple[StreamLabel, ...]]:
    """All (2K-1)! decoding orders, lexicographic. Guarded at K <= 4."""
    if n_users < 1:
        raise ValueError(f"need at least one user, got {n_users}")
    if n_users > ORDER_ENUM_MAX_USERS:
        raise OrderTooLargeError(
            f"(2K-1)! orders for K={n_users} are too many to enumerate; "
            "use sample_orders for larger K"
        )
    return list(itertools.permutations(stream_labels(n_users)))


def sample_orders(
    n_users: int, n_samples: int, seed: int
) -> list[tuple[StreamLabel, ...]]:
    """Uniformly sampled decoding orders for when enumeration is too large."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    labels = stream_labels(n_users)
    rng = generator(seed)
    return [
        tuple(labels[i] for i in rng.permutation(len(labels)))
        for _ in range(n_samples)
    ]


def optimize_uplink_sumrate(
    channel: ChannelMatrix,
    power_budgets,
    split_grid: int = DEFAULT_SPLIT_GRID,
    restrict_orders=None,
    filter_mode: str = "mmse",
) -> tuple[UplinkDesign, UplinkRates]:
    """Exhaustive sum-rate maximization over split fractions and decoding orders.

    Budgets are always fully spent (the sum rate is monotone in every user's
    power); the grid scans each split user's fraction of its budget on the
    first stream. Ties keep the first candidate in enumeration order, splits
    outer, orders inner.
    """
    budgets = np.asarray(power_budgets, dtype=float)
    if budgets.shape != (channel.n_users,) or np.any(budgets < 0):
        raise ValueError("power_budgets must be K nonnegative reals")
    if split_grid < 2:
        raise ValueError(f"split_grid must be at least 2, got {split_grid}")
    orders = (
        enumerate_orders(channel.n_users)
        if restrict_orders is None
        else [tuple(tuple(lab) for lab in order) for order in restrict_orders]
    )
    fractions = np.linspace(0.0, 1.0, split_grid)
    best: tuple[float, UplinkDesign, UplinkRates] | None = None
    for combo in itertools.product(fractions, repeat=channel.n_users - 1):
        split = tuple(
            (f * budgets[k], (1.0 - f) * budgets[k]) for k, f in enumerate(combo)
        )
        for order in orders:
            design = UplinkDesign(split, budgets[-1], order)
            rates = evaluate_uplink(channel, design, filter_mode=filter_mode)
            if best is None or rates.sum_rate > best[0]:
                best = (rates.sum_rate, design, rates)
    return best[1], best[2]


def pareto_filter(points: np.ndarray) -> np.ndarray:
    """Drop points strictly dominated in both coordinates; keeps input order."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (N, 2) array of rate pairs, got {pts.shape}")
    n = pts.shape[0]
    if n == 0:
        return pts.copy()
    idx = np.argsort(-pts[:, 0], kind="stable")
    r1 = pts[idx, 0]
    r2 = pts[idx, 1]
    keep = np.ones(n, dtype=bool)
    best_r2 = -np.inf
    i = 0
    while i < n:
        j = i
        while j < n and r1[j] == r1[i]:
            j += 1
        group = idx[i:j]
        keep[group[r2[i:j] < best_r2]] = False
        best_r2 = max(best_r2, float(r2[i:j].max()))
        i = j
    return pts[keep]


def trace_region_2user(
    channel: ChannelMatrix,
    budgets,
    split_grid: int = DEFAULT_SPLIT_GRID,
    share_grid: int = 1,
    filter_mode: str = "mmse",
) -> np.ndarray:
    """Achievable (R1, R2) cloud for two users, Pareto-cleaned.

    Sweeps the split user's power fraction over ``split_grid`` points for all
    six decoding orders at full power, once with each user in the split role.
    ``share_grid`` > 1 additionally scans each user's budget utilization in
    [0, 1], filling in the interior and the axis segments. Every point is
    achieved by a single design; no time-sharing combinations are formed.
    """
    if channel.n_users != 2:
        raise ValueError(f"region tracing needs exactly 2 users, got {channel.n_users}")
    budgets = np.asarray(budgets, dtype=float)
    if budgets.shape != (2,) or np.any(budgets < 0):
        raise ValueError("budgets must be 2 nonnegative reals")
    if split_grid < 2:
        raise ValueError(f"split_grid must be at least 2, got {split_grid}")
    if share_grid < 1:
        raise ValueError(f"share_grid must be at least 1, got {share_grid}")
    utilization = np.array([1.0]) if share_grid == 1 else np.linspace(0.0, 1.0, share_grid)
    fractions = np.linspace(0.0, 1.0, split_grid)
    orders = enumerate_orders(2)

    points: list[tuple[float, float]] = []
    for swap in (False, True):
        if swap:
            ch = ChannelMatrix(channel.vectors[::-1], channel.noise_var)
            b = budgets[::-1]
        else:
            ch, b = channel, budgets
        for u_split in utilization:
            for u_last in utilization:
                p_split = u_split * b[0]
                p_last = u_last * b[1]
                for f in fractions:
                    split = ((f * p_split, (1.0 - f) * p_split),)
                    for order in orders:
                        design = UplinkDesign(split, p_last, order)
                        rates = evaluate_uplink(ch, design, filter_mode=filter_mode)
                        r = rates.user_rates
                        points.append((r[1], r[0]) if swap else (r[0], r[1]))
    return pareto_filter(np.array(points))
