"""Downlink design construction.

Two layers are provided. Closed-form builders give low-complexity designs:
zero-forcing directions for the private streams, the dominant left singular
vector of the stacked user channels for the common (multicast) stream, and
the SDMA / NOMA corner designs these reduce to. On top of them,
``split_search`` scans the common/private power split on a grid, and
``optimize_wsr`` runs a monotone projected-ascent refinement of the weighted
sum rate from a set of warm starts.

All builders consume the transmitter-side channel estimate only. When a
``CsitModel`` with nonzero error variance is supplied, design objectives are
evaluated with the expected-SINR surrogate: every denominator gains the
average leakage ``error_var * sum ||p_i||^2`` of the interfering private
streams, while numerators keep the measured gains. This is what lets the
power split react to degraded CSIT instead of trusting the estimate blindly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, CsitModel
from .downlink import DownlinkDesign, DownlinkRates
from .errors import OptimizerInitError, ZfInfeasibleError

LN2 = math.log(2.0)
ZF_CONDITION_LIMIT = 1e8

DEFAULT_GRID_SIZE = 33
DEFAULT_MAX_ITERS = 500
DEFAULT_TOL = 1e-5


@dataclass(frozen=True)
class PowerSplit:
    """Fraction of the budget on the common stream plus the private split.

    ``common_fraction`` is t in [0, 1]; ``private_fractions`` are K
    nonnegative values summing to one that divide the remaining (1 - t)
    of the budget among the private streams.
    """

    common_fraction: float
    private_fractions: np.ndarray

    def __post_init__(self):
        fracs = np.array(self.private_fractions, dtype=float)
        if not 0.0 <= self.common_fraction <= 1.0:
            raise ValueError(
                f"common_fraction must lie in [0, 1], got {self.common_fraction}"
            )
        if fracs.ndim != 1 or fracs.size < 1:
            raise ValueError("private_fractions must be a nonempty vector")
        if np.any(fracs < 0):
            raise ValueError("private fractions must be nonnegative")
        if abs(float(fracs.sum()) - 1.0) > 1e-12:
            raise ValueError(
                f"private fractions must sum to 1, got {float(fracs.sum()):.15g}"
            )
        fracs.setflags(write=False)
        object.__setattr__(self, "private_fractions", fracs)
        object.__setattr__(self, "common_fraction", float(self.common_fraction))

    @classmethod
    def equal(cls, n_users: int, common_fraction: float = 0.0) -> "PowerSplit":
        return cls(common_fraction, np.full(n_users, 1.0 / n_users))


@dataclass
class OptimizerReport:
    """Outcome of an ascent run: per-iteration objective, convergence, best design."""

    objective_trace: list[float]
    iterations: int
    converged: bool
    best_design: DownlinkDesign


def zf_private(
    channel_estimate: ChannelMatrix, split: PowerSplit, power_budget: float
) -> np.ndarray:
    """Zero-forcing private precoders, one row per user.

    Directions are the columns of the pseudo-inverse of the stacked estimated
    channels, normalized; user k's power is (1 - t) * P * fraction_k.
    """
    K, M = channel_estimate.n_users, channel_estimate.n_tx
    if split.private_fractions.shape != (K,):
        raise ValueError(f"split provides {split.private_fractions.size} fractions for K={K}")
    if K > M:
        raise ZfInfeasibleError(f"zero-forcing needs K <= M, got K={K}, M={M}")
    rows = channel_estimate.vectors.conj()  # row k maps p to h_k^H p
    cond = np.linalg.cond(rows)
    if not cond < ZF_CONDITION_LIMIT:
        raise ZfInfeasibleError(
            f"stacked channel condition number {cond:.3g} exceeds {ZF_CONDITION_LIMIT:.0e}"
        )
    inv = np.linalg.pinv(rows)  # M x K, rows @ inv = I
    dirs = inv / np.linalg.norm(inv, axis=0)
    powers = (1.0 - split.common_fraction) * power_budget * split.private_fractions
    return (dirs * np.sqrt(powers)).T


def multicast_common(
    channel_estimate: ChannelMatrix, split: PowerSplit, power_budget: float
) -> np.ndarray:
    """Common-stream precoder: dominant left singular vector of the channel stack.

    Power is t * P; t = 0 returns the zero vector. The phase is fixed so the
    largest-magnitude entry is real and positive.
    """
    t = split.common_fraction
    if t == 0.0:
        return np.zeros(channel_estimate.n_tx, dtype=complex)
    stacked = channel_estimate.vectors.T  # columns are the estimated h_k
    left, _, _ = np.linalg.svd(stacked, full_matrices=False)
    direction = left[:, 0]
    pivot = direction[int(np.argmax(np.abs(direction)))]
    direction = direction * (pivot.conj() / abs(pivot))
    return direction * math.sqrt(t * power_budget)


def matched_private(
    channel_estimate: ChannelMatrix, power_budget: float
) -> np.ndarray:
    """Matched-filter private precoders with equal power, the ZF fallback."""
    norms = np.linalg.norm(channel_estimate.vectors, axis=1)
    if np.any(norms == 0):
        raise ValueError("matched beams need nonzero channel vectors")
    dirs = channel_estimate.vectors / norms[:, None]
    K = channel_estimate.n_users
    return dirs * math.sqrt(power_budget / K)


def waterfill_shares(rate_private: np.ndarray, rate_common: float) -> np.ndarray:
    """Split the common rate to equalize user totals (max-min allocation).

    Greedy water-filling in ascending order of private rate: raise the lowest
    totals together until the budget runs out, then split any remainder
    equally among the equalized set. Exact in O(K log K).
    """
    rate_private = np.asarray(rate_private, dtype=float)
    K = rate_private.size
    shares = np.zeros(K)
    if rate_common <= 0.0 or K == 0:
        return shares
    order = np.argsort(rate_private, kind="stable")
    budget = float(rate_common)
    level = float(rate_private[order[0]])
    members = 1
    for j in range(1, K):
        nxt = float(rate_private[order[j]])
        need = (nxt - level) * members
        if need >= budget:
            break
        budget -= need
        level = nxt
        members += 1
    level += budget / members
    active = order[:members]
    shares[active] = level - rate_private[active]
    return shares


def _surrogate_sinrs(
    channel: ChannelMatrix,
    common_precoder: np.ndarray,
    private_precoders: np.ndarray,
    error_var: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Common/private SINR vectors, with expected CSIT-error leakage if any."""
    conj_h = channel.vectors.conj()
    cross = np.abs(conj_h @ private_precoders.T) ** 2
    common_gain = np.abs(conj_h @ common_precoder) ** 2
    own = np.diagonal(cross)
    base = cross.sum(axis=1)
    if error_var > 0.0:
        priv_pow = np.sum(np.abs(private_precoders) ** 2, axis=1)
        leak_all = error_var * float(priv_pow.sum())
        leak_other = error_var * (float(priv_pow.sum()) - priv_pow)
    else:
        leak_all = 0.0
        leak_other = 0.0
    gamma_c = common_gain / (channel.noise_var + base + leak_all)
    gamma_p = own / (channel.noise_var + base - own + leak_other)
    return gamma_c, gamma_p


def _rates_from_sinrs(
    gamma_c: np.ndarray, gamma_p: np.ndarray, shares: np.ndarray
) -> DownlinkRates:
    rate_c = float(np.log2(1.0 + np.min(gamma_c)))
    rate_p = np.log2(1.0 + gamma_p)
    return DownlinkRates(
        gamma_common=gamma_c,
        gamma_private=gamma_p,
        rate_private=rate_p,
        shares=shares,
        rate_total=rate_p + shares,
        rate_common=rate_c,
    )


def split_search(
    channel: ChannelMatrix,
    power_budget: float,
    objective: str = "sum-rate",
    grid_size: int = DEFAULT_GRID_SIZE,
    csit: CsitModel | None = None,
) -> tuple[DownlinkDesign, DownlinkRates]:
    """Grid search over the common/private power split t in [0, 1].

    Private streams use zero-forcing with equal fractions, the common stream
    the multicast direction. For the sum-rate objective the whole common rate
    is assigned to user 1 (the sum is invariant to the split); for max-min the
    shares are water-filled to equalize user totals. Ties prefer the smallest
    t. Returns the argmax design and its rates (surrogate rates when a CSIT
    model with error is supplied).
    """
    if objective not in ("sum-rate", "max-min"):
        raise ValueError(f"objective must be 'sum-rate' or 'max-min', got {objective!r}")
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    error_var = csit.error_var if csit is not None else 0.0
    K = channel.n_users
    zf_dirs = zf_private(channel, PowerSplit.equal(K, 0.0), 1.0)  # unit total power
    zf_dirs = zf_dirs / np.linalg.norm(zf_dirs, axis=1)[:, None]
    mc_dir = multicast_common(channel, PowerSplit.equal(K, 1.0), 1.0)

    best: tuple[float, DownlinkDesign, DownlinkRates] | None = None
    for t in np.linspace(0.0, 1.0, grid_size):
        p_c = mc_dir * math.sqrt(t * power_budget)
        p_priv = zf_dirs * math.sqrt((1.0 - t) * power_budget / K)
        gamma_c, gamma_p = _surrogate_sinrs(channel, p_c, p_priv, error_var)
        rate_c = float(np.log2(1.0 + np.min(gamma_c)))
        rate_p = np.log2(1.0 + gamma_p)
        shares = np.zeros(K)
        if objective == "sum-rate":
            shares[0] = rate_c
        else:
            shares = waterfill_shares(rate_p, rate_c)
        totals = rate_p + shares
        value = float(totals.sum()) if objective == "sum-rate" else float(totals.min())
        if best is None or value > best[0]:
            design = DownlinkDesign(p_c, p_priv, shares, power_budget)
            best = (value, design, _rates_from_sinrs(gamma_c, gamma_p, shares))
    return best[1], best[2]


def sdma_corner(channel_estimate: ChannelMatrix, power_budget: float) -> DownlinkDesign:
    """All power on private streams: ZF beams when feasible, matched beams otherwise."""
    K = channel_estimate.n_users
    try:
        p_priv = zf_private(channel_estimate, PowerSplit.equal(K, 0.0), power_budget)
    except ZfInfeasibleError:
        p_priv = matched_private(channel_estimate, power_budget)
    zeros = np.zeros(channel_estimate.n_tx, dtype=complex)
    return DownlinkDesign(zeros, p_priv, np.zeros(K), power_budget)


def noma_corner_2user(
    channel_estimate: ChannelMatrix,
    power_budget: float,
    weak_user: int | None = None,
    grid_size: int = DEFAULT_GRID_SIZE,
    csit: CsitModel | None = None,
) -> DownlinkDesign:
    """Two-user NOMA as a rate-splitting corner design.

    The weak user's whole message rides on the common stream (matched to the
    weak user's estimated channel) and its private stream is off; the strong
    user keeps a matched private beam. The common power fraction is chosen on
    a grid for the best estimated sum rate.
    """
    if channel_estimate.n_users != 2:
        raise ValueError("NOMA corner design supports exactly 2 users")
    norms = np.linalg.norm(channel_estimate.vectors, axis=1)
    if np.any(norms == 0):
        raise ValueError("NOMA corner needs nonzero channel vectors")
    weak = int(np.argmin(norms)) if weak_user is None else int(weak_user)
    if weak not in (0, 1):
        raise ValueError(f"weak_user must be 0 or 1, got {weak_user}")
    strong = 1 - weak
    error_var = csit.error_var if csit is not None else 0.0
    u_weak = channel_estimate.vectors[weak] / norms[weak]
    u_strong = channel_estimate.vectors[strong] / norms[strong]

    best: tuple[float, DownlinkDesign] | None = None
    for q in np.linspace(0.0, 1.0, grid_size):
        p_c = u_weak * math.sqrt(q * power_budget)
        p_priv = np.zeros((2, channel_estimate.n_tx), dtype=complex)
        p_priv[strong] = u_strong * math.sqrt((1.0 - q) * power_budget)
        gamma_c, gamma_p = _surrogate_sinrs(channel_estimate, p_c, p_priv, error_var)
        rate_c = float(np.log2(1.0 + np.min(gamma_c)))
        value = rate_c + float(np.log2(1.0 + gamma_p[strong]))
        if best is None or value > best[0]:
            shares = np.zeros(2)
            shares[weak] = rate_c
            best = (value, DownlinkDesign(p_c, p_priv, shares, power_budget))
    return best[1]


def default_warm_starts(
    channel_estimate: ChannelMatrix,
    power_budget: float,
    grid_size: int = DEFAULT_GRID_SIZE,
    csit: CsitModel | None = None,
    objective: str = "sum-rate",
) -> list[DownlinkDesign]:
    """SDMA corner, NOMA corner (two users) and split-search warm starts."""
    starts = [sdma_corner(channel_estimate, power_budget)]
    if channel_estimate.n_users == 2:
        starts.append(
            noma_corner_2user(channel_estimate, power_budget, grid_size=grid_size, csit=csit)
        )
    try:
        design, _ = split_search(
            channel_estimate, power_budget, objective=objective,
            grid_size=grid_size, csit=csit,
        )
        starts.append(design)
    except ZfInfeasibleError:
        pass  # the SDMA corner already fell back to matched beams
    return starts


def _objective_value(
    channel: ChannelMatrix,
    p_c: np.ndarray,
    p_priv: np.ndarray,
    weights: np.ndarray,
    share_weight: float,
    error_var: float,
) -> float:
    gamma_c, gamma_p = _surrogate_sinrs(channel, p_c, p_priv, error_var)
    rate_c = float(np.log2(1.0 + np.min(gamma_c)))
    return float(np.dot(weights, np.log2(1.0 + gamma_p))) + share_weight * rate_c


def _ascent_direction(
    channel: ChannelMatrix,
    p_c: np.ndarray,
    p_priv: np.ndarray,
    weights: np.ndarray,
    share_weight: float,
    error_var: float,
    temperature: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of a smooth surrogate of the weighted sum rate.

    The min over common SINRs is smoothed with soft-min weights at the given
    temperature; the returned direction is with respect to the conjugate
    precoder coordinates, so a real step along it is steepest ascent.
    """
    H = channel.vectors
    conj_h = H.conj()
    G = conj_h @ p_priv.T  # [j, k] = h_j^H p_k
    g_c = conj_h @ p_c
    cross = np.abs(G) ** 2
    own = np.diagonal(cross)
    base = cross.sum(axis=1)
    if error_var > 0.0:
        priv_pow = np.sum(np.abs(p_priv) ** 2, axis=1)
        total_leak = float(priv_pow.sum())
        den_c = channel.noise_var + base + error_var * total_leak
        den_p = channel.noise_var + base - own + error_var * (total_leak - priv_pow)
    else:
        den_c = channel.noise_var + base
        den_p = channel.noise_var + base - own
    gamma_c = np.abs(g_c) ** 2 / den_c
    gamma_p = own / den_p

    spread = gamma_c - gamma_c.min()
    tau = max(temperature * (1.0 + float(gamma_c.min())), 1e-12)
    soft = np.exp(-spread / tau)
    soft /= soft.sum()

    a = weights / (LN2 * (1.0 + gamma_p))
    b = share_weight * soft / (LN2 * (1.0 + gamma_c))
    c_private = a * gamma_p / den_p
    c_common = b * gamma_c / den_c

    interf = c_private[:, None] * G
    np.fill_diagonal(interf, 0.0)
    interf = interf + c_common[:, None] * G
    grad_priv = (a * np.diagonal(G) / den_p)[:, None] * H - interf.T @ H
    if error_var > 0.0:
        leak_coef = error_var * (c_private.sum() - c_private + c_common.sum())
        grad_priv = grad_priv - leak_coef[:, None] * p_priv
    grad_c = (b * g_c / den_c) @ H
    return grad_c, grad_priv


def _scale_to_budget(
    p_c: np.ndarray, p_priv: np.ndarray, budget: float
) -> tuple[np.ndarray, np.ndarray]:
    total = float(np.sum(np.abs(p_c) ** 2) + np.sum(np.abs(p_priv) ** 2))
    if total <= 0.0:
        return p_c, p_priv
    scale = math.sqrt(budget / total)
    return p_c * scale, p_priv * scale


@dataclass
class _AscentResult:
    objective: float
    trace: list[float]
    iterations: int
    converged: bool
    design: DownlinkDesign


def _ascend(
    channel: ChannelMatrix,
    weights: np.ndarray,
    design0: DownlinkDesign,
    share_to: int | None,
    freeze_common: bool,
    freeze_private: frozenset[int],
    max_iters: int,
    tol: float,
    error_var: float,
) -> _AscentResult:
    """Monotone projected ascent from one warm start.

    Candidate steps are projected onto the full power budget (uniform scaling
    never lowers any SINR) and accepted only when the exact objective
    improves, which makes the recorded trace non-decreasing by construction.
    Frozen precoders must start at zero and then stay there.
    """
    p_c = design0.common_precoder.astype(complex)
    p_priv = design0.private_precoders.astype(complex)
    if freeze_common and np.any(p_c != 0):
        raise ValueError("freeze_common requires a zero common precoder to start")
    for k in freeze_private:
        if np.any(p_priv[k] != 0):
            raise ValueError(f"frozen private precoder {k} must start at zero")
    budget = design0.power_budget
    share_idx = int(np.argmax(weights)) if share_to is None else int(share_to)
    share_weight = float(weights[share_idx])

    f_cur = _objective_value(channel, p_c, p_priv, weights, share_weight, error_var)
    trace = [f_cur]
    converged = False
    iterations = 0
    mu = 0.25 * math.sqrt(budget)
    for it in range(max_iters):
        iterations = it + 1
        temperature = 0.85**it
        g_c, g_priv = _ascent_direction(
            channel, p_c, p_priv, weights, share_weight, error_var, temperature
        )
        if freeze_common:
            g_c = np.zeros_like(g_c)
        for k in freeze_private:
            g_priv[k] = 0.0
        norm = math.sqrt(
            float(np.sum(np.abs(g_c) ** 2) + np.sum(np.abs(g_priv) ** 2))
        )
        accepted = None
        if norm > 0.0:
            step = mu
            floor = 1e-14 * max(1.0, abs(f_cur))  # ignore ulp-level wobble
            for _ in range(14):
                cand_c, cand_priv = _scale_to_budget(
                    p_c + (step / norm) * g_c, p_priv + (step / norm) * g_priv, budget
                )
                f_new = _objective_value(
                    channel, cand_c, cand_priv, weights, share_weight, error_var
                )
                if f_new > f_cur + floor:
                    accepted = (cand_c, cand_priv, f_new, step)
                    break
                step *= 0.25
        if accepted is None:
            converged = True
            break
        p_c, p_priv, f_new, step = accepted
        gain = f_new - f_cur
        f_cur = f_new
        trace.append(f_cur)
        mu = 2.0 * step
        if gain < tol:
            converged = True
            break

    gamma_c, _ = _surrogate_sinrs(channel, p_c, p_priv, error_var)
    rate_c = float(np.log2(1.0 + np.min(gamma_c)))
    shares = np.zeros(channel.n_users)
    if rate_c > 0.0:
        shares[share_idx] = rate_c
    design = DownlinkDesign(p_c, p_priv, shares, budget)
    return _AscentResult(f_cur, trace, iterations, converged, design)


def _check_start(channel: ChannelMatrix, design: DownlinkDesign) -> None:
    if design.n_users != channel.n_users or design.n_tx != channel.n_tx:
        raise OptimizerInitError(
            f"initial design is {design.n_users} x {design.n_tx}, "
            f"channel is {channel.n_users} x {channel.n_tx}"
        )


def optimize_wsr(
    channel_estimate: ChannelMatrix,
    weights,
    initial_designs,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    csit: CsitModel | None = None,
) -> OptimizerReport:
    """Maximize the weighted sum rate by monotone ascent over all warm starts.

    Every supplied design anchors one ascent run; the best final objective
    wins (earliest start on ties). The output objective is therefore never
    below any initial design's weighted sum rate, and the reported trace is
    non-decreasing. The whole common rate is granted to the largest-weight
    user, which is the share split maximizing the weighted sum.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (channel_estimate.n_users,) or np.any(weights <= 0):
        raise ValueError("weights must be K positive reals")
    designs = list(initial_designs)
    if not designs:
        raise OptimizerInitError("at least one initial design is required")
    for d in designs:
        _check_start(channel_estimate, d)
    error_var = csit.error_var if csit is not None else 0.0
    best: _AscentResult | None = None
    for design0 in designs:
        result = _ascend(
            channel_estimate, weights, design0,
            share_to=None, freeze_common=False, freeze_private=frozenset(),
            max_iters=max_iters, tol=tol, error_var=error_var,
        )
        if best is None or result.objective > best.objective:
            best = result
    return OptimizerReport(
        objective_trace=best.trace,
        iterations=best.iterations,
        converged=best.converged,
        best_design=best.design,
    )


def optimize_sdma_wsr(
    channel_estimate: ChannelMatrix,
    weights,
    power_budget: float,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    csit: CsitModel | None = None,
) -> OptimizerReport:
    """Weighted sum-rate ascent restricted to the SDMA corner (no common stream)."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (channel_estimate.n_users,) or np.any(weights <= 0):
        raise ValueError("weights must be K positive reals")
    error_var = csit.error_var if csit is not None else 0.0
    K = channel_estimate.n_users
    starts = [sdma_corner(channel_estimate, power_budget)]
    try:
        matched = matched_private(channel_estimate, power_budget)
        zeros = np.zeros(channel_estimate.n_tx, dtype=complex)
        starts.append(DownlinkDesign(zeros, matched, np.zeros(K), power_budget))
    except ValueError:
        pass
    best: _AscentResult | None = None
    for design0 in starts:
        result = _ascend(
            channel_estimate, weights, design0,
            share_to=None, freeze_common=True, freeze_private=frozenset(),
            max_iters=max_iters, tol=tol, error_var=error_var,
        )
        if best is None or result.objective > best.objective:
            best = result
    return OptimizerReport(
        objective_trace=best.trace,
        iterations=best.iterations,
        converged=best.converged,
        best_design=best.design,
    )


def optimize_noma_wsr_2user(
    channel_estimate: ChannelMatrix,
    weights,
    power_budget: float,
    weak_user: int | None = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    csit: CsitModel | None = None,
) -> OptimizerReport:
    """Weighted sum-rate ascent restricted to the two-user NOMA corner.

    The weak user's private stream stays off and its rate comes entirely from
    the common (base-layer) stream.
    """
    if channel_estimate.n_users != 2:
        raise ValueError("NOMA optimization supports exactly 2 users")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (2,) or np.any(weights <= 0):
        raise ValueError("weights must be 2 positive reals")
    error_var = csit.error_var if csit is not None else 0.0
    norms = np.linalg.norm(channel_estimate.vectors, axis=1)
    weak = int(np.argmin(norms)) if weak_user is None else int(weak_user)
    start = noma_corner_2user(
        channel_estimate, power_budget, weak_user=weak, csit=csit
    )
    result = _ascend(
        channel_estimate, weights, start,
        share_to=weak, freeze_common=False, freeze_private=frozenset({weak}),
        max_iters=max_iters, tol=tol, error_var=error_var,
    )
    return OptimizerReport(
        objective_trace=result.trace,
        iterations=result.iterations,
        converged=result.converged,
        best_design=result.design,
    )
