"""Capacity region of the diagonal-vector Gaussian channel with cooperating
encoders and delayed state observations, as a concave program over power and
correlation allocations, solved by projected supergradient ascent."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .markov import MarkovChain, n_step_matrix
from .regions import ConferencingConfig, RateBounds, RatePoint, best_weighted_point

__all__ = [
    "GaussianMacSpec",
    "Allocation",
    "FeasibilityReport",
    "FeasibilityError",
    "SolverConfig",
    "GaussianSolveResult",
    "TracePoint",
    "rate_bounds_gaussian",
    "common_message_bounds_gaussian",
    "feasible",
    "maximize_weighted_rate",
    "trace_boundary",
    "common_message_region_gaussian",
    "GaussianTripleCovariance",
    "check_gaussian_markov",
]

_LN2 = math.log(2.0)
_FEAS_SLACK = 1e-9


class FeasibilityError(ValueError):
    """Raised when an allocation violates the power or correlation constraints."""


class GaussianMacSpec:
    """Problem instance: per-state subchannel gain magnitudes, power budgets,
    conferencing link capacities, the state chain and the observation delays.

    Noise is normalized to unit variance, so gains are relative amplitudes.
    `convention` selects the rate unit: "complex" uses log2(1 + x) per
    subchannel (proper complex signalling), "real" uses (1/2) log2(1 + x).
    """

    def __init__(
        self,
        chain: MarkovChain,
        gains1,
        gains2,
        pbar1: float,
        pbar2: float,
        conf: ConferencingConfig,
        d1: int,
        d2: int,
        convention: str = "real",
    ) -> None:
        gains1 = np.atleast_2d(np.asarray(gains1, dtype=float))
        gains2 = np.atleast_2d(np.asarray(gains2, dtype=float))
        k = chain.k
        if gains1.shape[0] != k or gains2.shape[0] != k:
            raise ValueError(f"gain arrays must have one row per state ({k})")
        if gains1.shape != gains2.shape:
            raise ValueError("gain arrays of the two encoders must have equal shape")
        if np.any(gains1 < 0) or np.any(gains2 < 0):
            raise ValueError("gain magnitudes must be nonnegative")
        if pbar1 < 0 or pbar2 < 0:
            raise ValueError("power budgets must be nonnegative")
        if d2 < 0 or d2 > d1:
            raise ValueError(f"delay ordering violated: d1 >= d2 >= 0 required, got ({d1}, {d2})")
        if convention not in ("real", "complex"):
            raise ValueError(f"unknown log convention {convention!r}")
        self.chain = chain
        self.gains1 = gains1
        self.gains2 = gains2
        self.pbar1 = float(pbar1)
        self.pbar2 = float(pbar2)
        self.conf = conf
        self.d1 = int(d1)
        self.d2 = int(d2)
        self.convention = convention
        pi = chain.pi
        self._w2 = pi[:, None] * n_step_matrix(chain, d1 - d2)
        self._w3 = self._w2[:, :, None] * n_step_matrix(chain, d2)[None, :, :]
        self._wA = pi[:, None] * n_step_matrix(chain, d1)

    @property
    def n_sub(self) -> int:
        return self.gains1.shape[1]

    @property
    def k(self) -> int:
        return self.chain.k

    @property
    def log_factor(self) -> float:
        return 0.5 if self.convention == "real" else 1.0

    def state_weights(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(w2, w3, wA): pair, triple and encoder-1-to-state weight tables."""
        return self._w2, self._w3, self._wA


class Allocation:
    """Decision variables: per-observed-state per-subchannel transmit powers
    and their private (uncorrelated) components.

    P1, gamma1 are indexed [observed state of encoder 1, subchannel];
    P2, gamma2 by [observed state 1, observed state 2, subchannel].
    """

    def __init__(self, P1, gamma1, P2, gamma2) -> None:
        self.P1 = np.atleast_2d(np.asarray(P1, dtype=float))
        self.gamma1 = np.atleast_2d(np.asarray(gamma1, dtype=float))
        self.P2 = np.asarray(P2, dtype=float)
        self.gamma2 = np.asarray(gamma2, dtype=float)
        if self.P2.ndim != 3 or self.gamma2.ndim != 3:
            raise ValueError("P2 and gamma2 must be 3-d arrays [state1, state2, subchannel]")
        if self.P1.shape != self.gamma1.shape or self.P2.shape != self.gamma2.shape:
            raise ValueError("power and gamma arrays must have matching shapes")
        k, n = self.P1.shape
        if self.P2.shape != (k, k, n):
            raise ValueError(f"P2 must have shape ({k}, {k}, {n}), got {self.P2.shape}")

    @staticmethod
    def zeros(k: int, n_sub: int) -> "Allocation":
        return Allocation(
            np.zeros((k, n_sub)), np.zeros((k, n_sub)),
            np.zeros((k, k, n_sub)), np.zeros((k, k, n_sub)),
        )

    def copy(self) -> "Allocation":
        return Allocation(self.P1.copy(), self.gamma1.copy(), self.P2.copy(), self.gamma2.copy())


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.ok


def feasible(spec: GaussianMacSpec, alloc: Allocation) -> FeasibilityReport:
    """Check the two power budgets and the gamma boxes, reporting the first violation."""
    k, n = alloc.P1.shape
    if (k, n) != (spec.k, spec.n_sub):
        raise ValueError(
            f"allocation shape ({k}, {n}) does not match spec ({spec.k}, {spec.n_sub})"
        )
    w2, _, _ = spec.state_weights()
    pi = spec.chain.pi
    used1 = float((pi[:, None] * alloc.P1).sum())
    if used1 > spec.pbar1 + _FEAS_SLACK:
        return FeasibilityReport(False, f"encoder-1 power budget: {used1!r} > {spec.pbar1!r}")
    used2 = float((w2[:, :, None] * alloc.P2).sum())
    if used2 > spec.pbar2 + _FEAS_SLACK:
        return FeasibilityReport(False, f"encoder-2 power budget: {used2!r} > {spec.pbar2!r}")
    for name, g, P in (("gamma1", alloc.gamma1, alloc.P1), ("gamma2", alloc.gamma2, alloc.P2)):
        if (g < -_FEAS_SLACK).any():
            cell = tuple(int(i) for i in np.argwhere(g < -_FEAS_SLACK)[0])
            return FeasibilityReport(False, f"{name} negative at cell {cell}")
        over = g > P + _FEAS_SLACK
        if over.any():
            cell = tuple(int(i) for i in np.argwhere(over)[0])
            return FeasibilityReport(False, f"{name} exceeds its power at cell {cell}")
    return FeasibilityReport(True)


def _bounds_from_parts(spec, gamma1, delta1, gamma2, delta2, c12, c21):
    """The four rate caps for P = gamma + delta; exact, no interior smoothing."""
    _, w3, wA = spec.state_weights()
    L = spec.log_factor
    G1sq = spec.gains1**2
    G2sq = spec.gains2**2
    b1 = (wA[:, :, None] * L * np.log2(1.0 + G1sq[None, :, :] * gamma1[:, None, :])).sum() + c12
    b2 = (w3[:, :, :, None] * L * np.log2(1.0 + G2sq[None, None, :, :] * gamma2[:, :, None, :])).sum() + c21
    b12 = (
        w3[:, :, :, None]
        * L
        * np.log2(
            1.0
            + G1sq[None, None, :, :] * gamma1[:, None, None, :]
            + G2sq[None, None, :, :] * gamma2[:, :, None, :]
        )
    ).sum() + c12 + c21
    P1 = gamma1 + delta1
    P2 = gamma2 + delta2
    cross = 2.0 * spec.gains1[None, None, :, :] * spec.gains2[None, None, :, :] * np.sqrt(
        delta1[:, None, :] * delta2
    )[:, :, None, :]
    bsum = (
        w3[:, :, :, None]
        * L
        * np.log2(
            1.0
            + G1sq[None, None, :, :] * P1[:, None, None, :]
            + G2sq[None, None, :, :] * P2[:, :, None, :]
            + cross
        )
    ).sum()
    return float(b1), float(b2), float(b12), float(bsum)


def rate_bounds_gaussian(spec: GaussianMacSpec, alloc: Allocation) -> RateBounds:
    """Evaluate the four conferencing-mode rate caps at a feasible allocation."""
    report = feasible(spec, alloc)
    if not report:
        raise FeasibilityError(report.violation)
    delta1 = np.maximum(alloc.P1 - alloc.gamma1, 0.0)
    delta2 = np.maximum(alloc.P2 - alloc.gamma2, 0.0)
    b1, b2, b12, bsum = _bounds_from_parts(
        spec, alloc.gamma1, delta1, alloc.gamma2, delta2, spec.conf.c12, spec.conf.c21
    )
    return RateBounds(b1, b2, b12, bsum)


def common_message_bounds_gaussian(spec: GaussianMacSpec, alloc: Allocation) -> RateBounds:
    """Common-message caps: no link offsets; bsum caps the three-rate total."""
    report = feasible(spec, alloc)
    if not report:
        raise FeasibilityError(report.violation)
    delta1 = np.maximum(alloc.P1 - alloc.gamma1, 0.0)
    delta2 = np.maximum(alloc.P2 - alloc.gamma2, 0.0)
    return RateBounds(*_bounds_from_parts(spec, alloc.gamma1, delta1, alloc.gamma2, delta2, 0.0, 0.0))


# ---------------------------------------------------------------------------
# solver internals
# ---------------------------------------------------------------------------

def _mul(a: float, b: float) -> float:
    # 0 * inf must read as 0 when a weight deactivates an unbounded cap
    return 0.0 if a == 0.0 else a * b


def _lp_value_duals(b1, b2, b12, bsum, mu1, mu2, r0=0.0):
    """Value and duals of max mu.r over {r>=0, r1<=b1, r2<=b2, r1+r2<=cap}.

    cap = min(b12, bsum - r0). Returns (value, y1, y2, y3, cap_is_bsum).
    """
    shifted = max(bsum - r0, 0.0)
    if shifted <= b12:
        bs, cap_is_bsum = shifted, True
    else:
        bs, cap_is_bsum = b12, False
    if mu1 >= mu2:
        cands = (_mul(mu1, b1) + _mul(mu2, b2), _mul(mu1 - mu2, b1) + _mul(mu2, bs), _mul(mu1, bs))
        ys = ((mu1, mu2, 0.0), (mu1 - mu2, 0.0, mu2), (0.0, 0.0, mu1))
    else:
        cands = (_mul(mu1, b1) + _mul(mu2, b2), _mul(mu2 - mu1, b2) + _mul(mu1, bs), _mul(mu2, bs))
        ys = ((mu1, mu2, 0.0), (0.0, mu2 - mu1, mu1), (0.0, 0.0, mu2))
    j = int(np.argmin(cands))
    return cands[j], *ys[j], cap_is_bsum


def _budget_project_pair(gam, dlt, w, budget):
    """Euclidean projection of (gam, dlt) onto
    {gam >= 0, dlt >= 0, sum w*(gam + dlt) <= budget}; zero-weight cells are
    only clipped at zero since the budget never sees them."""
    x = np.concatenate([gam.ravel(), dlt.ravel()])
    u = np.concatenate([w.ravel(), w.ravel()])
    z = np.maximum(x, 0.0)
    act = u > 0
    if (u[act] * z[act]).sum() <= budget:
        out = z
    else:
        xf, uf = x[act], u[act]
        order = np.argsort(xf / uf)[::-1]
        xs, us = xf[order], uf[order]
        cw2 = np.cumsum(us * us)
        cwx = np.cumsum(us * xs)
        lams = xs / us
        usage = cwx - lams * cw2  # budget used at threshold lams[j]; ascending in j
        j = max(int(np.searchsorted(usage, budget, side="right")) - 1, 0)
        lam = max((cwx[j] - budget) / cw2[j], 0.0)
        out = np.empty_like(x)
        out[act] = np.maximum(xf - lam * uf, 0.0)
        out[~act] = np.maximum(x[~act], 0.0)
    ng = gam.size
    return out[:ng].reshape(gam.shape), out[ng:].reshape(dlt.shape)


def _bounds_and_grads(spec, gamma1, delta1, gamma2, delta2, c12, c21):
    """Bounds plus supergradients in the (gamma, delta) coordinates.

    The square-root cross term has an unbounded derivative as delta -> 0, so
    gradient ratios are evaluated at an interior point floored at 1e-9 * P.
    """
    _, w3, wA = spec.state_weights()
    L = spec.log_factor
    C = L / _LN2
    G1 = spec.gains1
    G2 = spec.gains2
    G1sq = G1**2
    G2sq = G2**2
    A1 = 1.0 + G1sq[None, :, :] * gamma1[:, None, :]
    b1 = (wA[:, :, None] * L * np.log2(A1)).sum() + c12
    db1_g1 = C * (wA[:, :, None] * (G1sq[None, :, :] / A1)).sum(axis=1)
    A2 = 1.0 + G2sq[None, None, :, :] * gamma2[:, :, None, :]
    b2 = (w3[:, :, :, None] * L * np.log2(A2)).sum() + c21
    db2_g2 = C * (w3[:, :, :, None] * (G2sq[None, None, :, :] / A2)).sum(axis=2)
    A12 = (
        1.0
        + G1sq[None, None, :, :] * gamma1[:, None, None, :]
        + G2sq[None, None, :, :] * gamma2[:, :, None, :]
    )
    b12 = (w3[:, :, :, None] * L * np.log2(A12)).sum() + c12 + c21
    d12_g1 = C * (w3[:, :, :, None] * (G1sq[None, None, :, :] / A12)).sum(axis=(1, 2))
    d12_g2 = C * (w3[:, :, :, None] * (G2sq[None, None, :, :] / A12)).sum(axis=2)
    P1 = gamma1 + delta1
    P2 = gamma2 + delta2
    root = np.sqrt(delta1[:, None, :] * delta2)
    GG = G1[None, None, :, :] * G2[None, None, :, :]
    As = (
        1.0
        + G1sq[None, None, :, :] * P1[:, None, None, :]
        + G2sq[None, None, :, :] * P2[:, :, None, :]
        + 2.0 * GG * root[:, :, None, :]
    )
    bsum = (w3[:, :, :, None] * L * np.log2(As)).sum()
    d1s = np.maximum(delta1, 1e-9 * P1 + 1e-300)
    d2s = np.maximum(delta2, 1e-9 * P2 + 1e-300)
    rt1 = np.sqrt(d2s / d1s[:, None, :])
    rt2 = np.sqrt(d1s[:, None, :] / d2s)
    ds_g1 = C * (w3[:, :, :, None] * (G1sq[None, None, :, :] / As)).sum(axis=(1, 2))
    ds_g2 = C * (w3[:, :, :, None] * (G2sq[None, None, :, :] / As)).sum(axis=2)
    ds_d1 = C * (w3[:, :, :, None] * ((G1sq[None, None, :, :] + GG * rt1[:, :, None, :]) / As)).sum(axis=(1, 2))
    ds_d2 = C * (w3[:, :, :, None] * ((G2sq[None, None, :, :] + GG * rt2[:, :, None, :]) / As)).sum(axis=2)
    grads = {
        "b1_g1": db1_g1, "b2_g2": db2_g2, "b12_g1": d12_g1, "b12_g2": d12_g2,
        "s_g1": ds_g1, "s_g2": ds_g2, "s_d1": ds_d1, "s_d2": ds_d2,
    }
    return (float(b1), float(b2), float(b12), float(bsum)), grads


@dataclass
class SolverConfig:
    """Budget of the multistart projected supergradient ascent.

    Each start runs `rounds` sweeps of `iterations` target-level steps, with
    the target gap shrinking geometrically between sweeps. `tie_users`
    constrains the two encoders to a shared allocation (single-state
    symmetric instances only).
    """

    tolerance: float = 1e-9
    iterations: int = 400
    rounds: int = 10
    multistarts: int = 2
    seed: int = 0
    tie_users: bool = False


@dataclass
class GaussianSolveResult:
    value: float
    point: RatePoint
    alloc: Allocation
    flag: str
    kkt_residual: float


@dataclass(frozen=True)
class TracePoint:
    theta: float
    point: RatePoint
    value: float
    flag: str


def _solve(spec: GaussianMacSpec, mu1: float, mu2: float, config: SolverConfig,
           c12: float, c21: float, r0: float = 0.0):
    k, N = spec.k, spec.n_sub
    pi = spec.chain.pi
    w2, _, _ = spec.state_weights()
    if config.tie_users:
        if k != 1:
            raise ValueError("tie_users requires a single-state spec")
        if spec.pbar1 != spec.pbar2:
            raise ValueError("tie_users requires equal power budgets")
    wP1 = np.broadcast_to(pi[:, None], (k, N))
    wP2 = np.broadcast_to(w2[:, :, None], (k, k, N))

    def symmetrize(g1, d1, g2, d2):
        if not config.tie_users:
            return g1, d1, g2, d2
        gm = 0.5 * (g1 + g2.reshape(g1.shape))
        dm = 0.5 * (d1 + d2.reshape(d1.shape))
        return gm.copy(), dm.copy(), gm.reshape(g2.shape).copy(), dm.reshape(d2.shape).copy()

    P1u = np.full((k, N), spec.pbar1 / N)
    P2u = np.full((k, k, N), spec.pbar2 / N)
    z1 = np.zeros((k, N))
    z2 = np.zeros((k, k, N))
    starts = [
        (P1u.copy(), z1.copy(), P2u.copy(), z2.copy()),   # fully correlated: gamma = P
        (z1.copy(), P1u.copy(), z2.copy(), P2u.copy()),   # fully private: gamma = 0
        (0.5 * P1u, 0.5 * P1u, 0.5 * P2u, 0.5 * P2u),
    ]
    for r_i in range(config.multistarts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=(config.seed, r_i)))
        P1r = rng.random((k, N))
        s1 = (wP1 * P1r).sum()
        if s1 > 0:
            P1r *= spec.pbar1 / s1
        P2r = rng.random((k, k, N))
        s2 = (wP2 * P2r).sum()
        if s2 > 0:
            P2r *= spec.pbar2 / s2
        f1 = rng.random((k, N))
        f2 = rng.random((k, k, N))
        starts.append((f1 * P1r, (1 - f1) * P1r, f2 * P2r, (1 - f2) * P2r))

    best_v = -np.inf
    best_x = None
    exhausted = False
    for st in starts:
        g1, d1, g2, d2 = (a.copy() for a in st)
        g1, d1 = _budget_project_pair(g1, d1, wP1, spec.pbar1)
        g2, d2 = _budget_project_pair(g2, d2, wP2, spec.pbar2)
        g1, d1, g2, d2 = symmetrize(g1, d1, g2, d2)
        (b1, b2, b12, bsum), _ = _bounds_and_grads(spec, g1, d1, g2, d2, c12, c21)
        v0, *_ = _lp_value_duals(b1, b2, b12, bsum, mu1, mu2, r0)
        loc_v = v0
        loc_x = (g1.copy(), d1.copy(), g2.copy(), d2.copy())
        gap = max(0.05 * max(abs(v0), 1e-6), 1e-3)
        for rnd in range(config.rounds):
            round_start = loc_v
            for _ in range(config.iterations):
                (b1, b2, b12, bsum), gr = _bounds_and_grads(spec, g1, d1, g2, d2, c12, c21)
                v, y1, y2, y3, cap_is_bsum = _lp_value_duals(b1, b2, b12, bsum, mu1, mu2, r0)
                if v > loc_v:
                    loc_v = v
                    loc_x = (g1.copy(), d1.copy(), g2.copy(), d2.copy())
                gg1 = y1 * gr["b1_g1"]
                gg2 = y2 * gr["b2_g2"]
                gd1 = np.zeros_like(d1)
                gd2 = np.zeros_like(d2)
                if y3 > 0:
                    if cap_is_bsum:
                        gg1 = gg1 + y3 * gr["s_g1"]
                        gg2 = gg2 + y3 * gr["s_g2"]
                        gd1 = gd1 + y3 * gr["s_d1"]
                        gd2 = gd2 + y3 * gr["s_d2"]
                    else:
                        gg1 = gg1 + y3 * gr["b12_g1"]
                        gg2 = gg2 + y3 * gr["b12_g2"]
                n2 = (gg1**2).sum() + (gg2**2).sum() + (gd1**2).sum() + (gd2**2).sum()
                if n2 < 1e-300:
                    break
                step = (loc_v + gap - v) / n2
                g1, d1 = _budget_project_pair(g1 + step * gg1, d1 + step * gd1, wP1, spec.pbar1)
                g2, d2 = _budget_project_pair(g2 + step * gg2, d2 + step * gd2, wP2, spec.pbar2)
                g1, d1, g2, d2 = symmetrize(g1, d1, g2, d2)
            g1, d1, g2, d2 = (a.copy() for a in loc_x)
            gap *= 0.4
            if rnd == config.rounds - 1 and loc_v - round_start > config.tolerance:
                exhausted = True
        if loc_v > best_v:
            best_v = loc_v
            best_x = loc_x
    g1, d1, g2, d2 = best_x
    alloc = Allocation(g1 + d1, g1, g2 + d2, g2)
    # projected-ascent residual: feasible displacement per unit supergradient step
    (b1, b2, b12, bsum), gr = _bounds_and_grads(spec, g1, d1, g2, d2, c12, c21)
    _, y1, y2, y3, cap_is_bsum = _lp_value_duals(b1, b2, b12, bsum, mu1, mu2, r0)
    gg1 = y1 * gr["b1_g1"] + (y3 * (gr["s_g1"] if cap_is_bsum else gr["b12_g1"]) if y3 > 0 else 0.0)
    gg2 = y2 * gr["b2_g2"] + (y3 * (gr["s_g2"] if cap_is_bsum else gr["b12_g2"]) if y3 > 0 else 0.0)
    gd1 = y3 * gr["s_d1"] if (y3 > 0 and cap_is_bsum) else np.zeros_like(d1)
    gd2 = y3 * gr["s_d2"] if (y3 > 0 and cap_is_bsum) else np.zeros_like(d2)
    tau = 1e-6 * max(spec.pbar1, spec.pbar2, 1.0)
    p1, q1 = _budget_project_pair(g1 + tau * gg1, d1 + tau * gd1, wP1, spec.pbar1)
    p2, q2 = _budget_project_pair(g2 + tau * gg2, d2 + tau * gd2, wP2, spec.pbar2)
    disp = max(
        np.abs(p1 - g1).max(), np.abs(q1 - d1).max(),
        np.abs(p2 - g2).max(), np.abs(q2 - d2).max(),
    )
    residual = float(disp / tau)
    bounds = RateBounds(b1, b2, b12, max(bsum - r0, 0.0))
    value, point = best_weighted_point(bounds, mu1, mu2)
    point = RatePoint(r0, point.r1, point.r2)
    flag = "budget-exhausted" if exhausted else "converged"
    return GaussianSolveResult(value=value, point=point, alloc=alloc, flag=flag, kkt_residual=residual)


def maximize_weighted_rate(
    spec: GaussianMacSpec, mu1: float, mu2: float, config: SolverConfig | None = None
) -> GaussianSolveResult:
    """Best feasible allocation for the weighted rate mu1*r1 + mu2*r2.

    The inner linear program over the rate polytope is concave and
    nondecreasing in the four caps, each cap is concave in the allocation, so
    the multistart supergradient ascent reports a global value up to the step
    schedule. Deterministic for a fixed seed.
    """
    if mu1 < 0 or mu2 < 0 or mu1 + mu2 <= 0:
        raise ValueError("weights must be nonnegative with mu1 + mu2 > 0")
    config = config or SolverConfig()
    return _solve(spec, mu1, mu2, config, spec.conf.c12, spec.conf.c21)


def trace_boundary(
    spec: GaussianMacSpec, n_directions: int, config: SolverConfig | None = None
) -> list[TracePoint]:
    """Sweep weight directions over the open quarter circle and keep the
    mutually non-dominated achieved points."""
    if n_directions < 2:
        raise ValueError("n_directions must be >= 2")
    config = config or SolverConfig()
    raw: list[TracePoint] = []
    for j in range(n_directions):
        theta = (j + 1) * (math.pi / 2) / (n_directions + 1)
        res = _solve(spec, math.cos(theta), math.sin(theta), config, spec.conf.c12, spec.conf.c21)
        raw.append(TracePoint(theta, res.point, res.value, res.flag))
    return _non_dominated(raw)


def common_message_region_gaussian(
    spec: GaussianMacSpec,
    n_directions: int,
    config: SolverConfig | None = None,
    r0: float = 0.0,
) -> list[TracePoint]:
    """Boundary of the (r1, r2) slice of the common-message region at rate r0.

    Same machinery as the conferencing trace with the link offsets removed
    and the total cap reduced by r0.
    """
    if n_directions < 2:
        raise ValueError("n_directions must be >= 2")
    if r0 < 0:
        raise ValueError("r0 must be nonnegative")
    config = config or SolverConfig()
    raw: list[TracePoint] = []
    for j in range(n_directions):
        theta = (j + 1) * (math.pi / 2) / (n_directions + 1)
        res = _solve(spec, math.cos(theta), math.sin(theta), config, 0.0, 0.0, r0=r0)
        raw.append(TracePoint(theta, res.point, res.value, res.flag))
    return _non_dominated(raw)


def _non_dominated(points: list[TracePoint]) -> list[TracePoint]:
    eps = 1e-12

    def dominates(q: TracePoint, p: TracePoint) -> bool:
        return (
            q.point.r1 >= p.point.r1 - eps
            and q.point.r2 >= p.point.r2 - eps
            and (q.point.r1 > p.point.r1 + eps or q.point.r2 > p.point.r2 + eps)
        )

    kept: list[TracePoint] = []
    for p in points:
        if any(dominates(q, p) for q in points if q is not p):
            continue
        if any(
            abs(q.point.r1 - p.point.r1) <= eps and abs(q.point.r2 - p.point.r2) <= eps
            for q in kept
        ):
            continue
        kept.append(p)
    return kept


# ---------------------------------------------------------------------------
# Gaussian Markov-chain covariance predicate
# ---------------------------------------------------------------------------

class GaussianTripleCovariance:
    """Cross and auto covariances of a jointly Gaussian triple (A, B, C)."""

    def __init__(self, sigma_ab, sigma_bb, sigma_bc, sigma_ac) -> None:
        self.sigma_ab = np.atleast_2d(np.asarray(sigma_ab, dtype=float))
        self.sigma_bb = np.atleast_2d(np.asarray(sigma_bb, dtype=float))
        self.sigma_bc = np.atleast_2d(np.asarray(sigma_bc, dtype=float))
        self.sigma_ac = np.atleast_2d(np.asarray(sigma_ac, dtype=float))
        B = self.sigma_bb
        if B.shape[0] != B.shape[1]:
            raise ValueError("sigma_bb must be square")
        if not np.allclose(B, B.T, atol=1e-10):
            raise ValueError("sigma_bb must be symmetric")
        try:
            np.linalg.cholesky(B)
        except np.linalg.LinAlgError as exc:
            raise ValueError("sigma_bb must be positive definite") from exc


def check_gaussian_markov(cov: GaussianTripleCovariance, tol: float) -> bool:
    """Whether the triple is Markov A - B - C: the AC covariance must factor
    through B, i.e. Sigma_AC = Sigma_AB Sigma_BB^{-1} Sigma_BC (max-norm tol)."""
    predicted = cov.sigma_ab @ np.linalg.solve(cov.sigma_bb, cov.sigma_bc)
    return bool(np.abs(cov.sigma_ac - predicted).max() <= tol)
