"""Closed-form single-state scalar analyses: the critical SNR below which the
optimal input correlation is 1, the infinite-SNR correlation limit, and their
numerical cross-check against the allocation solver."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .gaussian import GaussianMacSpec, SolverConfig, maximize_weighted_rate
from .markov import MarkovChain
from .regions import ConferencingConfig

__all__ = [
    "snr_critical",
    "snr_critical_db",
    "rho_infinity",
    "beta_star_high_snr",
    "rho_from_beta",
    "CorrelationProfile",
    "correlation_profile_numeric",
]

# These closed forms are derived under the real-signal (1/2) log2 convention;
# the numeric cross-check pins the same convention.
_CONVENTION = "real"


def snr_critical(c12: float, c21: float) -> float:
    """Linear SNR below which full correlation (rho = 1) is optimal.

    Equals (2^(2(c12+c21)) - 1) / 4; zero when both links are absent.
    """
    if c12 < 0 or c21 < 0:
        raise ValueError("link capacities must be nonnegative")
    return (2.0 ** (2.0 * (c12 + c21)) - 1.0) / 4.0


def snr_critical_db(c12: float, c21: float) -> float:
    """snr_critical in dB; -inf when the linear value is zero."""
    lin = snr_critical(c12, c21)
    if lin == 0.0:
        return float("-inf")
    return 10.0 * math.log10(lin)


def rho_infinity(c12: float, c21: float) -> float:
    """Optimal correlation in the infinite-SNR limit,
    sqrt(1 - 2 / (2^(2(c12+c21)) + 1)); nondecreasing in c12 + c21."""
    if c12 < 0 or c21 < 0:
        raise ValueError("link capacities must be nonnegative")
    return math.sqrt(1.0 - 2.0 / (2.0 ** (2.0 * (c12 + c21)) + 1.0))


def beta_star_high_snr(p1: float, p2: float, c12: float, c21: float) -> float:
    """High-SNR private-power fraction at the bound intersection:

    (sqrt(p1) + sqrt(p2))^2 / (2^(2(c12+c21)) (p1 + p2) + 2 sqrt(p1 p2)),
    which reduces to 2 / (2^(2(c12+c21)) + 1) for equal powers.
    """
    if p1 <= 0 or p2 <= 0:
        raise ValueError("powers must be positive")
    if c12 < 0 or c21 < 0:
        raise ValueError("link capacities must be nonnegative")
    num = (math.sqrt(p1) + math.sqrt(p2)) ** 2
    den = 2.0 ** (2.0 * (c12 + c21)) * (p1 + p2) + 2.0 * math.sqrt(p1 * p2)
    # mathematically in (0, 1]; clamp the floating-point residue
    return min(max(num / den, 0.0), 1.0)


def rho_from_beta(beta: float) -> float:
    """Correlation from the private-power fraction: rho = sqrt(1 - beta)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    return math.sqrt(1.0 - beta)


@dataclass
class CorrelationProfile:
    """Numerically optimal correlation as a function of SNR at fixed links."""

    snr_db: list[float]
    rho: list[float]
    c12: float
    c21: float
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.snr_db) != len(self.rho):
            raise ValueError("snr_db and rho must have equal length")
        if any(not 0.0 <= r <= 1.0 for r in self.rho):
            raise ValueError("correlations must lie in [0, 1]")


def correlation_profile_numeric(
    c12: float,
    c21: float,
    snr_db: list[float],
    config: SolverConfig | None = None,
) -> CorrelationProfile:
    """Solve the symmetric scalar instance (one state, unit gains, equal
    powers) at each SNR and record rho* = sqrt(1 - gamma/P).

    The sum-rate objective is symmetric in the two encoders, so the solver is
    run with the user-tying option and a single private fraction is read off.
    """
    base_cfg = config or SolverConfig()
    chain = MarkovChain(["s0"], [[1.0]])
    conf = ConferencingConfig(c12, c21)
    rhos: list[float] = []
    flags: list[str] = []
    for i, s_db in enumerate(snr_db):
        p = 10.0 ** (s_db / 10.0)
        spec = GaussianMacSpec(
            chain, [[1.0]], [[1.0]], p, p, conf, d1=0, d2=0, convention=_CONVENTION
        )
        cfg = SolverConfig(
            tolerance=base_cfg.tolerance,
            iterations=base_cfg.iterations,
            rounds=base_cfg.rounds,
            multistarts=base_cfg.multistarts,
            seed=base_cfg.seed + i,
            tie_users=True,
        )
        res = maximize_weighted_rate(spec, 1.0, 1.0, cfg)
        power = res.alloc.P1[0, 0]
        beta = res.alloc.gamma1[0, 0] / power if power > 0 else 0.0
        rhos.append(rho_from_beta(min(max(beta, 0.0), 1.0)))
        flags.append(res.flag)
    return CorrelationProfile(list(snr_db), rhos, c12, c21, flags)
