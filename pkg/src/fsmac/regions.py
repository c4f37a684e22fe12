"""Rate bounds and achievable-region geometry for the discrete channel:
bound evaluation for a fixed input policy, polytope vertex enumeration, and an
inner-bound search over quantized policies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .markov import MarkovChain, delayed_state_joint
from .pmf import DmcChannel, InputPolicy, JointPmf, assemble_joint, conditional_mutual_information

__all__ = [
    "RateBounds",
    "RatePoint",
    "ConferencingConfig",
    "common_message_bounds",
    "conferencing_bounds",
    "polytope_vertices",
    "best_weighted_point",
    "SearchConfig",
    "SearchResult",
    "inner_bound_search",
]

_GEOM_TOL = 1e-12


@dataclass(frozen=True)
class RateBounds:
    """The four evaluated rate constraints, in bits per symbol.

    b1 caps the first private rate, b2 the second, b12 their sum; bsum caps
    the grand total (all three rates in common-message mode, the second sum
    constraint in conferencing mode).
    """

    b1: float
    b2: float
    b12: float
    bsum: float

    def __post_init__(self):
        for name in ("b1", "b2", "b12", "bsum"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if math.isfinite(self.b1) and math.isfinite(self.b2) and self.b12 > self.b1 + self.b2 + 1e-9:
            raise ValueError("b12 exceeds b1 + b2; bounds are not from a single joint law")

    def sum_cap(self, r0: float = 0.0) -> float:
        """Effective cap on r1 + r2 once a total rate r0 is reserved."""
        return min(self.b12, max(self.bsum - r0, 0.0))


@dataclass(frozen=True)
class RatePoint:
    r0: float
    r1: float
    r2: float

    def __post_init__(self):
        if self.r0 < 0 or self.r1 < 0 or self.r2 < 0:
            raise ValueError("rates must be nonnegative")


@dataclass(frozen=True)
class ConferencingConfig:
    """Capacities of the two noise-free inter-encoder links, bits per symbol.

    Infinite values are permitted and mean an unbounded link.
    """

    c12: float = 0.0
    c21: float = 0.0

    def __post_init__(self):
        if self.c12 < 0 or self.c21 < 0 or math.isnan(self.c12) or math.isnan(self.c21):
            raise ValueError("link capacities must be nonnegative")


def common_message_bounds(joint: JointPmf) -> RateBounds:
    """Rate bounds for the common-message mode, evaluated from one joint law."""
    cond = ["S", "Sd1", "Sd2"]
    return RateBounds(
        b1=conditional_mutual_information(joint, ["X1"], ["Y"], ["X2", "U"] + cond),
        b2=conditional_mutual_information(joint, ["X2"], ["Y"], ["X1", "U"] + cond),
        b12=conditional_mutual_information(joint, ["X1", "X2"], ["Y"], ["U"] + cond),
        bsum=conditional_mutual_information(joint, ["X1", "X2"], ["Y"], cond),
    )


def conferencing_bounds(joint: JointPmf, conf: ConferencingConfig) -> RateBounds:
    """Conferencing-mode bounds: link capacities shift the first three caps."""
    base = common_message_bounds(joint)
    return RateBounds(
        b1=base.b1 + conf.c12,
        b2=base.b2 + conf.c21,
        b12=base.b12 + conf.c12 + conf.c21,
        bsum=base.bsum,
    )


def polytope_vertices(bounds: RateBounds, mode: str = "conferencing", r0: float = 0.0) -> list[RatePoint]:
    """Vertices of the (r1, r2) region, counterclockwise from the origin.

    The region is {r >= 0, r1 <= b1, r2 <= b2, r1 + r2 <= cap} with
    cap = min(b12, bsum) in conferencing mode and min(b12, bsum - r0) for a
    common-message slice at total rate r0. Duplicate vertices within 1e-12
    are removed; a degenerate region collapses to the origin alone.
    """
    if mode not in ("conferencing", "common"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "conferencing" and r0 != 0.0:
        raise ValueError("r0 applies to the common-message mode only")
    cap = bounds.sum_cap(r0)
    b1, b2 = bounds.b1, bounds.b2
    pts: list[tuple[float, float]] = [(0.0, 0.0)]
    x_max = min(b1, cap)
    pts.append((x_max, 0.0))
    if b1 + b2 > cap:
        # the sum constraint cuts the corner of the box
        if 0.0 < cap - b1 < b2:
            pts.append((b1, cap - b1))
        if 0.0 < cap - b2 < b1:
            pts.append((cap - b2, b2))
    else:
        pts.append((b1, b2))
    pts.append((0.0, min(b2, cap)))
    out: list[RatePoint] = []
    for x, y in pts:
        if any(abs(x - p.r1) <= _GEOM_TOL and abs(y - p.r2) <= _GEOM_TOL for p in out):
            continue
        out.append(RatePoint(r0, x, y))
    return out


def best_weighted_point(
    bounds: RateBounds, mu1: float, mu2: float, mode: str = "conferencing", r0: float = 0.0
) -> tuple[float, RatePoint]:
    """Maximize mu1*r1 + mu2*r2 over the region; ties prefer larger (r1, r2)."""
    if mu1 < 0 or mu2 < 0 or mu1 + mu2 <= 0:
        raise ValueError("weights must be nonnegative with mu1 + mu2 > 0")
    verts = polytope_vertices(bounds, mode=mode, r0=r0)
    best = max(verts, key=lambda p: (mu1 * p.r1 + mu2 * p.r2, p.r1, p.r2))
    return mu1 * best.r1 + mu2 * best.r2, best


def _simplex_grid(size: int, levels: int) -> np.ndarray:
    """All distributions over `size` symbols with masses at multiples of 1/(levels-1)."""
    ticks = levels - 1
    rows = [
        np.array(c, dtype=float) / ticks
        for c in _compositions(ticks, size)
    ]
    return np.array(rows)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@dataclass
class SearchConfig:
    """Budget and reproducibility knobs for the inner-bound policy search."""

    u_size: int = 2
    grid_levels: int = 5
    restarts: int = 4
    seed: int = 0
    mu1: float = 1.0
    mu2: float = 1.0
    max_passes: int = 30


@dataclass
class SearchResult:
    value: float
    policy: InputPolicy
    point: RatePoint
    bounds: RateBounds
    visited: int = field(repr=False, default=0)


def inner_bound_search(
    chain: MarkovChain,
    d1: int,
    d2: int,
    channel: DmcChannel,
    conf: ConferencingConfig,
    config: SearchConfig,
    joint_states=None,
) -> SearchResult:
    """Search quantized input policies for the best weighted rate.

    Coordinate ascent over the conditional rows of the policy on a simplex
    grid, restarted from seeded random rows; every restart derives its own
    random stream from (seed, restart index), so results do not depend on
    execution order. The returned value is an inner bound: it is the exact
    weighted rate of the returned policy, never an extrapolation.

    `joint_states` overrides the state law computed from (chain, d1, d2),
    for surrogate models such as a decoupled first observation.
    """
    if config.restarts < 1 or config.max_passes < 1:
        raise ValueError("search budget must be positive (restarts and passes >= 1)")
    if config.grid_levels < 2:
        raise ValueError("grid_levels must be >= 2")
    k = chain.k
    n_u = config.u_size
    cap = channel.n_x1 * channel.n_x2 * k**3 + 2
    if n_u > cap:
        raise ValueError(f"u_size {n_u} exceeds the ceiling {cap}")
    dsj = joint_states if joint_states is not None else delayed_state_joint(chain, d1, d2)

    # one flat list of conditional rows; each row is a simplex of its own size
    row_specs: list[tuple[str, tuple[int, ...], int]] = []
    for a in range(k):
        row_specs.append(("pU", (a,), n_u))
    for u in range(n_u):
        for a in range(k):
            row_specs.append(("pX1", (u, a), channel.n_x1))
    for u in range(n_u):
        for a in range(k):
            for b in range(k):
                row_specs.append(("pX2", (u, a, b), channel.n_x2))

    def make_policy(rows: list[np.ndarray]) -> InputPolicy:
        pU = np.empty((k, n_u))
        pX1 = np.empty((n_u, k, channel.n_x1))
        pX2 = np.empty((n_u, k, k, channel.n_x2))
        arrays = {"pU": pU, "pX1": pX1, "pX2": pX2}
        for (name, idx, _size), row in zip(row_specs, rows):
            arrays[name][idx] = row
        return InputPolicy(pU, pX1, pX2)

    def evaluate(rows: list[np.ndarray]) -> float:
        policy = make_policy(rows)
        bounds = conferencing_bounds(assemble_joint(dsj, policy, channel), conf)
        return best_weighted_point(bounds, config.mu1, config.mu2)[0]

    grids = {size: _simplex_grid(size, config.grid_levels) for _, _, size in row_specs}
    visited = 0
    best_val = -np.inf
    best_rows: list[np.ndarray] | None = None
    for restart in range(config.restarts):
        if restart == 0:
            rows = [np.full(size, 1.0 / size) for _, _, size in row_specs]
        else:
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(config.seed, restart)))
            rows = [rng.dirichlet(np.ones(size)) for _, _, size in row_specs]
        cur_val = evaluate(rows)
        visited += 1
        for _ in range(config.max_passes):
            improved = False
            for row_i in range(len(rows)):
                keep = rows[row_i]
                for cand in grids[row_specs[row_i][2]]:
                    rows[row_i] = cand
                    val = evaluate(rows)
                    visited += 1
                    if val > cur_val + 1e-12:
                        cur_val = val
                        keep = cand
                        improved = True
                rows[row_i] = keep
            if not improved:
                break
        if cur_val > best_val:
            best_val = cur_val
            best_rows = [np.array(r) for r in rows]
    assert best_rows is not None
    policy = make_policy(best_rows)
    bounds = conferencing_bounds(assemble_joint(dsj, policy, channel), conf)
    value, point = best_weighted_point(bounds, config.mu1, config.mu2)
    return SearchResult(value=value, policy=policy, point=point, bounds=bounds, visited=visited)
