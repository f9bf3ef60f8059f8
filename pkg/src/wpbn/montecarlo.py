"""Network-level Monte Carlo: realize PPP snapshots, compute the typical
receiver's SINR under a power model, estimate coverage and capacity.

Convention: the receiver sits at the origin and the typical BN at distance
``d00`` in a uniformly random direction. Every trial owns a child of the
master ``SeedSequence``, so results do not depend on how trials are batched
or distributed over workers.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special
from scipy.spatial import cKDTree

from .analysis import CapacityEstimate, CoverageEstimate, Method, mean_power_all_pbs
from .channel import PathLossLaw, composite_received_power, path_loss
from .config import NetworkConfig
from .errors import ConfigurationError, RealizationInfeasible
from .pointprocess import PointSet2D, sample_ppp
from .seeding import seed_sequence


class PowerModel(str, Enum):
    INSTANTANEOUS_NP_NEAREST = "instantaneous_np_nearest"
    MEAN_NP_NEAREST = "mean_np_nearest"
    INSTANTANEOUS_ALL_PBS = "instantaneous_all_pbs"
    MEAN_ALL_PBS = "mean_all_pbs"
    REGULAR_POWERED = "regular_powered"

    @property
    def uses_pbs(self) -> bool:
        return self not in (PowerModel.MEAN_ALL_PBS, PowerModel.REGULAR_POWERED)


@dataclass(frozen=True)
class SimControls:
    """Window truncation for the simulator.

    BNs live on a disk of ``window_radius`` around the receiver; PBs on a
    disk ``pb_window_margin`` wider. All-PB models harvest from PBs within
    ``harvest_radius`` of each BN and, with ``tail_compensation``, add one
    extra CN component carrying the Campbell mean of the PBs beyond it.
    """

    window_radius: float = 100.0
    pb_window_margin: float = 30.0
    harvest_radius: float = 20.0
    tail_compensation: bool = True

    def __post_init__(self):
        if not (self.window_radius > 0 and self.pb_window_margin > 0 and self.harvest_radius > 0):
            raise ConfigurationError("window sizes must be positive")
        if self.harvest_radius > self.pb_window_margin:
            raise ConfigurationError("harvest_radius must not exceed pb_window_margin")


@dataclass(frozen=True)
class NetworkRealization:
    pbs: PointSet2D | None
    interfering_bns: PointSet2D
    typical_bn_position: tuple
    seed: object = None
    receiver_position: tuple = (0.0, 0.0)

    @property
    def pb_window_radius(self) -> float:
        return self.pbs.window_radius if self.pbs is not None else 0.0


@dataclass(frozen=True)
class SinrSample:
    signal_power: float
    interference_power: float
    noise_power: float

    @property
    def sinr(self) -> float:
        denom = self.interference_power + self.noise_power
        if denom == 0:
            return math.inf if self.signal_power > 0 else 0.0
        return self.signal_power / denom


def margin_miss_probability(lambda_p: float, Np: int, margin: float) -> float:
    """P[the Np-th nearest PB is farther than ``margin``] = P[Poisson(pi lambda m^2) < Np]."""
    return float(special.gammaincc(Np, math.pi * lambda_p * margin**2))


@functools.lru_cache(maxsize=256)
def _initial_radius(lambda_p, Np, miss):
    r = 1.0
    while margin_miss_probability(lambda_p, Np, r) > miss:
        r *= 1.25
    return r


def check_margin(cfg: NetworkConfig, sim: SimControls, limit: float = 1e-3):
    p = margin_miss_probability(cfg.lambda_p, cfg.Np, sim.pb_window_margin)
    if p >= limit:
        raise ConfigurationError(
            f"pb_window_margin={sim.pb_window_margin} m too small for lambda_p={cfg.lambda_p}, "
            f"Np={cfg.Np}: edge BNs miss PBs with probability {p:.3g}"
        )


def realize(cfg: NetworkConfig, sim: SimControls = SimControls(), seed=None, include_pbs: bool = True) -> NetworkRealization:
    """Sample one network snapshot around the receiver at the origin."""
    if include_pbs:
        check_margin(cfg, sim)
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    typical = (cfg.d00 * math.cos(phi), cfg.d00 * math.sin(phi))
    bns = sample_ppp(cfg.lambda_b, sim.window_radius, rng)
    pbs = sample_ppp(cfg.lambda_p, sim.window_radius + sim.pb_window_margin, rng) if include_pbs else None
    return NetworkRealization(pbs, bns, typical, seed)


def _bn_positions(real: NetworkRealization) -> np.ndarray:
    # row 0 is the typical BN
    return np.vstack((np.asarray(real.typical_bn_position, dtype=float)[None, :], real.interfering_bns.points))


def _tree(points):
    return cKDTree(points, balanced_tree=False, compact_nodes=False)


def _nearest_pb_distances(real, positions, k):
    if real.pbs is None or len(real.pbs) < k:
        raise RealizationInfeasible("not enough PBs in the window")
    d, _ = _tree(real.pbs.points).query(positions, k=k)
    d = d.reshape(len(positions), k)
    slack = real.pb_window_radius - np.hypot(positions[:, 0], positions[:, 1])
    # a closer PB could lie outside the sampled window
    if np.any(d[:, -1] > slack):
        raise RealizationInfeasible("Np-th nearest PB not guaranteed inside the PB window")
    return d


def _pb_gain_within(real, positions, radius, law):
    """Sum of bounded path gains from every PB within ``radius`` of each position."""
    if real.pbs is None or len(real.pbs) == 0:
        raise RealizationInfeasible("no PBs in the window")
    slack = real.pb_window_radius - np.hypot(positions[:, 0], positions[:, 1])
    if np.any(slack < radius):
        raise RealizationInfeasible("harvest disk extends past the PB window")
    pairs = _tree(positions).sparse_distance_matrix(_tree(real.pbs.points), radius, output_type="ndarray")
    gain = path_loss(np.maximum(pairs["v"], 1e-300), law)
    return np.bincount(pairs["i"], weights=gain, minlength=len(positions))


def _covered_by_earlier(points, owner, centers, radii):
    """True where a point lies inside some disk listed before its own disk."""
    covered = np.zeros(len(points), dtype=bool)
    if len(points) == 0:
        return covered
    pairs = _tree(points).sparse_distance_matrix(_tree(centers), float(radii.max()), output_type="ndarray")
    i, j, dist = pairs["i"], pairs["j"], pairs["v"]
    hit = (j < owner[i]) & (dist < radii[j])
    covered[i[hit]] = True
    return covered


def local_nearest_pb_distances(positions, lambda_p, Np, pb_window_radius, rng, miss=1e-4):
    """Distances from each position to its Np nearest PBs, sampling PBs lazily.

    The PB field is sampled only on a union of disks around ``positions``:
    disk ``i`` contributes the PPP points that no earlier disk covers, which
    is exactly the PPP restricted to the union. A position whose disk holds
    fewer than ``Np`` PBs gets a disk of twice the radius, up to the PB
    window edge. The result has the same law as querying a PPP sampled on the
    whole ``pb_window_radius`` disk, at a cost that does not grow with
    ``lambda_p``.
    """
    n = len(positions)
    slack = pb_window_radius - np.hypot(positions[:, 0], positions[:, 1])
    if np.any(slack <= 0):
        raise ConfigurationError("positions must lie inside the PB window")
    r0 = _initial_radius(lambda_p, Np, miss)
    centers = np.empty((0, 2))
    radii = np.empty(0)
    pts = np.empty((0, 2))
    pending = np.arange(n)
    radius = np.minimum(r0, slack)
    d = np.full((n, Np), np.inf)
    while pending.size:
        c_new = positions[pending]
        r_new = radius[pending]
        counts = rng.poisson(lambda_p * np.pi * r_new**2)
        owner_local = np.repeat(np.arange(len(pending)), counts)
        rr = r_new[owner_local] * np.sqrt(rng.random(owner_local.size))
        phi = rng.uniform(0.0, 2.0 * np.pi, owner_local.size)
        cand = c_new[owner_local] + np.column_stack((rr * np.cos(phi), rr * np.sin(phi)))
        base = len(centers)
        centers = np.vstack((centers, c_new))
        radii = np.concatenate((radii, r_new))
        drop = _covered_by_earlier(cand, base + owner_local, centers, radii)
        pts = np.vstack((pts, cand[~drop]))
        if len(pts) >= Np:
            dd, _ = _tree(pts).query(positions[pending], k=Np)
            d[pending] = dd.reshape(len(pending), Np)
        short = d[pending, -1] > radius[pending]
        if np.any(short & (radius[pending] >= slack[pending])):
            raise RealizationInfeasible("Np-th nearest PB not guaranteed inside the PB window")
        pending = pending[short]
        radius[pending] = np.minimum(2.0 * radius[pending], slack[pending])
    return d


def _tail_gain(cfg: NetworkConfig, radius: float) -> float:
    # Campbell mean of sum x^-alpha_f over PBs beyond ``radius`` (radius >= 1)
    return 2.0 * math.pi * cfg.lambda_p * radius ** (2.0 - cfg.alpha_f) / (cfg.alpha_f - 2.0)


def bn_powers(real: NetworkRealization, cfg: NetworkConfig, model: PowerModel, sim: SimControls, rng,
              pb_distances=None) -> np.ndarray:
    """Power available to each BN (row 0 is the typical BN), before beta.

    ``pb_distances`` overrides the Np-nearest distances taken from
    ``real.pbs``.
    """
    model = PowerModel(model)
    positions = _bn_positions(real)
    n = len(positions)
    law = PathLossLaw(cfg.alpha_f, bounded=True)
    if model is PowerModel.REGULAR_POWERED:
        return np.full(n, cfg.P_C)
    if model is PowerModel.MEAN_ALL_PBS:
        return np.full(n, mean_power_all_pbs(cfg))
    if model is PowerModel.INSTANTANEOUS_ALL_PBS:
        # independent CN(0,1) links per BN: the coherent sum given geometry is
        # CN(0, P_C * total gain), i.e. an exponential power
        gain = _pb_gain_within(real, positions, sim.harvest_radius, law)
        if sim.tail_compensation:
            gain = gain + _tail_gain(cfg, sim.harvest_radius)
        return cfg.P_C * gain * rng.standard_exponential(n)
    d = pb_distances if pb_distances is not None else _nearest_pb_distances(real, positions, cfg.Np)
    if model is PowerModel.INSTANTANEOUS_NP_NEAREST:
        return np.atleast_1d(composite_received_power(d, cfg.P_C, law, rng))
    # MEAN_NP_NEAREST: forward fading averaged out, geometry kept
    return cfg.P_C * np.sum(path_loss(d, law), axis=1)


def sinr_sample(real: NetworkRealization, cfg: NetworkConfig, model: PowerModel, seed=None,
                sim: SimControls = SimControls(), pb_distances=None) -> SinrSample:
    """SINR at the receiver of the typical BN for one realization.

    Forward fading (instantaneous models) and backward fading are drawn from
    ``seed``. Raises :class:`RealizationInfeasible` when the PB window cannot
    resolve some BN's harvesting set.
    """
    model = PowerModel(model)
    rng = np.random.default_rng(seed)
    power = bn_powers(real, cfg, model, sim, rng, pb_distances)
    positions = _bn_positions(real)
    dist = np.hypot(positions[:, 0], positions[:, 1])
    h_back = rng.standard_exponential(len(positions))
    reflect = 1.0 if model is PowerModel.REGULAR_POWERED else cfg.beta
    received = reflect * h_back * dist ** (-cfg.alpha_b) * power
    return SinrSample(float(received[0]), interference_power(received[1:]), float(cfg.N0))


def interference_power(received) -> float:
    """Exactly rounded sum, so the result does not depend on BN order."""
    return math.fsum(received)


_NP_NEAREST = (PowerModel.INSTANTANEOUS_NP_NEAREST, PowerModel.MEAN_NP_NEAREST)


def _prefer_lazy(cfg, sim):
    # the full-window KD-tree build dominates once PBs far outnumber BNs
    full = cfg.lambda_p * math.pi * (sim.window_radius + sim.pb_window_margin) ** 2
    bns = 1.0 + cfg.lambda_b * math.pi * sim.window_radius**2
    return full > 40.0 * bns


def _trial(cfg, model, sim, child, max_retries=100, lazy_pbs=None):
    rng = np.random.default_rng(child)
    if lazy_pbs is None:
        lazy_pbs = _prefer_lazy(cfg, sim)
    lazy = lazy_pbs and model in _NP_NEAREST
    for _ in range(max_retries):
        real = realize(cfg, sim, rng, include_pbs=model.uses_pbs and not lazy)
        try:
            if lazy:
                pb_radius = sim.window_radius + sim.pb_window_margin
                d = local_nearest_pb_distances(_bn_positions(real), cfg.lambda_p, cfg.Np, pb_radius, rng)
                return sinr_sample(real, cfg, model, rng, sim, pb_distances=d).sinr
            return sinr_sample(real, cfg, model, rng, sim).sinr
        except RealizationInfeasible:
            continue
    raise RealizationInfeasible(f"{max_retries} consecutive infeasible realizations")


def _run_trials(cfg, model, sim, children, lazy_pbs=None):
    return np.array([_trial(cfg, model, sim, c, lazy_pbs=lazy_pbs) for c in children])


def simulate_sinr(cfg: NetworkConfig, model: PowerModel, trials: int, sim: SimControls = SimControls(),
                  seed=None, workers: int = 1, lazy_pbs: bool | None = None) -> np.ndarray:
    """SINR of ``trials`` independent realizations, in trial order.

    With ``lazy_pbs`` the Np-nearest models sample PBs only around BNs (see
    :func:`local_nearest_pb_distances`); with ``False`` every trial samples
    the full PB window through :func:`realize`. Both have the same law;
    ``None`` picks whichever is cheaper for the configuration.
    """
    model = PowerModel(model)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if model.uses_pbs:
        check_margin(cfg, sim)
    children = seed_sequence(seed).spawn(trials)
    if workers <= 1:
        return _run_trials(cfg, model, sim, children, lazy_pbs)
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    with ProcessPoolExecutor(workers) as pool:
        jobs = [(cfg, model, sim, children[a:b], lazy_pbs) for a, b in zip(bounds, bounds[1:])]
        parts = pool.map(_run_trials, *zip(*jobs))
        return np.concatenate(list(parts))


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054):
    """Wilson score interval for a binomial proportion."""
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return centre - half, centre + half


def coverage_from_sinr(sinr: np.ndarray, theta: float) -> CoverageEstimate:
    """Empirical coverage with the 95% Wilson half-width as uncertainty.

    The point value is the raw success fraction; the half-width is taken
    as the larger distance from it to a Wilson bound.
    """
    n = len(sinr)
    k = int(np.count_nonzero(sinr >= theta))
    lo, hi = wilson_interval(k, n)
    p = k / n
    return CoverageEstimate(p, max(p - lo, hi - p), Method.SIMULATION.value, theta)


def estimate_coverage(cfg: NetworkConfig, model: PowerModel, theta, trials: int = 10_000,
                      sim: SimControls = SimControls(), seed=None, workers: int = 1):
    """Fraction of realizations whose SINR reaches ``theta`` (linear).

    ``theta`` may be a scalar or a sequence; a sequence reuses the same
    realizations for every threshold and returns a list of estimates.
    """
    sinr = simulate_sinr(cfg, model, trials, sim, seed, workers)
    if np.ndim(theta) == 0:
        return coverage_from_sinr(sinr, float(theta))
    return [coverage_from_sinr(sinr, float(t)) for t in theta]


def estimate_capacity(cfg: NetworkConfig, model: PowerModel, theta, trials: int = 10_000,
                      sim: SimControls = SimControls(), area: float = 100.0, seed=None, workers: int = 1):
    """``lambda_b * area * coverage`` with the coverage interval scaled alike."""
    cov = estimate_coverage(cfg, model, theta, trials, sim, seed, workers)
    scale = cfg.lambda_b * area
    if isinstance(cov, list):
        return [CapacityEstimate(scale * c.value, scale * c.abs_uncertainty) for c in cov]
    return CapacityEstimate(scale * cov.value, scale * cov.abs_uncertainty)


# --- harvested power of the typical BN -----------------------------------------

@dataclass(frozen=True)
class PowerSimulation:
    mean: float
    std_error: float
    trials: int


def simulate_mean_power(cfg: NetworkConfig, scenario: str = "np_nearest", trials: int = 10_000,
                        window_radius: float | None = None, fading_draws: int = 1, seed=None,
                        coherent: bool = False) -> PowerSimulation:
    """Average instantaneous power harvested by a BN at the origin.

    ``scenario`` is ``"np_nearest"`` (coherent sum over the Np nearest PBs)
    or ``"all_pbs"`` (every PB within ``window_radius``, default 100 m).
    Each PB realization is paired with ``fading_draws`` fading draws.

    Given the PB distances, the coherent sum of independent CN(0, 1)
    amplitudes is CN(0, P_C * sum g), so by default the power is drawn as
    ``P_C * sum g`` times a unit exponential and only PB distances are
    sampled. ``coherent=True`` sums explicit per-PB amplitudes instead
    (same law, much slower for dense PB fields).
    """
    if scenario not in ("np_nearest", "all_pbs"):
        raise ConfigurationError(f"unknown power scenario {scenario!r}")
    if trials < 1 or fading_draws < 1:
        raise ValueError("trials and fading_draws must be >= 1")
    if window_radius is None:
        if scenario == "all_pbs":
            window_radius = 100.0
        else:
            # radius whose Np-th neighbour miss probability is below 1e-12
            window_radius = 1.0
            while margin_miss_probability(cfg.lambda_p, cfg.Np, window_radius) > 1e-12:
                window_radius *= 1.5
    law = PathLossLaw(cfg.alpha_f, bounded=True)
    mean_count = cfg.lambda_p * math.pi * window_radius**2
    values = np.empty(trials)
    for i, child in enumerate(seed_sequence(seed).spawn(trials)):
        rng = np.random.default_rng(child)
        while True:
            # PPP distances from the disk centre: Poisson count, radius R sqrt(U)
            d = window_radius * np.sqrt(rng.random(rng.poisson(mean_count)))
            if scenario == "all_pbs" and d.size:
                break
            if scenario == "np_nearest" and d.size >= cfg.Np:
                d = np.partition(d, cfg.Np - 1)[: cfg.Np] if d.size > cfg.Np else d
                break
        if coherent:
            rows = np.broadcast_to(d, (fading_draws, d.size))
            values[i] = np.mean(composite_received_power(rows, cfg.P_C, law, rng))
        else:
            gain = float(np.sum(path_loss(d, law)))
            values[i] = cfg.P_C * gain * np.mean(rng.standard_exponential(fading_draws))
    se = float(np.std(values, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return PowerSimulation(float(np.mean(values)), se, trials)
