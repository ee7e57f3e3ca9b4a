"""Self-contained correctness checks behind the `validate` CLI command.

Each check draws its own seeded instances, exercises one analytic claim
against an independent reference (brute force, finite differences, or a
closed form) and returns (passed, detail).  The test suite runs the same
ideas at acceptance scale; these default counts are sized to finish in
seconds.
"""

import numpy as np

from .beamform import input_power, mrt_set
from .channel import draw_channel, draw_topology, trial_rng
from .eh_model import EhParams, compute_m, harvest
from .oracle import (
    GridSpec,
    best_permutation_exhaustive,
    grid_search,
    random_feasible_allocations,
)
from .rate import (
    dpc_weighted_rate,
    dual_weighted_rate,
    objective_gradient,
    optimal_permutation,
)
from .solver import solve_power_allocation


def _instance(cfg, rng, n_ues, n_antennas):
    topo = draw_topology(rng, n_ues, cfg.r_min, cfg.r_max, cfg.height, cfg.alpha, cfg.kappa)
    return draw_channel(rng, topo, n_antennas)


def check_duality_identity(cfg, seed, instances):
    """Direct per-user form == weight-decrement form, any permutation."""
    worst = 0.0
    for i in range(instances):
        rng = trial_rng(seed, cell=1, trial=i)
        k_ues = int(rng.integers(1, 6))
        n_antennas = int(rng.integers(1, 5))
        channels = _instance(cfg, rng, k_ues, n_antennas)
        weights = rng.uniform(0.0, 1.0, size=k_ues)
        perm = rng.permutation(k_ues)
        p = rng.uniform(0.0, 50.0, size=k_ues)
        a = dpc_weighted_rate(p, channels, weights, perm, cfg.noise_power).value
        b = dual_weighted_rate(p, channels, weights, perm, cfg.noise_power).value
        worst = max(worst, abs(a - b) / max(abs(a), 1e-12))
    return worst <= 1e-9, f"max relative gap {worst:.3e} over {instances} instances"


def check_permutation_enumeration(cfg, seed, instances):
    """Descending-weight order matches exhaustive search over all orders."""
    worst = 0.0
    for i in range(instances):
        rng = trial_rng(seed, cell=2, trial=i)
        k_ues = int(rng.integers(2, 5))
        channels = _instance(cfg, rng, k_ues, cfg.n_antennas)
        weights = rng.uniform(0.05, 1.0, size=k_ues)
        budget = float(rng.uniform(5.0, 150.0))
        perm = optimal_permutation(weights)
        report = solve_power_allocation(channels, weights, perm, cfg.noise_power, budget)
        star = dpc_weighted_rate(report.p, channels, weights, perm, cfg.noise_power).value
        _, best = best_permutation_exhaustive(channels, weights, cfg.noise_power, budget)
        worst = max(worst, (best - star) / max(abs(best), 1e-12))
    return worst <= 1e-6, f"max excess over sorted order {worst:.3e} ({instances} instances)"


def check_grid_oracle(cfg, seed, instances, resolution=200):
    """Solver beats (or ties) an exhaustive lattice over the simplex, K=2."""
    worst = 0.0
    worst_kkt = 0.0
    for i in range(instances):
        rng = trial_rng(seed, cell=3, trial=i)
        channels = _instance(cfg, rng, 2, cfg.n_antennas)
        weights = np.sort(rng.uniform(0.05, 1.0, size=2))[::-1]
        budget = float(rng.uniform(5.0, 150.0))
        perm = optimal_permutation(weights)
        report = solve_power_allocation(channels, weights, perm, cfg.noise_power, budget)
        _, lattice_best = grid_search(
            channels, weights, perm, cfg.noise_power, GridSpec(resolution, budget)
        )
        gap = (lattice_best - report.objective) / max(abs(lattice_best), 1e-12)
        worst = max(worst, gap)
        worst_kkt = max(worst_kkt, report.kkt_residual)
    ok = worst <= 1e-4 and worst_kkt <= 1e-6
    return ok, f"max lattice excess {worst:.3e}, max KKT residual {worst_kkt:.3e}"


def check_gradient_fd(cfg, seed, instances):
    """Analytic gradient against central finite differences."""
    worst = 0.0
    for i in range(instances):
        rng = trial_rng(seed, cell=4, trial=i)
        k_ues = int(rng.integers(1, 6))
        channels = _instance(cfg, rng, k_ues, cfg.n_antennas)
        weights = np.sort(rng.uniform(0.05, 1.0, size=k_ues))[::-1]
        budget = float(rng.uniform(5.0, 150.0))
        perm = optimal_permutation(weights)
        p = random_feasible_allocations(rng, 0.9 * budget, 1, k_ues)[0] + 0.01 * budget
        grad = objective_gradient(p, channels, weights, perm, cfg.noise_power)
        step = 1e-6 * budget
        for m in range(k_ues):
            hi = p.copy()
            lo = p.copy()
            hi[perm[m]] += step
            lo[perm[m]] -= step
            fd = (
                dual_weighted_rate(hi, channels, weights, perm, cfg.noise_power).value
                - dual_weighted_rate(lo, channels, weights, perm, cfg.noise_power).value
            ) / (2 * step)
            worst = max(worst, abs(grad[m] - fd) / max(abs(fd), 1e-12))
    return worst <= 1e-4, f"max relative gradient error {worst:.3e}"


def check_mrt_dominance(cfg, seed, instances, beams_per_instance=200):
    """Full-power MRT collects at least as much RF power as any beam set."""
    margin = np.inf
    for i in range(instances):
        rng = trial_rng(seed, cell=5, trial=i)
        channels = _instance(cfg, rng, cfg.n_ues, cfg.n_antennas)
        caps = cfg.p_max
        best = input_power(channels, mrt_set(channels, caps))
        for _ in range(beams_per_instance):
            raw = rng.standard_normal(
                (cfg.n_ues, cfg.n_antennas)
            ) + 1j * rng.standard_normal((cfg.n_ues, cfg.n_antennas))
            norms = np.linalg.norm(raw, axis=1, keepdims=True)
            scale = np.sqrt(caps * rng.uniform(0.0, 1.0, size=cfg.n_ues))
            beams = raw / norms * scale[:, None]
            margin = min(margin, best - input_power(channels, beams))
    return margin >= -1e-9, f"min MRT margin {margin:.3e} mW"


def check_harvester_shape(cfg, seed, instances):
    """Zero at zero input, monotone, saturating at c, exact midpoint."""
    del seed, instances  # deterministic check
    params = EhParams(cfg.eh_a, cfg.eh_b, cfg.eh_c)
    problems = []
    if abs(harvest(params, 0.0)) > 1e-9 * params.c:
        problems.append("nonzero at zero input")
    grid = np.linspace(0.0, 100.0 * params.b, 10_000)
    values = harvest(params, grid)
    if np.any(np.diff(values) < 0):
        problems.append("not monotone")
    if np.any(values < 0) or np.any(values > params.c):
        problems.append("escapes [0, c]")
    if harvest(params, 1e6 * params.b) < 0.999 * params.c:
        problems.append("does not saturate")
    m = compute_m(params.a, params.b)
    mid = params.c * (0.5 - m) / (1.0 - m)
    if abs(harvest(params, params.b) - mid) > 1e-12 * params.c:
        problems.append("midpoint off")
    return not problems, "; ".join(problems) if problems else "curve shape as designed"


CHECKS = [
    ("duality-identity", check_duality_identity),
    ("permutation-enumeration", check_permutation_enumeration),
    ("grid-oracle", check_grid_oracle),
    ("finite-difference-gradient", check_gradient_fd),
    ("mrt-dominance", check_mrt_dominance),
    ("harvester-shape", check_harvester_shape),
]


def run_all(cfg, seed, instances):
    """Run every check; returns list of (name, passed, detail)."""
    results = []
    for name, fn in CHECKS:
        passed, detail = fn(cfg, seed, instances)
        results.append((name, bool(passed), detail))
    return results
