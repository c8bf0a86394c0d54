"""Named statistical experiments behind the command-line drivers.

Every experiment takes a seed and derives one counter-based stream per
replicate (Philox keyed by (seed, replicate index)), so results do not
depend on how many workers run them.  Reports are plain dicts ready for
JSON serialization; heavy per-replicate work can fan out over a thread
pool capped by the LOOPTREE_THREADS environment variable.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .dissection import dual_tree, gh_gap_check, sample_boltzmann
from .excursion_metric import distance_from_root, rescale
from .gw_tree import (
    OffspringLaw,
    encode_tree,
    sample_conditioned_tree,
    stable_offspring,
    tree_stats,
)
from .looptree import build_loop, build_loop_prime
from .metric_analysis import ball_volume_profile, dimension_estimate
from .stable_law import StableParams, expected_max_jump, sample_increment

__all__ = [
    "stream",
    "laplace_check",
    "max_jump_experiment",
    "dimension_experiment",
    "interpolation_circle",
    "interpolation_crt",
    "gh_sandwich",
]


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent reproducible substream for one replicate."""
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _pool_size() -> int:
    raw = os.environ.get("LOOPTREE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_replicates(fn, count: int):
    """Ordered results of fn(replicate_index), possibly in parallel."""
    workers = _pool_size()
    if workers == 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def laplace_check(alphas=(1.2, 1.5, 1.8), lams=(0.1, 0.5, 1.0),
                  n_samples: int = 10**6, seed: int = 0) -> dict:
    """Monte-Carlo check of E[exp(-lam X_1)] = exp(lam^alpha)."""
    rows = []
    worst = 0.0
    for k, alpha in enumerate(alphas):
        rng = stream(seed, k)
        x = sample_increment(StableParams(alpha), 1.0, size=n_samples, rng=rng)
        for lam in lams:
            vals = np.exp(-lam * x)
            est = float(vals.mean())
            se = float(vals.std(ddof=1) / math.sqrt(n_samples))
            target = float(np.exp(lam ** alpha))
            z = abs(est - target) / se
            worst = max(worst, z)
            rows.append(
                {
                    "alpha": alpha,
                    "lam": lam,
                    "estimate": est,
                    "target": target,
                    "stderr": se,
                    "z": z,
                }
            )
    return {
        "experiment": "laplace-check",
        "n_samples": n_samples,
        "rows": rows,
        "worst_z": worst,
        "pass": bool(worst <= 4.0),
    }


def max_jump_experiment(alpha: float = 1.5, n: int = 10**5,
                        replicates: int = 500, seed: int = 0,
                        tolerance: float = 0.05) -> dict:
    """Mean largest rescaled jump against the analytic target."""
    law = stable_offspring(alpha)
    b = law.scaling_constant(n)
    # warm the conditioned-sampling tables once before any fan-out
    sample_conditioned_tree(law, n, stream(seed, 0))

    def one(i: int) -> float:
        tree = sample_conditioned_tree(law, n, stream(seed, i))
        return float(tree.children_counts.max() - 1) / b

    vals = np.array(_map_replicates(one, replicates))
    est = float(vals.mean())
    target = float(expected_max_jump(StableParams(alpha)))
    rel = abs(est - target) / target
    return {
        "experiment": "max-jump",
        "alpha": alpha,
        "n": n,
        "replicates": replicates,
        "estimate": est,
        "target": target,
        "rel_error": rel,
        "stderr": float(vals.std(ddof=1) / math.sqrt(replicates)),
        "median": float(np.median(vals)),
        "values": vals.tolist(),
        "pass": bool(rel <= tolerance),
    }


def default_window(alpha: float, n: int) -> tuple[float, float]:
    """Fit window sitting above lattice effects, below saturation."""
    return 2.0 * n ** (1.0 / (2.0 * alpha)), n ** (1.0 / alpha) / 4.0


def dimension_experiment(alpha: float = 1.5, n: int = 10**6,
                         trees: int = 10, centers_per_tree: int = 2,
                         window=None, seed: int = 0,
                         tolerance: float = 0.15) -> dict:
    """Volume-growth slope of big looptrees, pooled over many centers."""
    law = stable_offspring(alpha)
    if window is None:
        window = default_window(alpha, n)
    r_lo, r_hi = window
    radii = np.unique(
        np.rint(np.geomspace(max(1.0, r_lo / 2.0), r_hi * 1.5, 30))
    ).astype(np.int64)
    sample_conditioned_tree(law, n, stream(seed, 0))

    def one(i: int):
        rng = stream(seed, i)
        tree = sample_conditioned_tree(law, n, rng)
        graph = build_loop(tree)
        out = []
        for _ in range(centers_per_tree):
            center = int(rng.integers(0, graph.vertex_count))
            out.append((radii, ball_volume_profile(graph, center, radii)))
        return out

    profiles = [p for chunk in _map_replicates(one, trees) for p in chunk]
    slope, stderr = dimension_estimate(profiles, window)
    return {
        "experiment": "dimension",
        "alpha": alpha,
        "n": n,
        "centers": len(profiles),
        "window": [float(r_lo), float(r_hi)],
        "slope": slope,
        "stderr": stderr,
        "target": alpha,
        "profiles": [
            {"radii": r.tolist(), "counts": c.tolist()} for r, c in profiles
        ],
        "pass": bool(abs(slope - alpha) <= tolerance),
    }


def circle_gap_bound(tree, b: float, anchors: int = 128) -> float:
    """Gromov-Hausdorff upper bound between the rescaled loop graph and the
    circle of circumference 1, through the time parametrization.

    Anchor vertices at m equally spaced walk positions are paired with the
    m circle points; the anchor distortion plus both covering radii bound
    the full-correspondence distortion.
    """
    n = tree.size
    graph = build_loop(tree)
    v = graph.vertex_count
    m = min(anchors, v)
    ids = np.rint(np.arange(m) * (n - 1) / m).astype(np.int64)
    ids = np.clip(ids, 1, n - 1) - 1  # corner of vertex k has graph id k-1
    d = dijkstra(graph.adjacency(), unweighted=True, indices=ids)
    eps_graph = float(d.min(axis=0).max())
    da = d[:, ids] / b
    k = np.arange(m)
    gap = np.abs(k[:, None] - k[None, :])
    dc = np.minimum(gap, m - gap) / m
    dis = float(np.abs(da - dc).max())
    return dis / 2.0 + eps_graph / b + 1.0 / (2.0 * m)


def interpolation_circle(alpha: float = 1.05, n: int = 10**5,
                         replicates: int = 50, gh_paths=None,
                         anchors: int = 128, seed: int = 0) -> dict:
    """Near alpha = 1 the looptree is dominated by one macroscopic loop:
    the largest jump carries most of the mass and the space looks like a
    circle of circumference 1."""
    law = stable_offspring(alpha)
    b = law.scaling_constant(n)
    limit = replicates if gh_paths is None else gh_paths
    sample_conditioned_tree(law, n, stream(seed, 0))

    def one(i: int):
        tree = sample_conditioned_tree(law, n, stream(seed, i))
        mj = float(tree.children_counts.max() - 1) / b
        gh = circle_gap_bound(tree, b, anchors) if i < limit else None
        return mj, gh

    results = _map_replicates(one, replicates)
    jumps = np.array([r[0] for r in results])
    gh_bounds = np.array([r[1] for r in results if r[1] is not None])
    return {
        "experiment": "interpolation-circle",
        "alpha": alpha,
        "n": n,
        "replicates": replicates,
        "median_max_jump": float(np.median(jumps)),
        "max_jumps": jumps.tolist(),
        "gh_bounds": gh_bounds.tolist(),
        "median_gh_bound": float(np.median(gh_bounds)),
        "pass": bool(
            np.median(jumps) > 0.9 and np.median(gh_bounds) < 0.1
        ),
    }


def interpolation_crt(alpha: float = 1.95, n: int = 10**5,
                      paths: int = 50, draws: int = 1000,
                      seed: int = 0, tolerance: float = 0.05) -> dict:
    """Near alpha = 2 loops degenerate and distances halve: the distance
    from the root to a uniform time is about half the walk value there."""
    law = stable_offspring(alpha)
    b = law.scaling_constant(n)
    sample_conditioned_tree(law, n, stream(seed, 0))

    def one(i: int) -> float:
        rng = stream(seed, i)
        tree = sample_conditioned_tree(law, n, rng)
        jp = rescale(encode_tree(tree), b)
        ratios = []
        while len(ratios) < draws:
            t = int(rng.integers(1, n))
            xt = jp.values[t]
            if xt <= 0:
                continue
            ratios.append(distance_from_root(jp, t) / xt)
        return float(np.mean(ratios))

    means = np.array(_map_replicates(one, paths))
    grand = float(means.mean())
    return {
        "experiment": "interpolation-crt",
        "alpha": alpha,
        "n": n,
        "paths": paths,
        "draws": draws,
        "mean_ratio": grand,
        "path_means": means.tolist(),
        "target": 0.5,
        "pass": bool(abs(grand - 0.5) <= tolerance),
    }


def gh_sandwich(alpha: float = 1.5, n_dissections: int = 200,
                max_leaves: int = 300, seed: int = 0) -> dict:
    """Height bound for dissections against their dual looptrees, plus the
    Loop/Loop' corner correspondence on the same trees."""
    law = stable_offspring(alpha, variant="no-unary")

    def one(i: int):
        rng = stream(seed, i)
        n_leaves = int(rng.integers(2, max_leaves + 1))
        d = sample_boltzmann(law, n_leaves, rng)
        ok, observed = gh_gap_check(d)
        tree = dual_tree(d)
        height = tree_stats(tree).height
        # corner pairing between Loop and Loop'
        nt = tree.size
        dl = build_loop(tree).distances()
        dp = build_loop_prime(tree).distances()
        px = np.concatenate([[0], np.arange(1, nt) - 1])
        py = np.arange(0, nt)
        dis = int(np.abs(dl[np.ix_(px, px)] - dp[np.ix_(py, py)]).max())
        return {
            "n_leaves": n_leaves,
            "height": height,
            "observed": observed,
            "height_bound_ok": bool(ok),
            "loop_pair_gh_bound": dis / 2.0,
        }

    rows = _map_replicates(one, n_dissections)
    all_height_ok = all(r["height_bound_ok"] for r in rows)
    worst_pair = max(r["loop_pair_gh_bound"] for r in rows)
    return {
        "experiment": "gh-sandwich",
        "alpha": alpha,
        "n_dissections": n_dissections,
        "max_leaves": max_leaves,
        "rows": rows,
        "worst_loop_pair_gh_bound": worst_pair,
        "pass": bool(all_height_ok and worst_pair <= 2.0),
    }
