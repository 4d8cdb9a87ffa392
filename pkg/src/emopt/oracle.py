"""Reference minimizers used to audit benchmark minima.

Deliberately independent of the particle engines: a dense grid scan with
iterative zoom for 2-D boxes, and a multistart cyclic coordinate scan with
bracket refinement for higher dimensions.  Both are deterministic for a
fixed seed and use nothing but function evaluations.
"""

from __future__ import annotations

import numpy as np

from .core import SearchSpace

__all__ = ["find_minimum", "grid_minimum", "coordinate_minimum"]


def find_minimum(fn, space: SearchSpace, budget: int = 250_000, seed: int = 0):
    """Best (argmin, value) the oracle can find within roughly ``budget`` evaluations."""
    if space.dims == 2:
        return grid_minimum(fn, space, budget=budget)
    return coordinate_minimum(fn, space, budget=budget, seed=seed)


def _grid_eval(fn, lo, hi, per_axis):
    ax0 = np.linspace(lo[0], hi[0], per_axis)
    ax1 = np.linspace(lo[1], hi[1], per_axis)
    g0, g1 = np.meshgrid(ax0, ax1, indexing="ij")
    pts = np.column_stack([g0.ravel(), g1.ravel()])
    return pts, np.asarray(fn(pts))


def grid_minimum(fn, space: SearchSpace, budget: int = 250_000, candidates: int = 5):
    """2-D dense grid scan, then zoom refinement around the best cells."""
    if space.dims != 2:
        raise ValueError("grid_minimum handles 2-D spaces only")
    per_axis = max(41, int(np.sqrt(budget * 0.55)))
    pts, vals = _grid_eval(fn, space.lower, space.upper, per_axis)
    cell = space.span / (per_axis - 1)

    # Greedily pick well-separated starting cells so distinct basins survive.
    order = np.argsort(vals, kind="stable")
    starts = []
    for idx in order:
        p = pts[idx]
        if all(np.max(np.abs(p - q) / cell) > 3.0 for q in starts):
            starts.append(p)
        if len(starts) >= candidates:
            break

    best_x, best_v = pts[order[0]], float(vals[order[0]])
    for p in starts:
        half = 3.0 * cell
        x, v = p, float(fn(p[None, :])[0])
        for _ in range(12):
            lo = np.maximum(space.lower, x - half)
            hi = np.minimum(space.upper, x + half)
            gpts, gvals = _grid_eval(fn, lo, hi, 25)
            j = int(np.argmin(gvals))
            if gvals[j] < v:
                x, v = gpts[j], float(gvals[j])
            half = half * 0.2
        if v < best_v:
            best_x, best_v = x, v
    return best_x, best_v


def _refine_coordinate(fn, x, d, lo, hi, value, points=17, rounds=5):
    """Shrinking 1-D bracket around the current coordinate value."""
    half = (hi - lo) / 2
    for _ in range(rounds):
        grid = np.linspace(max(lo, x[d] - half), min(hi, x[d] + half), points)
        batch = np.repeat(x[None, :], points, axis=0)
        batch[:, d] = grid
        vals = np.asarray(fn(batch))
        j = int(np.argmin(vals))
        if vals[j] < value:
            x = batch[j]
            value = float(vals[j])
        half /= 8
    return x, value


def coordinate_minimum(
    fn,
    space: SearchSpace,
    budget: int = 250_000,
    seed: int = 0,
    scan_points: int = 65,
    max_sweeps: int = 8,
):
    """Multistart cyclic coordinate search with full-range scans per axis.

    Each coordinate update scans the whole [lower, upper] interval (so a
    single axis can escape its local basin) and then tightens the bracket
    around the best grid point.  Starts are the box midpoint plus seeded
    uniform points; the evaluation budget is split across starts.
    """
    n = space.dims
    rng = np.random.default_rng(seed)
    per_sweep = n * (scan_points + 5 * 17)
    n_starts = max(2, min(32 if n <= 6 else 8, budget // (3 * per_sweep)))
    starts = np.vstack(
        [(space.lower + space.upper) / 2, space.sample(rng, n_starts - 1)]
    )

    used = 0
    best_x, best_v = None, np.inf
    for x0 in starts:
        x = x0.copy()
        value = float(fn(x[None, :])[0])
        used += 1
        for _ in range(max_sweeps):
            before = value
            for d in range(n):
                lo, hi = space.lower[d], space.upper[d]
                grid = np.linspace(lo, hi, scan_points)
                batch = np.repeat(x[None, :], scan_points, axis=0)
                batch[:, d] = grid
                vals = np.asarray(fn(batch))
                j = int(np.argmin(vals))
                if vals[j] < value:
                    x = batch[j]
                    value = float(vals[j])
                x, value = _refine_coordinate(fn, x.copy(), d, lo, hi, value)
            used += per_sweep
            if before - value < 1e-13:
                break
        if value < best_v:
            best_x, best_v = x, value
        if used >= budget:
            break
    return best_x, best_v
