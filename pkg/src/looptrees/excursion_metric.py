"""The loop pseudo-metric of a nonnegative jump path.

A JumpPath is a finite excursion-like step function: values at times k/n,
with the upward part of each increment recorded as the jump at that time and
the left limit defined as value minus jump.  The pseudo-metric sums, over
the ancestors r of the query times, the circular gap inside the jump of r,
where "ancestor" means the left limit at r lies below the running minimum
up to the query time.  Downward moves never carry a jump, so they
contribute nothing to any distance.
"""

from __future__ import annotations

import math

import numpy as np

from .gw_tree import LukasiewiczPath

__all__ = [
    "JumpPath",
    "rescale",
    "looptree_distance",
    "distance_from_root",
    "max_jump",
]


class JumpPath:
    """Step path with nonnegative jumps, queried at indices 0..n-1.

    ``values`` has n+1 entries; the final one records the endpoint of the
    excursion (it may dip below zero after rescaling a walk that ends at -1)
    and is not a queryable time.  ``scale`` and ``source_size`` remember the
    normalization the path was produced with.
    """

    __slots__ = ("times", "values", "jumps", "left_limits", "scale",
                 "source_size", "_parent")

    def __init__(self, values, scale: float = 1.0, times=None):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("values must be a 1-d sequence of length >= 2")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if vals[0] != 0.0:
            raise ValueError("the path must start at 0")
        if vals.size > 2 and vals[1:-1].min() < 0.0:
            raise ValueError("values must be nonnegative before the endpoint")
        n = vals.size - 1
        if times is None:
            times = np.arange(n + 1) / n
        else:
            times = np.asarray(times, dtype=float)
            if times.shape != vals.shape or np.any(np.diff(times) <= 0):
                raise ValueError("times must increase and match values in length")
        self.times = times
        self.values = vals
        self.jumps = np.concatenate(([0.0], np.maximum(np.diff(vals), 0.0)))
        self.left_limits = self.values - self.jumps
        self.scale = float(scale)
        self.source_size = n
        self._parent = None

    @property
    def n(self) -> int:
        """Number of queryable time indices (0..n-1)."""
        return self.source_size

    def _ensure_parent(self) -> np.ndarray:
        """Genealogy on indices 0..n-1: the parent of t is the latest earlier
        index whose left limit stays below everything up to t."""
        if self._parent is None:
            n = self.n
            v = self.values[:n].tolist()
            lim = self.left_limits[:n].tolist()
            parent = [-1] * n
            stack = [0]
            for t in range(1, n):
                vt = v[t]
                while lim[stack[-1]] > vt:
                    stack.pop()
                parent[t] = stack[-1]
                stack.append(t)
            self._parent = np.array(parent, dtype=np.int64)
        return self._parent

    def __repr__(self) -> str:
        return f"JumpPath(n={self.n}, scale={self.scale})"

    def to_csv(self) -> str:
        lines = ["time,value,jump"]
        lines.extend(
            f"{float(self.times[k])!r},{float(self.values[k])!r},"
            f"{float(self.jumps[k])!r}"
            for k in range(self.values.size)
        )
        return "\n".join(lines)


def rescale(path: LukasiewiczPath, scale: float) -> JumpPath:
    """Walk values divided by ``scale``, placed at times k/n."""
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    return JumpPath(path.values / scale, scale=scale)


def _gap(width: float, cycle: float) -> float:
    """Distance between two points at arc offset ``width`` on a cycle of
    length ``cycle`` (zero when there is no cycle)."""
    return min(width, cycle - width)


def _validate_index(path: JumpPath, t: int) -> None:
    if not (0 <= t < path.n):
        raise IndexError(
            f"time index {t} out of range [0, {path.n}); the final entry is "
            "the excursion endpoint and cannot be queried"
        )


def _climb(path: JumpPath, stop: int, t: int) -> float:
    """Sum of loop gaps over the chain elements in (stop, t], assuming stop
    is an ancestor of t."""
    parent = path._ensure_parent()
    v, lim, jump = path.values, path.left_limits, path.jumps
    total = 0.0
    running = math.inf
    cur = t
    while cur != stop:
        if cur < stop:
            raise RuntimeError(f"index {stop} is not an ancestor of {t}")
        x = min(v[cur], running) - lim[cur]
        total += _gap(x, jump[cur])
        running = min(running, v[cur])
        cur = int(parent[cur])
    return total


def looptree_distance(path: JumpPath, s: int, t: int) -> float:
    """Loop pseudo-metric between time indices s and t.

    Ancestor pairs take one gap inside each crossed jump plus the entry gap
    at s; otherwise the two branches are climbed to the most recent common
    ancestor, whose jump contributes the circular gap between the two
    descent positions.
    """
    _validate_index(path, s)
    _validate_index(path, t)
    if s == t:
        return 0.0
    if s > t:
        s, t = t, s
    v, lim, jump = path.values, path.left_limits, path.jumps
    window_min = float(v[s:t + 1].min())
    if lim[s] <= window_min:
        return _gap(window_min - lim[s], jump[s]) + _climb(path, s, t)

    parent = path._ensure_parent()
    # t-side: every chain element above s is strictly above the common
    # ancestor (a chain element of t at or below s would be an ancestor of
    # both), so the first one at or below s is the meeting point
    sum_t = 0.0
    running = math.inf
    cur = t
    while cur > s:
        x = min(v[cur], running) - lim[cur]
        sum_t += _gap(x, jump[cur])
        running = min(running, v[cur])
        cur = int(parent[cur])
    meet = cur
    x_t = min(v[meet], running) - lim[meet]
    # s-side: climb the other branch down to the same meeting point
    sum_s = 0.0
    running = math.inf
    cur = s
    while cur > meet:
        x = min(v[cur], running) - lim[cur]
        sum_s += _gap(x, jump[cur])
        running = min(running, v[cur])
        cur = int(parent[cur])
    x_s = min(v[meet], running) - lim[meet]
    return sum_s + sum_t + _gap(abs(x_t - x_s), jump[meet])


def distance_from_root(path: JumpPath, t: int) -> float:
    """Distance to time 0 through the jump-fraction form: each ancestor
    contributes its jump times min(u, 1-u), u being the relative position
    of the descent inside that jump."""
    _validate_index(path, t)
    if t == 0:
        return 0.0
    parent = path._ensure_parent()
    v, lim, jump = path.values, path.left_limits, path.jumps
    total = 0.0
    running = math.inf
    cur = t
    while cur != -1:
        if jump[cur] > 0.0:
            x = min(v[cur], running) - lim[cur]
            u = x / jump[cur]
            total += jump[cur] * min(u, 1.0 - u)
        running = min(running, v[cur])
        cur = int(parent[cur])
    return total


def max_jump(path: JumpPath) -> float:
    """Largest jump of the path, the length of its longest loop."""
    return float(path.jumps.max())
