"""Critical heavy-tailed offspring laws and size-conditioned plane trees.

A plane tree is stored as its DFS sequence of children counts; the equivalent
Lukasiewicz walk (steps = count - 1) is the object every distance formula
works on.  Conditioned sampling draws i.i.d. step vectors until the total is
right and then applies the cycle shift, or, for large sizes, samples the
conditioned step vector directly by dyadic splitting of exact convolution
tables (see _bridge).
"""

from __future__ import annotations

import json
import math
from collections import namedtuple

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

__all__ = [
    "OffspringLaw",
    "PlaneTree",
    "LukasiewiczPath",
    "stable_offspring",
    "sample_conditioned_tree",
    "encode_tree",
    "decode_tree",
    "descent",
    "tree_stats",
    "TreeStats",
]

# loose enough to absorb float error from million-term tables plus the
# Hurwitz zeta evaluations, tight enough to catch any wrong constant
_PMF_SUM_TOL = 1e-9
_MEAN_TOL = 1e-9


class OffspringLaw:
    """Offspring distribution of a critical branching process.

    ``probabilities`` holds the pmf up to a cutoff; for the built-in
    polynomial-tail family the mass beyond the cutoff is carried analytically
    (Hurwitz zeta values), so sampling and tail evaluation stay exact to
    float precision at every k.

    Attributes
    ----------
    alpha : float or None
        Tail exponent when the law has a polynomial tail.
    tail_constant : float or None
        c with P(offspring >= k) ~ c * k**(-alpha).
    forbids_unary : bool
        True when mu_1 = 0 (every internal vertex has >= 2 children).
    """

    def __init__(self, probabilities, *, alpha=None, tail_constant=None,
                 forbids_unary=False, _theta=None, _support_start=1):
        pmf = np.asarray(probabilities, dtype=float)
        if pmf.ndim != 1 or pmf.size == 0:
            raise ValueError("probabilities must be a nonempty 1-d sequence")
        if np.any(pmf < 0):
            raise ValueError("probabilities must be nonnegative")
        self._pmf = pmf
        self.alpha = None if alpha is None else float(alpha)
        self.tail_constant = None if tail_constant is None else float(tail_constant)
        self.forbids_unary = bool(forbids_unary)
        # theta, support_start describe the analytic continuation
        # mu_k = theta * k**(-1-alpha) for k >= support_start beyond the table.
        self._theta = _theta
        self._support_start = _support_start
        self._cdf = np.cumsum(pmf)
        self._beyond = self._analytic_tail_mass(pmf.size)
        total = self._cdf[-1] + self._beyond
        if abs(total - 1.0) > _PMF_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        mean = float(np.sum(np.arange(pmf.size) * pmf)) + self._analytic_tail_first_moment(pmf.size)
        if abs(mean - 1.0) > _MEAN_TOL:
            raise ValueError(f"offspring mean is {mean!r}; the law must be critical")
        if self.forbids_unary and pmf.size > 1 and pmf[1] != 0.0:
            raise ValueError("forbids_unary set but mu_1 is nonzero")
        self._bridge_tables: dict = {}

    # -- analytic tail pieces (zero for plain finite laws) -------------------

    def _analytic_tail_mass(self, k: int) -> float:
        """P(offspring >= k) contributed beyond the stored table."""
        if self._theta is None or k < self._pmf.size:
            return 0.0
        lo = max(k, self._support_start)
        return float(self._theta * _hurwitz_zeta(1.0 + self.alpha, lo))

    def _analytic_tail_first_moment(self, k: int) -> float:
        if self._theta is None:
            return 0.0
        lo = max(k, self._support_start)
        return float(self._theta * _hurwitz_zeta(self.alpha, lo))

    # -- public surface -------------------------------------------------------

    @classmethod
    def from_probabilities(cls, probabilities, *, alpha=None, tail_constant=None):
        pmf = np.asarray(probabilities, dtype=float)
        forbids = pmf.size > 1 and pmf[1] == 0.0
        return cls(pmf, alpha=alpha, tail_constant=tail_constant, forbids_unary=forbids)

    @property
    def probabilities(self) -> np.ndarray:
        view = self._pmf.view()
        view.flags.writeable = False
        return view

    def pmf(self, k):
        """P(offspring = k), exact also beyond the stored table."""
        arr = np.asarray(k, dtype=np.int64)
        out = np.zeros(arr.shape, dtype=float)
        inside = (arr >= 0) & (arr < self._pmf.size)
        out[inside] = self._pmf[arr[inside]]
        if self._theta is not None:
            beyond = arr >= self._pmf.size
            if np.any(beyond):
                kk = arr[beyond].astype(float)
                out[beyond] = self._theta * kk ** (-1.0 - self.alpha)
        return out if out.ndim else float(out)

    def tail(self, k):
        """P(offspring >= k)."""
        arr = np.atleast_1d(np.asarray(k, dtype=np.int64))
        out = np.empty(arr.shape, dtype=float)
        for i, kk in enumerate(arr):
            if kk <= 0:
                out[i] = 1.0
            elif self._theta is not None and kk >= self._support_start:
                out[i] = self._theta * _hurwitz_zeta(1.0 + self.alpha, kk)
            elif kk >= self._pmf.size:
                out[i] = self._analytic_tail_mass(int(kk))
            else:
                out[i] = 1.0 - self._cdf[kk - 1]
        return out if np.ndim(k) else float(out[0])

    def mean(self) -> float:
        return float(np.sum(np.arange(self._pmf.size) * self._pmf)) + \
            self._analytic_tail_first_moment(self._pmf.size)

    def scaling_constant(self, n: int) -> float:
        """B_n = (c * |Gamma(1-alpha)| * n)**(1/alpha), the walk's spatial scale."""
        if self.tail_constant is None or self.alpha is None:
            raise ValueError("scaling constant requires a polynomial-tail law")
        alpha = self.alpha
        gamma_abs = math.gamma(2.0 - alpha) / (alpha - 1.0)
        return (self.tail_constant * gamma_abs * n) ** (1.0 / alpha)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``size`` offspring counts by inverse transform."""
        u = rng.random(size)
        out = np.searchsorted(self._cdf, u, side="right").astype(np.int64)
        if self._theta is not None:
            overflow = np.flatnonzero(out >= self._pmf.size)
            for i in overflow:
                out[i] = self._invert_tail(float(u[i]))
        elif np.any(out >= self._pmf.size):
            # u landed beyond cdf[-1] by float rounding; clamp to the last atom
            out = np.minimum(out, self._pmf.size - 1)
        return out

    def _invert_tail(self, u: float) -> int:
        """Smallest k with P(offspring <= k) >= u, for u beyond the table."""
        residual = 1.0 - u  # = target tail mass, in (0, beyond]
        alpha, theta = self.alpha, self._theta
        # power-law guess from tail(k) ~ (theta/alpha) k**-alpha, then walk
        # with the exact Hurwitz tail until tail(k+1) < residual <= tail(k)
        k = max(self._pmf.size, int((alpha * residual / theta) ** (-1.0 / alpha)))
        while self.tail(k) < residual:
            k -= 1
        while self.tail(k + 1) >= residual:
            k += 1
        return int(k)

    def __repr__(self) -> str:
        kind = "no-unary" if self.forbids_unary else "generic"
        if self.alpha is not None:
            return f"OffspringLaw(alpha={self.alpha}, {kind})"
        return f"OffspringLaw(finite support {self._pmf.size}, {kind})"


def stable_offspring(alpha: float, variant: str = "generic",
                     cutoff: int = 2**20) -> OffspringLaw:
    """Critical offspring law mu_k proportional to k**(-1-alpha).

    ``variant`` is "generic" (support {0, 1, 2, ...}) or "no-unary"
    (support {0, 2, 3, ...}).  The normalizing constant is pinned by
    criticality, mu_0 takes whatever mass is left, and the tail constant is
    theta/alpha.  Raises if alpha leaves no room for mu_0.
    """
    if not (1.0 < alpha < 2.0):
        raise ValueError(f"alpha must lie strictly inside (1, 2), got {alpha!r}")
    if variant not in ("generic", "no-unary"):
        raise ValueError(f"variant must be 'generic' or 'no-unary', got {variant!r}")
    start = 1 if variant == "generic" else 2
    # criticality: theta * sum_{k>=start} k**(1-1-alpha) * k = theta * zeta(alpha, start) = 1
    theta = 1.0 / float(_hurwitz_zeta(alpha, start))
    mass_positive = theta * float(_hurwitz_zeta(1.0 + alpha, start))
    mu0 = 1.0 - mass_positive
    if mu0 <= 0.0:
        raise ValueError(f"no mass left for mu_0 at alpha={alpha} ({variant})")
    k = np.arange(cutoff, dtype=float)
    pmf = np.zeros(cutoff)
    pmf[0] = mu0
    pmf[start:] = theta * k[start:] ** (-1.0 - alpha)
    return OffspringLaw(
        pmf,
        alpha=alpha,
        tail_constant=theta / alpha,
        forbids_unary=(variant == "no-unary"),
        _theta=theta,
        _support_start=start,
    )


class PlaneTree:
    """Rooted plane tree given by DFS-ordered children counts."""

    __slots__ = ("children_counts",)

    def __init__(self, children_counts):
        arr = np.asarray(children_counts, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("children_counts must be a nonempty 1-d sequence")
        if np.any(arr < 0):
            raise ValueError("children counts must be nonnegative")
        partial = np.cumsum(arr - 1)
        if partial[-1] != -1:
            raise ValueError(
                f"children counts sum to {int(arr.sum())}, expected size-1={arr.size - 1}"
            )
        if arr.size > 1 and partial[:-1].min() < 0:
            k = int(np.argmax(partial[:-1] < 0))
            raise ValueError(f"children counts close the tree early (at index {k})")
        self.children_counts = arr

    @property
    def size(self) -> int:
        return int(self.children_counts.size)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneTree) and np.array_equal(
            self.children_counts, other.children_counts
        )

    def __hash__(self):
        return hash(self.children_counts.tobytes())

    def __repr__(self) -> str:
        if self.size <= 12:
            return f"PlaneTree({self.children_counts.tolist()})"
        return f"PlaneTree(size={self.size})"

    def to_json(self) -> str:
        return json.dumps({"children_counts": self.children_counts.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PlaneTree":
        data = json.loads(text)
        return cls(data["children_counts"])


class LukasiewiczPath:
    """Integer walk W_0=0, steps >= -1, staying >= 0 until the final hit of -1."""

    __slots__ = ("steps", "values", "_index")

    def __init__(self, steps):
        arr = np.asarray(steps, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("steps must be a nonempty 1-d sequence")
        if np.any(arr < -1):
            raise ValueError("steps must be >= -1")
        values = np.empty(arr.size + 1, dtype=np.int64)
        values[0] = 0
        np.cumsum(arr, out=values[1:])
        if values[-1] != -1:
            raise ValueError(f"walk ends at {int(values[-1])}, expected -1")
        if arr.size > 1 and values[1:-1].min() < 0:
            k = int(np.argmax(values[1:-1] < 0)) + 1
            raise ValueError(f"walk goes negative before the end (at index {k})")
        self.steps = arr
        self.values = values
        self._index = None

    @property
    def n(self) -> int:
        """Number of steps = number of tree vertices."""
        return int(self.steps.size)

    def max_step(self) -> int:
        return int(self.steps.max())

    def _ensure_index(self) -> "_TreeIndex":
        if self._index is None:
            self._index = _TreeIndex(self.values)
        return self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, LukasiewiczPath) and np.array_equal(self.steps, other.steps)

    def __hash__(self):
        return hash(self.steps.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"LukasiewiczPath({self.steps.tolist()})"
        return f"LukasiewiczPath(n={self.n})"

    def to_json(self) -> str:
        return json.dumps({"steps": self.steps.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "LukasiewiczPath":
        data = json.loads(text)
        return cls(data["steps"])


class _TreeIndex:
    """Parent and depth arrays for the vertices u_0..u_{n-1} of a walk.

    parent[k] is the previous index whose value is <= every value on the way,
    found with the usual monotone stack; depth[0] = 0.
    """

    __slots__ = ("parent", "depth")

    def __init__(self, values: np.ndarray):
        n = values.size - 1
        w = values[:n].tolist()
        parent = [0] * n
        depth = [0] * n
        parent[0] = -1
        stack = [0]
        for k in range(1, n):
            wk = w[k]
            while w[stack[-1]] > wk:
                stack.pop()
            p = stack[-1]
            parent[k] = p
            depth[k] = depth[p] + 1
            stack.append(k)
        self.parent = np.array(parent, dtype=np.int64)
        self.depth = np.array(depth, dtype=np.int64)


def encode_tree(tree: PlaneTree) -> LukasiewiczPath:
    """Lukasiewicz walk of a tree: steps are children counts minus one."""
    return LukasiewiczPath(tree.children_counts - 1)


def decode_tree(path: LukasiewiczPath) -> PlaneTree:
    """Inverse of encode_tree."""
    return PlaneTree(path.steps + 1)


def _cycle_shift(steps: np.ndarray) -> np.ndarray:
    """Unique rotation of a total -1 step vector into a valid walk.

    Rotates so the walk restarts right after the first global minimum of the
    partial sums (the cycle lemma).
    """
    partial = np.cumsum(steps)
    m = int(np.argmin(partial))  # first index attaining the minimum
    if m == steps.size - 1:
        return steps.copy()
    return np.roll(steps, -(m + 1))


def _rejection_sample(law: OffspringLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw i.i.d. offspring vectors until one sums to n-1; cycle-shift it."""
    if law.tail_constant is not None:
        scale = law.scaling_constant(n)
    else:
        scale = float(n)  # no tail info: generous fallback
    cap = 10_000 * math.ceil(scale)
    batch = int(min(max(16, 2.0 * scale), max(16, 4_000_000 // n)))
    drawn = 0
    while drawn < cap:
        rows = min(batch, cap - drawn)
        xi = law.sample(rows * n, rng).reshape(rows, n)
        hits = np.flatnonzero(xi.sum(axis=1) == n - 1)
        drawn += rows
        if hits.size:
            return _cycle_shift(xi[hits[0]] - 1)
    raise RuntimeError(
        f"no step vector with total {n - 1} in {cap} attempts; "
        f"size {n} may be unattainable for this offspring law"
    )


def sample_conditioned_tree(law: OffspringLaw, n: int, rng: np.random.Generator,
                            method: str = "auto") -> PlaneTree:
    """Tree of the branching process conditioned to have exactly n vertices.

    ``method`` is "rejection" (i.i.d. proposals plus cycle shift), "bridge"
    (direct conditioned step vector via dyadic convolution tables, same law,
    much faster for large n), or "auto" (rejection up to 4096, bridge above).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return PlaneTree(np.zeros(1, dtype=np.int64))
    if method == "auto":
        method = "rejection" if n <= 4096 else "bridge"
    if method == "rejection":
        steps = _rejection_sample(law, n, rng)
    elif method == "bridge":
        from ._bridge import sample_conditioned_steps

        xi = sample_conditioned_steps(law, n, rng)
        steps = _cycle_shift(xi - 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return decode_tree(LukasiewiczPath(steps))


def descent(path: LukasiewiczPath, j: int):
    """Strict ancestors of u_j with their cycle positions, root first.

    Returns a list of pairs (k, x) over the ancestors u_k of u_j, where
    x = min(W[k+1..j]) - W[k] + 1 is the position of the branch toward u_j
    on the cycle of u_k.  Empty for the root.
    """
    n = path.n
    if not (0 <= j < n):
        raise IndexError(f"vertex index {j} out of range [0, {n})")
    idx = path._ensure_index()
    parent = idx.parent
    w = path.values
    out = []
    cur = j
    m = None
    while cur != 0:
        a = int(parent[cur])
        wc = int(w[cur])
        m = wc if m is None else min(m, wc)
        out.append((a, m - int(w[a]) + 1))
        cur = a
    out.reverse()
    return out


TreeStats = namedtuple("TreeStats", ["size", "leaf_count", "height"])


def tree_stats(tree: PlaneTree) -> TreeStats:
    """Size, number of leaves, and height (max depth) of a tree."""
    counts = tree.children_counts
    leaves = int(np.count_nonzero(counts == 0))
    path = encode_tree(tree)
    height = int(path._ensure_index().depth.max())
    return TreeStats(size=tree.size, leaf_count=leaves, height=height)
