"""Isoperimetric constant by exhaustive search and eigenvalue bound checks.

beta = min over non-empty proper subsets A with vol(A) <= vol(V)/2 of
vol(boundary A) / vol(A), where the boundary volume is the total weight cut
by A.  The search walks all subsets in Gray-code order with O(n) incremental
updates, fixing vertex 0 on one side to halve the work.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import GraphSpace
from .spectral import eigendecompose

MAX_EXHAUSTIVE = 24
DEFAULT_SLACK = 1e-9


def boundary_volume(g: GraphSpace, subset) -> float:
    """Total weight of edges leaving the subset, sum_{i in A, j not in A} w_ij."""
    mask = np.zeros(g.n, dtype=bool)
    idx = np.asarray(list(subset), dtype=int)
    if idx.size:
        if idx.min() < 0 or idx.max() >= g.n:
            raise ValueError("subset contains out-of-range vertices")
        mask[idx] = True
    return float(g.weights[np.ix_(mask, ~mask)].sum())


def isoperimetric_constant(g: GraphSpace) -> tuple[float, tuple[int, ...]]:
    """Exhaustive minimum of vol(boundary A)/vol(A) over admissible subsets.

    Admissible: non-empty, proper, vol(A) <= vol(V)/2 (exact halves count).
    Ties are broken toward the lexicographically smallest vertex tuple.
    Subsets are enumerated as bitmasks over vertices 1..n-1; vertex 0 is
    pinned outside, and the complement is examined whenever it is the
    admissible side.
    """
    n = g.n
    if n < 2:
        raise ValueError("isoperimetric constant needs at least two vertices")
    if n > MAX_EXHAUSTIVE:
        raise ValueError(
            f"exhaustive subset search is limited to n <= {MAX_EXHAUSTIVE} (got n={n}); "
            "no heuristic fallback is provided"
        )
    w = g.weights
    mu = g.mu
    deg = g.degree
    vol_total = g.volume
    half = vol_total / 2.0
    tol = 1e-12 * vol_total

    in_a = np.zeros(n, dtype=bool)
    weight_to_a = np.zeros(n)  # sum_{j in A} w_ij per vertex
    cut = 0.0
    vol_a = 0.0
    best = np.inf
    best_subset: tuple[int, ...] | None = None

    def consider(ratio: float, members: np.ndarray):
        nonlocal best, best_subset
        if ratio > best:
            return
        subset = tuple(int(i) for i in np.flatnonzero(members))
        if ratio < best or best_subset is None or subset < best_subset:
            best = ratio
            best_subset = subset

    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length()  # Gray code: vertex v in 1..n-1 flips
        if in_a[v]:
            cut += 2.0 * weight_to_a[v] - deg[v]
            weight_to_a -= w[:, v]
            vol_a -= mu[v]
            in_a[v] = False
        else:
            cut += deg[v] - 2.0 * weight_to_a[v]
            weight_to_a += w[:, v]
            vol_a += mu[v]
            in_a[v] = True
        if vol_a <= half + tol:
            consider(cut / vol_a, in_a)
        vol_c = vol_total - vol_a
        if vol_c <= half + tol:
            consider(cut / vol_c, ~in_a)

    assert best_subset is not None
    return float(best), best_subset


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    slack: float


@dataclass(frozen=True)
class BoundsReport:
    rho2: float
    rho_n: float
    beta: float
    beta_witness: tuple[int, ...]
    delta: float
    checks: dict[str, BoundCheck]

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "rho2": self.rho2,
            "rho_n": self.rho_n,
            "beta": self.beta,
            "beta_witness": list(self.beta_witness),
            "delta": self.delta,
            "checks": {
                name: {"passed": check.passed, "slack": check.slack}
                for name, check in self.checks.items()
            },
        }


def verify_bounds(g: GraphSpace, slack_tol: float = DEFAULT_SLACK) -> BoundsReport:
    """Evaluate rho_n <= 2 delta, rho_2 <= 2 beta, rho_2 >= beta^2 / (2 delta).

    Each check records its slack (how far inside the inequality the values
    sit); a check passes when slack >= -slack_tol.  All three are theorems,
    so a failure on a valid connected input indicates a bug.
    """
    if not g.is_connected:
        raise ValueError("eigenvalue bounds are stated for connected graphs")
    spec = eigendecompose(g)
    rho2 = float(spec.eigenvalues[1]) if g.n > 1 else 0.0
    rho_n = float(spec.eigenvalues[-1])
    delta = g.delta
    beta, witness = isoperimetric_constant(g)
    checks = {
        "rho_n_le_2delta": 2.0 * delta - rho_n,
        "rho2_le_2beta": 2.0 * beta - rho2,
        "rho2_ge_beta2_over_2delta": rho2 - beta * beta / (2.0 * delta),
    }
    return BoundsReport(
        rho2=rho2,
        rho_n=rho_n,
        beta=beta,
        beta_witness=witness,
        delta=delta,
        checks={name: BoundCheck(passed=bool(s >= -slack_tol), slack=float(s)) for name, s in checks.items()},
    )
