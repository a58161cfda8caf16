"""Lazy random walks, heat semigroups, hitting times, and commute distances.

The one-step operator is S_c = id - (1/c) L.  Its kernel matrix theta has
theta_ii = c mu_i - deg(i) and theta_ij = w_ij, so for c >= delta
(delta = max_i deg(i)/mu_i) the rows of P(x, y) = theta_xy / (c mu_x) form
transition probabilities of a reversible Markov chain with stationary
measure mu / vol(V).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .calculus import GraphSpace, _check_function, _freeze, basis_function, laplacian_apply
from .spectral import NumericalError, Spectrum, eigendecompose

_REL_TOL = 1e-12


@dataclass(frozen=True)
class WalkOperator:
    graph: GraphSpace
    c: float
    theta: np.ndarray
    stochastic: bool

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigendecompose(self.graph)

    @cached_property
    def transition_matrix(self) -> np.ndarray:
        """Row-stochastic P(x, y) = theta_xy / (c mu_x) when stochastic."""
        p = self.theta / (self.c * self.graph.mu)[:, None]
        return _freeze(p)

    @cached_property
    def flux(self) -> np.ndarray:
        """mu(x) P(x, y) in its canonical form theta / c; exactly symmetric."""
        return _freeze(self.theta / self.c)


def walk_operator(g: GraphSpace, c: float | None = None) -> WalkOperator:
    """Build S_c.  A missing or non-positive c defaults to delta, the
    smallest constant that makes the walk stochastic."""
    if c is None or c <= 0:
        c = g.delta
        if c <= 0:
            raise ValueError("graph has no edges; pass an explicit c > 0")
    c = float(c)
    theta = g.weights.copy()
    diag = c * g.mu - g.degree
    # c == delta computed from this graph gives an exact zero at the argmax
    # vertex; anything in (-tol, 0) is round-off from the ratio.
    tiny = _REL_TOL * np.maximum(1.0, np.abs(c * g.mu))
    diag[(diag < 0) & (diag > -tiny)] = 0.0
    np.fill_diagonal(theta, diag)
    stochastic = bool(np.all(diag >= 0.0))
    return WalkOperator(graph=g, c=c, theta=_freeze(theta), stochastic=stochastic)


def step(wop: WalkOperator, f) -> np.ndarray:
    """One application of S_c: f - (1/c) L f."""
    arr = np.asarray(f, dtype=float)
    return arr - laplacian_apply(wop.graph, arr) / wop.c


def evolve_discrete(wop: WalkOperator, f, k: int) -> np.ndarray:
    """k-fold application of S_c."""
    if k < 0:
        raise ValueError("k must be >= 0")
    arr = np.asarray(f, dtype=float).copy()
    for _ in range(k):
        arr = step(wop, arr)
    return arr


def evolve_continuous(wop: WalkOperator, f, t: float) -> np.ndarray:
    """Heat semigroup exp(-t L / c) applied spectrally."""
    if t < 0:
        raise ValueError("t must be >= 0")
    spec = wop.spectrum
    f = _check_function(wop.graph, f)
    coeffs = spec.eigenfunctions.T @ (wop.graph.mu * f)
    damped = np.exp(-t * spec.eigenvalues / wop.c) * coeffs
    return spec.eigenfunctions @ damped


def transition_probability(wop: WalkOperator, x: int, y: int, k: int = 1) -> float:
    """Probability of standing at y after k steps from x."""
    if not wop.stochastic:
        raise ValueError("operator is not stochastic: need c >= delta")
    if k < 0:
        raise ValueError("k must be >= 0")
    e_y = basis_function(wop.graph.n, y)
    return float(evolve_discrete(wop, e_y, k)[x])


def transition_density(wop: WalkOperator, x: int, y: int, k: int = 1) -> float:
    """k-step density p_k(x, y), symmetric in its arguments."""
    return transition_probability(wop, x, y, k) / float(wop.graph.mu[y])


def expected_hitting(wop: WalkOperator, y: int) -> np.ndarray:
    """Expected first hitting (return, at x = y) times m(x, y).

    Solved directly: the off-target rows give the (n-1)-dimensional system
    (I - P restricted) m = 1, and the diagonal value is pinned by
    m(y, y) mu_y = vol(V).
    """
    g = wop.graph
    if not wop.stochastic:
        raise ValueError("hitting times need a stochastic operator (c >= delta)")
    if not g.is_connected:
        raise ValueError("hitting times need a connected graph")
    if not 0 <= y < g.n:
        raise ValueError("target vertex out of range")
    p = wop.transition_matrix
    free = np.array([x for x in range(g.n) if x != y], dtype=int)
    a = np.eye(free.size) - p[np.ix_(free, free)]
    try:
        m_free = np.linalg.solve(a, np.ones(free.size))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"hitting-time system is singular: {exc}") from exc
    m = np.empty(g.n)
    m[free] = m_free
    m[y] = g.volume / float(g.mu[y])
    return m


def commute_distance(g: GraphSpace, c: float | None = None) -> np.ndarray:
    """Normalized commute distances n(x, y).

    Computed from the spectral sum over nontrivial eigenpairs of
    (v_i(y) - v_i(x))^2 / rho_i; equal to (m(x,y) + m(y,x)) / (c vol(V))
    for any admissible c, and to the squared Euclidean distance of the
    full commute embedding.
    """
    if not g.is_connected:
        raise ValueError("commute distance needs a connected graph")
    if c is not None and c > 0 and c < g.delta * (1.0 - _REL_TOL):
        raise ValueError("need c >= delta for the random-walk reading")
    u = commute_embedding(g, g.n - 1)
    sq = np.sum(u * u, axis=1)
    d = sq[:, None] + sq[None, :] - 2.0 * (u @ u.T)
    np.clip(d, 0.0, None, out=d)
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def commute_embedding(g: GraphSpace, dims: int) -> np.ndarray:
    """Coordinates x -> (v_i(x) / sqrt(rho_i)) over the first nontrivial pairs."""
    if not g.is_connected:
        raise ValueError("commute embedding needs a connected graph")
    if dims < 0 or dims > g.n - 1:
        raise ValueError(f"dims must lie in [0, {g.n - 1}]")
    if dims == 0:
        return np.zeros((g.n, 0))
    spec = eigendecompose(g)
    rho = spec.eigenvalues[1:dims + 1]
    if np.any(rho <= 0):
        raise NumericalError("nontrivial eigenvalue is not positive")
    return spec.eigenfunctions[:, 1:dims + 1] / np.sqrt(rho)[None, :]


def simulate_hitting_times(
    wop: WalkOperator,
    start: int,
    target: int,
    n_walks: int,
    rng: np.random.Generator,
    max_steps: int = 10_000_000,
) -> np.ndarray:
    """Monte-Carlo first hitting times (>= 1 step), inverse-CDF sampling.

    The generator is injected so replicas are reproducible; independent
    seeds give independent replicas.
    """
    g = wop.graph
    if not wop.stochastic:
        raise ValueError("simulation needs a stochastic operator (c >= delta)")
    cum = np.cumsum(wop.transition_matrix, axis=1)
    cum[:, -1] = 1.0
    states = np.full(n_walks, start, dtype=int)
    times = np.zeros(n_walks, dtype=np.int64)
    alive = np.arange(n_walks)
    steps = 0
    while alive.size:
        steps += 1
        if steps > max_steps:
            raise NumericalError(f"walks exceeded {max_steps} steps without hitting")
        u = rng.random(alive.size)
        rows = cum[states[alive]]
        nxt = np.sum(rows < u[:, None], axis=1)
        states[alive] = nxt
        hit = nxt == target
        times[alive[hit]] = steps
        alive = alive[~hit]
    return times
