"""Embeddings, curvature vectors, smoothing flows, and spring/gravity systems.

An embedding of the vertex set into R^d is an (n, d) coordinate array.  Its
curvature vector is H = -L r columnwise; the embedding energy is the sum of
the coordinates' Dirichlet energies and is invariant under rigid motions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .calculus import (
    GraphSpace,
    dirichlet_energy,
    laplacian_apply,
    laplacian_matrix,
)
from .spectral import NumericalError, Spectrum, eigendecompose

COLLISION_TOL = 1e-9


def _check_embedding(g: GraphSpace, r, name: str = "r") -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] != g.n:
        raise ValueError(f"{name} must have {g.n} rows, got shape {np.asarray(r).shape}")
    return arr


def curvature(g: GraphSpace, r) -> np.ndarray:
    """Curvature vector H = -L r, one column per coordinate."""
    arr = _check_embedding(g, r)
    return -laplacian_apply(g, arr)


def embedding_energy(g: GraphSpace, r) -> float:
    """Sum of the per-coordinate Dirichlet energies."""
    arr = _check_embedding(g, r)
    return float(sum(dirichlet_energy(g, arr[:, s], arr[:, s]) for s in range(arr.shape[1])))


def gaussian_weights(coords, scale: float, sigma: float) -> np.ndarray:
    """Weights scale * exp(-|r_i - r_j|^2 / (2 sigma^2)), zero diagonal."""
    if scale <= 0 or sigma <= 0:
        raise ValueError("scale and sigma must be positive")
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    diff = pts[:, None, :] - pts[None, :, :]
    sq = np.sum(diff * diff, axis=2)
    w = scale * np.exp(-sq / (2.0 * sigma * sigma))
    w = 0.5 * (w + w.T)
    np.fill_diagonal(w, 0.0)
    return w


def pairwise_distances(coords) -> np.ndarray:
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def dirichlet_solve(g: GraphSpace, boundary, boundary_values) -> np.ndarray:
    """Harmonic extension: L r = 0 on free vertices, r fixed on the boundary.

    Every free vertex must reach the boundary through positive-weight edges,
    otherwise the interior system is singular and a ValueError names the
    stranded vertices.
    """
    boundary = np.asarray(list(boundary), dtype=int)
    if boundary.size == 0:
        raise ValueError("boundary must be non-empty")
    if np.unique(boundary).size != boundary.size:
        raise ValueError("boundary vertices must be distinct")
    if boundary.min() < 0 or boundary.max() >= g.n:
        raise ValueError("boundary vertex out of range")
    vals = np.asarray(boundary_values, dtype=float)
    squeeze = vals.ndim == 1
    if squeeze:
        vals = vals[:, None]
    if vals.shape[0] != boundary.size:
        raise ValueError("boundary_values must align with the boundary list")

    is_boundary = np.zeros(g.n, dtype=bool)
    is_boundary[boundary] = True
    free = np.flatnonzero(~is_boundary)

    out = np.zeros((g.n, vals.shape[1]))
    out[boundary] = vals
    if free.size == 0:
        return out[:, 0] if squeeze else out

    # Reachability sweep: free components with no boundary contact are singular.
    reached = is_boundary.copy()
    stack = list(boundary)
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(g.weights[i] > 0.0):
            if not reached[j]:
                reached[j] = True
                stack.append(int(j))
    stranded = np.flatnonzero(~reached)
    if stranded.size:
        raise ValueError(f"free vertices {stranded.tolist()} have no path to the boundary")

    w = g.weights
    stiff = np.diag(g.degree[free]) - w[np.ix_(free, free)]
    rhs = w[np.ix_(free, boundary)] @ vals
    try:
        cho = scipy.linalg.cho_factor(stiff)
        out[free] = scipy.linalg.cho_solve(cho, rhs)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"interior system factorization failed: {exc}") from exc
    residual = np.max(np.abs(laplacian_apply(g, out)[free])) if free.size else 0.0
    scale = max(1.0, float(np.max(np.abs(vals))))
    if residual > 1e-10 * scale * max(1.0, g.delta):
        raise NumericalError(f"harmonic residual {residual:g} exceeds tolerance")
    return out[:, 0] if squeeze else out


def _implicit_factor(g: GraphSpace, eps: float, squared: bool):
    s = np.sqrt(g.mu)
    sym = laplacian_matrix(g, orthonormal=True)
    op = sym @ sym if squared else sym
    return s, scipy.linalg.cho_factor(np.eye(g.n) + eps * op)


def smooth(g: GraphSpace, r, method: str, eps: float, eps2: float = 0.0, iterations: int = 1) -> np.ndarray:
    """Iterated smoothing flow on an embedding; weights stay fixed throughout.

    One step of each method, as a spectral response in rho:

    - ``explicit``:    r - eps L r            -> (1 - eps rho)
    - ``taubin``:      (id - eps2 L)(id - eps L) r, eps > 0, eps + eps2 < 0
    - ``implicit``:    solve (id + eps L) r' = r      -> 1 / (1 + eps rho)
    - ``bi_implicit``: solve (id + eps L^2) r' = r    -> 1 / (1 + eps rho^2)

    Implicit solves factor the positive-definite orthonormal-basis operator
    once and reuse it for every iteration and coordinate.
    """
    arr = _check_embedding(g, r).copy()
    squeeze = np.asarray(r).ndim == 1
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if method == "explicit":
        if eps < 0:
            raise ValueError("explicit step needs eps >= 0")
        for _ in range(iterations):
            arr = arr - eps * laplacian_apply(g, arr)
    elif method == "taubin":
        if not (eps > 0 and eps + eps2 < 0):
            raise ValueError("taubin needs eps > 0 and eps + eps2 < 0")
        for _ in range(iterations):
            arr = arr - eps * laplacian_apply(g, arr)
            arr = arr - eps2 * laplacian_apply(g, arr)
    elif method in ("implicit", "bi_implicit"):
        if eps <= 0:
            raise ValueError(f"{method} needs eps > 0")
        if iterations > 0:
            try:
                s, cho = _implicit_factor(g, eps, squared=method == "bi_implicit")
            except scipy.linalg.LinAlgError as exc:
                raise NumericalError(f"implicit operator factorization failed: {exc}") from exc
            for _ in range(iterations):
                arr = scipy.linalg.cho_solve(cho, s[:, None] * arr) / s[:, None]
    else:
        raise ValueError(f"unknown smoothing method {method!r}")
    return arr[:, 0] if squeeze else arr


@dataclass(frozen=True)
class MonotonicityReport:
    energies: np.ndarray
    non_increasing: bool


def energy_monotonicity_check(g: GraphSpace, r, eps: float, iterations: int = 10) -> MonotonicityReport:
    """Track the embedding energy along the explicit flow.

    Guaranteed non-increasing for 0 < eps < 2/rho_n; larger steps may
    amplify the top mode, which is exactly what a negative control exposes.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    arr = _check_embedding(g, r).copy()
    energies = [embedding_energy(g, arr)]
    for _ in range(iterations):
        arr = arr - eps * laplacian_apply(g, arr)
        energies.append(embedding_energy(g, arr))
    energies = np.asarray(energies)
    drift = np.diff(energies)
    tol = 1e-12 * max(1.0, float(energies[0]))
    return MonotonicityReport(energies=energies, non_increasing=bool(np.all(drift <= tol)))


@dataclass(frozen=True)
class PhysicsSystem:
    """Point masses coupled by springs (hooke) or gravity (newton)."""

    masses: np.ndarray
    law: str
    spring_constants: Optional[np.ndarray] = None
    cg: Optional[float] = None
    positions: Optional[np.ndarray] = None

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if m.ndim != 1 or np.any(m <= 0):
            raise ValueError("masses must be a 1-D array of positive reals")
        object.__setattr__(self, "masses", m)
        if self.law == "hooke":
            if self.spring_constants is None:
                raise ValueError("hooke system needs spring constants")
            k = np.asarray(self.spring_constants, dtype=float)
            if k.shape != (m.size, m.size):
                raise ValueError("spring constants must be (n, n)")
            if np.max(np.abs(k - k.T)) > 1e-12:
                raise ValueError("spring constants must be symmetric")
            if np.any(k < 0):
                raise ValueError("spring constants must be non-negative")
            if np.max(np.abs(np.diag(k))) > 0:
                raise ValueError("spring constants must have zero diagonal")
            object.__setattr__(self, "spring_constants", k)
        elif self.law == "newton":
            if self.cg is None or self.cg <= 0:
                raise ValueError("newton system needs cg > 0")
            if self.positions is None:
                raise ValueError("newton system needs positions")
            pos = np.asarray(self.positions, dtype=float)
            if pos.ndim != 2 or pos.shape[0] != m.size or pos.shape[1] < 3:
                raise ValueError("newton positions must be (n, d) with d >= 3")
            object.__setattr__(self, "positions", pos)
        else:
            raise ValueError(f"unknown law {self.law!r}")

    @classmethod
    def hooke(cls, masses, spring_constants) -> "PhysicsSystem":
        return cls(masses=np.asarray(masses, dtype=float), law="hooke",
                   spring_constants=spring_constants)

    @classmethod
    def newton(cls, masses, positions, cg: float) -> "PhysicsSystem":
        return cls(masses=np.asarray(masses, dtype=float), law="newton",
                   cg=cg, positions=positions)

    def graph(self) -> GraphSpace:
        """Weights and measure realizing the system's force as a curvature."""
        if self.law == "hooke":
            return GraphSpace(self.masses, self.spring_constants)
        return GraphSpace(self.masses, newton_weights(self.masses, self.positions, self.cg))


def hooke_force(system: PhysicsSystem, r) -> tuple[np.ndarray, float]:
    """Spring forces F(i) = sum_j k_ij (r(j) - r(i)) and potential energy.

    Evaluated directly from the pair interactions; with weights k and
    measure m these equal m_i H(i) and the embedding energy.
    """
    if system.law != "hooke":
        raise ValueError("hooke_force needs a hooke system")
    k = system.spring_constants
    arr = np.asarray(r, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.shape[0] != system.masses.size:
        raise ValueError("embedding rows must match the number of masses")
    force = k @ arr - k.sum(axis=1)[:, None] * arr
    diff = arr[:, None, :] - arr[None, :, :]
    potential = 0.5 * float(np.sum(k * np.sum(diff * diff, axis=2)))
    return force, potential


def oscillation_frequencies(system: PhysicsSystem) -> Spectrum:
    """Normal-mode spectrum: the i-th coefficient oscillates at sqrt(rho_i)."""
    if system.law != "hooke":
        raise ValueError("oscillation frequencies are defined for hooke systems")
    return eigendecompose(system.graph())


def hooke_trajectory(system: PhysicsSystem, r0, v0=None, dt: float = 0.01, steps: int = 1000):
    """Velocity-Verlet integration of m r'' = -m L r.

    Returns (positions, velocities) with shapes (steps + 1, n, d); the
    symplectic step keeps each modal energy bounded.
    """
    if system.law != "hooke":
        raise ValueError("hooke_trajectory needs a hooke system")
    g = system.graph()
    r = np.asarray(r0, dtype=float)
    if r.ndim == 1:
        r = r[:, None]
    v = np.zeros_like(r) if v0 is None else np.asarray(v0, dtype=float).reshape(r.shape)
    positions = np.empty((steps + 1,) + r.shape)
    velocities = np.empty_like(positions)
    positions[0], velocities[0] = r, v
    acc = -laplacian_apply(g, r)
    for k in range(1, steps + 1):
        v_half = v + 0.5 * dt * acc
        r = r + dt * v_half
        acc = -laplacian_apply(g, r)
        v = v_half + 0.5 * dt * acc
        positions[k], velocities[k] = r, v
    return positions, velocities


def newton_weights(masses, coords, cg: float) -> np.ndarray:
    """Gravitational weights cg m_i m_j / |r_i - r_j|^d for d >= 3."""
    m = np.asarray(masses, dtype=float)
    pts = np.asarray(coords, dtype=float)
    if pts.ndim != 2 or pts.shape[1] < 3:
        raise ValueError("newton weights need coordinates in dimension >= 3")
    if pts.shape[0] != m.size:
        raise ValueError("masses must align with coordinates")
    if cg <= 0:
        raise ValueError("cg must be positive")
    d = pts.shape[1]
    dist = pairwise_distances(pts)
    off = ~np.eye(m.size, dtype=bool)
    if np.any(dist[off] < COLLISION_TOL):
        raise ValueError("coincident points make the gravitational weight singular")
    w = np.zeros_like(dist)
    w[off] = cg * np.outer(m, m)[off] / dist[off] ** d
    return 0.5 * (w + w.T)


def newton_system(masses, coords, cg: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Gravitational weights, field, and potential energy.

    The field is evaluated straight from the pair sum
    g(i) = -cg (d - 2) sum_j m_j (r_i - r_j) / |r_i - r_j|^d and satisfies
    g(i) = (d - 2) H(i) under the returned weights with measure m; the
    potential equals minus the embedding energy.
    """
    m = np.asarray(masses, dtype=float)
    pts = np.asarray(coords, dtype=float)
    w = newton_weights(m, pts, cg)
    d = pts.shape[1]
    dist = pairwise_distances(pts)
    np.fill_diagonal(dist, np.inf)
    diff = pts[:, None, :] - pts[None, :, :]
    kernel = m[None, :] / dist ** d
    field = -cg * (d - 2) * np.sum(kernel[:, :, None] * diff, axis=1)
    inv = m[None, :] * m[:, None] / dist ** (d - 2)
    potential = -0.5 * cg * float(np.sum(inv))
    return w, field, potential


def newton_trajectory(masses, r0, cg: float, v0=None, dt: float = 0.001, steps: int = 1000):
    """Velocity-Verlet integration under the gravitational field.

    The field (and hence the weights) is recomputed from the current
    positions at every step.
    """
    m = np.asarray(masses, dtype=float)
    r = np.asarray(r0, dtype=float).copy()
    v = np.zeros_like(r) if v0 is None else np.asarray(v0, dtype=float).reshape(r.shape)
    positions = np.empty((steps + 1,) + r.shape)
    velocities = np.empty_like(positions)
    positions[0], velocities[0] = r, v
    acc = newton_system(m, r, cg)[1]
    for k in range(1, steps + 1):
        v_half = v + 0.5 * dt * acc
        r = r + dt * v_half
        acc = newton_system(m, r, cg)[1]
        v = v_half + 0.5 * dt * acc
        positions[k], velocities[k] = r, v
    return positions, velocities


@dataclass(frozen=True)
class FlowResult:
    coords: np.ndarray
    iterations_run: int
    halted: bool
    reason: str = ""


def variable_weight_flow(coords, masses, cg: float, eps: float, iterations: int) -> FlowResult:
    """Explicit curvature flow with gravitational weights refreshed per step.

    Stops early and reports when two points come within the collision
    tolerance, returning the last valid state.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    m = np.asarray(masses, dtype=float)
    pts = np.asarray(coords, dtype=float).copy()
    if pts.shape[0] == 1:
        return FlowResult(coords=pts, iterations_run=iterations, halted=False)
    for it in range(iterations):
        dist = pairwise_distances(pts)
        off = ~np.eye(pts.shape[0], dtype=bool)
        if np.min(dist[off]) < COLLISION_TOL:
            return FlowResult(
                coords=pts,
                iterations_run=it,
                halted=True,
                reason=f"points within collision tolerance {COLLISION_TOL:g} after {it} iterations",
            )
        g = GraphSpace(m, newton_weights(m, pts, cg))
        pts = pts + eps * curvature(g, pts)
    return FlowResult(coords=pts, iterations_run=iterations, halted=False)
