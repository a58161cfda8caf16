"""Differential calculus on a finite weighted vertex set.

Functions on the n vertices form a commutative algebra under the pointwise
product; they are stored as plain 1-D float arrays in the Kronecker basis.
One-forms live on ordered off-diagonal vertex pairs and are stored as (n, n)
arrays with zero diagonal.  A :class:`GraphSpace` bundles the two pieces of
geometric data: a positive measure ``mu`` (inner product on functions) and
symmetric non-negative weights ``w`` (inner product on one-forms), which
together determine the Dirichlet energy and the Laplacian ``M^{-1}(D - W)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

ATOL = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GraphSpace:
    """Finite vertex set with measure and edge weights.

    Parameters
    ----------
    mu : array, shape (n,)
        Strictly positive vertex measure.
    weights : array, shape (n, n)
        Non-negative symmetric weights with zero diagonal.  Inputs that are
        symmetric within ``1e-12`` (absolute) are symmetrized by averaging;
        anything worse is rejected.
    """

    mu: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float).copy()
        w = np.asarray(self.weights, dtype=float).copy()
        if mu.ndim != 1 or mu.size < 1:
            raise ValueError("mu must be a non-empty 1-D array")
        n = mu.size
        if w.shape != (n, n):
            raise ValueError(f"weights must have shape ({n}, {n}), got {w.shape}")
        if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(w)):
            raise ValueError("mu and weights must be finite")
        if np.any(mu <= 0):
            raise ValueError("measure must be strictly positive")
        asym = np.max(np.abs(w - w.T)) if n > 1 else 0.0
        if asym > ATOL:
            raise ValueError(f"weights not symmetric: max |w - w^T| = {asym:g}")
        w = 0.5 * (w + w.T)
        if np.any(w < -ATOL):
            raise ValueError("weights must be non-negative")
        np.clip(w, 0.0, None, out=w)
        if np.max(np.abs(np.diag(w))) > ATOL:
            raise ValueError("weights must have zero diagonal")
        np.fill_diagonal(w, 0.0)
        object.__setattr__(self, "mu", _freeze(mu))
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def n(self) -> int:
        return self.mu.size

    @cached_property
    def degree(self) -> np.ndarray:
        return _freeze(self.weights.sum(axis=1))

    @cached_property
    def volume(self) -> float:
        return float(self.mu.sum())

    @cached_property
    def delta(self) -> float:
        """Largest degree-to-measure ratio, max_i deg(i)/mu_i."""
        return float(np.max(self.degree / self.mu))

    @cached_property
    def is_connected(self) -> bool:
        """Connectivity through edges of strictly positive weight."""
        n = self.n
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(self.weights[i] > 0.0):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return bool(seen.all())

    def with_measure(self, mu) -> "GraphSpace":
        return GraphSpace(np.asarray(mu, dtype=float), self.weights)


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of the vertex set by k non-empty blocks."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int).copy()
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a non-empty 1-D integer array")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if labels.min() < 0 or labels.max() >= self.k:
            raise ValueError("labels must lie in [0, k)")
        counts = np.bincount(labels, minlength=self.k)
        if np.any(counts == 0):
            raise ValueError("every block must be non-empty")
        object.__setattr__(self, "labels", _freeze(labels))

    def block(self, l: int) -> np.ndarray:
        return np.flatnonzero(self.labels == l)

    def indicator(self, l: int) -> np.ndarray:
        chi = np.zeros(self.labels.size)
        chi[self.labels == l] = 1.0
        return chi


def _check_function(g: GraphSpace, f, name: str = "f") -> np.ndarray:
    arr = np.asarray(f, dtype=float)
    if arr.shape != (g.n,):
        raise ValueError(f"{name} must have shape ({g.n},), got {arr.shape}")
    return arr


def _check_form(g: GraphSpace, u, name: str = "u") -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if arr.shape != (g.n, g.n):
        raise ValueError(f"{name} must have shape ({g.n}, {g.n}), got {arr.shape}")
    return arr


def basis_function(n: int, i: int) -> np.ndarray:
    """Kronecker basis element e_i."""
    e = np.zeros(n)
    e[i] = 1.0
    return e


def differential(g: GraphSpace, f) -> np.ndarray:
    """One-form of coefficients (df)[i, j] = f(j) - f(i)."""
    f = _check_function(g, f)
    return f[None, :] - f[:, None]


def pointwise_product(f, h) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    h = np.asarray(h, dtype=float)
    if f.shape != h.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {h.shape}")
    return f * h


def module_action(f, u, h) -> np.ndarray:
    """Two-sided algebra action on a one-form: (f u h)[i, j] = f(i) u[i, j] h(j)."""
    u = np.asarray(u, dtype=float)
    f = np.asarray(f, dtype=float)
    h = np.asarray(h, dtype=float)
    n = u.shape[0]
    if u.shape != (n, n) or f.shape != (n,) or h.shape != (n,):
        raise ValueError("dimension mismatch in module action")
    return f[:, None] * u * h[None, :]


def integral(g: GraphSpace, f) -> float:
    """sum_i f(i) mu_i."""
    f = _check_function(g, f)
    return float(np.dot(f, g.mu))


def inner_a(g: GraphSpace, f, h) -> float:
    """Inner product on functions, sum_i f(i) h(i) mu_i."""
    f = _check_function(g, f)
    h = _check_function(g, h, "h")
    return float(np.dot(f * h, g.mu))


def norm_a(g: GraphSpace, f) -> float:
    return float(np.sqrt(max(inner_a(g, f, f), 0.0)))


def inner_form(g: GraphSpace, u, v) -> float:
    """Inner product on one-forms, sum_{i != j} w_ij u_ij v_ij."""
    u = _check_form(g, u)
    v = _check_form(g, v, "v")
    return float(np.sum(g.weights * u * v))


def dirichlet_energy(g: GraphSpace, f, h) -> float:
    """(1/2) sum_ij w_ij (f_i - f_j)(h_i - h_j).

    Equal to half the one-form inner product of the differentials, and to
    <f, L h> in the measure pairing; independent of mu.
    """
    f = _check_function(g, f)
    h = _check_function(g, h, "h")
    df = f[:, None] - f[None, :]
    dh = h[:, None] - h[None, :]
    return 0.5 * float(np.sum(g.weights * df * dh))


def codifferential(g: GraphSpace, u) -> np.ndarray:
    """Adjoint of the differential: (d* u)(i) = mu_i^{-1} sum_j w_ij (u_ji - u_ij)."""
    u = _check_form(g, u)
    return np.sum(g.weights * (u.T - u), axis=1) / g.mu


def laplacian_apply(g: GraphSpace, f) -> np.ndarray:
    """(L f)(i) = sum_j (w_ij / mu_i)(f_i - f_j).

    Accepts a single function of shape (n,) or a stack of columns (n, d);
    columns are transformed independently.
    """
    arr = np.asarray(f, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[0] != g.n:
        raise ValueError(f"f must have leading dimension {g.n}, got shape {arr.shape}")
    deg = g.degree
    if arr.ndim == 1:
        return (deg * arr - g.weights @ arr) / g.mu
    return (deg[:, None] * arr - g.weights @ arr) / g.mu[:, None]


def energy_matrix(g: GraphSpace) -> np.ndarray:
    """Stiffness matrix D - W, the Gram matrix of the Dirichlet energy."""
    k = -g.weights.copy()
    np.fill_diagonal(k, g.degree)
    return k


def laplacian_matrix(g: GraphSpace, orthonormal: bool = False) -> np.ndarray:
    """Dense Laplacian M^{-1}(D - W).

    With ``orthonormal=True``, returns the symmetric representation
    M^{-1/2}(D - W) M^{-1/2} in the orthonormal basis e_i / sqrt(mu_i);
    with the degree measure this is the normalized-Laplacian form
    I - D^{-1/2} W D^{-1/2}.
    """
    k = energy_matrix(g)
    if orthonormal:
        s = np.sqrt(g.mu)
        b = k / np.outer(s, s)
        return 0.5 * (b + b.T)
    return k / g.mu[:, None]


def volume(g: GraphSpace, subset) -> float:
    """Measure of a vertex subset."""
    idx = np.asarray(list(subset), dtype=int)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= g.n:
        raise ValueError("subset contains out-of-range vertices")
    if np.unique(idx).size != idx.size:
        raise ValueError("subset contains repeated vertices")
    return float(g.mu[idx].sum())


def mean(g: GraphSpace, f) -> float:
    """Measure-weighted mean, integral(f) / vol(V)."""
    return integral(g, f) / g.volume
