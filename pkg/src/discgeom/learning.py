"""Embedding and clustering algorithms built on the graph spectrum.

Covers eigenfunction embeddings, the covariance/energy bridge for random
variables sampled on the vertex probability space, weighted PCA and its
locality-preserving counterpart, graph-cut losses with their spectral form,
kernel k-means features, spectral clustering, and locally linear embedding.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .calculus import (
    GraphSpace,
    Partition,
    dirichlet_energy,
    energy_matrix,
    laplacian_apply,
    volume,
)
from .spectral import _fix_signs, eigendecompose


def laplacian_eigenmaps(g: GraphSpace, dims: int) -> np.ndarray:
    """Embedding by the first nontrivial eigenfunctions, one per column."""
    if not g.is_connected:
        raise ValueError("eigenmap embedding needs a connected graph")
    if dims < 0 or dims > g.n - 1:
        raise ValueError(f"dims must lie in [0, {g.n - 1}]")
    spec = eigendecompose(g)
    return spec.eigenfunctions[:, 1:dims + 1].copy()


@dataclass(frozen=True)
class DatasetAsGraph:
    graph: GraphSpace
    coords: Optional[np.ndarray] = None


@dataclass(frozen=True)
class BridgeReport:
    covariance: np.ndarray
    energy: np.ndarray
    max_covariance_energy_gap: float
    max_laplacian_identity_residual: float
    max_eigenvalue_gap: float


def probability_moments(mu, x) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance matrix of columns of x under mu / vol."""
    mu = np.asarray(mu, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != mu.size:
        raise ValueError("sample rows must align with the measure")
    p = mu / mu.sum()
    mean = p @ x
    xc = x - mean
    cov = xc.T @ (p[:, None] * xc)
    return mean, 0.5 * (cov + cov.T)


def bridge_weights(mu) -> np.ndarray:
    """Weights mu_i mu_j / vol^2 making covariances equal Dirichlet energies."""
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or np.any(mu <= 0):
        raise ValueError("measure must be a 1-D array of positive reals")
    w = np.outer(mu, mu) / mu.sum() ** 2
    np.fill_diagonal(w, 0.0)
    return w


def covariance_bridge(mu, x) -> tuple[DatasetAsGraph, BridgeReport]:
    """Graph whose Dirichlet energy reproduces the sample covariance.

    The report carries the covariance and energy Gram matrices together
    with the worst-case residuals of the three identities it certifies:
    covariance = energy, L x_s = (x_s - E[x_s]) / vol, and a flat
    nontrivial spectrum at 1/vol.
    """
    mu = np.asarray(mu, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    g = GraphSpace(mu, bridge_weights(mu))
    _, cov = probability_moments(mu, x)
    d = x.shape[1]
    energy = np.array([[dirichlet_energy(g, x[:, s], x[:, t]) for t in range(d)] for s in range(d)])
    vol = g.volume
    p = mu / vol
    lap = laplacian_apply(g, x)
    expected = (x - (p @ x)[None, :]) / vol
    spec = eigendecompose(g)
    eig_gap = float(np.max(np.abs(spec.eigenvalues[1:] - 1.0 / vol))) if g.n > 1 else 0.0
    report = BridgeReport(
        covariance=cov,
        energy=energy,
        max_covariance_energy_gap=float(np.max(np.abs(cov - energy))),
        max_laplacian_identity_residual=float(np.max(np.abs(lap - expected))),
        max_eigenvalue_gap=eig_gap,
    )
    return DatasetAsGraph(graph=g, coords=x), report


@dataclass(frozen=True)
class PcaResult:
    scores: np.ndarray        # (n, components) coefficients per sample
    variances: np.ndarray     # descending
    directions: np.ndarray    # (d, components) orthonormal axes
    mean: np.ndarray
    max_score_mean: float
    max_decorrelation_gap: float


def pca(mu, x, components: int) -> PcaResult:
    """Principal axes of the mu-weighted covariance of the sample columns.

    Scores are the centered samples projected on the axes; they come out
    centered and uncorrelated with variances equal to the eigenvalues.
    """
    mu = np.asarray(mu, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    d = x.shape[1]
    if not 1 <= components <= d:
        raise ValueError(f"components must lie in [1, {d}]")
    mean, cov = probability_moments(mu, x)
    evals, evecs = scipy.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:components]
    variances = evals[order]
    directions = _fix_signs(evecs[:, order].copy())
    xc = x - mean
    scores = xc @ directions
    p = mu / mu.sum()
    score_mean = p @ scores
    second = scores.T @ (p[:, None] * scores)
    report_gap = float(np.max(np.abs(second - np.diag(variances))))
    return PcaResult(
        scores=scores,
        variances=variances,
        directions=directions,
        mean=mean,
        max_score_mean=float(np.max(np.abs(score_mean))),
        max_decorrelation_gap=report_gap,
    )


@dataclass(frozen=True)
class LppResult:
    directions: np.ndarray    # (d, components), each with ||X a||_A = 1
    eigenvalues: np.ndarray   # ascending
    regularized: bool


def lpp(g: GraphSpace, x, components: int) -> LppResult:
    """Directions minimizing the Dirichlet energy of x @ a at unit measure norm.

    Solves the symmetric pencil (X^T (D - W) X) a = lambda (X^T M X) a and
    returns the smallest eigenpairs; a rank-deficient right-hand Gram is
    ridge-regularized by 1e-10 trace and flagged.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != g.n:
        raise ValueError("sample rows must match the graph")
    d = x.shape[1]
    if not 1 <= components <= d:
        raise ValueError(f"components must lie in [1, {d}]")
    k = energy_matrix(g)
    a_energy = x.T @ k @ x
    a_energy = 0.5 * (a_energy + a_energy.T)
    a_measure = x.T @ (g.mu[:, None] * x)
    a_measure = 0.5 * (a_measure + a_measure.T)
    trace = float(np.trace(a_measure))
    regularized = False
    if np.linalg.eigvalsh(a_measure)[0] <= 1e-12 * max(trace, 1.0):
        a_measure = a_measure + 1e-10 * trace * np.eye(d)
        regularized = True
    evals, evecs = scipy.linalg.eigh(a_energy, a_measure)
    directions = _fix_signs(evecs[:, :components].copy())
    return LppResult(directions=directions, eigenvalues=evals[:components], regularized=regularized)


def graph_cut_loss(g: GraphSpace, partition: Partition) -> float:
    """Sum over blocks of cut energy divided by block measure."""
    if partition.labels.size != g.n:
        raise ValueError("partition must label every vertex")
    total = 0.0
    for l in range(partition.k):
        chi = partition.indicator(l)
        total += dirichlet_energy(g, chi, chi) / volume(g, partition.block(l))
    return total


def graph_cut_loss_spectral(g: GraphSpace, partition: Partition, c: float) -> float:
    """Spectral form of the cut loss through the lazy-walk eigenvalues.

    sum_i rho_i + c (k - n) + sum over blocks A and modes i of
    (c lambda_i / (2 vol(A))) times the double integral over A x A of
    (v_i(x) - v_i(y))^2 d mu d mu, with lambda_i = 1 - rho_i / c.  The
    additive constant c (k - n) is forced by normalizing each block against
    all n modes; it vanishes only when every block is a singleton.  Needs
    c >= rho_n so every lambda_i is non-negative.
    """
    spec = eigendecompose(g)
    rho = spec.eigenvalues
    if c < rho[-1] * (1.0 - 1e-12):
        raise ValueError("need c >= rho_n")
    lam = 1.0 - rho / c
    v = spec.eigenfunctions
    mu = g.mu
    total = float(np.sum(rho)) + c * (partition.k - g.n)
    for l in range(partition.k):
        block = partition.block(l)
        vol_a = float(mu[block].sum())
        vb = v[block]
        mb = mu[block]
        first = vol_a * np.sum(vb * vb * mb[:, None], axis=0)
        second = (mb @ vb) ** 2
        double_int = 2.0 * (first - second)
        total += float(np.sum(c * lam / (2.0 * vol_a) * double_int))
    return total


def kernel_kmeans_features(g: GraphSpace, c: float) -> np.ndarray:
    """Feature rows (sqrt(lambda_i) v_i(x))_i of the lazy-walk kernel.

    The Gram matrix of the rows is sum_i lambda_i v_i(x) v_i(y), the kernel
    (S_c e_y)(x) / mu_y; its eigenvalues under the measure pairing are the
    lambda_i, so c >= rho_n is required for real features.
    """
    spec = eigendecompose(g)
    rho = spec.eigenvalues
    if c < rho[-1] * (1.0 - 1e-12):
        raise ValueError("need c >= rho_n for non-negative kernel eigenvalues")
    lam = np.clip(1.0 - rho / c, 0.0, None)
    return spec.eigenfunctions * np.sqrt(lam)[None, :]


def _kmeans_plusplus(points: np.ndarray, mu: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    probs = mu / mu.sum()
    first = rng.choice(n, p=probs)
    centers[0] = points[first]
    closest = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        weights = mu * closest
        total = weights.sum()
        if total <= 0:
            idx = rng.choice(n)
        else:
            idx = rng.choice(n, p=weights / total)
        centers[j] = points[idx]
        closest = np.minimum(closest, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(points: np.ndarray, mu: np.ndarray, centers: np.ndarray, max_iter: int = 300):
    k = centers.shape[0]
    n = points.shape[0]
    history = []
    labels = None
    for _ in range(max_iter):
        sq = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(sq, axis=1)
        # Claim the farthest point for any emptied cluster (deterministic).
        for j in range(k):
            if not np.any(new_labels == j):
                far = int(np.argmax(sq[np.arange(n), new_labels]))
                new_labels[far] = j
                sq[far, :] = np.inf
                sq[far, j] = 0.0
        for j in range(k):
            members = new_labels == j
            centers[j] = (mu[members] @ points[members]) / mu[members].sum()
        resid = points - centers[new_labels]
        objective = float(np.sum(mu * np.sum(resid * resid, axis=1)))
        if history:
            assert objective <= history[-1] + 1e-9 * max(1.0, history[-1]), \
                "k-means objective increased across an iteration"
        converged = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        history.append(objective)
        if converged or (len(history) > 1 and history[-2] - objective <= 1e-12 * max(1.0, objective)):
            break
    return labels, history[-1], history


def weighted_kmeans(points, mu, k: int, rng: np.random.Generator, restarts: int = 100):
    """Measure-weighted Lloyd with k-means++ seeding and restarts.

    Returns (labels, objective, history-of-best-run); the objective is
    sum_i mu_i |phi(i) - center(label i)|^2 and never increases across
    Lloyd iterations.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    mu = np.asarray(mu, dtype=float)
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if points.shape[1] == 0 or k == 1:
        center = (mu @ points) / mu.sum() if points.shape[1] else np.zeros((1, 0))
        objective = float(np.sum(mu * np.sum((points - center) ** 2, axis=1)))
        return np.zeros(n, dtype=int), objective, [objective]
    best = None
    seeds = rng.spawn(restarts) if hasattr(rng, "spawn") else [rng] * restarts
    for child in seeds:
        centers = _kmeans_plusplus(points, mu, k, child)
        labels, objective, history = _lloyd(points, mu, centers)
        if best is None or objective < best[1]:
            best = (labels, objective, history)
    return best


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    mapping = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


@dataclass(frozen=True)
class ClusterResult:
    partition: Partition
    objective: float
    seed: int


def spectral_clustering(g: GraphSpace, k: int, c: float | None = None,
                        mode: str = "eigenmaps", seed: int = 0,
                        restarts: int = 100) -> ClusterResult:
    """Weighted k-means on spectral features of the graph.

    ``eigenmaps`` clusters the k - 1 first nontrivial eigenfunctions;
    ``kernel`` clusters the lazy-walk feature rows (c defaults to rho_n).
    Deterministic for a fixed seed.  k may be 1 (single block) up to n.
    """
    if not g.is_connected:
        raise ValueError("spectral clustering needs a connected graph")
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}]")
    if mode == "eigenmaps":
        feats = laplacian_eigenmaps(g, k - 1)
    elif mode == "kernel":
        if c is None or c <= 0:
            c = float(eigendecompose(g).eigenvalues[-1])
        feats = kernel_kmeans_features(g, c)
    else:
        raise ValueError(f"unknown clustering mode {mode!r}")
    rng = np.random.default_rng(seed)
    labels, objective, _ = weighted_kmeans(feats, g.mu, k, rng, restarts=restarts)
    labels = _canonical_labels(np.asarray(labels, dtype=int))
    return ClusterResult(partition=Partition(labels=labels, k=k), objective=objective, seed=seed)


def nearest_neighbor_sets(coords, k: int) -> list[np.ndarray]:
    """k nearest Euclidean neighbors per point, self excluded."""
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}]")
    diff = pts[:, None, :] - pts[None, :, :]
    sq = np.sum(diff * diff, axis=2)
    np.fill_diagonal(sq, np.inf)
    order = np.argsort(sq, axis=1, kind="stable")
    return [order[i, :k].copy() for i in range(n)]


def lle_weights(coords, neighbors: Sequence, reg: float | str = "auto") -> np.ndarray:
    """Row-stochastic reconstruction weights over each vertex's neighbor set.

    Per vertex the constrained least squares (affine reconstruction from the
    neighbors) is solved in closed form from the local Gram system; the
    standard rank-deficient case (more neighbors than ambient dimensions)
    gets ridge reg * trace by default.  Rows sum to exactly 1.0.
    """
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n, d = pts.shape
    w = np.zeros((n, n))
    for i in range(n):
        nbrs = np.asarray(list(neighbors[i]), dtype=int)
        if nbrs.size == 0:
            raise ValueError(f"vertex {i} has an empty neighbor set")
        if np.any(nbrs == i):
            raise ValueError(f"vertex {i} lists itself as a neighbor")
        if nbrs.min() < 0 or nbrs.max() >= n:
            raise ValueError(f"vertex {i} has out-of-range neighbors")
        z = pts[nbrs] - pts[i]
        gram = z @ z.T
        if reg == "auto":
            ridge = 1e-3 if nbrs.size > d else 0.0
        else:
            ridge = float(reg)
        if ridge > 0:
            gram = gram + ridge * max(np.trace(gram), 1e-300) * np.eye(nbrs.size)
        try:
            local = np.linalg.solve(gram, np.ones(nbrs.size))
        except np.linalg.LinAlgError:
            local = np.linalg.lstsq(gram, np.ones(nbrs.size), rcond=None)[0]
        total = local.sum()
        if total == 0.0:
            local = np.full(nbrs.size, 1.0 / nbrs.size)
        else:
            local = local / total
        # Pin the row sum to exactly 1.0 against summation round-off.
        for _ in range(5):
            drift = local.sum() - 1.0
            if drift == 0.0:
                break
            local[int(np.argmax(np.abs(local)))] -= drift
        w[i, nbrs] = local
    return w


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    gap: float


def lle_curvature_identity(coords, wt) -> IdentityReport:
    """Reconstruction error vs curvature length for row-stochastic weights.

    Left side: sum_i |r(i) - sum_j wt_ij r(j)|^2.  Right side: the squared
    curvature norms under unit measure with the row operator id - wt applied
    directly (wt is generally asymmetric, so no GraphSpace is involved).
    """
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    wt = np.asarray(wt, dtype=float)
    n = pts.shape[0]
    if wt.shape != (n, n):
        raise ValueError(f"weight matrix must be ({n}, {n})")
    sums = wt.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > 1e-9:
        raise ValueError("weight rows must sum to 1")
    lhs = 0.0
    for i in range(n):
        resid = pts[i] - wt[i] @ pts
        lhs += float(resid @ resid)
    curls = -(pts - wt @ pts)
    rhs = float(np.sum(curls * curls))
    return IdentityReport(lhs=lhs, rhs=rhs, gap=abs(lhs - rhs))


def lle_embed(wt, target_dims: int) -> np.ndarray:
    """Bottom nontrivial eigenvectors of (I - W)^T (I - W).

    The constant kernel vector is dropped; the returned columns are
    orthonormal under the unit-measure pairing.
    """
    wt = np.asarray(wt, dtype=float)
    n = wt.shape[0]
    if wt.shape != (n, n):
        raise ValueError("weight matrix must be square")
    if not 1 <= target_dims <= n - 1:
        raise ValueError(f"target_dims must lie in [1, {n - 1}]")
    op = np.eye(n) - wt
    m = op.T @ op
    m = 0.5 * (m + m.T)
    _, vecs = scipy.linalg.eigh(m)
    return _fix_signs(vecs[:, 1:target_dims + 1].copy())


def lle(coords, n_neighbors: int, target_dims: int, reg: float | str = "auto") -> np.ndarray:
    """Locally linear embedding: neighbor weights then bottom eigenvectors."""
    wt = lle_weights(coords, nearest_neighbor_sets(coords, n_neighbors), reg=reg)
    return lle_embed(wt, target_dims)
