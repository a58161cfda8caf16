"""Eigenstructure of the graph Laplacian, Fourier analysis, and filtering.

The generalized eigenvalue problem (D - W) v = rho M v is solved through the
symmetric similarity M^{-1/2}(D - W) M^{-1/2}, never by forming the
non-symmetric M^{-1}(D - W), so the spectrum stays real and the returned
eigenfunctions are orthonormal in the measure pairing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .calculus import GraphSpace, _check_function, _freeze, laplacian_apply, laplacian_matrix

EIG_CLAMP = 1e-9
SIGN_TOL = 1e-12


class NumericalError(RuntimeError):
    """A solver failed to converge or produced an unusable result."""


def _fix_signs(v: np.ndarray) -> np.ndarray:
    # Deterministic output: first entry of magnitude > SIGN_TOL made positive.
    for col in range(v.shape[1]):
        nz = np.flatnonzero(np.abs(v[:, col]) > SIGN_TOL)
        if nz.size and v[nz[0], col] < 0:
            v[:, col] = -v[:, col]
    return v


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and measure-orthonormal eigenfunctions.

    ``eigenfunctions[:, i]`` is the i-th eigenfunction; on a connected graph
    the first one is the constant vol(V)^{-1/2}.
    """

    graph: GraphSpace
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _freeze(np.asarray(self.eigenvalues, dtype=float).copy()))
        object.__setattr__(self, "eigenfunctions", _freeze(np.asarray(self.eigenfunctions, dtype=float).copy()))

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def residuals(self) -> np.ndarray:
        """Measure-norm residual ||L v_i - rho_i v_i||_A per eigenpair."""
        lv = laplacian_apply(self.graph, self.eigenfunctions)
        r = lv - self.eigenfunctions * self.eigenvalues[None, :]
        return np.sqrt(np.sum(r * r * self.graph.mu[:, None], axis=0))

    def orthonormality_error(self) -> float:
        gram = self.eigenfunctions.T @ (self.graph.mu[:, None] * self.eigenfunctions)
        return float(np.max(np.abs(gram - np.eye(self.n))))


def eigendecompose(g: GraphSpace) -> Spectrum:
    """Solve (D - W) v = rho M v.

    Eigenvalues in (-1e-9, 0) are clamped to zero (the operator is positive
    semidefinite; tiny negatives are round-off).  Eigenfunction signs follow
    the first-nonzero-positive convention.
    """
    s = np.sqrt(g.mu)
    b = laplacian_matrix(g, orthonormal=True)
    try:
        rho, vt = scipy.linalg.eigh(b)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"symmetric eigensolver did not converge on n={g.n}: {exc}") from exc
    rho = rho.copy()
    rho[(rho > -EIG_CLAMP) & (rho < 0.0)] = 0.0
    v = vt / s[:, None]
    norms = np.sqrt(np.sum(v * v * g.mu[:, None], axis=0))
    v = v / norms
    v = _fix_signs(v)
    return Spectrum(graph=g, eigenvalues=rho, eigenfunctions=v)


def fourier(spectrum: Spectrum, f) -> np.ndarray:
    """Coefficients <f, v_i>_A of f in the eigenbasis."""
    f = _check_function(spectrum.graph, f)
    return spectrum.eigenfunctions.T @ (spectrum.graph.mu * f)


def inverse_fourier(spectrum: Spectrum, coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (spectrum.n,):
        raise ValueError(f"coefficient vector must have shape ({spectrum.n},)")
    return spectrum.eigenfunctions @ coeffs


def convolve(spectrum: Spectrum, f, h) -> np.ndarray:
    """Convolution: coefficient-wise product in the eigenbasis."""
    return inverse_fourier(spectrum, fourier(spectrum, f) * fourier(spectrum, h))


@dataclass(frozen=True)
class FilterSpec:
    """Spectral filter g applied as g(L).

    ``chebyshev_order = 0`` means exact application through the
    eigendecomposition; a positive order applies a Chebyshev polynomial
    approximation of g on [0, rho_n] by a three-term recurrence in L,
    touching no eigenvectors.
    """

    kind: str
    g: Optional[Callable] = None
    t: float = 0.0
    c: float = 1.0
    eps: float = 0.0
    eps2: float = 0.0
    chebyshev_order: int = 0

    def __post_init__(self):
        if self.chebyshev_order < 0:
            raise ValueError("chebyshev_order must be >= 0")
        if self.kind == "callable":
            if self.g is None:
                raise ValueError("callable filter needs a function g(rho)")
        elif self.kind == "heat":
            if self.t < 0:
                raise ValueError("heat filter needs t >= 0")
            if self.c <= 0:
                raise ValueError("heat filter needs c > 0")
        elif self.kind == "taubin":
            if not (self.eps > 0 and self.eps + self.eps2 < 0):
                raise ValueError("taubin filter needs eps > 0 and eps + eps2 < 0")
        elif self.kind in ("implicit", "bi_implicit"):
            if self.eps <= 0:
                raise ValueError(f"{self.kind} filter needs eps > 0")
        else:
            raise ValueError(f"unknown filter kind {self.kind!r}")

    @classmethod
    def from_callable(cls, g: Callable, chebyshev_order: int = 0) -> "FilterSpec":
        return cls(kind="callable", g=g, chebyshev_order=chebyshev_order)

    @classmethod
    def heat(cls, t: float, c: float = 1.0, chebyshev_order: int = 0) -> "FilterSpec":
        return cls(kind="heat", t=t, c=c, chebyshev_order=chebyshev_order)

    @classmethod
    def taubin(cls, eps: float, eps2: float, chebyshev_order: int = 0) -> "FilterSpec":
        return cls(kind="taubin", eps=eps, eps2=eps2, chebyshev_order=chebyshev_order)

    @classmethod
    def implicit(cls, eps: float, chebyshev_order: int = 0) -> "FilterSpec":
        return cls(kind="implicit", eps=eps, chebyshev_order=chebyshev_order)

    @classmethod
    def bi_implicit(cls, eps: float, chebyshev_order: int = 0) -> "FilterSpec":
        return cls(kind="bi_implicit", eps=eps, chebyshev_order=chebyshev_order)

    def response(self, rho) -> np.ndarray:
        """Evaluate the frequency response g on an array of eigenvalues."""
        rho = np.asarray(rho, dtype=float)
        if self.kind == "callable":
            out = np.asarray(self.g(rho), dtype=float)
            if out.shape != rho.shape:
                out = np.asarray([float(self.g(x)) for x in rho])
            return out
        if self.kind == "heat":
            return np.exp(-self.t * rho / self.c)
        if self.kind == "taubin":
            return (1.0 - self.eps2 * rho) * (1.0 - self.eps * rho)
        if self.kind == "implicit":
            # The backward-Euler step (id + eps L) r' = r, a proper low-pass
            # response; see the smoothing flows in geometry.smooth.
            return 1.0 / (1.0 + self.eps * rho)
        if self.kind == "bi_implicit":
            return 1.0 / (1.0 + self.eps * rho * rho)
        raise AssertionError(self.kind)


def chebyshev_coefficients(func: Callable, order: int, upper: float) -> np.ndarray:
    """Chebyshev series coefficients of func on [0, upper].

    Discrete cosine quadrature at ``order + 1`` Chebyshev nodes; the returned
    c[0] is the raw doubled constant term (the series is c0/2 + sum c_k T_k).
    """
    m = order
    j = np.arange(m + 1)
    theta = np.pi * (j + 0.5) / (m + 1)
    half = upper / 2.0
    nodes = half + half * np.cos(theta)
    vals = np.asarray(func(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.asarray([float(func(x)) for x in nodes])
    k = np.arange(m + 1)
    coeffs = (2.0 / (m + 1)) * (np.cos(np.outer(k, theta)) @ vals)
    return coeffs


def apply_filter(spectrum: Spectrum, filt: FilterSpec, f) -> np.ndarray:
    """Apply the filter to a signal (n,) or to signal columns (n, d)."""
    g = spectrum.graph
    arr = np.asarray(f, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[0] != g.n:
        raise ValueError(f"signal must have leading dimension {g.n}, got shape {arr.shape}")
    single = arr.ndim == 1
    cols = arr[:, None] if single else arr

    if filt.chebyshev_order == 0:
        v = spectrum.eigenfunctions
        coeffs = v.T @ (g.mu[:, None] * cols)
        out = v @ (filt.response(spectrum.eigenvalues)[:, None] * coeffs)
    else:
        rho_max = float(spectrum.eigenvalues[-1]) * (1.0 + 1e-6)
        if rho_max <= 0.0:
            out = float(filt.response(np.zeros(1))[0]) * cols
        else:
            c = chebyshev_coefficients(filt.response, filt.chebyshev_order, rho_max)
            center = rho_max / 2.0
            t_prev = cols
            t_cur = (laplacian_apply(g, cols) - center * cols) / center
            out = 0.5 * c[0] * t_prev + c[1] * t_cur
            for k in range(2, filt.chebyshev_order + 1):
                t_next = 2.0 * (laplacian_apply(g, t_cur) - center * t_cur) / center - t_prev
                out = out + c[k] * t_next
                t_prev, t_cur = t_cur, t_next
    return out[:, 0] if single else out


def laplacian_variant(g: GraphSpace, variant: str) -> GraphSpace:
    """Swap the measure to reach a classical Laplacian.

    - ``combinatorial``: mu = 1, operator D - W.
    - ``random_walk``: mu = deg, operator I - D^{-1} W.
    - ``normalized``: degree measure as well; the symmetric form
      I - D^{-1/2} W D^{-1/2} is the same operator written in the
      orthonormal basis (``laplacian_matrix(g', orthonormal=True)``) and
      shares its spectrum with the random-walk variant.
    """
    key = variant.replace("-", "_")
    if key == "combinatorial":
        return g.with_measure(np.ones(g.n))
    if key in ("random_walk", "normalized"):
        deg = g.degree
        if np.any(deg <= 0):
            raise ValueError("degree measure undefined: graph has an isolated vertex")
        return g.with_measure(deg)
    raise ValueError(f"unknown Laplacian variant {variant!r}")
