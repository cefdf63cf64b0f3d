"""Gauss-Hermite rules, Gaussian-weighted integrals on R, C and C^2, and a
composite Clenshaw-Curtis line rule.

Integrals against ``exp(-nu |s|^2)`` are computed by scaling the unit-rate
Gauss-Hermite nodes by ``1/sqrt(nu)`` on every real axis.  Partial sums are
formed chunk by chunk in a fixed order and merged with ``math.fsum``, so a
result depends only on the integrand, the order and the chunk size, never on
the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

MAX_ORDER = 200
DEFAULT_CHUNK = 160


class QuadratureError(ArithmeticError):
    """Integrand produced a non-finite value at a quadrature node."""


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """N-point Gauss-Hermite rule for the weight ``exp(-x^2)`` on the line."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)


@lru_cache(maxsize=64)
def gauss_hermite_rule(N: int) -> QuadratureRule:
    """Golub-Welsch nodes; weights from the Christoffel function at those nodes.

    The eigenvector weights lose all relative accuracy in the tails beyond
    N ~ 60, so the weights are recomputed as ``1 / sum_k p_k(x)^2`` with the
    orthonormal Hermite recurrence.  No Newton polishing is applied.
    """
    if int(N) != N or not 1 <= N <= MAX_ORDER:
        raise ValueError(f"Gauss-Hermite order must be an integer in [1, {MAX_ORDER}], got {N}")
    N = int(N)
    if N == 1:
        x = np.zeros(1)
    else:
        x = eigh_tridiagonal(np.zeros(N), np.sqrt(np.arange(1, N) / 2.0), eigvals_only=True)
        x = 0.5 * (x - x[::-1])  # exact symmetry
    p_prev = np.full(N, math.pi**-0.25)
    total = p_prev**2
    if N > 1:
        p = math.sqrt(2.0) * x * p_prev
        total = total + p**2
        for k in range(1, N - 1):
            p_prev, p = p, (math.sqrt(2.0) * x * p - math.sqrt(k) * p_prev) / math.sqrt(k + 1)
            total = total + p**2
    w = 1.0 / total
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w)


@dataclass(frozen=True, eq=False)
class TensorGrid:
    """Tensor product of one Gauss-Hermite rule over ``dimension`` real axes,
    scaled to the weight ``exp(-nu |s|^2)``."""

    dimension: int
    rule: QuadratureRule
    nu: float

    def __post_init__(self):
        if self.dimension not in (1, 2, 4):
            raise ValueError("tensor grid dimension must be 1, 2 or 4")
        if not self.nu > 0:
            raise ValueError("nu must be positive")

    @property
    def axis_nodes(self) -> np.ndarray:
        return self.rule.nodes / math.sqrt(self.nu)

    @property
    def axis_weights(self) -> np.ndarray:
        return self.rule.weights / math.sqrt(self.nu)

    @property
    def size(self) -> int:
        return self.rule.order**self.dimension

    def complex_nodes(self):
        """Nodes and weights of the planar factor, flattened (x index major)."""
        x, w = self.axis_nodes, self.axis_weights
        z = (x[:, None] + 1j * x[None, :]).ravel()
        wz = (w[:, None] * w[None, :]).ravel()
        return z, wz


def complex_grid(nu: float, N: int) -> TensorGrid:
    return TensorGrid(2, gauss_hermite_rule(N), float(nu))


def bicomplex_grid(nu: float, N: int) -> TensorGrid:
    return TensorGrid(4, gauss_hermite_rule(N), float(nu))


def _check_finite(values: np.ndarray, points) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = np.unravel_index(np.argmax(bad), values.shape)
        where = [np.broadcast_to(np.asarray(p), values.shape)[idx] for p in points]
        raise QuadratureError(f"non-finite integrand value {values[idx]!r} at node {tuple(where)!r}")


def fsum_complex(parts) -> complex:
    parts = list(parts)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _weighted_sum(weights: np.ndarray, values: np.ndarray, points) -> complex:
    _check_finite(values, points)
    return complex(np.sum(weights * values))


def integrate_gaussian_r(f, nu: float, N: int) -> complex:
    """``int_R exp(-nu x^2) f(x) dx``; ``f`` is vectorised over an array of nodes."""
    grid = TensorGrid(1, gauss_hermite_rule(N), float(nu))
    x = grid.axis_nodes
    return _weighted_sum(grid.axis_weights, np.asarray(f(x), dtype=complex), (x,))


def integrate_gaussian_c(f, nu: float, N: int) -> complex:
    """``int_C exp(-nu |xi|^2) f(xi) dlambda(xi)`` on the N x N tensor grid."""
    z, wz = complex_grid(nu, N).complex_nodes()
    return _weighted_sum(wz, np.asarray(f(z), dtype=complex), (z,))


def integrate_gaussian_c2(f, nu: float, N: int, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> complex:
    """``int_{C^2} exp(-nu(|z|^2+|w|^2)) f(z, w) dlambda(z, w)``.

    ``f`` is called as ``f(Z, W)`` with ``Z`` of shape ``(c, 1)`` and ``W`` of
    shape ``(1, N*N)`` and must return the ``(c, N*N)`` block of values.  The
    N**4 integrand values are never held at once.
    """
    z, wz = complex_grid(nu, N).complex_nodes()
    W = z[None, :]
    starts = range(0, z.size, chunk)

    def block(s):
        Z = z[s : s + chunk, None]
        vals = np.asarray(f(Z, W), dtype=complex)
        vals = np.broadcast_to(vals, (Z.shape[0], W.shape[1]))
        _check_finite(vals, (Z, W))
        return complex(wz[s : s + chunk] @ vals @ wz)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    return fsum_complex(parts)


# ------------------------------------------------------------------ line rule


@lru_cache(maxsize=16)
def clenshaw_curtis(n: int):
    """``n + 1`` point Clenshaw-Curtis nodes (ascending) and weights on [-1, 1]."""
    if n < 1:
        raise ValueError("Clenshaw-Curtis rule needs n >= 1")
    theta = np.pi * np.arange(n + 1) / n
    k = np.arange(1, n // 2 + 1)
    b = np.where(2 * k == n, 1.0, 2.0)
    s = (b[None, :] * np.cos(2 * np.outer(theta, k)) / (4 * k * k - 1)).sum(axis=1)
    w = 2.0 / n * (1.0 - s)
    w[0] /= 2
    w[-1] /= 2
    x = np.cos(theta)[::-1].copy()
    x[n // 2] = 0.0 if n % 2 == 0 else x[n // 2]
    return x, w[::-1].copy()


@dataclass(frozen=True)
class LineIntegral:
    value: complex
    endpoint_magnitude: float
    decayed: bool

    @property
    def warning(self) -> str | None:
        if self.decayed:
            return None
        return f"integrand magnitude {self.endpoint_magnitude:.3e} at the interval ends exceeds 1e-16"


DECAY_THRESHOLD = 1e-16


def line_nodes(L: float, N: int, panel: int = 32):
    """Composite Clenshaw-Curtis nodes/weights on [-L, L] with ``N // panel`` panels."""
    panels = max(1, N // panel)
    x, w = clenshaw_curtis(panel)
    edges = np.linspace(-L, L, panels + 1)
    half = (edges[1] - edges[0]) / 2
    mids = 0.5 * (edges[:-1] + edges[1:])
    t = (mids[:, None] + half * x[None, :]).ravel()
    wt = np.broadcast_to(half * w, (panels, panel + 1)).ravel()
    return t, wt


def integrate_line(f, L: float, N: int, panel: int = 32) -> LineIntegral:
    """``int_{-L}^{L} f(t) dt``.  ``f`` maps an array of nodes (last axis) to
    values; leading axes of the result are kept, so many integrals can share
    one call."""
    if not L > 0:
        raise ValueError("half width L must be positive")
    t, wt = line_nodes(L, N, panel)
    vals = np.asarray(f(t), dtype=complex)
    _check_finite(vals, (np.broadcast_to(t, vals.shape),))
    value = vals @ wt
    ends = float(max(np.max(np.abs(vals[..., 0])), np.max(np.abs(vals[..., -1]))))
    if np.ndim(value) == 0:
        value = complex(value)
    return LineIntegral(value, ends, ends <= DECAY_THRESHOLD)
