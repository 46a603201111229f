"""One-dimensional GLL quadrature, nodal Lagrange basis and edge basis on [-1, 1].

The edge polynomials are the histopolation counterpart of the nodal basis::

    e_i(x) = -sum_{k < i} h_k'(x),   i = 1..N

so that the integral of e_i over the sub-interval [x_{j-1}, x_j] is delta_ij.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, InvalidParameterError, NumericalFailureError

_NEWTON_MAXITER = 100
_NEWTON_RESIDUAL = 1e-14
_DOMAIN_SLACK = 1e-12
_SNAP = np.finfo(float).eps ** 2


def legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (P_n(x), P_n'(x)) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    dp_prev = np.zeros_like(x)
    dp = np.ones_like(x)
    for k in range(1, n):
        p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        # P'_{k+1} = P'_{k-1} + (2k+1) P_k
        dp_next = dp_prev + (2 * k + 1) * p
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return p, dp


@dataclass(frozen=True)
class QuadratureRule1D:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Apply the rule along the last axis of ``values`` (sampled at the nodes)."""
        return np.asarray(values) @ self.weights


@lru_cache(maxsize=64)
def gll_rule(N: int) -> QuadratureRule1D:
    """Gauss-Lobatto-Legendre rule with N+1 nodes (exact up to degree 2N-1).

    Interior nodes are the roots of (1 - x^2) P_N'(x).  Newton's method is
    run on that function from Chebyshev-Lobatto guesses; its derivative is
    -N(N+1) P_N(x) by the Legendre ODE, which keeps the step cheap.  Only the
    left half is computed, the right half is mirrored so the node set is
    exactly symmetric.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidParameterError(f"GLL degree must be an integer >= 1, got {N!r}")
    N = int(N)
    nn1 = N * (N + 1)

    left = np.arange(1, (N + 1) // 2)  # interior nodes with x < 0
    x = -np.cos(np.pi * left / N)

    def residual(z):
        _, dp = legendre(N, z)
        return (1.0 - z * z) * dp

    f = residual(x)
    for _ in range(_NEWTON_MAXITER):
        if np.all(np.abs(f) <= _NEWTON_RESIDUAL):
            break
        p, _ = legendre(N, x)
        step = f / (-nn1 * p)
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps):
            break
        damp = np.ones_like(x)
        for _ in range(30):
            trial = x - damp * step
            f_trial = residual(trial)
            worse = np.abs(f_trial) > np.abs(f)
            if not np.any(worse):
                break
            damp = np.where(worse, 0.5 * damp, damp)
        x, f = trial, f_trial
    else:
        raise NumericalFailureError(
            f"GLL Newton iteration did not converge for N={N} "
            f"(max residual {np.max(np.abs(f)):.3e})"
        )
    # for large N the attainable residual is limited by rounding in P_N'
    if f.size and np.max(np.abs(f)) > _NEWTON_RESIDUAL * max(1.0, nn1 / 2):
        raise NumericalFailureError(
            f"GLL Newton iteration stalled for N={N} (residual {np.max(np.abs(f)):.3e})"
        )

    nodes = np.empty(N + 1)
    nodes[0], nodes[N] = -1.0, 1.0
    nodes[left] = x
    nodes[N - left] = -x
    if N % 2 == 0:
        nodes[N // 2] = 0.0

    pn, _ = legendre(N, nodes)
    weights = 2.0 / (nn1 * pn**2)
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule1D(N, nodes, weights)


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    return w / np.max(np.abs(w))


@dataclass(frozen=True)
class BasisSet1D:
    """Nodal Lagrange and edge bases built on a GLL rule."""

    rule: QuadratureRule1D
    bary: np.ndarray = field(init=False, repr=False)
    dmat: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = self.rule.nodes
        w = _barycentric_weights(x)
        # dmat[i, j] = h_i'(x_j)
        d = (w[:, None] / w[None, :]) / (x[None, :] - x[:, None] + np.eye(x.size))
        np.fill_diagonal(d, 0.0)
        d[np.diag_indices_from(d)] = -d.sum(axis=0)
        w.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "bary", w)
        object.__setattr__(self, "dmat", d)

    @property
    def N(self) -> int:
        return self.rule.degree

    @classmethod
    def from_degree(cls, N: int) -> "BasisSet1D":
        return _basis_cache(N)


@lru_cache(maxsize=64)
def _basis_cache(N: int) -> BasisSet1D:
    return BasisSet1D(gll_rule(N))


def _check_points(points) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.ndim != 1:
        raise DomainError("points must be a one-dimensional sequence")
    bad = (pts < -1 - _DOMAIN_SLACK) | (pts > 1 + _DOMAIN_SLACK) | ~np.isfinite(pts)
    if np.any(bad):
        raise DomainError(f"points outside [-1, 1]: {pts[bad][:5]}")
    return pts


def lagrange_at(basis: BasisSet1D, points) -> np.ndarray:
    """Matrix of h_i(points[q]), shape (N+1, len(points)), barycentric form."""
    pts = _check_points(points)
    x = basis.rule.nodes
    diff = pts[None, :] - x[:, None]
    # points this close to a node would overflow bary/diff; h_i moves by
    # O(|diff|) there, so the nodal Kronecker values are exact to rounding
    exact = np.abs(diff) <= _SNAP
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = basis.bary[:, None] / diff
        out = terms / terms.sum(axis=0, keepdims=True)
    hit = exact.any(axis=0)
    if np.any(hit):
        out[:, hit] = exact[:, hit].astype(float)
    return out


def lagrange_deriv_at(basis: BasisSet1D, points) -> np.ndarray:
    """Matrix of h_i'(points[q]), shape (N+1, len(points)).

    h_i' has degree N-1, so it is reproduced exactly by interpolating its
    nodal values: h_i'(x) = sum_j h_i'(x_j) h_j(x).
    """
    return basis.dmat @ lagrange_at(basis, points)


def edge_at(basis: BasisSet1D, points) -> np.ndarray:
    """Matrix of e_i(points[q]) for i = 1..N, shape (N, len(points))."""
    dh = lagrange_deriv_at(basis, points)
    return -np.cumsum(dh[:-1], axis=0)
