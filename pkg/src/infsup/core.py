"""Discrete inf-sup constant of (p, div u) as a smallest positive singular value.

With symmetric factors S_x^T S_x = A (the velocity norm matrix) and
S_y^T S_y = M2^{-1} (the pressure norm), the constant is the smallest
positive singular value of

    M = M2^{1/2} E (A^+)^{1/2}.

``kperp`` measures velocities by ||div u|| only (A = E^T M2 E, singular);
``hdiv`` uses the full H(div) norm (A = M1 + E^T M2 E).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .discretization import build_layout, incidence_matrix, mass_matrices
from .errors import (
    InvalidParameterError,
    NoPositiveSingularValueError,
    NotPSDError,
    ShapeError,
)

MODES = ("kperp", "hdiv")
DEFAULT_TOL_FACTOR = 64.0
_EPS = np.finfo(float).eps
_SYM_TOL = 1e-12


def default_tol(dim: int, factor: float = DEFAULT_TOL_FACTOR) -> float:
    """Relative rank cutoff dim * eps * factor."""
    return dim * _EPS * factor


@dataclass(frozen=True)
class NormFactorization:
    """Eigen-factorisation A = Q diag(lam) Q^T of a symmetric PSD matrix.

    Eigenvalues at or below ``tau`` are treated as zero; the square roots are
    formed on demand since for the largest cases each is several hundred MB.
    """

    A: np.ndarray | None = field(repr=False)
    eigvals: np.ndarray = field(repr=False)
    eigvecs: np.ndarray = field(repr=False)
    tau: float
    rank: int

    @property
    def _kept(self) -> np.ndarray:
        return self.eigvals > self.tau

    def _root(self, power: float) -> np.ndarray:
        keep = self._kept
        Q = self.eigvecs[:, keep]
        R = (Q * self.eigvals[keep] ** power) @ Q.T
        return 0.5 * (R + R.T)

    @cached_property
    def sqrt(self) -> np.ndarray:
        return self._root(0.5)

    def right_pinv_sqrt(self, X) -> np.ndarray:
        """X @ (A^+)^{1/2} without forming the square root."""
        keep = self._kept
        Q = self.eigvecs[:, keep]
        Y = np.asarray(X @ Q) / np.sqrt(self.eigvals[keep])
        return Y @ Q.T

    @cached_property
    def pinv_sqrt(self) -> np.ndarray:
        return self._root(-0.5)


def _as_dense(A) -> np.ndarray:
    return A.toarray() if sp.issparse(A) else np.asarray(A, dtype=float)


def sym_factor_psd(A, tau_rel: float | None = None, *,
                   keep_matrix: bool = True) -> NormFactorization:
    """Symmetric eigen-factorisation with eigenvalues <= tau_rel * lam_max dropped.

    With ``keep_matrix=False`` the input copy is overwritten by LAPACK and not
    stored, which halves peak memory for the large cases.
    """
    A = _as_dense(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    scale = max(np.max(np.abs(A)), np.finfo(float).tiny)
    if np.max(np.abs(A - A.T)) > _SYM_TOL * scale:
        raise ShapeError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    if tau_rel is None:
        tau_rel = default_tol(A.shape[0])
    lam, Q = sla.eigh(A, driver="evd", check_finite=False, overwrite_a=not keep_matrix)
    lam_max = max(lam[-1], 0.0)
    tau = tau_rel * lam_max
    if lam[0] < -tau:
        raise NotPSDError(f"eigenvalue {lam[0]:.3e} below -tau = {-tau:.3e}")
    rank = int(np.count_nonzero(lam > tau))
    return NormFactorization(A if keep_matrix else None, lam, Q, tau, rank)


def _check_mode(mode: str):
    if mode not in MODES:
        raise InvalidParameterError(f"mode must be one of {MODES}, got {mode!r}")


def _check_shapes(E, M1, M2, mode):
    _check_mode(mode)
    n_p, n_u = E.shape
    if np.shape(M2) != (n_p, n_p):
        raise ShapeError(f"M2 has shape {np.shape(M2)}, expected {(n_p, n_p)}")
    if mode == "hdiv":
        if M1 is None:
            raise ShapeError("hdiv mode needs the flux mass matrix M1")
        if np.shape(M1) != (n_u, n_u):
            raise ShapeError(f"M1 has shape {np.shape(M1)}, expected {(n_u, n_u)}")


def velocity_norm_matrix(E, M1, M2, mode: str) -> np.ndarray:
    """E^T M2 E (kperp), plus M1 in hdiv mode."""
    _check_shapes(E, M1, M2, mode)
    E = sp.csr_matrix(E)
    EtM2 = np.asarray(E.T @ M2)  # (n_u, n_p)
    A = np.asarray((E.T @ EtM2.T).T)
    del EtM2
    if mode == "hdiv":
        A += M1
    return 0.5 * (A + A.T)


def build_test_matrix(E, M1, M2, mode: str = "kperp", tau_rel: float | None = None,
                      factor: NormFactorization | None = None) -> np.ndarray:
    """Return M = M2^{1/2} E (A^+)^{1/2}, shape (n_p, n_u).

    ``factor`` may be passed to reuse an existing factorisation of A.
    """
    _check_shapes(E, M1, M2, mode)
    if factor is None:
        factor = sym_factor_psd(velocity_norm_matrix(E, M1, M2, mode), tau_rel)
    left = sym_factor_psd(M2).sqrt @ sp.csr_matrix(E)
    return factor.right_pinv_sqrt(left)


@dataclass(frozen=True)
class SingularSummary:
    beta: float
    retained: int
    tau: float
    smallest_retained: float
    largest_discarded: float  # nan when nothing is discarded


def singular_summary(M, tau_rel: float | None = None) -> SingularSummary:
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ShapeError("matrix has non-finite entries")
    if tau_rel is None:
        tau_rel = default_tol(max(M.shape))
    s = sla.svd(M, compute_uv=False, check_finite=False, lapack_driver="gesdd")
    tau = tau_rel * (s[0] if s.size else 0.0)
    kept = s[s > tau]
    if kept.size == 0:
        raise NoPositiveSingularValueError("all singular values are at or below the cutoff")
    dropped = s[s <= tau]
    return SingularSummary(
        beta=float(kept[-1]),
        retained=int(kept.size),
        tau=float(tau),
        smallest_retained=float(kept[-1]),
        largest_discarded=float(dropped[0]) if dropped.size else float("nan"),
    )


def smallest_positive_singular(M, tau_rel: float | None = None) -> tuple[float, int]:
    out = singular_summary(M, tau_rel)
    return out.beta, out.retained


def beta_oracle(E, M1, M2, mode: str = "kperp", tau_rel: float | None = None) -> float:
    """Independent evaluation through the pencil (E A^+ E^T) v = lam M2^{-1} v.

    No matrix square roots are formed: A^+ comes from an SVD-based
    pseudo-inverse and the pencil is solved as a generalized symmetric
    eigenproblem.  Its eigenvalues are those of M2^{1/2} E A^+ E^T M2^{1/2}.
    """
    _check_shapes(E, M1, M2, mode)
    Ed = _as_dense(E)
    A = Ed.T @ M2 @ Ed
    if mode == "hdiv":
        A = A + M1
    A = 0.5 * (A + A.T)
    if tau_rel is None:
        tau_rel = default_tol(A.shape[0])
    A_pinv = np.linalg.pinv(A, rcond=tau_rel)
    G = Ed @ A_pinv @ Ed.T
    G = 0.5 * (G + G.T)
    B = np.linalg.inv(M2)
    B = 0.5 * (B + B.T)
    lam = sla.eigh(G, B, eigvals_only=True)
    cut = default_tol(G.shape[0]) * max(lam[-1], 0.0)
    kept = lam[lam > cut]
    if kept.size == 0:
        raise NoPositiveSingularValueError("pencil has no positive eigenvalue")
    return float(np.sqrt(kept[0]))


def projector_defect(E, M2, factor: NormFactorization | None = None) -> float:
    """max |M2^{1/2} E A^+ E^T M2^{1/2} - I| with A = E^T M2 E.

    This is the matrix form of picking, for every pressure, the velocity
    whose weighted divergence reproduces it; zero when E is surjective.
    """
    if factor is None:
        factor = sym_factor_psd(velocity_norm_matrix(E, None, M2, "kperp"))
    Ed = sp.csr_matrix(E)
    r = sym_factor_psd(M2).sqrt
    keep = factor.eigvals > factor.tau
    Q = factor.eigvecs[:, keep]
    B = r @ (Ed @ Q) / np.sqrt(factor.eigvals[keep])  # = r E Q Lam^{-1/2}
    P = B @ B.T
    return float(np.max(np.abs(P - np.eye(P.shape[0]))))


@dataclass
class InfSupResult:
    L: float
    N: int
    K: int
    mode: str
    beta_h: float
    rank_E: int
    n_u: int
    n_p: int
    sigma_cutoff: float
    smallest_retained: float
    largest_discarded: float
    elapsed_ms: float
    beta_oracle: float | None = None

    @property
    def h(self) -> float:
        """Element size L/K."""
        return self.L / self.K

    @property
    def key(self) -> tuple[float, int, int]:
        return (self.L, self.N, self.K)


def compute_infsup(L: float, N: int, K: int, mode: str = "kperp",
                   tau_rel: float | None = None, *,
                   tol_factor: float | None = None,
                   oracle: bool = False) -> InfSupResult:
    """Assemble the spaces for one (L, N, K) case and return beta_h.

    ``tau_rel`` fixes the relative cutoff outright; otherwise it is
    ``dim * eps * tol_factor`` (default factor 64) for each factorisation.
    """
    _check_mode(mode)
    t0 = time.perf_counter()
    layout = build_layout(L, K, N)
    E = incidence_matrix(layout)
    mats = mass_matrices(layout, with_flux=(mode == "hdiv"))
    factor_ = DEFAULT_TOL_FACTOR if tol_factor is None else tol_factor

    A = velocity_norm_matrix(E, mats.M1, mats.M2, mode)
    tau_A = tau_rel if tau_rel is not None else default_tol(A.shape[0], factor_)
    fact = sym_factor_psd(A, tau_A, keep_matrix=False)
    del A
    M = build_test_matrix(E, mats.M1, mats.M2, mode, factor=fact)
    rank_A = fact.rank
    del fact
    tau_M = tau_rel if tau_rel is not None else default_tol(max(M.shape), factor_)
    summ = singular_summary(M, tau_M)
    del M

    # rank(E^T M2 E) = rank(E) because M2 is positive definite; in hdiv mode
    # A is nonsingular, so the retained singular count is used instead
    rank_E = rank_A if mode == "kperp" else summ.retained

    beta_o = None
    if oracle:
        beta_o = beta_oracle(E, mats.M1, mats.M2, mode)
    elapsed = (time.perf_counter() - t0) * 1e3
    return InfSupResult(
        L=float(L), N=N, K=K, mode=mode, beta_h=summ.beta, rank_E=rank_E,
        n_u=layout.n_u, n_p=layout.n_p, sigma_cutoff=summ.tau,
        smallest_retained=summ.smallest_retained,
        largest_discarded=summ.largest_discarded,
        elapsed_ms=elapsed, beta_oracle=beta_o,
    )
