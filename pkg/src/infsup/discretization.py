"""Conforming flux/volume spaces on a uniform K x K mesh of [0, L]^2.

Neighbouring degree-N elements share their GLL sub-grids, so after
identifying interface fluxes the assembled topology is a single n x n cell
grid with n = N*K.  Global numbering:

* u_x fluxes live on the n+1 vertical lines, index ``line*n + row``;
* u_y fluxes live on the n+1 horizontal lines, index ``n*(n+1) + line*n + col``;
* cells are row-major, index ``row*n + col``.

Flux and volume coefficients are integral quantities (edge fluxes and cell
integrals), which is what makes the divergence purely topological.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameterError, ShapeError
from .polybasis import BasisSet1D, edge_at, gll_rule, lagrange_at


@dataclass(frozen=True)
class DofLayout:
    L: float
    K: int
    N: int

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise InvalidParameterError(f"domain size L must be > 0, got {self.L!r}")
        for name in ("K", "N"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise InvalidParameterError(f"{name} must be an integer >= 1, got {v!r}")

    @property
    def h(self) -> float:
        """Element edge length."""
        return self.L / self.K

    @property
    def n(self) -> int:
        return self.N * self.K

    @property
    def n_p(self) -> int:
        return self.n**2

    @property
    def n_u(self) -> int:
        return 2 * self.n * (self.n + 1)

    @property
    def n_ux(self) -> int:
        return self.n * (self.n + 1)

    def ux_index(self, line, row):
        return np.asarray(line) * self.n + np.asarray(row)

    def uy_index(self, line, col):
        return self.n_ux + np.asarray(line) * self.n + np.asarray(col)

    def cell_index(self, row, col):
        return np.asarray(row) * self.n + np.asarray(col)

    def fine_lines(self) -> np.ndarray:
        """Physical coordinates of the n+1 grid lines in either direction."""
        xi = gll_rule(self.N).nodes
        k = np.arange(self.K)[:, None]
        pts = (k + (xi[None, :-1] + 1.0) / 2.0) * self.h
        return np.append(pts.ravel(), self.L)

    @cached_property
    def element_dofs(self) -> tuple[np.ndarray, np.ndarray]:
        """Local-to-global maps, shape (K*K, n_local), elements ordered ey-major.

        Returns (flux_map, cell_map).  Local flux order is u_x(i, j) for
        i = 0..N (x node), j = 0..N-1 (y edge), then u_y(i, j) for i = 0..N-1
        (x edge), j = 0..N (y node); local cells are (b, a) row-major.
        """
        N, K = self.N, self.K
        ey, ex = np.divmod(np.arange(K * K), K)
        i = np.arange(N + 1)
        j = np.arange(N)
        # u_x: line = ex*N + i, row = ey*N + j
        ux = self.ux_index(
            (ex[:, None, None] * N + i[None, :, None]),
            (ey[:, None, None] * N + j[None, None, :]),
        ).reshape(K * K, -1)
        # u_y: line = ey*N + jnode, col = ex*N + iedge
        uy = self.uy_index(
            (ey[:, None, None] * N + i[None, None, :]),
            (ex[:, None, None] * N + j[None, :, None]),
        ).reshape(K * K, -1)
        cells = self.cell_index(
            ey[:, None, None] * N + j[None, :, None],
            ex[:, None, None] * N + j[None, None, :],
        ).reshape(K * K, -1)
        return np.hstack([ux, uy]), cells


def build_layout(L: float, K: int, N: int) -> DofLayout:
    return DofLayout(float(L), K, N)


def incidence_matrix(layout: DofLayout) -> sp.csr_matrix:
    """Discrete divergence E^{2,1}: +1 on right/top fluxes, -1 on left/bottom."""
    n = layout.n
    row, col = np.divmod(np.arange(layout.n_p), n)
    cells = layout.cell_index(row, col)
    cols = np.stack(
        [
            layout.ux_index(col, row),
            layout.ux_index(col + 1, row),
            layout.uy_index(row, col),
            layout.uy_index(row + 1, col),
        ],
        axis=1,
    )
    vals = np.tile([-1.0, 1.0, -1.0, 1.0], (layout.n_p, 1))
    E = sp.csr_matrix(
        (vals.ravel(), (np.repeat(cells, 4), cols.ravel())),
        shape=(layout.n_p, layout.n_u),
    )
    E.sort_indices()
    return E


def divergence_coefficients(E, u) -> np.ndarray:
    """Cell-integrated divergence of the flux field with coefficients ``u``."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] != E.shape[1]:
        raise ShapeError(f"flux vector has shape {u.shape}, expected ({E.shape[1]},)")
    return E @ u


def quadrature_degree(N: int) -> int:
    return N + 2


def _element_quadrature(N: int):
    q = gll_rule(quadrature_degree(N))
    basis = BasisSet1D.from_degree(N)
    return q, lagrange_at(basis, q.nodes), edge_at(basis, q.nodes)


def local_flux_mass(N: int, h: float) -> np.ndarray:
    """Element flux mass matrix in the local order of ``DofLayout.element_dofs``."""
    q, H, Ed = _element_quadrature(N)
    jac = h / 2.0
    piola = 1.0 / jac  # J/detJ for a square of side h
    # basis values at tensor points (qx, qy), flattened qx-major
    bx = np.einsum("ia,jb->ijab", H, Ed).reshape((N + 1) * N, -1) * piola
    by = np.einsum("ia,jb->ijab", Ed, H).reshape(N * (N + 1), -1) * piola
    nx = bx.shape[0]
    # vector basis: first nx functions point in x, the rest in y
    comp_x = np.vstack([bx, np.zeros_like(by)])
    comp_y = np.vstack([np.zeros_like(bx), by])
    w = np.outer(q.weights, q.weights).ravel() * jac**2
    local = (comp_x * w) @ comp_x.T + (comp_y * w) @ comp_y.T
    assert local.shape == (2 * nx, 2 * nx)
    return local


def local_volume_mass(N: int, h: float) -> np.ndarray:
    """Element volume mass matrix, local cells (b, a) row-major (b along y)."""
    q, _, Ed = _element_quadrature(N)
    jac = h / 2.0
    det = jac**2
    # cell (b, a) basis e_a(xi) e_b(eta) / det; points flattened qx-major
    vals = np.einsum("aq,br->baqr", Ed, Ed).reshape(N * N, -1) / det
    w = np.outer(q.weights, q.weights).ravel() * det
    return (vals * w) @ vals.T


def _assemble(size: int, dof_map: np.ndarray, local: np.ndarray) -> np.ndarray:
    out = np.zeros((size, size))
    # elements are added in a fixed order, so the result is reproducible
    np.add.at(out, (dof_map[:, :, None], dof_map[:, None, :]), local[None, :, :])
    return 0.5 * (out + out.T)


def flux_mass_matrix(layout: DofLayout) -> np.ndarray:
    """Dense M^(1): L2 inner product of the Piola-mapped flux basis."""
    fmap, _ = layout.element_dofs
    return _assemble(layout.n_u, fmap, local_flux_mass(layout.N, layout.h))


def volume_mass_matrix(layout: DofLayout) -> np.ndarray:
    """Dense M^(2): L2 inner product of the volume basis e_i e_j / detJ."""
    _, cmap = layout.element_dofs
    return _assemble(layout.n_p, cmap, local_volume_mass(layout.N, layout.h))


@dataclass(frozen=True)
class MassMatrices:
    M1: np.ndarray | None
    M2: np.ndarray
    quad_degree: int


def mass_matrices(layout: DofLayout, with_flux: bool = True) -> MassMatrices:
    M1 = flux_mass_matrix(layout) if with_flux else None
    return MassMatrices(M1, volume_mass_matrix(layout), quadrature_degree(layout.N))
