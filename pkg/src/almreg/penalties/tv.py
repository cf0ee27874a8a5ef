import math
from functools import cached_property
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.optimize import lsq_linear
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..operators.base import norm
from ..operators.custom import GradientOperator, IdentityOperator
from ..operators.grid import GridShape
from ..utils.exceptions import ConfigError
from .base import BasePenalty, InnerDiagnostics, SubproblemSpec

__all__ = ['TVPenalty']

FLAVORS = ('anisotropic', 'isotropic')
SOLVERS = ('auto', 'bvls', 'pdhg')
BVLS_MAX_SIZE = 1024
POLISH_THRESHOLDS = (1e-9, 1e-6, 1e-4)
POLISH_TARGET = 1e-12


def _kkt_measure(G: np.ndarray, u: np.ndarray, y: np.ndarray, tau: float, b: np.ndarray) -> float:
    """Optimality residual of (u, y): duality gap, stationarity G^T y = tau (b - u) and box excess."""
    Gu = G @ u
    gap = max(float(np.sum(np.abs(Gu)) - np.dot(y, Gu)), 0.0)
    stationarity = norm(G.T @ y - tau * (b - u)) / tau
    excess = float(np.sum(np.maximum(np.abs(y) - 1.0, 0.0)))
    return (gap + stationarity + excess) / max(1.0, norm(u))


def _polish(G: np.ndarray, y: np.ndarray, tau: float, b: np.ndarray,
            threshold: float) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Exact primal-dual pair for the active set read off y.

    Edges with |y| >= 1 - threshold keep the sign of y; the remaining edges join their cells into
    components on which u is constant. The component value is the mean of b - G_S^T s / tau, and the free
    duals solve G_F^T y_F = tau (v - u) inside the box.
    """
    saturated = np.abs(y) >= 1.0 - threshold
    free = ~saturated
    n = G.shape[1]
    heads, tails = np.argmax(G > 0, axis=1), np.argmax(G < 0, axis=1)

    graph = coo_matrix((np.ones(int(free.sum())), (heads[free], tails[free])), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    signs = np.sign(y[saturated])
    v = b - G[saturated].T @ signs / tau
    means = np.bincount(labels, weights=v, minlength=count) / np.bincount(labels, minlength=count)
    u = means[labels]

    y_polished = np.zeros_like(y)
    y_polished[saturated] = signs
    if free.any():
        result = lsq_linear(G[free].T, tau * (v - u), bounds=(-1.0, 1.0), method='bvls', tol=1e-12)
        if result.status <= 0:
            return None
        y_polished[free] = result.x
    return u, y_polished


class TVPenalty(BasePenalty):
    """Discrete total variation with forward differences and Neumann boundary.

    Two inner solvers are available. `bvls` solves the box-constrained dual of the K = I
    anisotropic problem exactly, `pdhg` is the first-order primal-dual scheme for general K.
    """

    name = 'tv'
    default_tol = 1e-6

    def __init__(self, grid: Union[GridShape, Sequence[int], int],
                 flavor: Literal['anisotropic', 'isotropic'] = 'anisotropic',
                 solver: Literal['auto', 'bvls', 'pdhg'] = 'auto') -> None:
        if flavor not in FLAVORS:
            raise ConfigError(f"TV flavor must be one of {FLAVORS}, got {flavor}")
        if solver not in SOLVERS:
            raise ConfigError(f"TV solver must be one of {SOLVERS}, got {solver}")
        self.grid = GridShape.from_any(grid)
        self.flavor = flavor
        self.solver = solver
        self.D = GradientOperator(self.grid)

    @property
    def dim(self) -> int:
        return self.grid.size

    @property
    def has_conjugate(self) -> bool:
        return False

    def _fields(self, u: np.ndarray) -> np.ndarray:
        return self.D.apply(u).reshape(self.D.n_axes, -1)

    def evaluate(self, u) -> float:
        fields = self._fields(self.check_dim(u))
        if self.flavor == 'anisotropic':
            return float(np.sum(np.abs(fields)))
        return float(np.sum(np.sqrt(np.sum(fields ** 2, axis=0))))

    def conjugate(self, xi) -> Optional[float]:
        return None

    def project_dual(self, y: np.ndarray) -> np.ndarray:
        """Projection onto the unit ball of the dual norm (l-inf entrywise, or per-pixel l2)."""
        if self.flavor == 'anisotropic':
            return np.clip(y, -1.0, 1.0)
        fields = y.reshape(self.D.n_axes, -1)
        scale = np.maximum(1.0, np.sqrt(np.sum(fields ** 2, axis=0)))
        return (fields / scale).ravel()

    @cached_property
    def _structural_gradient(self) -> np.ndarray:
        return self.D.to_dense()[self.D.structural_rows()]

    def select_solver(self, spec: SubproblemSpec) -> str:
        if self.solver != 'auto':
            if self.solver == 'bvls' and not self._bvls_applicable(spec, check_size=False):
                raise ConfigError("bvls TV solver needs K = identity and anisotropic (or 1-D) TV")
            return self.solver
        return 'bvls' if self._bvls_applicable(spec) else 'pdhg'

    def _bvls_applicable(self, spec: SubproblemSpec, check_size: bool = True) -> bool:
        flavor_ok = self.flavor == 'anisotropic' or self.grid.is_1d
        size_ok = not check_size or self.grid.size <= BVLS_MAX_SIZE
        return isinstance(spec.K, IdentityOperator) and flavor_ok and size_ok

    def solve_subproblem(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        if spec.K.dim_in != self.grid.size:
            raise ConfigError(f"K acts on length {spec.K.dim_in}, TV grid has {self.grid.size} cells")
        if self.select_solver(spec) == 'bvls':
            return self._solve_bvls(spec)
        return self._solve_pdhg(spec)

    def _solve_bvls(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        # u = b - G^T y / tau with y = argmin_{|y| <= 1} 1/2 ||G^T y - tau b||^2
        G = self._structural_gradient
        tau, b = spec.tau, spec.b
        result = lsq_linear(G.T, tau * b, bounds=(-1.0, 1.0), method='bvls', tol=min(spec.tol, 1e-10))
        y = result.x
        u = b - G.T @ y / tau
        measure = _kkt_measure(G, u, y, tau, b)
        for threshold in POLISH_THRESHOLDS:
            if measure <= POLISH_TARGET:
                break
            polished = _polish(G, result.x, tau, b, threshold)
            if polished is None:
                continue
            polished_measure = _kkt_measure(G, *polished, tau, b)
            if polished_measure <= measure:
                u, measure = polished[0], polished_measure

        inexact = measure > spec.tol
        if inexact:
            logger.warning(f"BVLS dual solve left KKT residual {measure:.3e} (status {result.status})")
        return u, InnerDiagnostics(solver='bvls', iterations=int(result.nit), measure=measure, inexact=inexact)

    def _solve_pdhg(self, spec: SubproblemSpec) -> Tuple[np.ndarray, InnerDiagnostics]:
        """Chambolle-Pock on min_u max_{y, z} <D u, y> + <K u, z> - |y|_ball - ||z||^2/(2 tau) - <z, b>."""
        K, D, tau, b = spec.K, self.D, spec.tau, spec.b
        sigma = step = 0.99 / math.sqrt(K.norm() ** 2 + D.norm() ** 2)

        u = spec.initial_point()
        u_bar = u.copy()
        y = np.zeros(D.dim_out)
        z = np.zeros(K.dim_out)
        best_u, best_measure = u.copy(), math.inf
        measure = math.inf
        iterations = 0
        while iterations < spec.max_inner_iters:
            iterations += 1
            y_next = self.project_dual(y + sigma * D.apply(u_bar))
            z_next = (z + sigma * (K.apply(u_bar) - b)) / (1.0 + sigma / tau)
            u_next = u - step * (K.adjoint_apply(z_next) + D.adjoint_apply(y_next))

            primal = norm(u - u_next) / step
            shift = u_bar - u_next
            dual = math.hypot(norm((y - y_next) / sigma + D.apply(shift)), norm((z - z_next) / sigma + K.apply(shift)))
            measure = (primal + dual) / max(1.0, norm(u_next))

            u_bar = 2.0 * u_next - u
            u, y, z = u_next, y_next, z_next
            if measure < best_measure:
                best_u, best_measure = u.copy(), measure
            if measure <= spec.tol:
                break

        inexact = best_measure > spec.tol
        if inexact:
            logger.warning(f"PDHG hit {spec.max_inner_iters} iterations at residual {best_measure:.3e}")
        return best_u, InnerDiagnostics(solver='pdhg', iterations=iterations, measure=best_measure, inexact=inexact)

    def describe(self) -> dict:
        return {'name': self.name, 'grid': list(self.grid.shape), 'flavor': self.flavor, 'solver': self.solver}
