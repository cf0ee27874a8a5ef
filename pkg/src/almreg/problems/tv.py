from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..certify.source import certify_source_condition
from ..operators.base import BaseOperator, norm
from ..operators.custom import ConvolutionOperator, IdentityOperator
from ..operators.grid import GridShape
from ..penalties.tv import TVPenalty
from ..utils.exceptions import ConfigError
from .base import ProblemInstance

__all__ = ['gen_problem_tv', 'staircase_signal', 'staircase_subgradient', 'blocks_image']

CERTIFICATE_RESIDUAL_TOL = 1e-10
DEFAULT_KERNEL = (0.25, 0.5, 0.25)


def staircase_signal(size: int, jumps: int, rng: np.random.Generator) -> np.ndarray:
    """Piecewise-constant signal with `jumps` random jump positions and heights of magnitude in [0.5, 1.5]."""
    if not 1 <= jumps <= size - 3:
        raise ConfigError(f"a staircase of length {size} cannot hold {jumps} jumps")
    positions = np.sort(rng.choice(np.arange(1, size - 2), size=jumps, replace=False))
    heights = rng.choice([-1.0, 1.0], size=jumps) * rng.uniform(0.5, 1.5, size=jumps)
    steps = np.zeros(size)
    steps[positions + 1] = heights
    return np.cumsum(steps)


def staircase_subgradient(u: np.ndarray, tv: TVPenalty) -> np.ndarray:
    """Explicit TV subgradient of a 1-D piecewise-constant signal as a discrete divergence D^T y.

    y equals the jump sign at each jump, interpolates linearly between jumps and decays to 0 at both ends,
    so |y| <= 1 everywhere and <y, D u> = TV(u).
    """
    if not tv.grid.is_1d:
        raise ConfigError("explicit staircase subgradients are built for 1-D grids")
    diffs = tv.D.apply(u)
    size = u.size
    jump_index = np.flatnonzero(np.abs(diffs[:-1]) > 0)
    anchors_x = np.concatenate([[-1.0], jump_index.astype(np.float64), [float(size - 1)]])
    anchors_y = np.concatenate([[0.0], np.sign(diffs[jump_index]), [0.0]])
    y = np.zeros(size)
    y[:-1] = np.interp(np.arange(size - 1, dtype=np.float64), anchors_x, anchors_y)
    return tv.D.adjoint_apply(y)


def blocks_image(grid: GridShape, rng: np.random.Generator, blocks: int = 3) -> np.ndarray:
    """Sum of axis-aligned rectangles with random corners and heights in [0.5, 1.5]."""
    image = np.zeros(grid.shape)
    for _ in range(blocks):
        r0, r1 = np.sort(rng.choice(grid.rows + 1, size=2, replace=False))
        c0, c1 = np.sort(rng.choice(grid.cols + 1, size=2, replace=False))
        image[r0:r1, c0:c1] += rng.uniform(0.5, 1.5)
    return image.ravel()


def _source_element(K: BaseOperator, xi: np.ndarray) -> Tuple[Optional[np.ndarray], float]:
    """Solve K* p = xi in the least-squares sense; returns the solution and its residual."""
    if isinstance(K, IdentityOperator):
        return xi.copy(), 0.0
    dense_adjoint = K.to_dense().T
    p, *_ = np.linalg.lstsq(dense_adjoint, xi, rcond=None)
    return p, norm(dense_adjoint @ p - xi)


def gen_problem_tv(grid: Union[GridShape, Sequence[int], int],
                   kind: Literal['staircase_1d', 'blocks_2d'] = 'staircase_1d',
                   K_kind: Literal['identity', 'blur'] = 'identity', seed: int = 0,
                   kernel: Optional[Sequence[float]] = None, flavor: str = 'anisotropic', solver: str = 'auto',
                   values: Optional[Sequence[float]] = None, jumps: int = 4) -> ProblemInstance:
    """Piecewise-constant ground truth under identity or blur.

    1-D staircases carry the explicit subgradient certificate when K* p = xi is solvable; 2-D blocks ship
    uncertified. `values` replaces the random ground truth.
    """
    grid = GridShape.from_any(grid)
    rng = np.random.default_rng(seed)
    if kind == 'staircase_1d' and not grid.is_1d:
        raise ConfigError(f"staircase problems need a 1-D grid, got {grid.shape}")
    if kind not in ('staircase_1d', 'blocks_2d'):
        raise ConfigError(f"tv problem kind must be staircase_1d or blocks_2d, got {kind}")

    if K_kind == 'identity':
        K: BaseOperator = IdentityOperator(grid.size)
    elif K_kind == 'blur':
        K = ConvolutionOperator(DEFAULT_KERNEL if kernel is None else kernel, grid)
    else:
        raise ConfigError(f"tv problems support K_kind identity or blur, got {K_kind}")

    if values is not None:
        u_dagger = np.asarray(values, dtype=np.float64).ravel()
        if u_dagger.size != grid.size:
            raise ConfigError(f"{u_dagger.size} values do not fill grid {grid.shape}")
    elif kind == 'staircase_1d':
        u_dagger = staircase_signal(grid.size, jumps, rng)
    else:
        u_dagger = blocks_image(grid, rng)

    pen = TVPenalty(grid, flavor=flavor, solver=solver)
    g = K.apply(u_dagger)
    label = f"tv_{kind}_{K_kind}_{grid.rows}x{grid.cols}"
    instance = ProblemInstance(K=K, penalty=pen, g=g, u_dagger=u_dagger, seed=seed, label=label)
    if kind != 'staircase_1d':
        return instance

    xi = staircase_subgradient(u_dagger, pen)
    p, residual = _source_element(K, xi)
    if residual > CERTIFICATE_RESIDUAL_TOL * max(1.0, norm(xi)):
        logger.warning(f"K* p = xi not solvable (residual {residual:.3e}); {label} ships uncertified")
        return instance
    instance.p_dagger = p
    instance.certificate = certify_source_condition(K, pen, u_dagger, p, g=g, seed=seed)
    return instance
