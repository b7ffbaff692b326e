"""8x8 block DCT in 64-bit floating point with exact cosine constants.

The basis follows the JPEG scaling: a constant block of value c has DC
coefficient 8c and zero AC energy.  The transform matrix is orthogonal,
so IDCT(DCT(x)) = x up to floating-point roundoff.
"""

import numpy as np

_k = np.arange(8).reshape(8, 1)
_n = np.arange(8).reshape(1, 8)
_C = np.where(_k == 0, 1.0 / np.sqrt(2.0), 1.0)
# D[k, n] = c_k/2 * cos((2n+1) k pi / 16); rows are orthonormal.
DCT_MATRIX = (_C / 2.0) * np.cos((2 * _n + 1) * _k * np.pi / 16.0)


def fdct_blocks(blocks: np.ndarray) -> np.ndarray:
    """Forward DCT of level-shifted pixel blocks, shape (..., 8, 8)."""
    return np.einsum("ij,...jk,lk->...il", DCT_MATRIX, blocks, DCT_MATRIX, optimize=True)


def idct_blocks(coeffs: np.ndarray) -> np.ndarray:
    """Inverse DCT back to (level-shifted) pixel blocks, shape (..., 8, 8)."""
    return np.einsum("ji,...jk,kl->...il", DCT_MATRIX, coeffs, DCT_MATRIX, optimize=True)


def grid_to_blocks(grid: np.ndarray) -> np.ndarray:
    """(H, W) with 8-multiple dims -> (H/8 * W/8, 8, 8) in raster block order."""
    h, w = grid.shape
    return grid.reshape(h // 8, 8, w // 8, 8).swapaxes(1, 2).reshape(-1, 8, 8)


def blocks_to_grid(blocks: np.ndarray, h: int, w: int) -> np.ndarray:
    """Inverse of :func:`grid_to_blocks`."""
    return blocks.reshape(h // 8, w // 8, 8, 8).swapaxes(1, 2).reshape(h, w)
