"""Parsed-JPEG value types."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidTable


@dataclass
class QuantTable:
    """8x8 grid of quantization steps; entry (0, 0) is the DC step."""

    steps: np.ndarray

    def __post_init__(self):
        self.steps = np.asarray(self.steps, dtype=np.int64)
        if self.steps.shape != (8, 8):
            raise InvalidTable(f"quantization table must be 8x8, got {self.steps.shape}")
        if (self.steps < 1).any() or (self.steps > 255).any():
            raise InvalidTable("quantization steps must lie in [1, 255]")

    def __getitem__(self, freq: tuple[int, int]) -> int:
        return int(self.steps[freq])

    def is_all_ones(self) -> bool:
        return bool((self.steps == 1).all())


@dataclass
class CoeffGrid:
    """Quantized DCT coefficients of one plane, in natural (row-major) order.

    ``values[8a + i, 8b + j]`` is the frequency-(i, j) coefficient of block
    (a, b), still quantized (no dequantization applied).  Dims are
    multiples of 8.
    """

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 2:
            raise ValueError("coefficient grid must be 2-D")
        h, w = self.values.shape
        if h % 8 or w % 8:
            raise ValueError(f"grid dims must be multiples of 8, got {h}x{w}")
        if not np.issubdtype(self.values.dtype, np.integer):
            raise ValueError("coefficients must be integers")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def n_blocks(self) -> int:
        return (self.height // 8) * (self.width // 8)


@dataclass
class JpegModel:
    """Decoded JPEG: luma coefficients plus tables and original pixel dims.

    The luma grid covers the pixel dims rounded up to multiples of 8.
    Chroma planes are parsed and retained but never analyzed.
    """

    luma: CoeffGrid
    luma_qtable: QuantTable
    pixel_width: int
    pixel_height: int
    chroma: list[tuple[CoeffGrid, QuantTable]] = field(default_factory=list)

    def __post_init__(self):
        want_h = -(-self.pixel_height // 8) * 8
        want_w = -(-self.pixel_width // 8) * 8
        if (self.luma.height, self.luma.width) != (want_h, want_w):
            raise ValueError(
                f"luma grid {self.luma.height}x{self.luma.width} does not match "
                f"pixel dims {self.pixel_height}x{self.pixel_width} rounded to 8")
