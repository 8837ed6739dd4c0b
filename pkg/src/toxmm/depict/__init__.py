"""2D coordinate generation and 4-channel image rasterization."""

from .layout import Layout2D, layout_2d, BOND_LENGTH
from .raster import (
    CHANNEL_ENCODINGS,
    GRID_SIZE,
    MolImage,
    RESOLUTION,
    rasterize,
    image_from_graph,
    write_pgm_channels,
)

__all__ = [
    "Layout2D", "layout_2d", "BOND_LENGTH",
    "MolImage", "rasterize", "image_from_graph", "write_pgm_channels",
    "CHANNEL_ENCODINGS", "GRID_SIZE", "RESOLUTION",
]
