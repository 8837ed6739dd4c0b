"""Rasterize a 2D layout into the 100x100x4 molecular image.

Channel 0 traces bonds as Bresenham segments scaled by bond order; channels
1-3 mark atom pixels with atomic number, partial charge, and hybridization
intensities. All encodings live in CHANNEL_ENCODINGS so alternative value
maps can be tested without touching the raster loop.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from ..chem.parse import Hybridization, MolGraph
from .layout import Layout2D, layout_2d

GRID_SIZE = 100
RESOLUTION = 0.2  # Angstrom per pixel
_FIELD = GRID_SIZE * RESOLUTION
_MARGIN = RESOLUTION  # one pixel kept free when scaling down

_HYB_LEVELS = {
    Hybridization.SP: 1.0 / 3.0,
    Hybridization.SP2: 2.0 / 3.0,
    Hybridization.SP3: 1.0,
    Hybridization.OTHER: 0.5,
}


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    target: str  # "bond" | "atom"
    intensity: Callable


CHANNEL_ENCODINGS: tuple[ChannelSpec, ...] = (
    ChannelSpec("bond_order", "bond", lambda bond: bond.order.value / 4.0),
    ChannelSpec("atomic_number", "atom",
                lambda atom: min(atom.atomic_number / 53.0, 1.0)),
    ChannelSpec("partial_charge", "atom",
                lambda atom: (max(-1.0, min(1.0, atom.partial_charge)) + 1.0) / 2.0),
    ChannelSpec("hybridization", "atom",
                lambda atom: _HYB_LEVELS[atom.hybridization]),
)


@dataclass
class MolImage:
    grid: np.ndarray  # (GRID_SIZE, GRID_SIZE, 4) in [0, 1]
    resolution: float = RESOLUTION


def _to_pixel(x: float, y: float) -> tuple[int, int]:
    """Map centered Angstrom coordinates to (row, col); boundary ties land
    on the higher pixel index, matching half-up rounding of cell centers."""
    col = int(math.floor((x + _FIELD / 2.0) / RESOLUTION))
    row = int(math.floor((_FIELD / 2.0 - y) / RESOLUTION))
    return (min(max(row, 0), GRID_SIZE - 1), min(max(col, 0), GRID_SIZE - 1))


def bresenham(r0: int, c0: int, r1: int, c1: int) -> list[tuple[int, int]]:
    """All integer pixels of the segment, endpoints included."""
    pixels = []
    dr, dc = abs(r1 - r0), abs(c1 - c0)
    sr = 1 if r0 < r1 else -1
    sc = 1 if c0 < c1 else -1
    err = dc - dr
    r, c = r0, c0
    while True:
        pixels.append((r, c))
        if r == r1 and c == c1:
            break
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr
    return pixels


def rasterize(layout: Layout2D, g: MolGraph,
              channels: tuple[ChannelSpec, ...] = CHANNEL_ENCODINGS) -> MolImage:
    coords = layout.coords.copy()
    drawn = ~np.isnan(coords[:, 0])
    pts = coords[drawn]
    if pts.size:
        # center the bounding box (not the centroid) so the scale-to-fit
        # guarantee holds for asymmetric molecules; this also makes the
        # image invariant to any translation of the layout
        coords[drawn] -= (pts.max(axis=0) + pts.min(axis=0)) / 2.0
        pts = coords[drawn]
        extent = float((pts.max(axis=0) - pts.min(axis=0)).max())
        if extent > _FIELD - 2.0 * _MARGIN:
            # the tiny shrink keeps the extreme coordinate strictly inside
            # the margin pixel after floor-quantization
            coords[drawn] *= (_FIELD - 2.0 * _MARGIN - 1e-9) / extent

    pixel = {}
    for idx in np.nonzero(drawn)[0]:
        pixel[int(idx)] = _to_pixel(coords[idx, 0], coords[idx, 1])

    grid = np.zeros((GRID_SIZE, GRID_SIZE, len(channels)), dtype=np.float32)
    for ch, spec in enumerate(channels):
        if spec.target == "bond":
            for bond in g.bonds:
                if bond.a not in pixel or bond.b not in pixel:
                    continue
                value = float(spec.intensity(bond))
                (r0, c0), (r1, c1) = pixel[bond.a], pixel[bond.b]
                for r, c in bresenham(r0, c0, r1, c1):
                    grid[r, c, ch] = max(grid[r, c, ch], value)
        else:
            for idx, (r, c) in pixel.items():
                grid[r, c, ch] = float(spec.intensity(g.atoms[idx]))
    return MolImage(grid=np.clip(grid, 0.0, 1.0))


def image_from_graph(g: MolGraph) -> MolImage:
    return rasterize(layout_2d(g), g)


def write_pgm_channels(img: MolImage, base_path) -> list[Path]:
    """Debug export: one binary P5 file per channel, maxval 255, row-major."""
    base = Path(base_path)
    paths = []
    for ch in range(img.grid.shape[2]):
        path = base.with_suffix(f".c{ch}.pgm")
        data = np.round(img.grid[:, :, ch] * 255.0).astype(np.uint8)
        header = f"P5\n{img.grid.shape[1]} {img.grid.shape[0]}\n255\n".encode()
        path.write_bytes(header + data.tobytes())
        paths.append(path)
    return paths
