"""Wavefunction dumps.

One particle: CSV with header ``x,re,im``, one row per grid point, numbers
in shortest round-trip form.

Two particles: a little-endian binary file

    offset  size  content
    0       8     magic ``b"DGSIMWF2"``
    8       8     uint64 n1
    16      8     uint64 n2
    24      32    float64 x_min1, x_max1, x_min2, x_max2
    56      ...   n1*n2 complex128 amplitudes, row-major ``(i, j) <-> (x1_i, x2_j)``
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .grid import WaveFn, WaveFn2, make_grid

MAGIC = b"DGSIMWF2"
_HEADER = struct.Struct("<8sQQdddd")


def write_wavefn_csv(path: Path, psi: WaveFn) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for x, a in zip(psi.grid.x.tolist(), psi.amps.tolist()):
            w.writerow([repr(x), repr(a.real), repr(a.imag)])
    return path


def read_wavefn_csv(path: Path, x_min: float, x_max: float) -> WaveFn:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    grid = make_grid(len(data), x_min, x_max)
    if not np.allclose(grid.x, data[:, 0], rtol=0, atol=1e-9 * grid.length):
        raise ValueError("x column does not match the stated domain")
    return WaveFn(grid, data[:, 1] + 1j * data[:, 2])


def write_wavefn2(path: Path, state: WaveFn2) -> Path:
    g1, g2 = state.grid1, state.grid2
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, g1.n, g2.n, g1.x_min, g1.x_max, g2.x_min, g2.x_max))
        fh.write(np.ascontiguousarray(state.amps, dtype="<c16").tobytes())
    return path


def read_wavefn2(path: Path) -> WaveFn2:
    raw = Path(path).read_bytes()
    magic, n1, n2, a1, b1, a2, b2 = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: not a two-particle dump")
    body = raw[_HEADER.size:]
    if len(body) != 16 * n1 * n2:
        raise ValueError(f"{path}: expected {n1 * n2} amplitudes, found {len(body) // 16}")
    amps = np.frombuffer(body, dtype="<c16").reshape(n1, n2)
    return WaveFn2(make_grid(n1, a1, b1), make_grid(n2, a2, b2), amps)


def write_table_csv(path: Path, header: list[str], rows) -> Path:
    """Plain time-series table; floats in shortest round-trip form."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return path
