"""Morton (Z-order) codes for 3D voxel grid indices.

A code interleaves three 21-bit non-negative indices into one 63-bit
integer with x occupying the lowest interleave position, so
(1,0,0) -> 1, (0,1,0) -> 2, (0,0,1) -> 4.  Codes double as octree
addresses: each 3-bit group is the child slot at one tree level.
"""

from __future__ import annotations

import numpy as np

INDEX_BITS = 21
MAX_INDEX = (1 << INDEX_BITS) - 1

_M1 = np.uint64(0x1F00000000FFFF)
_M2 = np.uint64(0x1F0000FF0000FF)
_M3 = np.uint64(0x100F00F00F00F00F)
_M4 = np.uint64(0x10C30C30C30C30C3)
_M5 = np.uint64(0x1249249249249249)


def _spread(n: np.ndarray) -> np.ndarray:
    n = n.astype(np.uint64)
    n = (n | (n << np.uint64(32))) & _M1
    n = (n | (n << np.uint64(16))) & _M2
    n = (n | (n << np.uint64(8))) & _M3
    n = (n | (n << np.uint64(4))) & _M4
    n = (n | (n << np.uint64(2))) & _M5
    return n


def _compact(n: np.ndarray) -> np.ndarray:
    n = n.astype(np.uint64) & _M5
    n = (n | (n >> np.uint64(2))) & _M4
    n = (n | (n >> np.uint64(4))) & _M3
    n = (n | (n >> np.uint64(8))) & _M2
    n = (n | (n >> np.uint64(16))) & _M1
    n = (n | (n >> np.uint64(32))) & np.uint64(MAX_INDEX)
    return n


def encode(ix, iy, iz):
    """Interleave three grid indices into a Morton code.

    Accepts scalars or equal-shaped integer arrays; indices outside
    [0, 2^21) are rejected.
    """
    ix = np.asarray(ix)
    iy = np.asarray(iy)
    iz = np.asarray(iz)
    if (
        np.any(ix < 0) or np.any(iy < 0) or np.any(iz < 0)
        or np.any(ix > MAX_INDEX) or np.any(iy > MAX_INDEX) or np.any(iz > MAX_INDEX)
    ):
        raise ValueError("grid index out of the 21-bit Morton range")
    code = _spread(ix) | (_spread(iy) << np.uint64(1)) | (_spread(iz) << np.uint64(2))
    if code.ndim == 0:
        return int(code)
    return code.astype(np.int64)


def decode(code):
    """Inverse of encode: Morton code -> (ix, iy, iz)."""
    c = np.asarray(code)
    if np.any(c < 0) or np.any(c.astype(np.uint64) >> np.uint64(63)):
        raise ValueError("Morton code out of the 63-bit range")
    c = c.astype(np.uint64)
    ix = _compact(c)
    iy = _compact(c >> np.uint64(1))
    iz = _compact(c >> np.uint64(2))
    if c.ndim == 0:
        return int(ix), int(iy), int(iz)
    return ix.astype(np.int64), iy.astype(np.int64), iz.astype(np.int64)
