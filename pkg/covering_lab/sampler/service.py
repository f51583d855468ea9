import numpy as np

from covering_lab.common.exceptions import InvalidConfigError, UnsupportedDimensionError
from covering_lab.sampler.schemas import RngStream

HAAR_DIMENSIONS = (2, 3)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def derive(stream: RngStream, child: int) -> RngStream:
    return stream.derive(child)


def uniform_points(stream: RngStream, count: int, d: int) -> np.ndarray:
    """count independent uniform points of [-1/2, 1/2)^d; row i is the i-th draw of the stream."""
    if d < 1:
        raise InvalidConfigError(f"dimension must be >= 1, got {d}")
    if count < 0:
        raise InvalidConfigError(f"count must be >= 0, got {count}")
    return stream.generator().random((count, d)) - 0.5


def uniform_point(stream: RngStream, d: int) -> np.ndarray:
    return uniform_points(stream, 1, d)[0]


def haar_rotations(stream: RngStream, count: int, d: int) -> np.ndarray:
    """Haar-distributed elements of O(d), reflections included."""
    if d not in HAAR_DIMENSIONS:
        raise UnsupportedDimensionError(d, HAAR_DIMENSIONS)
    generator = stream.generator()

    if d == 2:
        draws = generator.random((count, 2))
        theta = 2 * np.pi * draws[:, 0]
        cos, sin = np.cos(theta), np.sin(theta)
        rotations = np.empty((count, 2, 2))
        rotations[:, 0, 0], rotations[:, 0, 1] = cos, -sin
        rotations[:, 1, 0], rotations[:, 1, 1] = sin, cos
        reflect = draws[:, 1] < 0.5
        rotations[reflect, :, 1] *= -1
        return rotations

    # one row of 10 gaussians per matrix: 9 entries and the reflection coin
    draws = generator.standard_normal((count, 10))
    q, r = np.linalg.qr(draws[:, :9].reshape(count, 3, 3))
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1
    rotations = q * signs[:, None, :]
    reflect = draws[:, 9] < 0
    rotations[reflect, :, 2] *= -1
    return rotations


def haar_rotation(stream: RngStream, d: int) -> np.ndarray:
    return haar_rotations(stream, 1, d)[0]


def uniform_at(stream: RngStream, counters) -> np.ndarray:
    """Counter-based uniforms on [0, 1): a SplitMix64 finalizer of (stream key, counter)."""
    z = np.atleast_1d(np.asarray(counters, dtype=np.uint64)).copy()
    with np.errstate(over="ignore"):
        z = stream.key() + (z + np.uint64(1)) * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
