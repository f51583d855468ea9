# All mod-1 arithmetic lives here; representatives are taken in [-1/2, 1/2).
import numpy as np


def wrap(v) -> np.ndarray:
    w = np.mod(np.asarray(v, dtype=np.float64) + 0.5, 1.0) - 0.5
    # np.mod can round up to exactly 1.0 for tiny negative inputs
    return np.where(w >= 0.5, w - 1.0, w)


def torus_delta(x, y) -> np.ndarray:
    """Signed per-coordinate displacement from x to y."""
    return wrap(np.asarray(y, dtype=np.float64) - np.asarray(x, dtype=np.float64))
