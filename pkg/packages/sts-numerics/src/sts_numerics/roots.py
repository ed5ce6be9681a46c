from __future__ import annotations

import numpy as np


def upper_sqrt(z: float | complex | np.ndarray) -> np.ndarray | complex:
    """Square root on the branch with ``Im >= 0``.

    For real arguments this is the principal root of positive values and
    ``+i sqrt(|z|)`` for negative ones, the decaying evanescent solution.
    """
    w = np.sqrt(np.asarray(z, dtype=complex))
    w = np.where(w.imag < 0, -w, w)
    if w.ndim == 0:
        return complex(w)
    return w


def sqrt_diff_of_squares(a: float | np.ndarray, b: float | np.ndarray) -> np.ndarray | complex:
    """``upper_sqrt(a**2 - b**2)`` evaluated as a product to keep digits near ``a == b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return upper_sqrt((a - b) * (a + b))
