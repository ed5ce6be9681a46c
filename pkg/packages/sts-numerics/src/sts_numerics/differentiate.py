from __future__ import annotations

from typing import Callable, Dict, Literal, Tuple

import numpy as np

from .errors import NumericError

# one-sided halves of the antisymmetric central stencils, offsets 1..n
_STENCILS: Dict[int, Tuple[float, ...]] = {
    2: (1.0 / 2.0,),
    4: (2.0 / 3.0, -1.0 / 12.0),
    6: (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0),
}


def _central(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: np.ndarray, order: int) -> np.ndarray:
    acc = np.zeros(x.shape, dtype=complex)
    for j, c in enumerate(_STENCILS[order], start=1):
        fp = np.asarray(f(x + j * h))
        fm = np.asarray(f(x - j * h))
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise NumericError(f"non-finite sample in central difference near x={np.ravel(x)[:3].tolist()}")
        acc = acc + c * (fp - fm)
    return acc / h


def differentiate_central(
    f: Callable[[np.ndarray], np.ndarray],
    x: float | np.ndarray,
    order: Literal[2, 4, 6] = 6,
    h0: float = 1e-3,
    scale: float | None = None,
) -> complex | np.ndarray:
    """Central difference of ``f`` at ``x`` with one Richardson refinement.

    The step is ``h0 * max(|x|, 1)`` unless ``scale`` gives the length over which
    ``f`` varies, in which case it is ``h0 * scale``.
    """
    if order not in _STENCILS:
        raise ValueError(f"order must be one of {sorted(_STENCILS)}")
    xa = np.asarray(x, dtype=float)
    h = h0 * (np.full(xa.shape, float(scale)) if scale else np.maximum(np.abs(xa), 1.0))
    coarse = _central(f, xa, h, order)
    fine = _central(f, xa, 0.5 * h, order)
    gain = 2.0**order
    refined = (gain * fine - coarse) / (gain - 1.0)
    if np.ndim(refined) == 0:
        return complex(refined)
    return refined
