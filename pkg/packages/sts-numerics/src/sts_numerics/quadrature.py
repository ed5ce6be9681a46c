"""Adaptive Gauss-Kronrod quadrature and semi-infinite truncation.

The integrator is vectorised: every pending panel is evaluated in a single call
of the integrand, so integrands must accept a 1-D numpy array of abscissae and
return either shape ``(n,)`` or ``(m, n)`` for ``m`` components integrated on a
shared subdivision tree.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DegenerateInputError, NumericError
from .model import NumericsReport, QuadratureSpec

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# QUADPACK qk15 abscissae / weights
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
for _i in (1, 3, 5):
    _GW[_i] = _WG[(_i - 1) // 2]
    _GW[14 - _i] = _WG[(_i - 1) // 2]
_GW[7] = _WG[3]


def _gk15(f: Integrand, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, bool]:
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = (c[:, None] + h[:, None] * _NODES[None, :]).ravel()
    y = np.asarray(f(x))
    if y.shape[-1] != x.size:
        raise ValueError(f"integrand returned shape {y.shape} for {x.size} abscissae")
    scalar = y.ndim == 1
    if scalar:
        y = y[None, :]
    y = y.reshape(y.shape[0], lo.size, 15)
    if not np.all(np.isfinite(y)):
        bad = x.reshape(lo.size, 15)[np.any(~np.isfinite(y), axis=0)]
        raise NumericError(f"integrand is not finite at x={bad[:3].tolist()}")
    kron = (y @ _KW) * h
    gauss = (y @ _GW) * h
    return kron, np.abs(kron - gauss), scalar


def _initial_edges(
    a: float, b: float, breakpoints: Iterable[float] | np.ndarray, max_panel: float | None
) -> np.ndarray:
    pts = np.asarray(list(breakpoints) if not isinstance(breakpoints, np.ndarray) else breakpoints, dtype=float)
    pts = np.unique(pts[(pts > a) & (pts < b)])
    pts = np.concatenate([[a], pts, [b]])
    if not max_panel:
        return pts
    pieces = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((hi - lo) / max_panel)))
        pieces.append(np.linspace(lo, hi, n + 1)[:-1])
    pieces.append(np.array([b]))
    return np.concatenate(pieces)


def integrate_adaptive(
    f: Integrand,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    *,
    breakpoints: Iterable[float] | np.ndarray = (),
    max_panel: float | None = None,
    tol_reference: int | None = None,
) -> Tuple[complex | np.ndarray, NumericsReport]:
    """Integrate ``f`` over ``[a, b]`` by adaptive G7/K15 bisection.

    Panels holding the largest share of the error are bisected first; the
    subdivision order depends only on the integrand values, so re-evaluation is
    bit-identical. Only bisections count against ``spec.max_subdivisions``;
    the initial panels set by ``breakpoints`` and ``max_panel`` are free.
    Raises ``NumericError`` when the budget is exhausted before ``error <= max(abs_tol, rel_tol * |result|)``.
    With ``tol_reference`` every component is judged against the larger of its
    own total and that component's total, for components expected to cancel.
    """
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite; truncate semi-infinite ranges first")
    if b == a:
        return 0j, NumericsReport()
    if b < a:
        value, report = integrate_adaptive(
            f, b, a, spec, breakpoints=breakpoints, max_panel=max_panel, tol_reference=tol_reference
        )
        return -value, report

    edges = _initial_edges(a, b, breakpoints, max_panel)
    lo, hi = edges[:-1], edges[1:]
    kron, err, scalar = _gk15(f, lo, hi)
    subdivisions = 0
    frozen = np.zeros(lo.size, dtype=bool)
    warnings: list[str] = []

    while True:
        total = kron.sum(axis=1)
        total_err = err.sum(axis=1)
        magnitude = np.abs(total)
        if tol_reference is not None:
            magnitude = np.maximum(magnitude, magnitude[tol_reference])
        tol = np.maximum(spec.abs_tol, spec.rel_tol * magnitude)
        excess = total_err / tol
        if np.all(excess <= 1.0):
            break
        score = np.max(err / tol[:, None], axis=0)
        score[frozen] = -1.0
        order = np.argsort(-score, kind="stable")
        # bisect the smallest set of panels that carries the error excess
        need = float(np.max(excess)) - 0.5
        cum = np.cumsum(np.where(score[order] > 0, score[order], 0.0))
        n_split = int(np.searchsorted(cum, need) + 1)
        chosen = order[: min(n_split, order.size)]
        chosen = chosen[score[chosen] > 0]
        if chosen.size == 0:
            warnings.append("roundoff limit reached before tolerance")
            logger.debug("quadrature stalled | a=%g b=%g err=%s tol=%s", a, b, total_err, tol)
            break
        if subdivisions + chosen.size > spec.max_subdivisions:
            report = NumericsReport(
                error_estimate=float(np.max(total_err)), subdivisions=subdivisions, warnings=warnings
            )
            raise NumericError(
                f"subdivision budget {spec.max_subdivisions} exhausted on [{a:g}, {b:g}]", report
            )
        split = np.zeros(lo.size, dtype=bool)
        split[chosen] = True
        mid = 0.5 * (lo[split] + hi[split])
        too_narrow = (hi[split] - lo[split]) <= 64 * np.finfo(float).eps * np.maximum(np.abs(mid), 1e-300)
        if np.any(too_narrow):
            idx = np.flatnonzero(split)[too_narrow]
            frozen[idx] = True
            split[idx] = False
            mid = 0.5 * (lo[split] + hi[split])
            if not split.any():
                continue
        new_lo = np.column_stack([lo[split], mid]).ravel()
        new_hi = np.column_stack([mid, hi[split]]).ravel()
        new_kron, new_err, _ = _gk15(f, new_lo, new_hi)
        subdivisions += int(split.sum())

        # rebuild arrays keeping panels in ascending order
        keep = ~split
        positions = np.concatenate([np.flatnonzero(keep), np.repeat(np.flatnonzero(split), 2)])
        order_new = np.argsort(positions, kind="stable")
        lo = np.concatenate([lo[keep], new_lo])[order_new]
        hi = np.concatenate([hi[keep], new_hi])[order_new]
        frozen = np.concatenate([frozen[keep], np.zeros(new_lo.size, dtype=bool)])[order_new]
        kron = np.concatenate([kron[:, keep], new_kron], axis=1)[:, order_new]
        err = np.concatenate([err[:, keep], new_err], axis=1)[:, order_new]

    total = kron.sum(axis=1)
    report = NumericsReport(
        error_estimate=float(np.max(err.sum(axis=1))), subdivisions=subdivisions, warnings=warnings
    )
    if scalar:
        return complex(total[0]), report
    return total, report


class TailEnvelope(BaseModel):
    """Upper bound on an integrand's weight far from its centre.

    ``weight * width / (2 pi d)`` is the mass beyond distance ``d`` of a
    unit-normalised Lorentzian of half-width ``width / 2``.
    """

    model_config = ConfigDict(frozen=True)

    center: float
    width: float = Field(gt=0)
    weight: float = Field(default=1.0, ge=0)

    def tail_mass(self, distance: float) -> float:
        return self.weight * self.width / (2.0 * math.pi * distance)


MAX_TRUNCATION_DOUBLINGS = 20


def truncate_semi_infinite(envelope: TailEnvelope, spec: QuadratureSpec, denominator: float) -> float:
    """Smallest ``center + M * width`` (M doubling from the configured multiplier)
    whose analytic tail bound is below ``tail_fraction * denominator``."""
    if not denominator > 0:
        raise DegenerateInputError(f"denominator estimate must be positive, got {denominator!r}")
    limit = 2.0**MAX_TRUNCATION_DOUBLINGS * envelope.width
    m = spec.truncation_multiplier
    while True:
        d = m * envelope.width
        if d > limit:
            raise NumericError(
                f"tail bound not met within 2^{MAX_TRUNCATION_DOUBLINGS} widths "
                f"(tail={envelope.tail_mass(limit):.3e}, denominator={denominator:.3e})",
                NumericsReport(truncation_point=envelope.center + limit),
            )
        if envelope.tail_mass(d) < spec.tail_fraction * denominator:
            return envelope.center + d
        m *= 2.0
