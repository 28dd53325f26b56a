"""Discrete norms and the error-bound diagnostic quantities.

Norm conventions (spacing h):

    ||u||_{l2(U_h)} = (h^3 * sum u^2)^(1/2)      revolved Cartesian samples
    ||u||_{l2(V_h)} = (h^2 * sum u^2)^(1/2)      cylindrical (r, z) samples
    |u|_TV          = h^2 * sum |grad_h u|       grad_h = differences / h
    ||u||_inf       = max |u|

With the 1/h-scaled gradient the TV seminorm of a unit-level indicator is
its boundary length (perimeter for rectangles), up to O(h) from the
one-sided boundary differences.

The diagnostic ratio checked by the experiments is

    c_star = ||u* - u0||_{l2(U_h)} / (M1 * (4 c M)^(1/3)),

with c the larger TV seminorm of u* and u0, M the larger sup norm, and
M1 = (||f* - f|| + ||f - f0||)^(1/3) in the l2(V_h) norm. The stability
theory predicts c_star <= 1.07 on every converged run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import GridXYZ, ProjectionField, RadialField, revolve
from .operators import gradient

__all__ = [
    "norm_l2_uh",
    "norm_l2_vh",
    "tv_seminorm",
    "norm_linf",
    "BoundReport",
    "bound_report",
    "DegenerateInstanceError",
]


class DegenerateInstanceError(ValueError):
    """The bound ratio is 0/0 (e.g. u* = u0 = 0 with exact data)."""


def _values(u) -> np.ndarray:
    return u.values if hasattr(u, "values") else np.asarray(u, dtype=float)


def norm_l2_uh(u3: np.ndarray, h: float) -> float:
    """(h^3 * sum u^2)^(1/2) over a revolved 3-D sample array."""
    u3 = np.asarray(u3, dtype=float)
    return float(np.sqrt(h**3 * np.sum(u3 * u3)))


def norm_l2_vh(u, h: float) -> float:
    """(h^2 * sum u^2)^(1/2) over a 2-D (r, z) or (x, z) sample array."""
    vals = _values(u)
    return float(np.sqrt(h**2 * np.sum(vals * vals)))


def tv_seminorm(u, h: float | None = None) -> float:
    """h^2 * sum of per-cell Euclidean magnitudes of the h-scaled gradient."""
    if isinstance(u, RadialField):
        vals, h = u.values, u.grid.h
    else:
        if h is None:
            raise ValueError("h is required when passing a bare array")
        vals = np.asarray(u, dtype=float)
    g = gradient(vals, h=h)
    return float(h * h * np.sqrt(g[0] ** 2 + g[1] ** 2).sum())


def norm_linf(u) -> float:
    vals = _values(u)
    return float(np.abs(vals).max()) if vals.size else 0.0


@dataclass(frozen=True)
class BoundReport:
    """The per-run quantities entering the error-bound check.

    c : max TV seminorm of u* and u0
    m : max sup norm of u* and u0
    m1 : (||f* - f|| + ||f - f0||)^(1/3), l2(V_h) norms
    err_l2_uh : ||u* - u0|| over the revolved Cartesian grid
    resid_l2_vh : ||f* - f||_{l2(V_h)}
    c_star : err_l2_uh / (m1 * (4 c m)^(1/3))
    """

    c: float
    m: float
    m1: float
    c_star: float
    err_l2_uh: float
    resid_l2_vh: float

    def csv_row(self, sigma2_frac: float) -> str:
        """One CSV row in column order: sigma^2 fraction, error, residual,
        M1, c, M, C*."""
        cols = (sigma2_frac, self.err_l2_uh, self.resid_l2_vh, self.m1, self.c, self.m, self.c_star)
        return ",".join(repr(float(v)) for v in cols)


def bound_report(
    u_star: RadialField,
    u0: RadialField,
    f_star: ProjectionField,
    f: ProjectionField,
    f0: ProjectionField,
    g3: GridXYZ,
) -> BoundReport:
    """Assemble the diagnostic quantities for one reconstruction run.

    ||f - f0|| uses the realized noise (ground truth is in hand throughout
    the synthetic pipelines). Raises DegenerateInstanceError when the
    denominator of c_star vanishes.
    """
    h = u_star.grid.h
    c = max(tv_seminorm(u_star), tv_seminorm(u0))
    m = max(norm_linf(u_star), norm_linf(u0))
    resid = norm_l2_vh(f_star.values - f.values, h)
    noise = norm_l2_vh(f.values - f0.values, h)
    m1 = (resid + noise) ** (1.0 / 3.0)
    # revolve is linear, so revolving the difference equals the difference
    # of revolutions
    diff = RadialField(u_star.grid, u_star.values - u0.values)
    err = norm_l2_uh(revolve(diff, g3), h)
    denom = m1 * (4.0 * c * m) ** (1.0 / 3.0)
    if not denom > 0.0:
        raise DegenerateInstanceError(
            "c_star denominator vanishes (u* = u0 = 0 with exact data?)"
        )
    return BoundReport(
        c=c,
        m=m,
        m1=m1,
        c_star=err / denom,
        err_l2_uh=err,
        resid_l2_vh=resid,
    )
