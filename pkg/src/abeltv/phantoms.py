"""Synthetic axisymmetric ground-truth densities and the Gaussian noise model.

A phantom is a list of shapes in the (r, z) half-plane, each an axis-aligned
rectangle or a half-ellipse, painted in order (later shapes overwrite
earlier ones). Rasterizing on a grid assigns each (radial cell, axial
sample) entry the level of the last shape containing the point
(cell-midpoint radius, axial sample height).

Shape encoding, matching the JSON schema
``{"shapes": [{"kind": "rect"|"half_ellipse", "r": [..], "z": [..], "level": ..}]}``:

* ``rect``: ``r = [r_lo, r_hi]``, ``z = [z_lo, z_hi]``.
* ``half_ellipse``: ``r = [r_center, r_semiaxis]``, ``z = [z_center,
  z_semiaxis]``; the region is the ellipse intersected with r >= 0.

Every shape must stay inside [0, 1-h) x [-1+h, 1-h] so that rasterized
fields vanish on the outermost radial cell and the axial boundary rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .grids import GridRZ, ProjectionField, RadialField

__all__ = [
    "Shape",
    "PhantomSpec",
    "NoiseSpec",
    "rasterize_phantom",
    "add_noise",
    "builtin_phantom",
    "BUILTIN_PHANTOM_NAMES",
]


@dataclass(frozen=True)
class Shape:
    kind: str
    r: tuple[float, float]
    z: tuple[float, float]
    level: float

    def __post_init__(self):
        if self.kind not in ("rect", "half_ellipse"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if not 0.0 <= self.level <= 1.0:
            raise ValueError(f"level must lie in [0, 1], got {self.level}")
        object.__setattr__(self, "r", (float(self.r[0]), float(self.r[1])))
        object.__setattr__(self, "z", (float(self.z[0]), float(self.z[1])))

    def extent(self) -> tuple[float, float, float]:
        """(max radius, min z, max z) of the region."""
        if self.kind == "rect":
            return self.r[1], self.z[0], self.z[1]
        rc, ra = self.r
        zc, zb = self.z
        return rc + ra, zc - zb, zc + zb

    def contains(self, r: np.ndarray, z: np.ndarray) -> np.ndarray:
        if self.kind == "rect":
            return (r >= self.r[0]) & (r < self.r[1]) & (z >= self.z[0]) & (z <= self.z[1])
        rc, ra = self.r
        zc, zb = self.z
        return ((r - rc) / ra) ** 2 + ((z - zc) / zb) ** 2 <= 1.0


@dataclass(frozen=True)
class PhantomSpec:
    shapes: tuple[Shape, ...]

    def __post_init__(self):
        object.__setattr__(self, "shapes", tuple(self.shapes))

    @classmethod
    def from_json(cls, text: str) -> "PhantomSpec":
        obj = json.loads(text)
        return cls(
            shapes=tuple(
                Shape(kind=s["kind"], r=tuple(s["r"]), z=tuple(s["z"]), level=s["level"])
                for s in obj["shapes"]
            )
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "shapes": [
                    {"kind": s.kind, "r": list(s.r), "z": list(s.z), "level": s.level}
                    for s in self.shapes
                ]
            }
        )


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise: variance = variance_fraction * max|f0|."""

    variance_fraction: float
    seed: int

    def __post_init__(self):
        if self.variance_fraction < 0:
            raise ValueError("variance_fraction must be >= 0")


def rasterize_phantom(spec: PhantomSpec, g: GridRZ) -> RadialField:
    """Paint the shapes onto the grid, later shapes overwriting earlier.

    Raises ValueError if any shape escapes the supported box
    [0, 1-h) x [-1+h, 1-h] on this grid.
    """
    h = g.h
    for s in spec.shapes:
        r_max, z_lo, z_hi = s.extent()
        if r_max > 1.0 - h or z_lo < -1.0 + h or z_hi > 1.0 - h:
            raise ValueError(
                f"shape {s} escapes the support box [0, {1 - h}) x [{-1 + h}, {1 - h}]"
            )
    R, Z = np.meshgrid(g.r_centers, g.z, indexing="ij")
    values = np.zeros_like(R)
    for s in spec.shapes:
        mask = s.contains(R, Z)
        values[mask] = s.level
    return RadialField(g, values)


def add_noise(f0: ProjectionField, ns: NoiseSpec) -> ProjectionField:
    """f = f0 + eta with eta iid Normal(0, variance_fraction * max|f0|).

    Uses the counter-based Philox generator keyed on the seed, so equal
    seeds give bit-identical fields and the draw order is reproducible.
    """
    if ns.variance_fraction == 0.0:
        return f0
    sigma = float(np.sqrt(ns.variance_fraction * np.abs(f0.values).max()))
    rng = np.random.Generator(np.random.Philox(key=ns.seed))
    eta = rng.normal(0.0, sigma, size=f0.values.shape)
    return ProjectionField(f0.grid, f0.values + eta)


_NESTED_ANNULI = PhantomSpec(
    shapes=(
        Shape("rect", (0.00, 0.72), (-0.75, 0.75), 0.30),
        Shape("rect", (0.00, 0.52), (-0.55, 0.55), 0.00),
        Shape("rect", (0.00, 0.45), (-0.45, 0.45), 0.60),
        Shape("rect", (0.00, 0.28), (-0.30, 0.30), 0.00),
        Shape("rect", (0.00, 0.20), (-0.20, 0.20), 1.00),
    )
)

_FOUR_BLOBS = PhantomSpec(
    shapes=(
        Shape("half_ellipse", (0.00, 0.25), (0.55, 0.20), 0.80),
        Shape("half_ellipse", (0.45, 0.12), (0.10, 0.30), 1.00),
        Shape("rect", (0.10, 0.30), (-0.50, -0.25), 0.60),
        Shape("half_ellipse", (0.20, 0.15), (-0.70, 0.12), 0.40),
    )
)

_BUILTINS = {
    "nested-annuli": _NESTED_ANNULI,
    "four-blobs": _FOUR_BLOBS,
}

BUILTIN_PHANTOM_NAMES = tuple(sorted(_BUILTINS))


def builtin_phantom(name: str) -> PhantomSpec:
    """Named phantoms: 'nested-annuli' (concentric levels around the axis)
    and 'four-blobs' (four disjoint components)."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown phantom {name!r}; available: {', '.join(BUILTIN_PHANTOM_NAMES)}"
        ) from None
