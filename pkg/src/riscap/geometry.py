"""Panel geometry: element positions, link distances, elevation cosines.

Panels are rectangular grids of reflecting elements lying in a plane
parallel to the xy-plane.  All distances are Euclidean, in meters.

Convention note: the elevation cosine from an element toward the user
(``cos_r``) is computed from the *receiver* height.  Output metadata of
the workbench repeats this note so downstream consumers see the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryError

# Surfaced in workbench run metadata (see module docstring).
ELEVATION_CONVENTION_NOTE = (
    "element-to-user elevation cosine computed from the receiver height"
)


@dataclass(frozen=True)
class Point3:
    """A point in 3-space, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError("coordinates must be finite")

    def distance_to(self, other: "Point3") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))


@dataclass(frozen=True)
class RisPanel:
    """One reflecting surface: center, element grid counts, element size.

    The panel lies in the plane z = center.z, elements on an mx-by-my grid
    with spacing (dx, dy) meters.
    """

    center: Point3
    mx: int
    my: int
    dx: float
    dy: float

    def __post_init__(self):
        if self.mx < 1 or self.my < 1:
            raise ValueError("element counts must be >= 1")
        if self.dx <= 0 or self.dy <= 0:
            raise ValueError("element dimensions must be positive")

    @property
    def element_count(self) -> int:
        return self.mx * self.my

    @property
    def diagonal(self) -> float:
        """Maximum panel dimension: the diagonal of the mx*dx by my*dy face."""
        return math.hypot(self.mx * self.dx, self.my * self.dy)


@dataclass(frozen=True)
class ElementLink:
    """Per-element link quantities for one BS -> element -> user hop."""

    r_t: float  # BS to element
    r_r: float  # element to user
    d_m: float  # element to panel center
    cos_tx: float
    cos_rx: float
    cos_t: float
    cos_r: float


@dataclass(frozen=True)
class PanelLink:
    """Panel-center link quantities (the far-field view of a panel)."""

    d1: float  # BS to panel center
    d2: float  # user to panel center
    cos_theta_t: float
    cos_theta_r: float


def element_centers(panel: RisPanel) -> list[Point3]:
    """Element-center positions, row-major over (y, x).

    Offsets along each axis are (i - (n-1)/2) * spacing for i = 0..n-1, so
    the grid is symmetric about the panel center and the centroid of the
    returned points is the center itself.
    """
    x0, y0, z0 = panel.center.x, panel.center.y, panel.center.z
    xs = [x0 + (i - (panel.mx - 1) / 2.0) * panel.dx for i in range(panel.mx)]
    ys = [y0 + (j - (panel.my - 1) / 2.0) * panel.dy for j in range(panel.my)]
    return [Point3(x, y, z0) for y in ys for x in xs]


def _require_above_plane(point: Point3, z0: float, label: str) -> None:
    if point.z <= z0:
        raise GeometryError(
            f"{label} at z={point.z} must lie strictly above the panel plane z={z0}"
        )


def panel_link(bs: Point3, user: Point3, panel: RisPanel) -> PanelLink:
    """Center-of-panel distances and elevation cosines."""
    z0 = panel.center.z
    _require_above_plane(bs, z0, "BS")
    _require_above_plane(user, z0, "user")
    d1 = bs.distance_to(panel.center)
    d2 = user.distance_to(panel.center)
    return PanelLink(
        d1=d1,
        d2=d2,
        cos_theta_t=(bs.z - z0) / d1,
        cos_theta_r=(user.z - z0) / d2,
    )


def element_links(bs: Point3, user: Point3, panel: RisPanel) -> list[ElementLink]:
    """Per-element distances and elevation cosines.

    cos_tx / cos_rx follow the law of cosines in the triangle formed by the
    endpoint, the element, and the panel center; cos_t / cos_r are height
    over slant range.
    """
    z0 = panel.center.z
    _require_above_plane(bs, z0, "BS")
    _require_above_plane(user, z0, "user")
    link = panel_link(bs, user, panel)
    d1, d2 = link.d1, link.d2
    out = []
    for center in element_centers(panel):
        r_t = bs.distance_to(center)
        r_r = user.distance_to(center)
        d_m = panel.center.distance_to(center)
        out.append(
            ElementLink(
                r_t=r_t,
                r_r=r_r,
                d_m=d_m,
                cos_tx=(d1 * d1 + r_t * r_t - d_m * d_m) / (2.0 * d1 * r_t),
                cos_rx=(d2 * d2 + r_r * r_r - d_m * d_m) / (2.0 * d2 * r_r),
                cos_t=(bs.z - z0) / r_t,
                cos_r=(user.z - z0) / r_r,
            )
        )
    return out


def near_field_boundary(panel: RisPanel, wavelength: float) -> float:
    """Distance below which per-element path losses differ materially.

    2 * D^2 / wavelength with D the panel diagonal; computed from the
    squared side lengths directly so exact inputs give exact output.
    """
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    wx = panel.mx * panel.dx
    wy = panel.my * panel.dy
    return 2.0 * (wx * wx + wy * wy) / wavelength
