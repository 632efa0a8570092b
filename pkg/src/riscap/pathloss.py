"""Path-loss models for the reflected and direct links.

All outputs are *loss factors*: received power scales as 1/beta, and the
SNR formulas downstream consume beta^-1.  The reference constant
``beta0_reference`` (an element-aperture term) and the direct-link
``direct_pathloss`` are distinct quantities and are never aliased.

Antenna gains are linear here; dB conversion happens at the scenario
boundary.  The transmit and receive antennas are assumed pointed at the
panel center (peak-radiation assumption), which is what makes the
elevation-cosine pattern below valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularPattern
from .geometry import ElementLink, PanelLink, Point3, RisPanel, element_links, panel_link


@dataclass(frozen=True)
class LinkBudget:
    """Link-budget inputs in linear units (gains linear, powers in watts)."""

    gt: float
    gr: float
    tx_power: float
    noise_power: float
    eta_db: float
    xi: float

    def __post_init__(self):
        if self.gt <= 0 or self.gr <= 0:
            raise ValueError("antenna gains must be positive")
        if self.tx_power <= 0:
            raise ValueError("transmit power must be positive")
        if self.noise_power <= 0:
            raise ValueError("noise power must be positive")
        if self.xi <= 0:
            raise ValueError("path-loss exponent must be positive")


@dataclass(frozen=True)
class PathLossSet:
    """All loss factors for one scenario.

    per_element and farfield carry one entry per panel; per_element entries
    are lists over that panel's elements (row-major, matching
    geometry.element_centers).
    """

    beta0_ref: float
    per_element: tuple[tuple[float, ...], ...]
    farfield: tuple[float, ...]
    direct: float


def beta0_reference(gt: float, gr: float, dx: float, dy: float) -> float:
    """Element-aperture reference constant 16*pi^2 / (gt*gr*dx^2*dy^2)."""
    if min(gt, gr, dx, dy) <= 0:
        raise ValueError("gains and element dimensions must be positive")
    return 16.0 * math.pi**2 / (gt * gr * dx**2 * dy**2)


def combine_pattern(link: ElementLink, gt: float, gr: float) -> float:
    """Joint normalized power radiation pattern for one element.

    The endpoint-side cosines enter with the (possibly fractional) gain
    exponents, so they must be positive; an endpoint sitting past the
    perpendicular of an element has no defined pattern.
    """
    if link.cos_tx <= 0 or link.cos_rx <= 0:
        raise SingularPattern(
            f"endpoint-side pattern cosines ({link.cos_tx:.4g}, {link.cos_rx:.4g}) "
            "must be positive"
        )
    return (
        link.cos_tx ** (gt / 2.0 - 1.0)
        * link.cos_t
        * link.cos_r
        * link.cos_rx ** (gr / 2.0 - 1.0)
    )


def element_pathloss(link: ElementLink, beta0_ref: float, gt: float, gr: float) -> float:
    """Near-field loss factor of one element: beta0_ref*(r_t*r_r)^2/pattern."""
    pattern = combine_pattern(link, gt, gr)
    if pattern <= 0:
        raise SingularPattern(
            f"radiation pattern {pattern} is not positive; check link geometry"
        )
    return beta0_ref * (link.r_t * link.r_r) ** 2 / pattern


def farfield_pathloss(link: PanelLink, beta0_ref: float) -> float:
    """Far-field loss factor shared by every element of a panel."""
    if link.cos_theta_t <= 0 or link.cos_theta_r <= 0:
        raise SingularPattern("panel elevation cosine is not positive")
    return beta0_ref * (link.d1 * link.d2) ** 2 / (link.cos_theta_t * link.cos_theta_r)


def direct_pathloss(d0: float, eta_db: float, xi: float) -> float:
    """Direct BS-user loss factor from a log-distance model.

    The *inverse* loss in dB is eta_db - 10*xi*log10(d0); the returned
    linear value is the loss factor (>= 1 for any sensible budget).
    """
    if d0 <= 0:
        raise ValueError("direct-link distance must be positive")
    inv_db = eta_db - 10.0 * xi * math.log10(d0)
    return 10.0 ** (-inv_db / 10.0)


def pathloss_set(
    bs: Point3,
    user: Point3,
    panels: list[RisPanel],
    budget: LinkBudget,
) -> PathLossSet:
    """Evaluate every loss factor a scenario needs.

    All panels share one element size for the reference constant; mixed
    element sizes across panels are rejected.
    """
    if not panels:
        raise ValueError("at least one panel is required")
    dx, dy = panels[0].dx, panels[0].dy
    for p in panels[1:]:
        if (p.dx, p.dy) != (dx, dy):
            raise ValueError("all panels must share one element size")
    b0_ref = beta0_reference(budget.gt, budget.gr, dx, dy)
    per_element = tuple(
        tuple(
            element_pathloss(link, b0_ref, budget.gt, budget.gr)
            for link in element_links(bs, user, panel)
        )
        for panel in panels
    )
    farfield = tuple(
        farfield_pathloss(panel_link(bs, user, panel), b0_ref) for panel in panels
    )
    return PathLossSet(
        beta0_ref=b0_ref,
        per_element=per_element,
        farfield=farfield,
        direct=direct_pathloss(bs.distance_to(user), budget.eta_db, budget.xi),
    )
