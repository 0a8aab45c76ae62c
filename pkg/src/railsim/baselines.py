"""Comparison algorithms: Min-Max and RSSI-based DV-hop.

Min-Max is range-free (BFS hop counts times the communication range);
the DV-hop variant here feeds accumulated RSSI multi-hop distances straight
into a linearized trilateration solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .geometry import Point

DET_TOL = 1e-9


class Algorithm(Enum):
    MIN_MAX = "MinMax"
    RSSI_DV_HOP = "RssiDvHop"
    RAIL = "RAIL"


@dataclass(frozen=True)
class BaselineEstimate:
    algorithm: Algorithm
    position: Point
    degenerate: bool = False


def min_max(anchors: Sequence[tuple[Point, int]], comm_range: float) -> BaselineEstimate:
    """Center of the intersection of per-anchor squares of half-width
    hops * comm_range.

    The (max-of-mins, min-of-maxes) rectangle is centered even when it is
    inverted; the degenerate flag records that situation.
    """
    x_min = max(p.x - h * comm_range for p, h in anchors)
    x_max = min(p.x + h * comm_range for p, h in anchors)
    y_min = max(p.y - h * comm_range for p, h in anchors)
    y_max = min(p.y + h * comm_range for p, h in anchors)
    inverted = x_min > x_max or y_min > y_max
    center = Point((x_min + x_max) / 2.0, (y_min + y_max) / 2.0)
    return BaselineEstimate(Algorithm.MIN_MAX, center, degenerate=inverted)


def rssi_dv_hop(anchors: Sequence[tuple[Point, float]]) -> BaselineEstimate:
    """Trilateration from three accumulated multi-hop RSSI distances.

    The three circle equations are linearized by subtracting the third;
    the resulting 2x2 system is the exact least-squares solution. Collinear
    anchors fall back to the anchor centroid.
    """
    if len(anchors) != 3:
        raise ValueError("exactly three anchors required")
    (p1, d1), (p2, d2), (p3, d3) = anchors

    a11 = 2.0 * (p1.x - p3.x)
    a12 = 2.0 * (p1.y - p3.y)
    a21 = 2.0 * (p2.x - p3.x)
    a22 = 2.0 * (p2.y - p3.y)
    b1 = (d3 * d3 - d1 * d1) + (p1.x**2 - p3.x**2) + (p1.y**2 - p3.y**2)
    b2 = (d3 * d3 - d2 * d2) + (p2.x**2 - p3.x**2) + (p2.y**2 - p3.y**2)

    det = a11 * a22 - a12 * a21
    if abs(det) < DET_TOL:
        centroid = Point(
            (p1.x + p2.x + p3.x) / 3.0,
            (p1.y + p2.y + p3.y) / 3.0,
        )
        return BaselineEstimate(Algorithm.RSSI_DV_HOP, centroid, degenerate=True)

    x = (b1 * a22 - b2 * a12) / det
    y = (a11 * b2 - a21 * b1) / det
    return BaselineEstimate(Algorithm.RSSI_DV_HOP, Point(x, y))
