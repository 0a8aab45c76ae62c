"""The RAIL localization pipeline: per-target bounding box, system per-hop
error, RSSI-inferred angles with hop correction, orientation disambiguation,
ray construction, and the four-case precise-location rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from . import geometry
from .geometry import AABox, Point, Ray, make_ray
from .network import (
    Deployment,
    NetworkGraph,
    RangingResult,
    dijkstra_tree,
    shortest_ranging,
)

MIN_SIDE = 0.01  # floor for corrected triangle sides, keeps arccos finite


class DegenerateGeometry(Exception):
    """Angle estimation has no usable triangle sample."""


class LocationCase(Enum):
    MULTI_INTERSECTION = "MultiIntersection"
    SINGLE_INTERSECTION = "SingleIntersection"
    ALL_OUTSIDE = "AllOutside"
    NO_INTERSECTION = "NoIntersection"


@dataclass(frozen=True)
class AnchorTriple:
    """Three anchors with their ground-truth geometry and pairwise ranging."""

    ids: tuple[int, int, int]
    positions: tuple[Point, Point, Point]
    pairwise_true_distances: tuple[float, float, float]  # (01, 02, 12)
    pairwise_ranging: tuple[RangingResult, RangingResult, RangingResult]


@dataclass(frozen=True)
class AngleEstimate:
    at_anchor: int
    reference_anchor: int
    theta: float  # radians, in [0, pi]
    samples_used: int


@dataclass
class RailDiagnostics:
    case_fired: LocationCase
    box: AABox
    rays: tuple[Ray, Ray, Ray]
    intersections: list[Point]

    def to_json_dict(self) -> dict:
        return {
            "case_fired": self.case_fired.value,
            "box": [self.box.x_min, self.box.x_max, self.box.y_min, self.box.y_max],
            "rays": [
                {"origin": [r.origin.x, r.origin.y], "direction": [r.dx, r.dy]}
                for r in self.rays
            ],
            "intersections": [[p.x, p.y] for p in self.intersections],
        }


def make_anchor_triple(
    dep: Deployment,
    ids: Sequence[int],
    ranging_by_anchor: dict[int, list[RangingResult]],
) -> AnchorTriple:
    """Assemble an AnchorTriple from per-anchor single-source ranging tables."""
    a, b, c = sorted(ids)
    pa, pb, pc = dep.nodes[a], dep.nodes[b], dep.nodes[c]
    return AnchorTriple(
        ids=(a, b, c),
        positions=(pa, pb, pc),
        pairwise_true_distances=(
            geometry.distance(pa, pb),
            geometry.distance(pa, pc),
            geometry.distance(pb, pc),
        ),
        pairwise_ranging=(
            ranging_by_anchor[a][b],
            ranging_by_anchor[a][c],
            ranging_by_anchor[b][c],
        ),
    )


def anchor_square(pos: Point, sd: float) -> AABox:
    return AABox(pos.x - sd, pos.x + sd, pos.y - sd, pos.y + sd)


def bounding_box(
    anchors: AnchorTriple, ranging: Sequence[RangingResult]
) -> Optional[AABox]:
    """Intersection of the three per-anchor squares of half-width SD."""
    squares = [
        anchor_square(pos, r.shortest_distance)
        for pos, r in zip(anchors.positions, ranging)
    ]
    return geometry.intersect_boxes(squares)


def per_hop_error(anchors: AnchorTriple) -> float:
    """Average per-hop excess of anchor-pairwise multi-hop distances."""
    sd_sum = sum(r.shortest_distance for r in anchors.pairwise_ranging)
    hop_sum = sum(r.hop_count for r in anchors.pairwise_ranging)
    if hop_sum == 0:
        raise ValueError("anchor pair with zero hop count")
    td_sum = sum(anchors.pairwise_true_distances)
    return max((sd_sum - td_sum) / hop_sum, 0.0)


def corrected_angle(
    a: float, b: float, c: float, e: float, hops_a: int, hops_b: int, hops_c: int
) -> float:
    """Law-of-cosines angle after per-side hop correction.

    Each side is shortened by e per hop when its hop count is >= 2, floored
    at MIN_SIDE; the cosine argument is clamped to [-1, 1] so violated
    triangle inequalities map to 0 or pi.
    """
    ac = max(a - e * hops_a, MIN_SIDE) if hops_a >= 2 else max(a, MIN_SIDE)
    bc = max(b - e * hops_b, MIN_SIDE) if hops_b >= 2 else max(b, MIN_SIDE)
    cc = max(c - e * hops_c, MIN_SIDE) if hops_c >= 2 else max(c, 0.0)
    cos = (ac * ac + bc * bc - cc * cc) / (2.0 * ac * bc)
    return math.acos(min(1.0, max(-1.0, cos)))


class PathCache:
    """Caches single-source shortest-path queries over one graph.

    Anchor-rooted queries keep full predecessor trees from the hand-rolled
    tie-broken Dijkstra; distance/hop lookups from other sources (the c-side
    of the angle triangle) go through scipy's C implementation, which agrees
    with the hand-rolled one on tie-free weights.
    """

    def __init__(self, g: NetworkGraph):
        self.g = g
        self._trees: dict[int, tuple[list[float], list[int]]] = {}
        self._aux: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._matrix = None

    def tree(self, source: int) -> tuple[list[float], list[int]]:
        if source not in self._trees:
            self._trees[source] = dijkstra_tree(self.g, source)
        return self._trees[source]

    def path(self, source: int, target: int) -> tuple[int, ...]:
        dist, pred = self.tree(source)
        if math.isinf(dist[target]):
            from .network import Unreachable

            raise Unreachable(f"node {target} unreachable from {source}")
        path = [target]
        while pred[path[-1]] >= 0:
            path.append(pred[path[-1]])
        return tuple(reversed(path))

    def _sparse(self):
        if self._matrix is None:
            rows, cols, vals = [], [], []
            for u, nbrs in enumerate(self.g.adjacency):
                for v, w in nbrs:
                    rows.append(u)
                    cols.append(v)
                    vals.append(w)
            n = self.g.node_count
            self._matrix = csr_matrix((vals, (rows, cols)), shape=(n, n))
        return self._matrix

    def dist_hops(self, source: int, target: int) -> tuple[float, int]:
        """Shortest estimated distance and its hop count between two nodes."""
        if source == target:
            return 0.0, 0
        if source in self._trees:
            dist, _ = self._trees[source]
            return dist[target], len(self.path(source, target)) - 1
        if source not in self._aux:
            d, p = _csgraph_dijkstra(
                self._sparse(), indices=source, return_predecessors=True
            )
            self._aux[source] = (d, p)
        d, p = self._aux[source]
        if not math.isfinite(d[target]):
            from .network import Unreachable

            raise Unreachable(f"node {target} unreachable from {source}")
        hops = 0
        v = target
        while v != source:
            v = int(p[v])
            hops += 1
        return float(d[target]), hops


def estimate_angle(
    g: NetworkGraph,
    e: float,
    at: int,
    ref: int,
    target: int,
    cache: Optional[PathCache] = None,
) -> AngleEstimate:
    """Estimate the angle at anchor ``at`` between the directions to ``ref``
    and to ``target``.

    The two path-prefix segments formed by the first K <= 3 hops of the
    shortest paths toward ``ref`` and toward ``target``, together with the
    connection between their hop-K nodes, form the triangle the angle is
    read from; each side is shortened by the per-hop error before applying
    the law of cosines. K shrinks when either path is shorter than 3 hops.
    """
    if target == at or target == ref or at == ref:
        raise DegenerateGeometry(f"target {target} coincides with an anchor")
    if cache is None:
        cache = PathCache(g)
    path_ref = cache.path(at, ref)
    path_tgt = cache.path(at, target)
    k = min(3, len(path_ref) - 1, len(path_tgt) - 1)
    if k == 0:
        raise DegenerateGeometry("target or reference coincides with the anchor")

    node_a, node_b = path_ref[k], path_tgt[k]
    a_len = sum(
        _edge(g, path_ref[i], path_ref[i + 1]) for i in range(k)
    )
    b_len = sum(
        _edge(g, path_tgt[i], path_tgt[i + 1]) for i in range(k)
    )
    if node_a == node_b:
        c_len, c_hops = 0.0, 0
    else:
        direct = g.edge_weight(node_a, node_b)
        if direct is not None:
            c_len, c_hops = direct, 1
        else:
            # same-hop nodes out of range of each other: fall back to their
            # multi-hop shortest distance
            c_len, c_hops = cache.dist_hops(node_a, node_b)
    theta = corrected_angle(a_len, b_len, c_len, e, k, k, c_hops)
    return AngleEstimate(
        at_anchor=at, reference_anchor=ref, theta=theta, samples_used=k
    )


def _edge(g: NetworkGraph, u: int, v: int) -> float:
    w = g.edge_weight(u, v)
    assert w is not None, f"path edge {u}-{v} missing from graph"
    return w


def _rotate(dx: float, dy: float, theta: float) -> tuple[float, float]:
    ct, st = math.cos(theta), math.sin(theta)
    return dx * ct - dy * st, dx * st + dy * ct


def _angle_between(ax: float, ay: float, bx: float, by: float) -> float:
    cos = min(1.0, max(-1.0, ax * bx + ay * by))
    return math.acos(cos)


def build_rays(
    anchors: AnchorTriple, angles: dict[tuple[int, int], AngleEstimate]
) -> tuple[Ray, Ray, Ray]:
    """One ray per anchor toward the target.

    For anchor A_i the estimated angle to the target is measured from the
    baseline A_i->A_j; the third anchor A_k disambiguates the rotation sign:
    the candidate whose angle to A_i->A_k best matches the estimated angle
    at A_i relative to A_k wins (ties go counterclockwise).
    """
    rays = []
    for i, pos_i in zip(anchors.ids, anchors.positions):
        j, k = sorted(x for x in anchors.ids if x != i)
        pos_j = anchors.positions[anchors.ids.index(j)]
        pos_k = anchors.positions[anchors.ids.index(k)]
        theta_ij = angles[(i, j)].theta
        theta_ik = angles[(i, k)].theta

        bx, by = _unit(pos_i, pos_j)
        kx, ky = _unit(pos_i, pos_k)
        ccw = _rotate(bx, by, theta_ij)
        cw = _rotate(bx, by, -theta_ij)
        err_ccw = abs(_angle_between(*ccw, kx, ky) - theta_ik)
        err_cw = abs(_angle_between(*cw, kx, ky) - theta_ik)
        dx, dy = ccw if err_ccw <= err_cw else cw
        rays.append(make_ray(pos_i, dx, dy))
    return tuple(rays)


def _unit(src: Point, dst: Point) -> tuple[float, float]:
    d = geometry.distance(src, dst)
    if d == 0:
        raise DegenerateGeometry("coincident anchors")
    return (dst.x - src.x) / d, (dst.y - src.y) / d


def precise_location(
    box: Optional[AABox],
    rays: Sequence[Ray],
    empty_fallback: Optional[AABox] = None,
    tol: float = geometry.DEFAULT_TOL,
) -> tuple[Point, RailDiagnostics]:
    """Resolve the final estimate from the box and the forward ray
    intersections, by the four-case rule.
    """
    if box is None:
        box = empty_fallback
    if box is None:
        raise ValueError("empty box with no fallback")

    pts = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            p = geometry.ray_pair_intersection(rays[i], rays[j])
            if p is not None:
                pts.append(p)

    inside = [p for p in pts if geometry.contains(box, p, tol)]
    if len(inside) >= 2:
        case, est = LocationCase.MULTI_INTERSECTION, geometry.centroid(inside)
    elif len(inside) == 1:
        case, est = LocationCase.SINGLE_INTERSECTION, inside[0]
    elif pts:
        nearest = min(pts, key=lambda p: geometry.box_distance(box, p))
        case, est = LocationCase.ALL_OUTSIDE, geometry.project_onto_box(box, nearest)
    else:
        case, est = LocationCase.NO_INTERSECTION, geometry.box_center(box)
    diag = RailDiagnostics(case_fired=case, box=box, rays=tuple(rays), intersections=pts)
    return est, diag


def localize_all(
    dep: Deployment, g: NetworkGraph
) -> dict[int, tuple[Point, RailDiagnostics]]:
    """Run the full pipeline for every unknown node.

    When more than three anchors exist, each target uses its three nearest
    anchors by estimated shortest distance.
    """
    cache = PathCache(g)
    all_ids = list(range(len(dep.nodes)))
    ranging_by_anchor: dict[int, dict[int, RangingResult]] = {}
    for a in dep.anchor_ids:
        dist, _ = cache.tree(a)
        table = {}
        for t in all_ids:
            path = cache.path(a, t) if t != a else (a,)
            table[t] = RangingResult(
                anchor_id=a,
                target_id=t,
                shortest_distance=dist[t],
                hop_count=len(path) - 1,
                path=path,
            )
        ranging_by_anchor[a] = table

    triples: dict[tuple[int, ...], tuple[AnchorTriple, float]] = {}

    def get_triple(ids: tuple[int, ...]) -> tuple[AnchorTriple, float]:
        if ids not in triples:
            triple = make_anchor_triple(dep, ids, ranging_by_anchor)
            triples[ids] = (triple, per_hop_error(triple))
        return triples[ids]

    results = {}
    for t in dep.unknown_ids:
        chosen = sorted(
            dep.anchor_ids, key=lambda a: ranging_by_anchor[a][t].shortest_distance
        )[:3]
        ids = tuple(sorted(chosen))
        triple, e = get_triple(ids)
        ranging = [ranging_by_anchor[a][t] for a in triple.ids]
        box = bounding_box(triple, ranging)

        angles = {}
        for i in triple.ids:
            for j in triple.ids:
                if i != j:
                    angles[(i, j)] = estimate_angle(g, e, i, j, t, cache)
        rays = build_rays(triple, angles)

        fallback = None
        if box is None:
            best = min(ranging, key=lambda r: r.shortest_distance)
            pos = triple.positions[triple.ids.index(best.anchor_id)]
            fallback = anchor_square(pos, best.shortest_distance)
        results[t] = precise_location(box, rays, empty_fallback=fallback)
    return results
