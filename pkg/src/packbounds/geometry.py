"""Planar convex geometry: polygons, rigid poses, and overlap areas.

Vertices are stored counterclockwise and bodies are treated as closed convex
regions.  Overlap is measured as clipped area, so boundary contact between
two bodies counts as disjoint.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

# Orientation and degeneracy tolerance, in squared length units for a body of
# unit diameter.  Tests at another scale rescale it by the squared span of the
# point set under consideration.
EPS_GEOM = 1e-12


class Point2(tuple):
    """Immutable planar point with finite coordinates."""

    __slots__ = ()

    def __new__(cls, x: float, y: float):
        x = float(x)
        y = float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinate ({x!r}, {y!r})")
        return super().__new__(cls, (x, y))

    @property
    def x(self) -> float:
        return self[0]

    @property
    def y(self) -> float:
        return self[1]

    def __repr__(self):
        return f"Point2({self[0]!r}, {self[1]!r})"


def _coerce(points) -> list:
    """Normalize an iterable of point-likes to a list of (x, y) float pairs."""
    out = []
    for p in points:
        x, y = float(p[0]), float(p[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinate {p!r}")
        out.append((x, y))
    return out


def _signed_area(verts) -> float:
    total = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * total


def _span2(verts) -> float:
    """Squared bounding-box diagonal, used to rescale tolerances."""
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    dx = max(xs) - min(xs)
    dy = max(ys) - min(ys)
    return dx * dx + dy * dy


def is_convex(points: Sequence) -> bool:
    """True iff the points trace a convex counterclockwise boundary.

    Collinear triples pass.  A clockwise chain reads as reflex everywhere and
    returns False.  Fewer than 3 points raises ValueError.
    """
    verts = _coerce(points)
    if len(verts) < 3:
        raise ValueError("need at least 3 points")
    tol = EPS_GEOM * max(_span2(verts), 1e-30)
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        x2, y2 = verts[(i + 2) % n]
        cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
        if cross < -tol:
            return False
    return True


class ConvexPolygon:
    """Convex polygon with vertices normalized to counterclockwise order.

    Input may be clockwise (it is reversed on the way in) but must be strictly
    convex up to tolerance, free of coincident consecutive vertices, and span
    positive area.
    """

    def __init__(self, vertices: Sequence):
        verts = _coerce(vertices)
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if _signed_area(verts) < 0.0:
            verts.reverse()
        tol2 = EPS_GEOM * max(_span2(verts), 1e-30)
        n = len(verts)
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            if (x1 - x0) ** 2 + (y1 - y0) ** 2 <= tol2:
                raise ValueError("consecutive vertices coincide")
        if not is_convex(verts):
            raise ValueError("vertices do not form a convex polygon")
        signed = _signed_area(verts)
        if signed <= tol2:
            raise ValueError("degenerate polygon with near-zero area")
        self.vertices = tuple(Point2(x, y) for x, y in verts)
        self.area = signed

    @cached_property
    def centroid(self) -> Point2:
        """Area centroid from the standard shoelace-weighted sum."""
        cx = cy = 0.0
        verts = self.vertices
        n = len(verts)
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            w = x0 * y1 - x1 * y0
            cx += (x0 + x1) * w
            cy += (y0 + y1) * w
        scale = 1.0 / (6.0 * self.area)
        return Point2(cx * scale, cy * scale)

    @cached_property
    def circumradius(self) -> float:
        """Largest vertex distance from the centroid."""
        mx, my = self.centroid
        return max(math.hypot(x - mx, y - my) for x, y in self.vertices)

    @cached_property
    def diameter(self) -> float:
        """Largest pairwise vertex distance."""
        return float(pdist(np.asarray(self.vertices)).max())

    @cached_property
    def bbox(self) -> tuple:
        """(xmin, ymin, xmax, ymax) of the vertex set."""
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def __repr__(self):
        return f"ConvexPolygon({len(self.vertices)} vertices, area={self.area:.6g})"


@dataclass(frozen=True)
class Pose2:
    """Rigid placement: optional point reflection, then rotation, then shift.

    The reflection is about the origin of body coordinates and is applied
    before the rotation.  Rotation is normalized into [0, 2*pi).
    """

    rotation: float = 0.0
    translation: Point2 = Point2(0.0, 0.0)
    reflected: bool = False

    def __post_init__(self):
        rot = float(self.rotation) % (2.0 * math.pi)
        object.__setattr__(self, "rotation", rot)
        tx, ty = self.translation
        object.__setattr__(self, "translation", Point2(tx, ty))

    def apply(self, verts) -> list:
        """Transform a vertex list, returning plain (x, y) tuples."""
        c = math.cos(self.rotation)
        s = math.sin(self.rotation)
        tx, ty = self.translation
        if self.reflected:
            return [(-c * x + s * y + tx, -s * x - c * y + ty) for x, y in verts]
        return [(c * x - s * y + tx, s * x + c * y + ty) for x, y in verts]


def area(p: ConvexPolygon) -> float:
    """Shoelace area, cached on the polygon at construction."""
    return p.area


def point_reflect(p: ConvexPolygon, c) -> ConvexPolygon:
    """Reflect the polygon through the point c (vertex v maps to 2c - v)."""
    cx, cy = float(c[0]), float(c[1])
    return ConvexPolygon([(2.0 * cx - x, 2.0 * cy - y) for x, y in p.vertices])


def _translate(verts, dx: float, dy: float) -> list:
    return [(x + dx, y + dy) for x, y in verts]


def _clip_halfplane(poly, ax, ay, ex, ey):
    """Keep the part of poly left of the directed line through (ax, ay) along (ex, ey)."""
    out = []
    if not poly:
        return out
    px, py = poly[-1]
    side_prev = ex * (py - ay) - ey * (px - ax)
    for qx, qy in poly:
        side = ex * (qy - ay) - ey * (qx - ax)
        if side >= 0.0:
            if side_prev < 0.0:
                t = side_prev / (side_prev - side)
                out.append((px + t * (qx - px), py + t * (qy - py)))
            out.append((qx, qy))
        elif side_prev >= 0.0:
            t = side_prev / (side_prev - side)
            out.append((px + t * (qx - px), py + t * (qy - py)))
        px, py, side_prev = qx, qy, side
    return out


def _clip_area(subject, clip) -> float:
    """Area of the intersection of two counterclockwise convex vertex lists."""
    poly = subject
    ax, ay = clip[-1]
    for bx, by in clip:
        poly = _clip_halfplane(poly, ax, ay, bx - ax, by - ay)
        if len(poly) < 3:
            return 0.0
        ax, ay = bx, by
    return max(_signed_area(poly), 0.0)


def convex_intersection_area(a: ConvexPolygon, pose_a, b: ConvexPolygon, pose_b) -> float:
    """Intersection area of two posed convex polygons.

    Successive half-plane clipping of the first posed polygon against the
    second.  Returns 0.0 for disjoint or merely touching bodies.  Poses may be
    None for identity.  The same polygon under the same pose short-circuits to
    its own area, bit for bit.
    """
    if a is b and pose_a == pose_b:
        return a.area
    va = pose_a.apply(a.vertices) if pose_a is not None else list(a.vertices)
    vb = pose_b.apply(b.vertices) if pose_b is not None else list(b.vertices)
    return _clip_area(va, vb)


def regular_polygon(m: int, circumradius: float) -> ConvexPolygon:
    """Regular m-gon centered at the origin, first vertex on the +x axis."""
    if m < 3:
        raise ValueError("a regular polygon needs m >= 3")
    if not (circumradius > 0.0) or not math.isfinite(circumradius):
        raise ValueError("circumradius must be positive and finite")
    step = 2.0 * math.pi / m
    return ConvexPolygon(
        [(circumradius * math.cos(i * step), circumradius * math.sin(i * step)) for i in range(m)]
    )


def diameter(p: ConvexPolygon) -> float:
    """Largest pairwise vertex distance of the polygon."""
    return p.diameter


def random_convex_polygon(rng: np.random.Generator, vertices: int = 6, radius: float = 1.0) -> ConvexPolygon:
    """Seeded generator of irregular convex test bodies.

    Draws points at sorted random angles with radii in [0.55, 1.0] * radius and
    keeps their convex hull; retries until the hull has the requested vertex
    count.  After many failed draws the last hull is accepted as-is, so the
    count is best-effort for large requests.
    """
    if vertices < 3:
        raise ValueError("need at least 3 vertices")
    best = None
    for _ in range(256):
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=vertices))
        radii = rng.uniform(0.55, 1.0, size=vertices) * radius
        pts = np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
        try:
            hull = ConvexHull(pts)
        except Exception:
            continue
        hull_pts = pts[hull.vertices]
        try:
            poly = ConvexPolygon(hull_pts)
        except ValueError:
            continue
        best = poly
        if len(poly.vertices) == vertices:
            return poly
    if best is None:
        raise RuntimeError("failed to draw a convex polygon")
    return best
