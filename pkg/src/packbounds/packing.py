"""Double-lattice packings of convex polygons and their densities.

A configuration places copies of a convex body at every lattice point; in
double mode a second family, the point reflection of the body through a
chosen center, rides the same lattice.  Validity means no two copies overlap
in area (boundary contact is fine).  The optimizer searches lattice and
reflection-center parameters for the densest valid configuration.

Geometry note used throughout: two translates of a convex body can only meet
when their centroid offset is at most twice the circumradius, so overlap
scans enumerate a finite neighbor set and farther copies are skipped without
being tested.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import LemmaEnvelopeError, UnknownBodyError
from .geometry import (
    EPS_GEOM,
    ConvexPolygon,
    Point2,
    _clip_area,
    _translate,
)

DEFAULT_RESTARTS = 32
DEFAULT_ITERS = 400
# Weight of the overlap penalty in the optimizer objective.
OVERLAP_PENALTY = 1.0e3
# Densities this far beyond 1 mark a configuration as not worth scanning.
_DENSITY_GUARD = 4.0


@dataclass(frozen=True)
class Lattice2:
    """Planar lattice spanned by u and v with positive determinant."""

    u: Point2
    v: Point2

    def __post_init__(self):
        u = Point2(self.u[0], self.u[1])
        v = Point2(self.v[0], self.v[1])
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if not (self.det > 0.0):
            raise ValueError(f"lattice basis must have positive determinant, got {self.det}")

    @property
    def det(self) -> float:
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]


@dataclass(frozen=True)
class DoubleLatticeConfig:
    """A body, its lattice, the reflection center, and the family mode."""

    body: ConvexPolygon
    lattice: Lattice2
    reflection_center: Point2
    mode: str = "double"

    def __post_init__(self):
        if self.mode not in ("double", "single"):
            raise ValueError(f"mode must be 'double' or 'single', got {self.mode!r}")
        q = Point2(self.reflection_center[0], self.reflection_center[1])
        object.__setattr__(self, "reflection_center", q)


@dataclass(frozen=True)
class PackingDensity:
    """Fraction of the plane covered by one lattice period."""

    value: float

    def __post_init__(self):
        if not (self.value > 0.0) or not math.isfinite(self.value):
            raise ValueError(f"density must be positive and finite, got {self.value}")


@dataclass(frozen=True)
class WindowCount:
    """Copies entirely inside the open square window of side sigma."""

    sigma: float
    count: int


@dataclass(frozen=True)
class KnownConstant:
    """Catalog entry: value, provenance kind, optional closed form, note."""

    value: float
    kind: str
    closed_form: Optional[str]
    note: str


@dataclass(frozen=True)
class LemmaLimitReport:
    """Window statistics with the boundary-layer envelope they satisfied.

    rows hold (sigma, count, empirical_density, error, envelope) tuples.
    """

    rows: tuple
    density: float
    envelope_constant: float


def density(cfg: DoubleLatticeConfig) -> PackingDensity:
    """Covered area fraction: (copies per period) * area / det."""
    mult = 2.0 if cfg.mode == "double" else 1.0
    return PackingDensity(mult * cfg.body.area / cfg.lattice.det)


def _lattice_points_near(ux, uy, vx, vy, det, px, py, radius):
    """Lattice points a*u + b*v within the closed disc around (px, py).

    Coefficient ranges come from the dual basis: |a| <= |w| |v| / det and
    |b| <= |w| |u| / det for any lattice vector w in reach.
    """
    lim = math.hypot(px, py) + radius
    amax = int(math.ceil(lim * math.hypot(vx, vy) / det)) + 1
    bmax = int(math.ceil(lim * math.hypot(ux, uy) / det)) + 1
    r2 = radius * radius
    out = []
    for a in range(-amax, amax + 1):
        base_x = a * ux - px
        base_y = a * uy - py
        for b in range(-bmax, bmax + 1):
            dx = base_x + b * vx
            dy = base_y + b * vy
            if dx * dx + dy * dy <= r2:
                out.append((a, b, px + dx, py + dy))
    return out


def _overlap_scan(verts, rb, ux, uy, vx, vy, refl_verts, px, py, stop_above):
    """Total intersection area over the canonical pair classes.

    Same-family pairs are counted once per lexicographically positive offset;
    in double mode that subtotal appears twice (the reflected family repeats
    it by central symmetry) and every cross-family offset is scanned,
    including zero.  With stop_above set, the scan aborts with inf as soon as
    any single pair exceeds it.
    """
    det = ux * vy - uy * vx
    reach = 2.0 * rb
    total = 0.0
    for a, b, wx, wy in _lattice_points_near(ux, uy, vx, vy, det, 0.0, 0.0, reach):
        if b < 0 or (b == 0 and a <= 0):
            continue
        ov = _clip_area(_translate(verts, wx, wy), verts)
        if stop_above is not None and ov > stop_above:
            return math.inf
        total += ov
    if refl_verts is not None:
        total *= 2.0
        for a, b, wx, wy in _lattice_points_near(ux, uy, vx, vy, det, px, py, reach):
            ov = _clip_area(_translate(refl_verts, wx, wy), verts)
            if stop_above is not None and ov > stop_above:
                return math.inf
            total += ov
    return total


def _config_scan(cfg: DoubleLatticeConfig, stop_above) -> float:
    body = cfg.body
    verts = [(v[0], v[1]) for v in body.vertices]
    mx, my = body.centroid
    ux, uy = cfg.lattice.u
    vx, vy = cfg.lattice.v
    if cfg.mode == "double":
        qx, qy = cfg.reflection_center
        # Point reflection is a half-turn, so the vertex order stays ccw.
        refl = [(2.0 * qx - x, 2.0 * qy - y) for x, y in verts]
        px, py = 2.0 * (mx - qx), 2.0 * (my - qy)
        return _overlap_scan(verts, body.circumradius, ux, uy, vx, vy, refl, px, py, stop_above)
    return _overlap_scan(verts, body.circumradius, ux, uy, vx, vy, None, 0.0, 0.0, stop_above)


def is_valid_packing(cfg: DoubleLatticeConfig) -> bool:
    """True iff no two copies overlap beyond the area tolerance.

    A density above 1 is rejected outright; otherwise every neighbor pair
    within reach is clipped and compared against EPS_GEOM * area(body).
    """
    if density(cfg).value > 1.0 + 1e-9:
        return False
    return not math.isinf(_config_scan(cfg, EPS_GEOM * cfg.body.area))


def total_overlap_area(cfg: DoubleLatticeConfig) -> float:
    """Sum of pairwise intersection areas over the canonical neighbor set.

    Zero exactly when the configuration is a valid packing (up to the same
    area tolerance used by is_valid_packing).
    """
    return _config_scan(cfg, None)


def _family_vertex_lists(cfg: DoubleLatticeConfig) -> list:
    verts = [(v[0], v[1]) for v in cfg.body.vertices]
    families = [verts]
    if cfg.mode == "double":
        qx, qy = cfg.reflection_center
        families.append([(2.0 * qx - x, 2.0 * qy - y) for x, y in verts])
    return families


def _window_offsets(cfg: DoubleLatticeConfig, sigma: float) -> list:
    """Per family: the vertex list and the lattice offsets whose copy fits
    strictly inside the open window (-sigma/2, sigma/2)^2."""
    half = 0.5 * sigma
    ux, uy = cfg.lattice.u
    vx, vy = cfg.lattice.v
    det = cfg.lattice.det
    out = []
    for verts in _family_vertex_lists(cfg):
        xs = [p[0] for p in verts]
        ys = [p[1] for p in verts]
        lox, hix = -half - min(xs), half - max(xs)
        loy, hiy = -half - min(ys), half - max(ys)
        offsets = []
        if hix > lox and hiy > loy:
            pcx, pcy = 0.5 * (lox + hix), 0.5 * (loy + hiy)
            reach = math.hypot(0.5 * (hix - lox), 0.5 * (hiy - loy))
            for a, b, wx, wy in _lattice_points_near(ux, uy, vx, vy, det, pcx, pcy, reach):
                if lox < wx < hix and loy < wy < hiy:
                    offsets.append((wx, wy))
        out.append((verts, offsets))
    return out


def window_count(cfg: DoubleLatticeConfig, sigma: float) -> WindowCount:
    """Number of copies lying entirely inside the open square of side sigma.

    Copies touching the window boundary do not count.  The window must exceed
    the body diameter, otherwise the count would be vacuously fragile.
    """
    if not (sigma > cfg.body.diameter):
        raise ValueError(
            f"window side {sigma} must exceed the body diameter {cfg.body.diameter:.6g}"
        )
    n = sum(len(offsets) for _, offsets in _window_offsets(cfg, sigma))
    return WindowCount(sigma=float(sigma), count=n)


def empirical_density(cfg: DoubleLatticeConfig, sigma: float) -> float:
    """Window estimate count * area / sigma^2 of the packing density."""
    n = window_count(cfg, sigma).count
    return n * cfg.body.area / (sigma * sigma)


def lemma_limit_check(cfg: DoubleLatticeConfig, sigmas: Sequence[float]) -> LemmaLimitReport:
    """Check the window densities against the boundary-layer envelope.

    For each window side the deviation |empirical - density| must stay below
    K / sigma with K = 4 * diameter(body) * density, the crude bound on how
    much a boundary layer one body thick can distort the count.  Violations
    raise LemmaEnvelopeError listing the offending window sides.
    """
    sig = [float(s) for s in sigmas]
    if not sig:
        raise ValueError("need at least one window side")
    if any(b <= a for a, b in zip(sig, sig[1:])):
        raise ValueError("window sides must be strictly increasing")
    dens = density(cfg).value
    k_body = 4.0 * cfg.body.diameter * dens
    rows = []
    bad = []
    for s in sig:
        n = window_count(cfg, s).count
        emp = n * cfg.body.area / (s * s)
        err = abs(emp - dens)
        envelope = k_body / s
        rows.append((s, n, emp, err, envelope))
        if err > envelope:
            bad.append(s)
    if bad:
        raise LemmaEnvelopeError(
            f"window densities violated the envelope at sigma = {bad}", offending=bad
        )
    return LemmaLimitReport(rows=tuple(rows), density=dens, envelope_constant=k_body)


_CATALOG = {
    "square-2d": KnownConstant(1.0, "exact", "1", "the square tiles the plane"),
    "disc-2d": KnownConstant(
        math.pi / math.sqrt(12.0), "exact", "pi/sqrt(12)", "hexagonal packing of discs"
    ),
    "convex-2d-floor": KnownConstant(
        math.sqrt(3.0) / 2.0,
        "lower-bound",
        "sqrt(3)/2",
        "double-lattice floor valid for every planar convex body",
    ),
    "unit-ball-3d": KnownConstant(
        math.pi / math.sqrt(18.0), "lower-bound", "pi/sqrt(18)", "face-centered cubic lattice"
    ),
    "regular-octahedron": KnownConstant(
        18.0 / 19.0, "lower-bound", "18/19", "best known lattice packing of the octahedron"
    ),
    "doubled-cone": KnownConstant(
        math.pi * math.sqrt(6.0) / 9.0, "lower-bound", "pi*sqrt(6)/9", "doubled cone over a disc"
    ),
    "tetrahedron": KnownConstant(
        0.856, "decimal-lower-bound", None, "reported lattice double packing of the tetrahedron"
    ),
}


def known_constant(body_id: str) -> KnownConstant:
    """Packing-density catalog lookup by body identifier.

    Identifiers of the form "cylinder-over:<id>" resolve to the constant of
    the base body: a cylinder packs exactly as densely as its cross-section.
    """
    if body_id.startswith("cylinder-over:"):
        base = known_constant(body_id.split(":", 1)[1])
        return KnownConstant(
            value=base.value,
            kind=base.kind,
            closed_form=base.closed_form,
            note=f"cylinder over {body_id.split(':', 1)[1]}: density equals the base body's",
        )
    try:
        return _CATALOG[body_id]
    except KeyError:
        raise UnknownBodyError(f"no catalog entry for body {body_id!r}") from None


class _BodyContext:
    """Precomputed geometry shared by every optimizer evaluation."""

    __slots__ = ("body", "verts", "area", "mx", "my", "rb", "diam", "bbox", "mult", "mode")

    def __init__(self, body: ConvexPolygon, mode: str):
        self.body = body
        self.verts = [(v[0], v[1]) for v in body.vertices]
        self.area = body.area
        self.mx, self.my = body.centroid
        self.rb = body.circumradius
        self.diam = body.diameter
        self.bbox = body.bbox
        self.mode = mode
        self.mult = 2.0 if mode == "double" else 1.0


def _raw_scan(ctx: _BodyContext, x, stop_above) -> float:
    """Overlap scan straight from a parameter vector, skipping dataclasses."""
    u1, v1, v2 = x[0], x[1], x[2]
    if ctx.mode == "double":
        qx, qy = x[3], x[4]
        refl = [(2.0 * qx - vx_, 2.0 * qy - vy_) for vx_, vy_ in ctx.verts]
        px, py = 2.0 * (ctx.mx - qx), 2.0 * (ctx.my - qy)
        return _overlap_scan(ctx.verts, ctx.rb, u1, 0.0, v1, v2, refl, px, py, stop_above)
    return _overlap_scan(ctx.verts, ctx.rb, u1, 0.0, v1, v2, None, 0.0, 0.0, stop_above)


def _objective(ctx: _BodyContext, x) -> float:
    """Negated penalized density, the quantity Nelder-Mead minimizes."""
    u1, v2 = x[0], x[2]
    floor = 1e-9 * ctx.diam
    if u1 < floor or v2 < floor:
        return 1e9 * (1.0 + max(floor - u1, floor - v2) / ctx.diam)
    dens = ctx.mult * ctx.area / (u1 * v2)
    if dens > _DENSITY_GUARD:
        # Graded push-back; also keeps the neighbor enumeration bounded.
        return 1e3 * dens
    ov = _raw_scan(ctx, x, None)
    return -(dens - OVERLAP_PENALTY * ov / ctx.area)


def _params_valid(ctx: _BodyContext, x) -> bool:
    u1, v2 = x[0], x[2]
    if u1 <= 0.0 or v2 <= 0.0:
        return False
    dens = ctx.mult * ctx.area / (u1 * v2)
    if dens > 1.0 + 1e-9 or dens > _DENSITY_GUARD:
        return False
    return not math.isinf(_raw_scan(ctx, x, EPS_GEOM * ctx.area))


def _scaled_params(ctx: _BodyContext, x, s: float):
    """Scale lattice and reflection offset about the body centroid.

    Every pairwise copy displacement scales by s under this map, and overlap
    along a ray from a convex-correlation maximum is non-increasing, so
    validity is monotone in s.  That is what makes the bisection in _polish
    sound.
    """
    if ctx.mode == "double":
        qx = ctx.mx + s * (x[3] - ctx.mx)
        qy = ctx.my + s * (x[4] - ctx.my)
        return (s * x[0], s * x[1], s * x[2], qx, qy)
    return (s * x[0], s * x[1], s * x[2])


def _polish(ctx: _BodyContext, x):
    """Rescale a candidate to the tightest valid configuration on its ray.

    Returns (params, density) or None when no scale makes the candidate
    valid (for instance a reflection center sitting on the centroid, where
    the two families overlap at every scale).
    """
    u1, v2 = x[0], x[2]
    if u1 <= 0.0 or v2 <= 0.0:
        return None
    dens = ctx.mult * ctx.area / (u1 * v2)
    if not math.isfinite(dens) or dens <= 0.0:
        return None
    # Below s_lo the density would exceed 1, so no valid scale exists there.
    s_lo = math.sqrt(dens)
    if _params_valid(ctx, _scaled_params(ctx, x, s_lo)):
        star = s_lo
    else:
        lo = s_lo
        hi = None
        step = s_lo
        for _ in range(600):
            step *= 1.02
            if _params_valid(ctx, _scaled_params(ctx, x, step)):
                hi = step
                break
            lo = step
        if hi is None:
            return None
        while hi / lo - 1.0 > 1e-13:
            mid = 0.5 * (lo + hi)
            if _params_valid(ctx, _scaled_params(ctx, x, mid)):
                hi = mid
            else:
                lo = mid
        star = hi
    scaled = _scaled_params(ctx, x, star)
    final_dens = ctx.mult * ctx.area / (scaled[0] * scaled[2])
    return (scaled, final_dens)


def _horizontal_chord(ctx: _BodyContext, y: float):
    """Endpoints of the body's chord at height y, or None outside."""
    verts = ctx.verts
    xs = []
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        if (y0 <= y < y1) or (y1 <= y < y0):
            xs.append(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
    if len(xs) < 2:
        return None
    return (min(xs), max(xs))


def _starting_points(ctx: _BodyContext, restarts: int, rng: np.random.Generator) -> list:
    """Deterministic seeded start list, stacked-box first.

    Structured templates put the reflection center on edge midpoints and on
    midpoints of horizontal chords (natural contact configurations), with the
    horizontal period set by the local width; jitter spreads the restarts
    around them.
    """
    x0b, y0b, x1b, y1b = ctx.bbox
    w = x1b - x0b
    h = y1b - y0b
    starts = []
    if ctx.mode == "double":
        starts.append((w, 0.0, 2.0 * h, 0.5 * (x0b + x1b), y1b))
        # Staggered-row start: the second family shifted by half a period
        # horizontally and one row vertically, the way discs settle.  Exact
        # for centrally symmetric bodies near the hexagonal optimum.
        row = 0.5 * math.sqrt(3.0) * h
        starts.append((w, 0.0, 2.0 * row, ctx.mx + 0.25 * w, ctx.my + 0.5 * row))
    else:
        starts.append((w, 0.0, h))

    templates = []
    verts = ctx.verts
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        mxe, mye = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        span = max(abs(x1 - x0), 0.3 * w)
        templates.append((span, mxe, mye))
    for frac in (0.25, 0.4, 0.5, 0.6, 0.75):
        y = y0b + frac * h
        chord = _horizontal_chord(ctx, y)
        if chord is not None and chord[1] - chord[0] > 0.05 * w:
            templates.append((chord[1] - chord[0], 0.5 * (chord[0] + chord[1]), y))

    for r in range(1, restarts):
        span, qx, qy = templates[(r - 1) % len(templates)]
        jit = rng.standard_normal(5)
        u1 = max(span * (1.0 + 0.25 * jit[0]), 0.05 * ctx.diam)
        v1 = 0.3 * ctx.diam * jit[1]
        v2 = max(h * rng.uniform(0.55, 1.15), 0.05 * ctx.diam)
        if ctx.mode == "double":
            starts.append(
                (u1, v1, v2, qx + 0.1 * ctx.diam * jit[2], qy + 0.1 * ctx.diam * jit[3])
            )
        else:
            starts.append((u1, v1, v2))
    return starts[:restarts]


def _config_from_params(ctx: _BodyContext, params) -> DoubleLatticeConfig:
    lattice = Lattice2(u=Point2(params[0], 0.0), v=Point2(params[1], params[2]))
    if ctx.mode == "double":
        center = Point2(params[3], params[4])
    else:
        center = Point2(ctx.mx, ctx.my)
    return DoubleLatticeConfig(
        body=ctx.body, lattice=lattice, reflection_center=center, mode=ctx.mode
    )


def optimize_double_lattice(body: ConvexPolygon, restarts: int = DEFAULT_RESTARTS,
                            iters: int = DEFAULT_ITERS, seed: int = 0,
                            mode: str = "double"):
    """Densest double-lattice packing found by seeded multistart local search.

    Five parameters in double mode: the horizontal lattice vector length u1
    (which pins the global rotation), the second basis vector (v1, v2) with
    v2 > 0, and the reflection center.  Single mode drops the center.  Each
    restart runs simplex-reflection descent on density minus a stiff overlap
    penalty, then the candidate is rescaled to the tightest valid
    configuration on its ray.  The best valid density wins; ties keep the
    earliest restart.  The stacked-bounding-box start is always valid, so the
    search cannot come back empty.

    Returns (config, PackingDensity).  Deterministic for a fixed seed.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    if mode not in ("double", "single"):
        raise ValueError(f"mode must be 'double' or 'single', got {mode!r}")
    ctx = _BodyContext(body, mode)
    rng = np.random.default_rng(seed)
    best_params = None
    best_dens = -1.0
    for x0 in _starting_points(ctx, restarts, rng):
        candidates = []
        direct = _polish(ctx, x0)
        if direct is not None:
            candidates.append(direct)
        res = minimize(
            lambda x: _objective(ctx, x),
            np.asarray(x0, dtype=float),
            method="Nelder-Mead",
            options={"maxiter": iters, "xatol": 1e-10, "fatol": 1e-12},
        )
        refined = _polish(ctx, res.x)
        if refined is not None:
            candidates.append(refined)
        for params, dens in candidates:
            if dens > best_dens:
                best_params = params
                best_dens = dens
        if best_dens >= 1.0 - 1e-5:
            break
    cfg = _config_from_params(ctx, best_params)
    return cfg, PackingDensity(best_dens)


def packing_to_svg(cfg: DoubleLatticeConfig, sigma: float) -> str:
    """SVG drawing of every copy inside the open window, one path per copy.

    Coordinates are the packing's own units; the window outline is a rect.
    """
    half = 0.5 * sigma
    stroke = 0.004 * sigma
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{-half:.10g} {-half:.10g} {sigma:.10g} {sigma:.10g}">',
        f'<rect x="{-half:.10g}" y="{-half:.10g}" width="{sigma:.10g}" '
        f'height="{sigma:.10g}" fill="none" stroke="#000000" '
        f'stroke-width="{stroke:.10g}"/>',
    ]
    fills = ("#5588bb", "#cc7755")
    for fam, (verts, offsets) in enumerate(_window_offsets(cfg, sigma)):
        for wx, wy in offsets:
            coords = " L ".join(f"{x + wx:.10g} {y + wy:.10g}" for x, y in verts)
            lines.append(
                f'<path d="M {coords} Z" fill="{fills[fam]}" fill-opacity="0.6" '
                f'stroke="#202020" stroke-width="{stroke:.10g}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def window_csv(cfg: DoubleLatticeConfig, sigmas: Sequence[float]) -> str:
    """CSV rows (sigma, count, empirical_density) at 17 significant digits."""
    lines = ["sigma,count,empirical_density"]
    for s in sigmas:
        n = window_count(cfg, float(s)).count
        emp = n * cfg.body.area / (float(s) * float(s))
        lines.append(f"{float(s):.17g},{n},{emp:.17g}")
    return "\n".join(lines) + "\n"
