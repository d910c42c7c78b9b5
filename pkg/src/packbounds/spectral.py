"""Finite-difference Dirichlet spectra on uniform planar grids.

The discretization is the classical 5-point stencil on grid nodes that lie
strictly inside the domain; nodes outside carry an implicit zero value.  The
operator is symmetric positive definite with diagonal 4/h^2 and off-diagonal
-1/h^2 between adjacent interior nodes.

Eigenvalues converge at O(h^2) on aligned rectangles and more slowly where
the staircase boundary cuts the domain, which Richardson extrapolation over a
decreasing spacing list partially recovers.  Every solve is followed by an
explicit residual check, independent of the solver that produced the pairs.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .errors import ConvergenceFailureError, ResolutionTooCoarseError, SpectrumRangeError
from .geometry import ConvexPolygon, Point2

# Relative residual accepted from the eigensolver, |A v - lambda v| <= tol * lambda * |v|.
DEFAULT_TOL_EIG = 1e-8
# Problems at or below this dimension are solved densely.
DENSE_CUTOFF = 1500
# Matrix-solve budget for the iterative path, per requested eigenvalue.
SOLVE_BUDGET_PER_EIGENVALUE = 200


@dataclass(frozen=True)
class DomainSpec:
    """A planar domain: convex polygon, disc, or axis-aligned rectangle.

    Rectangles sit with their lower-left corner at the origin, which keeps
    grid nodes exactly on the boundary for commensurate spacings.
    """

    kind: str
    polygon: Optional[ConvexPolygon] = None
    center: Point2 = Point2(0.0, 0.0)
    radius: float = 0.0
    width: float = 0.0
    height: float = 0.0

    @staticmethod
    def from_polygon(p: ConvexPolygon) -> "DomainSpec":
        return DomainSpec(kind="polygon", polygon=p)

    @staticmethod
    def disc(center, radius: float) -> "DomainSpec":
        if not (radius > 0.0) or not math.isfinite(radius):
            raise ValueError("disc radius must be positive and finite")
        return DomainSpec(kind="disc", center=Point2(center[0], center[1]), radius=float(radius))

    @staticmethod
    def rectangle(width: float, height: float) -> "DomainSpec":
        if not (width > 0.0 and height > 0.0):
            raise ValueError("rectangle sides must be positive")
        return DomainSpec(kind="rectangle", width=float(width), height=float(height))

    def volume(self) -> float:
        if self.kind == "polygon":
            return self.polygon.area
        if self.kind == "disc":
            return math.pi * self.radius ** 2
        return self.width * self.height

    def diameter(self) -> float:
        if self.kind == "polygon":
            return self.polygon.diameter
        if self.kind == "disc":
            return 2.0 * self.radius
        return math.hypot(self.width, self.height)

    def bbox(self) -> tuple:
        if self.kind == "polygon":
            return self.polygon.bbox
        if self.kind == "disc":
            cx, cy = self.center
            r = self.radius
            return (cx - r, cy - r, cx + r, cy + r)
        return (0.0, 0.0, self.width, self.height)

    def strictly_inside(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized strict interior test for flat coordinate arrays."""
        if self.kind == "disc":
            cx, cy = self.center
            return (xs - cx) ** 2 + (ys - cy) ** 2 < self.radius ** 2
        if self.kind == "rectangle":
            return (xs > 0.0) & (xs < self.width) & (ys > 0.0) & (ys < self.height)
        inside = np.ones(xs.shape, dtype=bool)
        verts = self.polygon.vertices
        n = len(verts)
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            inside &= (x1 - x0) * (ys - y0) - (y1 - y0) * (xs - x0) > 0.0
        return inside


@dataclass(frozen=True, eq=False)
class GridDomain:
    """Boolean interior mask on a uniform grid.

    mask[i, j] marks the node at origin + (i*h, j*h) as interior.
    """

    h: float
    origin: Point2
    mask: np.ndarray

    @property
    def interior_count(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Assembled symmetric operator with its grid of origin."""

    dimension: int
    h: float
    matrix: sparse.csr_matrix
    grid: Optional[GridDomain] = None


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with their verified relative residuals."""

    eigenvalues: tuple
    residuals: tuple
    grid: Optional[GridDomain]
    k_requested: int

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        if any(not (v > 0.0) for v in vals):
            raise ValueError("Dirichlet eigenvalues must be strictly positive")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise ValueError("eigenvalues must be non-decreasing")
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "residuals", tuple(float(r) for r in self.residuals))


def rasterize(d: DomainSpec, h: float) -> GridDomain:
    """Interior mask of the domain at spacing h.

    A node enters the mask iff it lies strictly inside the domain, so boundary
    nodes of aligned rectangles are excluded exactly.  Raises
    ResolutionTooCoarseError when h is not well below the domain diameter or
    when no node lands inside.
    """
    if not (h > 0.0) or not math.isfinite(h):
        raise ValueError(f"spacing must be positive and finite, got {h}")
    diam = d.diameter()
    if h >= diam / 8.0:
        raise ResolutionTooCoarseError(
            f"spacing {h} too coarse for a domain of diameter {diam:.6g}"
        )
    x0, y0, x1, y1 = d.bbox()
    nx = int(math.floor((x1 - x0) / h)) + 2
    ny = int(math.floor((y1 - y0) / h)) + 2
    xs = x0 + h * np.arange(nx)
    ys = y0 + h * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    mask = d.strictly_inside(gx.ravel(), gy.ravel()).reshape(nx, ny)
    if not mask.any():
        raise ResolutionTooCoarseError(f"no interior node at spacing {h}")
    return GridDomain(h=float(h), origin=Point2(x0, y0), mask=mask)


def assemble_laplacian(g: GridDomain) -> SparseOperator:
    """5-point Dirichlet Laplacian over the interior nodes of the mask."""
    mask = g.mask
    n = int(mask.sum())
    ids = np.full(mask.shape, -1, dtype=np.int64)
    ids[mask] = np.arange(n)
    inv_h2 = 1.0 / (g.h * g.h)

    pair_x = mask[:-1, :] & mask[1:, :]
    ax = ids[:-1, :][pair_x]
    bx = ids[1:, :][pair_x]
    pair_y = mask[:, :-1] & mask[:, 1:]
    ay = ids[:, :-1][pair_y]
    by = ids[:, 1:][pair_y]

    diag_idx = np.arange(n)
    rows = np.concatenate([diag_idx, ax, bx, ay, by])
    cols = np.concatenate([diag_idx, bx, ax, by, ay])
    vals = np.concatenate(
        [
            np.full(n, 4.0 * inv_h2),
            np.full(ax.size * 2 + ay.size * 2, -inv_h2),
        ]
    )
    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return SparseOperator(dimension=n, h=g.h, matrix=matrix, grid=g)


def _verified_spectrum(op: SparseOperator, vals: np.ndarray, vecs: np.ndarray,
                       k: int, tol_eig: float) -> Spectrum:
    """Sort pairs, check residuals explicitly, and package the result."""
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    resid = op.matrix @ vecs - vecs * vals[np.newaxis, :]
    rnorm = np.linalg.norm(resid, axis=0)
    vnorm = np.linalg.norm(vecs, axis=0)
    rel = rnorm / (np.abs(vals) * vnorm)
    if np.any(rel > tol_eig):
        worst = float(rel.max())
        raise ConvergenceFailureError(
            f"eigensolver residual {worst:.3e} exceeds tolerance {tol_eig:.1e}",
            residuals=rel.tolist(),
        )
    return Spectrum(
        eigenvalues=tuple(float(v) for v in vals[:k]),
        residuals=tuple(float(r) for r in rel[:k]),
        grid=op.grid,
        k_requested=k,
    )


def lowest_eigenvalues(op: SparseOperator, k: int,
                       tol_eig: float = DEFAULT_TOL_EIG, seed: int = 0) -> Spectrum:
    """k algebraically smallest eigenvalues of the assembled operator.

    Small problems (or k near the dimension) go through a dense symmetric
    solve; larger ones use shift-invert Lanczos iteration at sigma = 0 with a
    deterministic seeded start vector.  In both cases the residual check in
    _verified_spectrum is what certifies the output.
    """
    n = op.dimension
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= {n}, got k={k}")
    dense = n <= DENSE_CUTOFF or k > n - 2
    if dense:
        vals, vecs = scipy.linalg.eigh(op.matrix.toarray())
        return _verified_spectrum(op, vals[:k], vecs[:, :k], k, tol_eig)
    v0 = np.random.default_rng(seed).standard_normal(n)
    try:
        vals, vecs = spla.eigsh(
            op.matrix,
            k=k,
            sigma=0.0,
            which="LM",
            v0=v0,
            maxiter=SOLVE_BUDGET_PER_EIGENVALUE * k,
        )
    except spla.ArpackNoConvergence as exc:
        partial = np.asarray(exc.eigenvalues, dtype=float)
        raise ConvergenceFailureError(
            f"iteration budget exhausted with {partial.size} of {k} pairs converged",
            residuals=(),
        ) from exc
    return _verified_spectrum(op, vals, vecs, k, tol_eig)


def counting_function(s: Spectrum, x: float) -> int:
    """Number of eigenvalues <= x among the resolved ones.

    Only the resolved range is queryable: x beyond the largest computed
    eigenvalue raises SpectrumRangeError rather than returning a lie.
    """
    if x < 0.0:
        raise ValueError(f"spectral parameter must be >= 0, got {x}")
    if not s.eigenvalues:
        raise SpectrumRangeError("empty spectrum")
    if x > s.eigenvalues[-1]:
        raise SpectrumRangeError(
            f"query at {x:.6g} beyond the resolved range (last eigenvalue "
            f"{s.eigenvalues[-1]:.6g})"
        )
    return bisect_right(s.eigenvalues, x)


def refine_extrapolate(d: DomainSpec, k: int, h_list: Sequence[float],
                       tol_eig: float = DEFAULT_TOL_EIG, seed: int = 0) -> Spectrum:
    """Richardson-extrapolated spectrum over a strictly decreasing spacing list.

    Each solve pairs eigenvalues by index; consecutive levels are combined
    with the O(h^2)-eliminating rule (r^2 * fine - coarse) / (r^2 - 1) where
    r is the spacing ratio, repeated until one sequence remains.  Residuals
    and the grid reference are those of the finest level.  Extrapolated
    values of a near-degenerate pair can land out of order by a hair, so the
    final sequence is sorted before packaging.
    """
    hs = [float(h) for h in h_list]
    if len(hs) < 2:
        raise ValueError("need at least two spacings to extrapolate")
    if any(b >= a for a, b in zip(hs, hs[1:])):
        raise ValueError("spacings must be strictly decreasing")
    levels = []
    finest = None
    for h in hs:
        grid = rasterize(d, h)
        op = assemble_laplacian(grid)
        s = lowest_eigenvalues(op, k, tol_eig=tol_eig, seed=seed)
        levels.append((h, np.array(s.eigenvalues)))
        finest = s
    while len(levels) > 1:
        reduced = []
        for (h_coarse, v_coarse), (h_fine, v_fine) in zip(levels, levels[1:]):
            r2 = (h_coarse / h_fine) ** 2
            reduced.append((h_fine, (r2 * v_fine - v_coarse) / (r2 - 1.0)))
        levels = reduced
    final = np.sort(levels[0][1])
    return Spectrum(
        eigenvalues=tuple(float(v) for v in final),
        residuals=finest.residuals,
        grid=finest.grid,
        k_requested=k,
    )


def spectrum_to_csv(s: Spectrum) -> str:
    """CSV rows (index, eigenvalue, residual) at 17 significant digits."""
    lines = ["index,eigenvalue,residual"]
    for i, (v, r) in enumerate(zip(s.eigenvalues, s.residuals), start=1):
        lines.append(f"{i},{v:.17g},{r:.17g}")
    return "\n".join(lines) + "\n"
