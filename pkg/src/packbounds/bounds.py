"""Closed-form eigenvalue bounds and packing-density floors.

All quantities refer to the Dirichlet Laplacian on a domain of volume V in
n dimensions.  The Weyl constant is (2*pi)^2 / omega_n^(2/n) with omega_n the
unit-ball volume, so the classical asymptote reads lambda_k ~ C_n (k/V)^(2/n).

The gamma and zeta evaluations are local (Lanczos approximation and
Euler-Maclaurin summation): the handful of constants needed here does not
justify a wider dependency, and both are checked against library oracles in
the test suite to relative 1e-12.
"""

import math
from dataclasses import dataclass

from .errors import ConfigError

# Lanczos coefficients, g = 7, 9 terms.  Relative error below 1e-13 on the
# real axis for the arguments used here (z >= 1).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Bernoulli numbers B_2 .. B_16 for the Euler-Maclaurin tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)


def gamma_fn(x: float) -> float:
    """Gamma function for real x > 0 via the Lanczos approximation."""
    if not (x > 0.0) or not math.isfinite(x):
        raise ValueError("gamma_fn requires finite x > 0")
    if x < 0.5:
        # Reflection keeps the approximation in its accurate range.
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def zeta_fn(s: float) -> float:
    """Riemann zeta for real s > 1 by Euler-Maclaurin summation."""
    if not (s > 1.0) or not math.isfinite(s):
        raise ValueError("zeta_fn requires finite s > 1")
    n_cut = 24
    acc = sum(k ** (-s) for k in range(1, n_cut))
    acc += n_cut ** (1.0 - s) / (s - 1.0)
    acc += 0.5 * n_cut ** (-s)
    # Correction terms B_2j / (2j)! * s (s+1) ... (s+2j-2) * N^(-s-2j+1).
    rising = s
    fact = 2.0
    power = float(n_cut) ** (-s - 1.0)
    inv_n2 = 1.0 / (n_cut * n_cut)
    for j, b in enumerate(_BERNOULLI, start=1):
        acc += b / fact * rising * power
        two_j = 2 * j
        rising *= (s + two_j - 1.0) * (s + two_j)
        fact *= (two_j + 1.0) * (two_j + 2.0)
        power *= inv_n2
    return acc


def unit_ball_volume(n: int) -> float:
    """Volume of the n-dimensional unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    return math.pi ** (0.5 * n) / gamma_fn(0.5 * n + 1.0)


def weyl_constant(n: int) -> float:
    """Leading constant of the eigenvalue asymptote: (2*pi)^2 / omega_n^(2/n)."""
    return (2.0 * math.pi) ** 2 / unit_ball_volume(n) ** (2.0 / n)


@dataclass(frozen=True)
class BoundInputs:
    """Shared inputs for the pointwise bounds: dimension, volume, packing
    density delta in (0, 1], and eigenvalue index k >= 1."""

    n: int
    volume: float
    delta: float
    k: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"dimension must be a positive integer, got {self.n}")
        if not (self.volume > 0.0) or not math.isfinite(self.volume):
            raise ConfigError(f"volume must be positive and finite, got {self.volume}")
        if not (0.0 < self.delta <= 1.0):
            raise ConfigError(f"packing density must lie in (0, 1], got {self.delta}")
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"eigenvalue index must be a positive integer, got {self.k}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class BoundResult:
    """A bound value together with the name of the inequality it came from."""

    value: float
    kind: str


def polya_bound(inputs: BoundInputs) -> BoundResult:
    """Tiling-domain lower bound C_n (k/V)^(2/n); delta is ignored."""
    v = weyl_constant(inputs.n) * (inputs.k / inputs.volume) ** (2.0 / inputs.n)
    return BoundResult(v, "polya")


def li_yau_bound(inputs: BoundInputs) -> BoundResult:
    """Unconditional lower bound n/(n+2) * C_n (k/V)^(2/n); delta is ignored."""
    n = inputs.n
    v = (n / (n + 2.0)) * weyl_constant(n) * (inputs.k / inputs.volume) ** (2.0 / n)
    return BoundResult(v, "li_yau")


def theorem1_bound(inputs: BoundInputs) -> BoundResult:
    """Packing-based lower bound C_n (delta * k / V)^(2/n)."""
    v = weyl_constant(inputs.n) * (inputs.delta * inputs.k / inputs.volume) ** (2.0 / inputs.n)
    return BoundResult(v, "theorem1")


def convex_planar_bound(volume: float, k: int) -> BoundResult:
    """Planar convex-domain bound 2*sqrt(3)*pi*k / V.

    This is the packing-based bound with the universal double-lattice density
    floor sqrt(3)/2 substituted for delta in dimension 2.
    """
    if not (volume > 0.0) or not math.isfinite(volume):
        raise ConfigError(f"volume must be positive and finite, got {volume}")
    if k < 1:
        raise ConfigError(f"eigenvalue index must be >= 1, got {k}")
    return BoundResult(2.0 * math.sqrt(3.0) * math.pi * k / volume, "corollary3")


def counting_upper_bound(n: int, volume: float, delta: float, x: float) -> float:
    """Upper bound (V/delta) * L_n * x^(n/2) on the eigenvalue counting
    function, with L_n = omega_n / (2*pi)^n.

    Exact inverse of the packing-based pointwise bound: evaluating it at
    theorem1_bound(k) returns k.
    """
    if not (0.0 < delta <= 1.0):
        raise ConfigError(f"packing density must lie in (0, 1], got {delta}")
    if not (volume > 0.0):
        raise ConfigError(f"volume must be positive, got {volume}")
    if x < 0.0:
        raise ConfigError(f"spectral parameter must be >= 0, got {x}")
    l_n = unit_ball_volume(n) / (2.0 * math.pi) ** n
    return (volume / delta) * l_n * x ** (0.5 * n)


def dominates_li_yau(n: int, delta: float) -> bool:
    """True iff the packing-based bound is strictly stronger than Li-Yau,
    i.e. delta^(2/n) > n/(n+2).  Equality counts as not dominating."""
    if n < 1:
        raise ConfigError(f"dimension must be >= 1, got {n}")
    if not (0.0 < delta <= 1.0):
        raise ConfigError(f"packing density must lie in (0, 1], got {delta}")
    return delta ** (2.0 / n) > n / (n + 2.0)


def general_dimension_floors(n: int, kind: str, c: float | None = None) -> float:
    """Classical lattice-packing density floors for dimension n >= 2.

    kind "minkowski-hlawka" gives zeta(n) / 2^(n-1).  kind "schmidt" gives
    c * n^(3/2) / 4^n and requires the caller to supply the constant c, which
    the source literature does not pin down numerically.
    """
    if n < 2:
        raise ConfigError(f"density floors require n >= 2, got {n}")
    if kind == "minkowski-hlawka":
        return zeta_fn(float(n)) / 2.0 ** (n - 1)
    if kind == "schmidt":
        if c is None:
            raise ConfigError("the schmidt floor needs an explicit constant c")
        if not (c > 0.0):
            raise ConfigError(f"schmidt constant must be positive, got {c}")
        return c * n ** 1.5 / 4.0 ** n
    raise ConfigError(f"unknown floor kind {kind!r}")


def bound_table_csv(n: int, volume: float, delta: float, ks, lambdas=None) -> str:
    """CSV table of the bounds for k in ks, 17 significant digits.

    Column order: k, polya, li_yau, theorem1, corollary3, computed_lambda.
    The corollary3 column is filled only for n = 2; computed_lambda only when
    eigenvalues are supplied.
    """
    rows = ["k,polya,li_yau,theorem1,corollary3,computed_lambda"]
    for i, k in enumerate(ks):
        bi = BoundInputs(n=n, volume=volume, delta=delta, k=int(k))
        cells = [
            str(int(k)),
            f"{polya_bound(bi).value:.17g}",
            f"{li_yau_bound(bi).value:.17g}",
            f"{theorem1_bound(bi).value:.17g}",
            f"{convex_planar_bound(volume, int(k)).value:.17g}" if n == 2 else "",
            f"{lambdas[i]:.17g}" if lambdas is not None else "",
        ]
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
