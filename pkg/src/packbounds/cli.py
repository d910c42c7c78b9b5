"""Command-line pipelines: spectra, packings, bound tables, verification.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 verification failure.  Every command is deterministic for a fixed seed and
writes CSV without timestamps, so reruns are byte-identical.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import bounds as bnd
from . import packing as pk
from . import spectral as sp
from .errors import (
    ConfigError,
    ConvergenceFailureError,
    LemmaEnvelopeError,
    PackBoundsError,
    ResolutionTooCoarseError,
)
from .geometry import ConvexPolygon, regular_polygon

DEFAULT_TOL_FD = 0.02
DEFAULT_SIGMAS = "10,20,40"
DEFAULT_H = "1/64,1/128"


@dataclass
class ParsedDomain:
    """A domain under both views: spectral spec and packing body."""

    label: str
    spec: sp.DomainSpec
    polygon: Optional[ConvexPolygon]


def _parse_number(token: str) -> float:
    """Float literal or a/b fraction, as in '1/64'."""
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        value = float(num) / float(den)
    else:
        value = float(token)
    if not math.isfinite(value):
        raise ConfigError(f"non-finite numeric value {token!r}")
    return value


def _parse_number_list(text: str, what: str) -> list:
    try:
        values = [_parse_number(tok) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"could not parse {what} list {text!r}: {exc}") from None
    if not values:
        raise ConfigError(f"empty {what} list")
    return values


def load_polygon_file(path: str) -> ConvexPolygon:
    """Read a polygon document {"name": ..., "vertices": [[x, y], ...]}.

    Vertices are re-oriented counterclockwise on construction; anything
    non-convex or degenerate is a configuration error.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read polygon file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"polygon file {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ConfigError(f"polygon file {path} needs a 'vertices' field")
    verts = doc["vertices"]
    if not isinstance(verts, list):
        raise ConfigError(f"polygon file {path}: 'vertices' must be a list of [x, y] pairs")
    try:
        return ConvexPolygon(verts)
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"polygon file {path}: {exc}") from None


def parse_domain(text: str) -> ParsedDomain:
    """Resolve --domain: builtin:square, builtin:disc, builtin:regular:<m>,
    or a path to a polygon file."""
    if text == "builtin:square":
        centred = ConvexPolygon([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
        return ParsedDomain(label="square", spec=sp.DomainSpec.rectangle(1.0, 1.0),
                            polygon=centred)
    if text == "builtin:disc":
        return ParsedDomain(label="disc",
                            spec=sp.DomainSpec.disc((0.0, 0.0), 1.0), polygon=None)
    if text.startswith("builtin:regular:"):
        tail = text.split(":", 2)[2]
        try:
            m = int(tail)
        except ValueError:
            raise ConfigError(f"bad vertex count in {text!r}") from None
        if m < 3:
            raise ConfigError(f"regular polygon needs at least 3 vertices, got {m}")
        poly = regular_polygon(m, 1.0)
        return ParsedDomain(label=f"regular-{m}",
                            spec=sp.DomainSpec.from_polygon(poly), polygon=poly)
    if text.startswith("builtin:"):
        raise ConfigError(f"unknown builtin domain {text!r}")
    poly = load_polygon_file(text)
    return ParsedDomain(label=Path(text).stem,
                        spec=sp.DomainSpec.from_polygon(poly), polygon=poly)


def _parse_h_list(text: str) -> list:
    hs = sorted(set(_parse_number_list(text, "spacing")), reverse=True)
    if any(h <= 0.0 for h in hs):
        raise ConfigError("grid spacings must be positive")
    if len(hs) < 2:
        raise ConfigError("need at least two distinct spacings for extrapolation")
    return hs


def _parse_sigmas(text: str) -> list:
    sig = sorted(set(_parse_number_list(text, "window")))
    if any(s <= 0.0 for s in sig):
        raise ConfigError("window sides must be positive")
    return sig


def _parse_delta(text: str):
    """Return (source, payload): ('optimize', None), ('catalog', id),
    or ('explicit', value)."""
    if text == "optimize":
        return ("optimize", None)
    if text.startswith("catalog:"):
        return ("catalog", text.split(":", 1)[1])
    try:
        value = _parse_number(text)
    except (ConfigError, ValueError):
        raise ConfigError(f"bad --delta value {text!r}") from None
    if not (0.0 < value <= 1.0):
        raise ConfigError(f"explicit packing density must lie in (0, 1], got {value}")
    return ("explicit", value)


def _check_positive_int(value: int, what: str) -> int:
    if value < 1:
        raise ConfigError(f"{what} must be >= 1, got {value}")
    return int(value)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _resolve_delta(args, domain: ParsedDomain):
    """Compute (delta, provenance) from the --delta flag."""
    source, payload = _parse_delta(args.delta)
    if source == "optimize":
        if domain.polygon is None:
            raise ConfigError(
                f"--delta optimize needs a polygon domain, not {domain.label}"
            )
        cfg, dens = pk.optimize_double_lattice(
            domain.polygon, restarts=args.restarts, iters=args.iters, seed=args.seed
        )
        return dens.value, f"optimizer double-lattice seed={args.seed}", cfg
    if source == "catalog":
        kc = pk.known_constant(payload)
        return kc.value, f"catalog:{payload} ({kc.kind})", None
    return payload, "explicit", None


# ---------------------------------------------------------------- commands


def cmd_spectrum(args) -> int:
    domain = parse_domain(args.domain)
    k = _check_positive_int(args.k, "--k")
    hs = _parse_h_list(args.h)
    out = _out_dir(args)
    t0 = time.perf_counter()
    spectrum = sp.refine_extrapolate(domain.spec, k, hs, seed=args.seed)
    elapsed = time.perf_counter() - t0
    (out / "spectrum.csv").write_text(sp.spectrum_to_csv(spectrum))
    print(f"domain={domain.label} k={k} h={hs}")
    print(f"lambda_1={spectrum.eigenvalues[0]:.12g} "
          f"lambda_{k}={spectrum.eigenvalues[-1]:.12g}")
    print(f"wrote {out / 'spectrum.csv'} ({elapsed:.2f} s)")
    return 0


def cmd_packing(args) -> int:
    domain = parse_domain(args.domain)
    sigmas = _parse_sigmas(args.sigma)
    out = _out_dir(args)
    source, payload = _parse_delta(args.delta)
    if source == "optimize":
        if domain.polygon is None:
            raise ConfigError("packing needs a polygon domain; discs have no vertex list")
        t0 = time.perf_counter()
        cfg, dens = pk.optimize_double_lattice(
            domain.polygon, restarts=args.restarts, iters=args.iters, seed=args.seed
        )
        elapsed = time.perf_counter() - t0
        provenance = f"optimizer double-lattice seed={args.seed}"
        (out / "windows.csv").write_text(pk.window_csv(cfg, sigmas))
        (out / "packing.svg").write_text(pk.packing_to_svg(cfg, max(sigmas)))
        (out / "delta.txt").write_text(f"{dens.value:.17g}\n{provenance}\n")
        print(f"domain={domain.label} delta={dens.value:.12g} ({provenance})")
        print(f"wrote {out / 'windows.csv'}, {out / 'packing.svg'}, "
              f"{out / 'delta.txt'} ({elapsed:.2f} s)")
        return 0
    # Catalog or explicit density: record the value and its provenance.  No
    # drawing is produced because no concrete configuration is available.
    if source == "catalog":
        kc = pk.known_constant(payload)
        value, provenance = kc.value, f"catalog:{payload} ({kc.kind})"
    else:
        value, provenance = payload, "explicit"
    (out / "delta.txt").write_text(f"{value:.17g}\n{provenance}\n")
    print(f"domain={domain.label} delta={value:.12g} ({provenance}); "
          "no drawing without an optimized configuration")
    return 0


def cmd_bounds(args) -> int:
    n = _check_positive_int(args.n, "--n")
    k = _check_positive_int(args.k, "--k")
    source, payload = _parse_delta(args.delta)
    if source == "optimize":
        raise ConfigError("cmd bounds needs an explicit or catalog density, not optimize")
    delta = pk.known_constant(payload).value if source == "catalog" else payload
    if not (args.volume > 0.0):
        raise ConfigError(f"--volume must be positive, got {args.volume}")
    out = _out_dir(args)
    table = bnd.bound_table_csv(n, args.volume, delta, range(1, k + 1))
    (out / "bounds.csv").write_text(table)
    bi = bnd.BoundInputs(n=n, volume=args.volume, delta=delta, k=1)
    print(f"n={n} V={args.volume} delta={delta:.12g}")
    print(f"k=1: polya={bnd.polya_bound(bi).value:.6g} "
          f"li_yau={bnd.li_yau_bound(bi).value:.6g} "
          f"theorem1={bnd.theorem1_bound(bi).value:.6g}")
    print(f"wrote {out / 'bounds.csv'}")
    return 0


def cmd_verify(args) -> int:
    domain = parse_domain(args.domain)
    k = _check_positive_int(args.k, "--k")
    hs = _parse_h_list(args.h)
    if not (0.0 <= args.tol_fd < 1.0):
        raise ConfigError(f"--tol-fd must lie in [0, 1), got {args.tol_fd}")
    out = _out_dir(args)
    t0 = time.perf_counter()
    delta, provenance, _ = _resolve_delta(args, domain)
    spectrum = sp.refine_extrapolate(domain.spec, k, hs, seed=args.seed)
    elapsed = time.perf_counter() - t0
    volume = domain.spec.volume()
    slack = 1.0 - args.tol_fd

    lines = ["k,polya,li_yau,theorem1,corollary3,computed_lambda,pass_theorem1,pass_corollary3"]
    failures = []
    for i in range(1, k + 1):
        lam = spectrum.eigenvalues[i - 1]
        bi = bnd.BoundInputs(n=2, volume=volume, delta=delta, k=i)
        t1 = bnd.theorem1_bound(bi).value
        c3 = bnd.convex_planar_bound(volume, i).value
        ok_t1 = lam >= t1 * slack
        ok_c3 = lam >= c3 * slack
        if not (ok_t1 and ok_c3):
            failures.append(i)
        lines.append(
            f"{i},{bnd.polya_bound(bi).value:.17g},{bnd.li_yau_bound(bi).value:.17g},"
            f"{t1:.17g},{c3:.17g},{lam:.17g},{int(ok_t1)},{int(ok_c3)}"
        )
    (out / "verification.csv").write_text("\n".join(lines) + "\n")
    (out / "delta.txt").write_text(f"{delta:.17g}\n{provenance}\n")

    print(f"domain={domain.label} V={volume:.12g} delta={delta:.12g} ({provenance})")
    print(f"k<={k} tol_fd={args.tol_fd} h={hs} runtime={elapsed:.2f} s")
    if failures:
        print(f"FAIL: eigenvalue bound violated at k={failures}", file=sys.stderr)
        return 4
    print(f"all {k} rows pass; wrote {out / 'verification.csv'}")
    return 0


def cmd_report(args) -> int:
    out = _out_dir(args)
    pieces = []
    for name in ("delta.txt", "spectrum.csv", "bounds.csv", "windows.csv",
                 "verification.csv"):
        path = out / name
        if path.exists():
            pieces.append(f"== {name} ==\n{path.read_text().rstrip()}\n")
    svg = out / "packing.svg"
    if svg.exists():
        pieces.append(f"== packing.svg ==\n{len(svg.read_bytes())} bytes\n")
    body = "\n".join(pieces) if pieces else "no prior outputs found\n"
    (out / "report.txt").write_text(body)
    print(f"wrote {out / 'report.txt'} ({len(pieces)} sections)")
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packbounds",
        description="Eigenvalue spectra, double-lattice packings, and "
                    "packing-based eigenvalue bounds for planar domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, domain=True):
        if domain:
            p.add_argument("--domain", required=True,
                           help="builtin:square | builtin:disc | builtin:regular:<m> "
                                "| path to a polygon JSON file")
        p.add_argument("--seed", type=int, default=0, help="deterministic seed")
        p.add_argument("--out", default="out", help="output directory")

    p_spec = sub.add_parser("spectrum", help="extrapolated Dirichlet eigenvalues")
    add_common(p_spec)
    p_spec.add_argument("--k", type=int, required=True, help="number of eigenvalues")
    p_spec.add_argument("--h", default=DEFAULT_H,
                        help="comma list of grid spacings, e.g. 1/64,1/128")
    p_spec.set_defaults(func=cmd_spectrum)

    p_pack = sub.add_parser("packing", help="optimize a double-lattice packing")
    add_common(p_pack)
    p_pack.add_argument("--delta", default="optimize",
                        help="optimize | catalog:<id> | explicit value")
    p_pack.add_argument("--sigma", default=DEFAULT_SIGMAS,
                        help="comma list of window sides")
    p_pack.add_argument("--restarts", type=int, default=pk.DEFAULT_RESTARTS)
    p_pack.add_argument("--iters", type=int, default=pk.DEFAULT_ITERS)
    p_pack.set_defaults(func=cmd_packing)

    p_bounds = sub.add_parser("bounds", help="tabulate the eigenvalue bounds")
    p_bounds.add_argument("--n", type=int, default=2, help="dimension")
    p_bounds.add_argument("--volume", type=float, required=True, help="domain volume")
    p_bounds.add_argument("--delta", required=True,
                          help="packing density: value or catalog:<id>")
    p_bounds.add_argument("--k", type=int, required=True, help="largest index")
    p_bounds.add_argument("--seed", type=int, default=0)
    p_bounds.add_argument("--out", default="out")
    p_bounds.set_defaults(func=cmd_bounds)

    p_verify = sub.add_parser("verify",
                              help="check computed eigenvalues against the bounds")
    add_common(p_verify)
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.add_argument("--h", default=DEFAULT_H)
    p_verify.add_argument("--delta", default="optimize")
    p_verify.add_argument("--tol-fd", type=float, default=DEFAULT_TOL_FD,
                          dest="tol_fd", help="discretization slack, default 0.02")
    p_verify.add_argument("--restarts", type=int, default=pk.DEFAULT_RESTARTS)
    p_verify.add_argument("--iters", type=int, default=pk.DEFAULT_ITERS)
    p_verify.set_defaults(func=cmd_verify)

    p_rep = sub.add_parser("report", help="concatenate prior outputs")
    p_rep.add_argument("--out", default="out")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ResolutionTooCoarseError, ConvergenceFailureError, LemmaEnvelopeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except PackBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
