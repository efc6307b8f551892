"""Command-line interface.

Subcommands:

* ``eval``   -- evaluate a kernel (basic / elliptic / trig / sine) or the
               Fourier matrix at given points.
* ``verify`` -- run randomized identity suites and report residuals.
* ``scan``   -- convergence scans (tail depth, trig q-sweep, sine q-sweep).
* ``sample`` -- draw from the determinantal process on a lattice window.

Complex values are accepted as ``re+imi`` / ``re-imi`` / ``[re,im]`` /
plain reals, and always emitted as ``[re, im]`` pairs.  With ``--out`` the
results are written to the file and a ``<file>.manifest.json`` sidecar
records the fully resolved parameters.  Exit codes: 0 success, 1
verification failure, 2 invalid parameters, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections import Counter

import numpy as np

from . import __version__
from .backend import backend_name
from .dpp import SampleConfig, Window, correlation, sample_window
from .fourier import fourier_closed, fourier_lemma_form, fourier_series, projection_report
from .kernels import (
    LatticePoint,
    QContext,
    basic_kernel,
    elliptic_kernel,
    validate_pair,
    validate_quadruple,
)
from .limits import (
    RegimeI,
    RegimeII,
    TrigParams,
    sine_kernel,
    sine_limit_scan,
    tail_limit_scan,
    trig_kernel,
    trig_limit_scan,
)
from .qhyper import Phi21Params, heine_rhs, phi21, qdiff_residual, watson_rhs
from .qspecial import (
    DEFAULT_TOL,
    DomainError,
    QParam,
    Tolerance,
    qpoch_inf,
    theta,
    theta3,
    theta_deriv,
    jacobi_imaginary_rhs,
)
from .verify import (
    diagonal_identity_residual,
    draw_context,
    draw_pair,
    draw_quadruple,
    fourier_equality_residual,
    logderiv_sum_residual,
    ramanujan_sum_residual,
    trace_identity_residual,
    weierstrass_residual,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def parse_complex(s: str) -> complex:
    """Accept 're+imi', 're-imi', '[re,im]', or a plain real."""
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        parts = s[1:-1].split(",")
        if len(parts) != 2:
            raise DomainError(f"bad complex literal {s!r}")
        return complex(float(parts[0]), float(parts[1]))
    if s.endswith("i"):
        return complex(s[:-1].replace("i", "j") + "j")
    return complex(float(s), 0.0)


def emit_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def parse_point(s: str) -> LatticePoint:
    """Lattice point literal 'SIGN:K', e.g. '+:3' or '-:0'."""
    s = s.strip()
    try:
        sign_s, k_s = s.split(":")
        sign = {"+": 1, "-": -1, "+1": 1, "-1": -1}[sign_s.strip()]
        return LatticePoint(sign, int(k_s))
    except (ValueError, KeyError) as exc:
        raise DomainError(f"bad lattice point {s!r}; expected '+:k' or '-:k'") from exc


def _context(args) -> QContext:
    return QContext(QParam(args.q), args.zeta_plus, args.zeta_minus)


def _rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in r.items()})
    return buf.getvalue()


def _output(args, payload: dict, rows: list[dict]) -> None:
    if args.format == "csv":
        text = _rows_to_csv(rows)
    else:
        text = json.dumps(payload, indent=2, default=str) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "tool": "qtail",
            "version": __version__,
            "backend": backend_name(),
            "command": sys.argv[1:],
            "params": {k: (emit_complex(v) if isinstance(v, complex) else v)
                       for k, v in vars(args).items() if k != "func"},
        }
        with open(args.out + ".manifest.json", "w") as f:
            json.dump(manifest, f, indent=2, default=str)
            f.write("\n")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    tol = Tolerance(rel_tol=args.tol) if args.tol else DEFAULT_TOL
    kind = args.kind
    if kind in ("basic", "elliptic", "fourier"):
        ctx = _context(args)
    if kind == "basic":
        quad = validate_quadruple(args.alpha, args.beta, args.gamma, args.delta, ctx)
        x, y = parse_point(args.x), parse_point(args.y)
        r = basic_kernel(x, y, quad, ctx, tol)
        value = r.value
    elif kind == "elliptic":
        pair = validate_pair(args.gamma, args.delta, ctx)
        x, y = parse_point(args.x), parse_point(args.y)
        r = elliptic_kernel(x, y, pair, ctx, tol)
        value = r.value
    elif kind == "fourier":
        pair = validate_pair(args.gamma, args.delta, ctx)
        M = fourier_closed(args.eta, pair, ctx, tol)
        payload = {
            "kind": "fourier",
            "eta": args.eta,
            "matrix": [[emit_complex(M.pp), emit_complex(M.pm)],
                       [emit_complex(M.mp), emit_complex(M.mm)]],
        }
        rows = [{"entry": e, "value": emit_complex(v)}
                for e, v in (("pp", M.pp), ("pm", M.pm), ("mp", M.mp), ("mm", M.mm))]
        _output(args, payload, rows)
        return EXIT_OK
    elif kind == "trig":
        tp = TrigParams(args.c, args.d)
        value = complex(trig_kernel((args.i, args.u), (args.j, args.v), tp))
    elif kind == "sine":
        value = complex(sine_kernel(args.m, args.n, args.phi))
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown kind {kind}")
    payload = {"kind": kind, "value": emit_complex(value)}
    _output(args, payload, [{"kind": kind, "value": emit_complex(value)}])
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _suite_theta(rng, draws, tol):
    worst = 0.0
    worst_fd = 0.0
    for _ in range(draws):
        q = QParam(float(rng.uniform(0.3, 0.9)))
        z = complex(rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0, 2 * math.pi)))
        th = theta(z, q, tol).value
        # quasi-periodicity th(qz) = -th(z)/z
        r1 = abs(theta(q.q * z, q, tol).value + th / z) / max(abs(th / z), 1e-30)
        # inversion th(q/z) = th(z)
        r2 = abs(theta(q.q / z, q, tol).value - th) / max(abs(th), 1e-30)
        # triple product: theta3(w; q) = (q; q)_inf theta_q(-sqrt(q) w);
        # normalized by the all-positive term scale, since off the
        # positive axis the sum itself can be exponentially smaller than
        # its terms and the difference is then pure cancellation noise
        lhs = theta3(z, q, tol).value
        rhs = qpoch_inf(q.q, q, tol).value * theta(-math.sqrt(q.q) * z, q, tol).value
        scale3 = abs(theta3(abs(z), q, tol).value)
        r3 = abs(lhs - rhs) / max(abs(lhs), abs(rhs), scale3, 1e-30)
        # imaginary transformation of theta3, checked at moderate q where
        # the direct series is well conditioned (the transformed side is
        # the stable route as q -> 1, so there is nothing to compare
        # against there)
        q5 = QParam(float(rng.uniform(0.3, 0.55)))
        zi = cmath_safe_unit(rng)
        lhs = theta3(zi, q5, tol).value
        rhs = jacobi_imaginary_rhs(zi, q5, tol).value
        r5 = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        worst = max(worst, r1, r2, r3, r5)
        # derivative at a lattice point against a centered difference
        n = int(rng.integers(-2, 3))
        zn = q.q ** n
        h = 1e-6 * zn
        num = (theta(zn + h, q, tol).value - theta(zn - h, q, tol).value) / (2 * h)
        dv = theta_deriv(zn, q, tol).value
        worst_fd = max(worst_fd, abs(num - dv) / max(abs(dv), 1e-30))
    return [("theta_identities", worst), ("theta_derivative_fd", worst_fd)]


def cmath_safe_unit(rng) -> complex:
    # stay away from the negative real axis, where theta3 has its zeros
    # and both sides of the transformation become tiny differences
    phi = float(rng.uniform(-2.2, 2.2))
    rho = float(rng.uniform(0.5, 1.5))
    return rho * complex(math.cos(phi), math.sin(phi))


def _suite_hyper(rng, draws, tol):
    worst_q = worst_h = worst_w = 0.0
    for _ in range(draws):
        q = QParam(float(rng.uniform(0.3, 0.8)))

        def rc(lo=0.2, hi=1.5):
            return complex(rng.uniform(lo, hi) * np.exp(1j * rng.uniform(0, 2 * math.pi)))

        try:
            p = Phi21Params(rc(), rc(), rc(0.3, 1.2), q)
        except DomainError:
            continue
        z = complex(rng.uniform(1.2, 3.0) * np.exp(1j * rng.uniform(0.05, 2 * math.pi - 0.05)))
        try:
            res, scale = qdiff_residual(p, z, tol)
            worst_q = max(worst_q, res / max(scale, 1e-30))
        except ArithmeticError:
            pass
        zs = complex(rng.uniform(0.1, 0.6) * np.exp(1j * rng.uniform(0, 2 * math.pi)))
        f = phi21(p, zs, tol).value
        h = heine_rhs(p, zs, tol).value
        worst_h = max(worst_h, abs(f - h) / max(abs(f), abs(h), 1e-30))
        try:
            w = watson_rhs(p, z, tol).value
            fz = phi21(p, z, tol).value
            worst_w = max(worst_w, abs(fz - w) / max(abs(fz), abs(w), 1e-30))
        except ArithmeticError:
            pass
    return [("qdiff_equation", worst_q),
            ("heine_transform", worst_h),
            ("watson_transform", worst_w)]


def _suite_weierstrass(rng, draws, tol):
    worst = 0.0
    for _ in range(draws):
        q = QParam(float(rng.uniform(0.3, 0.9)))

        def rc():
            return complex(rng.uniform(0.3, 2.0) * np.exp(1j * rng.uniform(0, 2 * math.pi)))

        worst = max(worst, weierstrass_residual(rc(), rc(), rc(), rc(), q, tol).rel_residual)
    return [("weierstrass_three_term", worst)]


def _suite_sums(rng, draws, tol):
    wr = wl = wd = 0.0
    for _ in range(draws):
        p = float(rng.uniform(0.3, 0.8))
        a = complex(rng.uniform(p * 1.1, 0.9 / p) * np.exp(1j * rng.uniform(0, 2 * math.pi)))
        z = complex(rng.uniform(0.5, 1.5) * np.exp(1j * rng.uniform(0, 2 * math.pi)))
        wr = max(wr, ramanujan_sum_residual(a, z, p, tol).rel_residual)
        z2 = complex(rng.uniform(1.05 * p, 0.95 / p) * np.exp(1j * rng.uniform(0, 2 * math.pi)))
        wl = max(wl, logderiv_sum_residual(z2, p, tol).rel_residual)
        ctx = draw_context(rng, q_range=(0.3, 0.8))
        c, d = sorted(rng.uniform(0.3, 1.2, size=2))
        if d - c > 0.03:
            wd = max(wd, diagonal_identity_residual(float(c), float(d), ctx, tol).rel_residual)
    return [("bilateral_secant_sum", wr),
            ("bilateral_logderiv_sum", wl),
            ("diagonal_logderiv_product", wd)]


def _suite_fourier(rng, draws, tol):
    we = wt = 0.0
    for _ in range(draws):
        ctx = draw_context(rng, q_range=(0.3, 0.85))
        pair = draw_pair(rng, ctx)
        eta = float(rng.uniform(-math.pi, math.pi))
        we = max(we, fourier_equality_residual(eta, pair, ctx, tol).rel_residual)
        wt = max(wt, trace_identity_residual(eta, pair, ctx, tol).rel_residual)
    return [("fourier_three_route_equality", we),
            ("fourier_trace_one", wt)]


def _suite_projection(rng, draws, tol):
    worst = {"hermitian_residual": 0.0, "det_residual": 0.0,
             "trace_residual": 0.0, "idempotent_residual": 0.0}
    for _ in range(draws):
        ctx = draw_context(rng, q_range=(0.3, 0.85))
        pair = draw_pair(rng, ctx)
        eta = float(rng.uniform(-math.pi, math.pi))
        rep = projection_report(eta, pair, ctx, tol)
        for k in worst:
            worst[k] = max(worst[k], rep[k])
    return [(k, v) for k, v in worst.items()]


SUITES = {
    "theta": _suite_theta,
    "hyper": _suite_hyper,
    "weierstrass": _suite_weierstrass,
    "sums": _suite_sums,
    "fourier": _suite_fourier,
    "projection": _suite_projection,
}

SUITE_THRESH = {
    "theta_identities": 1e-10,
    "theta_derivative_fd": 1e-8,
    "qdiff_equation": 1e-9,
    "heine_transform": 1e-8,
    "watson_transform": 1e-8,
    "weierstrass_three_term": 1e-10,
    "bilateral_secant_sum": 1e-8,
    "bilateral_logderiv_sum": 1e-8,
    "diagonal_logderiv_product": 1e-8,
    "fourier_three_route_equality": 1e-8,
    "fourier_trace_one": 1e-8,
    "hermitian_residual": 1e-10,
    "det_residual": 1e-10,
    "trace_residual": 1e-10,
    "idempotent_residual": 1e-9,
}


def cmd_verify(args) -> int:
    tol = Tolerance(rel_tol=args.tol) if args.tol else DEFAULT_TOL
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rng = np.random.default_rng(args.seed)
    rows = []
    ok = True
    for name in names:
        for check, worst in SUITES[name](rng, args.draws, tol):
            thresh = SUITE_THRESH[check]
            passed = worst < thresh
            ok = ok and passed
            rows.append({"suite": name, "check": check, "max_residual": worst,
                         "threshold": thresh, "passed": passed})
            print(f"{'PASS' if passed else 'FAIL'} {name}/{check}: "
                  f"max residual {worst:.3e} (threshold {thresh:.1e})")
    payload = {"schema_version": SCHEMA_VERSION, "seed": args.seed,
               "draws": args.draws, "results": rows}
    if args.out:
        _output(args, payload, rows)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def cmd_scan(args) -> int:
    tol = Tolerance(rel_tol=args.tol) if args.tol else DEFAULT_TOL
    if args.which == "tail":
        ctx = _context(args)
        quad = validate_quadruple(args.alpha, args.beta, args.gamma, args.delta, ctx)
        x, y = parse_point(args.x), parse_point(args.y)
        scan = tail_limit_scan(x, y, quad, ctx, args.m_max, tol)
        rows = [{"M": M, "error": e} for M, e in scan]
        payload = {"schema_version": SCHEMA_VERSION, "scan": "tail", "points": rows}
    elif args.which == "trig":
        reg = RegimeII(c=args.c, d=args.d, mirrored=args.mirrored,
                       q_sweep=tuple(args.q_sweep))
        scan = trig_limit_scan(args.u, args.v, args.i, args.j, reg, tol)
        rows = [{"q": q, "error": e} for q, e in scan]
        payload = {"schema_version": SCHEMA_VERSION, "scan": "trig",
                   "mirrored": args.mirrored, "points": rows}
    else:
        reg = RegimeI(phi=args.phi, s=args.s, q_sweep=tuple(args.q_sweep))
        scan = sine_limit_scan(args.m, args.n, args.sign, reg, tol)
        rows = [{"q": q, "error": e} for q, e in scan]
        payload = {"schema_version": SCHEMA_VERSION, "scan": "sine", "points": rows}
    _output(args, payload, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    tol = Tolerance(rel_tol=args.tol) if args.tol else DEFAULT_TOL
    ctx = _context(args)
    pair = validate_pair(args.gamma, args.delta, ctx)
    points = tuple(parse_point(s) for s in args.points.split(","))
    window = Window(points)

    def kern(x, y):
        return elliptic_kernel(x, y, pair, ctx, tol).value

    cfg = SampleConfig(n_samples=args.draws, seed=args.seed)
    samples = sample_window(window, kern, cfg)
    counts = Counter(samples)
    rows = [{"outcome": json.dumps(list(k)), "count": v, "frequency": v / args.draws}
            for k, v in sorted(counts.items())]
    rho1 = [correlation([p], kern) for p in points]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "draws": args.draws,
        "rho1": rho1,
        "outcomes": rows,
    }
    _output(args, payload, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None, help="output file (manifest sidecar added)")
    p.add_argument("--tol", type=float, default=None, help="relative tolerance")


def _add_lattice(p):
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--zeta-plus", dest="zeta_plus", type=float, default=1.0)
    p.add_argument("--zeta-minus", dest="zeta_minus", type=float, default=-1.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtail",
                                 description="lattice kernel evaluation and verification")
    ap.add_argument("--version", action="version", version=f"qtail {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a kernel")
    pe.add_argument("kind", choices=("basic", "elliptic", "trig", "sine", "fourier"))
    pe.add_argument("--q", type=float, default=None)
    pe.add_argument("--zeta-plus", dest="zeta_plus", type=float, default=1.0)
    pe.add_argument("--zeta-minus", dest="zeta_minus", type=float, default=-1.0)
    pe.add_argument("--gamma", type=parse_complex, default=None)
    pe.add_argument("--delta", type=parse_complex, default=None)
    pe.add_argument("--alpha", type=parse_complex, default=None)
    pe.add_argument("--beta", type=parse_complex, default=None)
    pe.add_argument("--x", default=None, help="lattice point '+:k' or '-:k'")
    pe.add_argument("--y", default=None)
    pe.add_argument("--eta", type=float, default=0.0)
    pe.add_argument("--phi", type=float, default=None)
    pe.add_argument("--m", type=int, default=0)
    pe.add_argument("--n", type=int, default=0)
    pe.add_argument("--u", type=float, default=0.0)
    pe.add_argument("--v", type=float, default=0.0)
    pe.add_argument("--i", type=int, default=1)
    pe.add_argument("--j", type=int, default=1)
    pe.add_argument("--c", type=float, default=None)
    pe.add_argument("--d", type=float, default=None)
    _add_common(pe)
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("verify", help="randomized identity suites")
    pv.add_argument("suite", choices=(*SUITES, "all"))
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--draws", type=int, default=100)
    _add_common(pv)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("scan", help="convergence scans")
    ps.add_argument("which", choices=("tail", "trig", "sine"))
    ps.add_argument("--q", type=float, default=0.5)
    ps.add_argument("--zeta-plus", dest="zeta_plus", type=float, default=1.0)
    ps.add_argument("--zeta-minus", dest="zeta_minus", type=float, default=-1.0)
    ps.add_argument("--gamma", type=parse_complex, default=None)
    ps.add_argument("--delta", type=parse_complex, default=None)
    ps.add_argument("--alpha", type=parse_complex, default=None)
    ps.add_argument("--beta", type=parse_complex, default=None)
    ps.add_argument("--x", default="+:0")
    ps.add_argument("--y", default="+:1")
    ps.add_argument("--m-max", dest="m_max", type=int, default=40)
    ps.add_argument("--c", type=float, default=0.3)
    ps.add_argument("--d", type=float, default=0.7)
    ps.add_argument("--u", type=float, default=0.4)
    ps.add_argument("--v", type=float, default=0.1)
    ps.add_argument("--i", type=int, default=1)
    ps.add_argument("--j", type=int, default=1)
    ps.add_argument("--mirrored", action="store_true")
    ps.add_argument("--phi", type=float, default=1.2)
    ps.add_argument("--s", type=float, default=1.0)
    ps.add_argument("--m", type=int, default=1)
    ps.add_argument("--n", type=int, default=0)
    ps.add_argument("--sign", type=int, choices=(1, -1), default=1)
    ps.add_argument("--q-sweep", dest="q_sweep", type=float, nargs="+",
                    default=None)
    _add_common(ps)
    ps.set_defaults(func=cmd_scan)

    pp = sub.add_parser("sample", help="sample the point process on a window")
    _add_lattice(pp)
    pp.add_argument("--gamma", type=parse_complex, required=True)
    pp.add_argument("--delta", type=parse_complex, required=True)
    pp.add_argument("--points", required=True,
                    help="comma-separated lattice points, e.g. '+:0,+:1,-:0'")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--draws", type=int, default=1000)
    _add_common(pp)
    pp.set_defaults(func=cmd_sample)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "scan" and args.q_sweep is None:
        args.q_sweep = [0.9, 0.95, 0.99, 0.995] if args.which == "sine" \
            else [0.8, 0.9, 0.95, 0.99]
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ArithmeticError, OverflowError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
