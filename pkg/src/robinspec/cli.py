"""Command-line interface.

Subcommands:
  disk-spectrum   closed-form (and optional FEM) disk eigenvalues
  verify-main     sharp third-eigenvalue bound over a gallery
  steklov         sigma_2 L table with the 4*pi bound
  saturation      pulled-apart lower bound converging to the double disk
  hersch          Hersch point, orthogonal cap, and trial quotient

Report paths write CSV; a matplotlib figure is rendered next to every
CSV (same stem, .png) unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time

from . import bounds, diskmodes, domains, femrobin, trial


def _fmt(x):
    return f"{x:.12g}"


def _figure_path(out_path):
    s = str(out_path)
    return (s[: -len(".csv")] if s.endswith(".csv") else s) + ".png"


def _load_gallery(path):
    if path is None:
        return domains.default_gallery()
    gallery, rejected = domains.load_gallery(path)
    for name, reason in rejected:
        print(f"rejected gallery entry {name}: {reason}", file=sys.stderr)
    if not gallery:
        raise SystemExit("gallery contains no valid domains")
    return gallery


def _alpha_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_disk_spectrum(args):
    lam1 = diskmodes.disk_lambda1(args.alpha)
    lam2 = diskmodes.disk_lambda2(args.alpha)
    print(f"disk Robin parameter alpha = {_fmt(args.alpha)}")
    print(f"lambda_1 = {_fmt(lam1)}")
    print(f"lambda_2 = {_fmt(lam2)}  (= lambda_3 by multiplicity)")
    if args.fem:
        mesh = femrobin.build_disk_mesh(args.rings)
        res = femrobin.solve_problem(femrobin.constant_problem(args.alpha), mesh, 3)
        f1, f2 = res.eigenvalues[0], res.eigenvalues[1]
        print(f"FEM ({args.rings} rings, {mesh.n_vertices} vertices):")
        print(f"lambda_1 = {_fmt(f1)}   |err| = {_fmt(abs(f1 - lam1))}")
        print(f"lambda_2 = {_fmt(f2)}   |err| = {_fmt(abs(f2 - lam2))}")
    return 0


def cmd_verify_main(args):
    gallery = _load_gallery(args.gallery)
    alphas = _alpha_list(args.alpha)
    reports = bounds.sweep(
        gallery, alphas, n_rings=args.rings, with_trial=args.trial, workers=args.workers
    )
    header = ["name", "alpha", "rings", "lhs", "rhs", "margin", "err_estimate", "seconds"]
    rows = [
        [r.name, _fmt(r.alpha), r.rings, _fmt(r.lhs), _fmt(r.rhs), _fmt(r.margin),
         _fmt(r.err_estimate), _fmt(r.seconds)]
        for r in reports
    ]
    print("\t".join(header))
    for row in rows:
        print("\t".join(str(c) for c in row))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        if not args.no_figures:
            from . import plots

            plots.margins_figure(reports, _figure_path(args.out))
    if any(r.margin <= 0.0 for r in reports):
        return 2
    return 0


def cmd_steklov(args):
    gallery = _load_gallery(args.gallery)
    rows = []
    for d in gallery:
        sigma2 = bounds.steklov_sigma2(d, n_rings=args.rings)
        rows.append((d.name, sigma2 * d.perimeter, sigma2))
    print("\t".join(["name", "sigma2_L", "sigma2"]))
    for name, s2l, s2 in rows:
        print("\t".join([name, _fmt(s2l), _fmt(s2)]))
    print(f"bound 4*pi = {_fmt(4.0 * math.pi)}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "sigma2_L", "sigma2"])
            writer.writerows([name, _fmt(a), _fmt(b)] for name, a, b in rows)
        if not args.no_figures:
            from . import plots

            plots.steklov_figure(rows, _figure_path(args.out))
    if any(s2l >= 4.0 * math.pi for _, s2l, _ in rows):
        return 2
    return 0


def cmd_saturation(args):
    eps_list = _alpha_list(args.eps)
    limit = diskmodes.disk_lambda2(args.alpha / (4.0 * math.pi))
    rows = []
    for eps in sorted(eps_list, reverse=True):
        val = bounds.saturation_lower(eps, args.alpha, j=args.j, n_rings=args.rings)
        rows.append((eps, val, abs(val - limit)))
    print("\t".join(["eps", "L_eps", "lambda_weighted", "normalized", "limit_2pi_lam2", "gap"]))
    for eps, val, gap in rows:
        print("\t".join(_fmt(x) for x in (
            eps, bounds.pulled_apart_perimeter(eps), val,
            2.0 * math.pi * val, 2.0 * math.pi * limit, gap,
        )))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["eps", "L_eps", "lambda_weighted", "normalized", "limit", "gap"])
            for eps, val, gap in rows:
                writer.writerow(_fmt(x) for x in (
                    eps, bounds.pulled_apart_perimeter(eps), val,
                    2.0 * math.pi * val, 2.0 * math.pi * limit, gap,
                ))
        if not args.no_figures:
            from . import plots

            plots.saturation_figure(rows, limit, _figure_path(args.out))
    return 0


def cmd_hersch(args):
    gallery = _load_gallery(args.gallery)
    by_name = {d.name: d for d in gallery}
    if args.domain not in by_name:
        raise SystemExit(f"unknown domain {args.domain!r}; gallery has {sorted(by_name)}")
    domain = by_name[args.domain]
    t0 = time.time()
    ctx = trial.make_trial_context(domain, args.alpha, n_rings=args.rings)
    print(f"domain {domain.name}: lambda_1..3 = "
          + ", ".join(_fmt(v) for v in ctx.eigenvalues))
    print(f"w0 = {_fmt(ctx.w0.real)} {_fmt(ctx.w0.imag)}j   "
          f"|zeta| = {_fmt(abs(ctx.zeta))} (scale {_fmt(ctx.zeta_scale)})")
    if ctx.case_two():
        cap, w, val = trial.find_orthogonal_cap(ctx, return_details=True)
        num, den = trial.trial_rayleigh_pieces(ctx, cap, w)
        print(f"case 2: cap p_angle = {_fmt(cap.p_angle)}, t = {_fmt(cap.t)}, "
              f"|Phi| = {_fmt(abs(val))}")
        print(f"w(C) = {_fmt(w.real)} {_fmt(w.imag)}j")
    else:
        num, den = trial.case_one_pieces(ctx)
        print("case 1: zeta is numerically zero, fold-free trial function")
    quotient = num / den
    lam3 = ctx.eigenvalues[2]
    print(f"trial quotient = {_fmt(quotient)}   FEM lambda_3 = {_fmt(lam3)}   "
          f"(quotient - lambda_3 = {_fmt(quotient - lam3)})")
    print(f"elapsed {time.time() - t0:.1f}s")
    if args.dump_phi:
        rows = trial.phi_grid(ctx, n_p=args.grid_p, n_t=args.grid_t)
        with open(args.dump_phi, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p_angle", "t", "re_phi", "im_phi"])
            writer.writerows([_fmt(v) for v in row] for row in rows)
        if not args.no_figures:
            from . import plots

            plots.phi_grid_figure(rows, _figure_path(args.dump_phi))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="robinspec",
        description="Robin/Steklov eigenvalue bounds for planar domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disk-spectrum", help="closed-form disk Robin eigenvalues")
    p.add_argument("--alpha", type=float, required=True, help="disk Robin parameter")
    p.add_argument("--fem", action="store_true", help="cross-check with the FEM solver")
    p.add_argument("--rings", type=int, default=30)
    p.set_defaults(func=cmd_disk_spectrum)

    p = sub.add_parser("verify-main", help="verify the third-eigenvalue bound")
    p.add_argument("--gallery", default=None, help="JSON gallery file (default: builtin)")
    p.add_argument("--alpha", default="-12.566370614359172,-6.283185307179586,-3.141592653589793,0",
                   help="comma-separated alpha values in [-4*pi, 0]")
    p.add_argument("--rings", type=int, default=30)
    p.add_argument("--out", default=None, help="CSV report path (figure rendered alongside)")
    p.add_argument("--trial", action="store_true", help="attach the trial-function quotient")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_verify_main)

    p = sub.add_parser("steklov", help="sigma_2 L table (bound 4*pi)")
    p.add_argument("--gallery", default=None)
    p.add_argument("--rings", type=int, default=30)
    p.add_argument("--out", default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_steklov)

    p = sub.add_parser("saturation", help="pulled-apart lower bound vs the double disk")
    p.add_argument("--alpha", type=float, default=-2.0 * math.pi)
    p.add_argument("--eps", default="0.4,0.2,0.1,0.05")
    p.add_argument("--j", type=int, default=3)
    p.add_argument("--rings", type=int, default=30)
    p.add_argument("--out", default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_saturation)

    p = sub.add_parser("hersch", help="Hersch point, orthogonal cap, trial quotient")
    p.add_argument("--domain", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gallery", default=None)
    p.add_argument("--rings", type=int, default=24)
    p.add_argument("--dump-phi", default=None, help="CSV path for the Phi grid")
    p.add_argument("--grid-p", type=int, default=32)
    p.add_argument("--grid-t", type=int, default=17)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_hersch)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # solver errors map to exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
