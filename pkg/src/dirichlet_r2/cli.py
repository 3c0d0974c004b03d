"""Command-line front end.

    dirichlet-r2 constants   --h-list 2,4 --k-list 1,3
    dirichlet-r2 hl-verify   --h 2 --modulus 3 --N 1000000
    dirichlet-r2 r2-eval     --height 1e10 --modulus 3 --x-min 0 --x-max 3 --x-steps 61
    dirichlet-r2 zeros       --modulus 4 --t-min 0 --t-max 200 --out z.txt
    dirichlet-r2 compare     --zeros z.txt --bin-width 0.1 --out cmp.csv

All phases are in radians and all logarithms natural. Every file written with
--out gets a sidecar ``<out>.json`` holding the effective configuration, the
package version, the cutoffs used and the tail estimates. Exit codes: 0 success,
2 bad configuration, 3 numerical audit failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import correlation as corr
from . import hardy_littlewood as hl
from . import zeros as zmod
from .characters import get_character

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_AUDIT = 3


class ConfigError(ValueError):
    """Invalid combination of command-line options."""


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(lines: list[str], out: str | None, sidecar: dict) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    _write_sidecar(out, sidecar)


def _write_sidecar(out: str, sidecar: dict) -> None:
    payload = {"version": __version__, **sidecar}
    Path(str(out) + ".json").write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def cmd_constants(args) -> int:
    header = "h,k,alpha,alpha_series,beta,alpha_ap,s_factor,status"
    rows = [header]
    for h in _int_list(args.h_list):
        for k in _int_list(args.k_list):
            if h < 1 or k < 1:
                rows.append(f"{h},{k},,,,,,invalid: h and k must be positive")
                continue
            a = hl.alpha(h, args.prime_cutoff)
            a_ser = hl.alpha_series(h, args.series_cutoff)
            b = hl.beta(h, k)
            # S(k) at the first class r with r and r + h both units (0 if none)
            classes = hl.admissible_residues(h, k)
            s = hl.s_factor(k, classes[0], classes[0] + h) if classes else 0
            rows.append(f"{h},{k},{a:.12g},{a_ser:.12g},{b:.12g},{a * b:.12g},{float(s):.12g},ok")
    _emit(rows, args.out, {"command": "constants", "config": _config(args),
                           "cutoffs": {"prime_cutoff": args.prime_cutoff, "series_cutoff": args.series_cutoff}})
    return EXIT_OK


def cmd_hl_verify(args) -> int:
    k, h = args.modulus, args.h
    residues = [args.residue] if args.residue is not None else hl.admissible_residues(h, k)
    rows = [hl.PAIR_CSV_HEADER + ",status"]
    lt = hl.LambdaTable(k * args.N + k + h) if residues else None
    for r in residues:
        try:
            rep = hl.empirical_pair_density(h, k, r, args.N, table=lt, threads=args.threads,
                                            prime_cutoff=args.prime_cutoff)
        except hl.CoprimalityError as exc:
            rows.append(f"{h},{k},{r},{args.N},,,,,error: " + str(exc).replace(",", ";").replace("\n", " "))
            continue
        rows.append(rep.to_csv_row() + ",ok")
    _emit(rows, args.out, {"command": "hl-verify", "config": _config(args),
                           "cutoffs": {"prime_cutoff": args.prime_cutoff}})
    return EXIT_OK


def _grid(args) -> tuple[np.ndarray, str]:
    if args.x_min is not None:
        return np.linspace(args.x_min, args.x_max, args.x_steps), "unfolded"
    if args.eps_min is None:
        raise ConfigError("give either --eps-min/--eps-max/--eps-steps or --x-min/--x-max/--x-steps")
    return np.linspace(args.eps_min, args.eps_max, args.eps_steps), "raw"


def cmd_r2_eval(args) -> int:
    grid, norm = _grid(args)
    comps = list(corr.COMPONENTS[:4]) if args.component == "all" else [args.component]
    if norm == "unfolded" and "gue_reference" not in comps:
        comps.append("gue_reference")
    if np.any(grid == 0) and any(c in ("diag", "off", "off_r0") or (c == "total" and norm == "raw") for c in comps):
        raise ConfigError("grid contains 0, where |zeta(1 + i eps)|^2 is singular; "
                          "use the unfolded total or drop the point")
    rows = ["eps,x_unfolded,value,component,E,k"]
    tails = {}
    for c in comps:
        curve = corr.r2_curve(c, grid, args.height, args.modulus, args.prime_cutoff, args.m_cutoff, norm)
        rows.extend(curve.csv_rows())
        tails = curve.tail_estimates
    _emit(rows, args.out, {"command": "r2-eval", "config": _config(args), "normalization": norm,
                           "mean_density": corr.mean_density(args.height, args.modulus),
                           "cutoffs": {"prime_cutoff": args.prime_cutoff, "m_cutoff": args.m_cutoff,
                                       "term_floor": corr.TERM_FLOOR},
                           "tail_estimates": tails})
    return EXIT_OK


def _character(modulus: int, label: str | None):
    chi = get_character(modulus, label)
    if not chi.is_primitive:
        raise ConfigError(f"character {chi.label_str} mod {modulus} is not primitive: conductor {chi.conductor}")
    return chi


def cmd_zeros(args) -> int:
    chi = _character(args.modulus, args.label)
    zl = zmod.find_zeros(chi, args.t_min, args.t_max, args.step, args.tol, workers=args.threads)
    audit = [{"lo": a.lo, "hi": a.hi, "found": a.found, "expected": a.expected, "step": a.step, "ok": a.ok}
             for a in zl.audit]
    sidecar = {"command": "zeros", "config": _config(args), "character": chi.to_dict(),
               "count": len(zl), "smooth_count": float(zmod.smooth_count(args.t_max, chi) -
                                                       (zmod.smooth_count(args.t_min, chi) if args.t_min > 0 else 0.0)),
               "cutoffs": {"tolerance": args.tol, "scan_step": zl.scan_step},
               "audit_passed": zl.audit_passed, "audit": audit}
    if args.out is None:
        sys.stdout.write("\n".join(f"# {h}" for h in zl.header()) + "\n")
        sys.stdout.write("".join(f"{z:.17g}\n" for z in zl.zeros))
    else:
        zl.save(args.out)
        _write_sidecar(args.out, sidecar)
    if not zl.audit_passed:
        bad = [a for a in zl.audit if not a.ok]
        print(f"audit failed on {len(bad)} subinterval(s): " +
              "; ".join(f"({a.lo:.3f}, {a.hi:.3f}] found {a.found}, expected {a.expected:.1f}" for a in bad),
              file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def cmd_compare(args) -> int:
    zl = zmod.ZeroList.load(args.zeros)
    if args.modulus is not None and args.modulus != zl.character.modulus:
        raise ConfigError(f"--modulus {args.modulus} does not match k={zl.character.modulus} in {args.zeros}")
    if args.surrogate == "poisson":
        zl = zmod.poisson_surrogate(zl, args.seed)
    emp = zmod.empirical_r2(zl, args.bin_width, args.max_x)
    pred = zmod.predicted_histogram(emp, args.prime_cutoff)
    summary = zmod.compare_histograms(emp, pred)
    rows = ["x_bin,density,stderr,predicted,delta,z"]
    for x, d, s, p, z in zip(emp.x_bin, emp.density, emp.stderr, pred, summary["z_scores"]):
        rows.append(f"{x:.6g},{d:.10g},{s:.10g},{p:.10g},{d - p:.10g},{z:.6g}")
    centers = [w[0] for w in emp.windows]
    sidecar = {"command": "compare", "config": _config(args), "summary": summary,
               "windows": len(emp.windows), "height_range": [min(centers), max(centers)],
               "cutoffs": {"prime_cutoff": args.prime_cutoff},
               "tail_estimates": corr.tail_estimates(np.array([1.0]), zl.character.modulus, args.prime_cutoff)}
    _emit(rows, args.out, sidecar)
    if args.out is not None:
        print(json.dumps({k: v for k, v in summary.items() if k != "z_scores"}, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dirichlet-r2", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="singular series alpha, beta, S(k) per (h, k)")
    c.add_argument("--h-list", default="2,4,6")
    c.add_argument("--k-list", default="1,3,4,5")
    c.add_argument("--prime-cutoff", type=int, default=hl.DEFAULT_PRIME_CUTOFF)
    c.add_argument("--series-cutoff", type=int, default=10**5, help="Q in the Ramanujan series")
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("hl-verify", help="prime-pair counts in an arithmetic progression")
    v.add_argument("--h", type=int, required=True)
    v.add_argument("--modulus", type=int, default=1)
    v.add_argument("--residue", type=int, help="default: every admissible residue")
    v.add_argument("--N", type=int, required=True)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--prime-cutoff", type=int, default=hl.DEFAULT_PRIME_CUTOFF)
    v.add_argument("--out")
    v.set_defaults(func=cmd_hl_verify)

    r = sub.add_parser("r2-eval", help="closed-form pair correlation on an eps or unfolded x grid")
    r.add_argument("--height", type=float, required=True, help="E")
    r.add_argument("--modulus", type=int, required=True)
    r.add_argument("--component", choices=list(corr.COMPONENTS) + ["all"], default="total")
    r.add_argument("--eps-min", type=float)
    r.add_argument("--eps-max", type=float)
    r.add_argument("--eps-steps", type=int, default=101)
    r.add_argument("--x-min", type=float, help="unfolded grid x = eps * dbar")
    r.add_argument("--x-max", type=float)
    r.add_argument("--x-steps", type=int, default=101)
    r.add_argument("--prime-cutoff", type=int, default=corr.DEFAULT_PRIME_CUTOFF)
    r.add_argument("--m-cutoff", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_r2_eval)

    z = sub.add_parser("zeros", help="critical-line zeros of L(s, chi)")
    z.add_argument("--modulus", type=int, required=True)
    z.add_argument("--label", help="exponent vector such as '1' or '1,2'; default first primitive")
    z.add_argument("--t-min", type=float, default=0.0)
    z.add_argument("--t-max", type=float, required=True)
    z.add_argument("--step", type=float, help="scan step; default 0.5/dbar(t_max)")
    z.add_argument("--tol", type=float, default=zmod.DEFAULT_TOLERANCE)
    z.add_argument("--threads", type=int, default=1, help="worker processes")
    z.add_argument("--out")
    z.set_defaults(func=cmd_zeros)

    m = sub.add_parser("compare", help="empirical pair-gap histogram vs closed-form prediction")
    m.add_argument("--zeros", required=True, help="zero file written by the zeros command")
    m.add_argument("--modulus", type=int, help="expected k; checked against the file")
    m.add_argument("--bin-width", type=float, default=0.1)
    m.add_argument("--max-x", type=float, default=3.0)
    m.add_argument("--prime-cutoff", type=int, default=corr.DEFAULT_PRIME_CUTOFF)
    m.add_argument("--surrogate", choices=["poisson"])
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")
    m.set_defaults(func=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, zmod.NonPrimitiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
