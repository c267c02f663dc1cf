"""Command-line interface; every subcommand writes one JSON artifact.

Exit codes: 0 success, 1 failed assertion (verify-span --assert-rank),
2 configuration errors, 3 mathematical precondition errors.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .causal import cut_value
from .certificate import full_certificate, genericity_sample
from .errors import FourwaveError, PreconditionError, Unsupported
from .exact import RationalSym2, covec, rat, rat_str
from .flows import geodesic_flow
from .jsonio import write_json
from .observe import Tube, flowout_set, observation_set
from .spacetime import load_spec, minkowski
from .symbols import constraint_fibre_basis, fluid_decompose

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_CONFIG = 2
EXIT_MATH = 3


def _artifact(args, payload: dict) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func",) and v is not None}
    cfg = {k: (v if not isinstance(v, (list, tuple)) else list(v))
           for k, v in cfg.items()}
    return {"config": cfg, "version": __version__, "result": payload}


def _load_spec_arg(args):
    if getattr(args, "spec", None):
        return load_spec(args.spec)
    return minkowski()


def _parse_covector(text: str):
    named = {"e0": (1, 0, 0, 0), "e1": (1, 1, 0, 0), "e2": (1, 0, 1, 0),
             "e3": (1, 0, 0, 1)}
    if text in named:
        return named[text]
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise PreconditionError("covector needs 4 comma-separated components")
    return tuple(parts)


def cmd_verify_span(args) -> int:
    cert = full_certificate(L=args.scalar_channels)
    out = _artifact(args, cert)
    write_json(args.out, out)
    if args.assert_rank is not None and cert["rank"] != args.assert_rank:
        print(f"rank {cert['rank']} != asserted {args.assert_rank}",
              file=sys.stderr)
        return EXIT_ASSERT
    print(f"rank {cert['rank']} (unweighted {cert['unweighted']['rank']}); "
          f"wrote {args.out}")
    return EXIT_OK


def cmd_quadruples(args) -> int:
    cert = full_certificate()
    payload = {
        "directions": cert["directions"],
        "candidates": cert["candidates"],
        "valid_count": cert["valid_count"],
        "rejected_count": cert["rejected_count"],
    }
    write_json(args.out, _artifact(args, payload))
    print(f"{payload['valid_count']} valid / {payload['rejected_count']} "
          f"rejected; wrote {args.out}")
    return EXIT_OK


def cmd_kernel_basis(args) -> int:
    comps = _parse_covector(args.xi)
    xi = covec(*[rat(int(c)) if float(c).is_integer() else rat(c)
                 for c in comps])
    fibre = constraint_fibre_basis(xi)
    payload = {
        "xi": [rat_str(c) for c in xi],
        "dimension": len(fibre.basis),
        "basis": [h.serial() for h in fibre.basis],
    }
    write_json(args.out, _artifact(args, payload))
    print(f"kernel dimension {payload['dimension']}; wrote {args.out}")
    return EXIT_OK


def cmd_genericity(args) -> int:
    stats = genericity_sample(args.seed, args.count)
    write_json(args.out, _artifact(args, stats.as_dict()))
    print(f"rank-6 fraction {stats.fraction_rank6:.4f} over "
          f"{stats.families_valid} valid families; wrote {args.out}")
    return EXIT_OK


def cmd_geodesic(args) -> int:
    spec = _load_spec_arg(args)
    xi = _parse_covector(args.dir)
    states = geodesic_flow(spec, args.origin, xi, args.s_max, tol=args.tol)
    rows = [{"s": st.s,
             "x": [float(v) for v in st.x],
             "x_wrapped": [float(v) for v in spec.wrap(st.x)],
             "xi": [float(v) for v in st.xi]} for st in states]
    payload = {"spacetime": spec.to_dict(), "states": rows}
    write_json(args.out, _artifact(args, payload))
    print(f"{len(rows)} states; wrote {args.out}")
    return EXIT_OK


def cmd_cut_locus(args) -> int:
    spec = _load_spec_arg(args)
    xi = _parse_covector(args.dir)
    rho = cut_value(spec, args.origin, xi, s_max=args.s_max)
    payload = {"spacetime": spec.to_dict(), "origin": list(args.origin),
               "dir": list(xi), "cut_value": rho}
    write_json(args.out, _artifact(args, payload))
    print(f"cut value {rho}; wrote {args.out}")
    return EXIT_OK


def _tube_from_args(args) -> Tube:
    return Tube(axis=tuple(args.tube_axis), r_min=args.tube_rmin,
                r_max=args.tube_rmax)


def cmd_observe(args) -> int:
    spec = _load_spec_arg(args)
    obs = observation_set(spec, args.origin, _tube_from_args(args),
                          n_dirs=args.dirs, s_resolution=args.resolution,
                          s_max=args.s_max)
    payload = {"spacetime": spec.to_dict(), **obs.as_dict()}
    write_json(args.out, _artifact(args, payload))
    if args.csv:
        obs.write_csv(args.csv)
    print(f"{len(obs.samples)} samples; wrote {args.out}")
    return EXIT_OK


def cmd_flowout(args) -> int:
    spec = _load_spec_arg(args)
    xi = _parse_covector(args.dir)
    fset = flowout_set(spec, args.origin, xi, args.delta,
                       n_samples=args.samples, s_max=args.s_max,
                       s_resolution=args.resolution)
    payload = {"spacetime": spec.to_dict(), **fset.as_dict()}
    write_json(args.out, _artifact(args, payload))
    if args.csv:
        fset.write_csv(args.csv)
    print(f"{len(fset.samples)} samples; wrote {args.out}")
    return EXIT_OK


def cmd_fermi(args) -> int:
    from .fermi import fermi_chart
    spec = _load_spec_arg(args)
    chart = fermi_chart(spec, args.origin, np.array(args.worldline_dir))
    payload = {
        "spacetime": spec.to_dict(),
        "axis_metric_residual": chart.axis_metric_residual(),
        "axis_christoffel_residual": chart.axis_christoffel_residual(),
        "worldline": [[float(v) for v in p] for p in chart.worldline[::8]],
    }
    write_json(args.out, _artifact(args, payload))
    print(f"axis metric residual {payload['axis_metric_residual']:.3e}; "
          f"wrote {args.out}")
    return EXIT_OK


def cmd_detect(args) -> int:
    import json

    from .detect import (SourceConfig, detection_surrogate, exclusion_sets,
                         four_geodesic_intersection)
    from .errors import ExcludedPoint
    spec = _load_spec_arg(args)
    with open(args.queries, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    tube = Tube(axis=tuple(doc.get("tube", {}).get("axis", args.tube_axis)),
                r_min=doc.get("tube", {}).get("r_min", args.tube_rmin),
                r_max=doc.get("tube", {}).get("r_max", args.tube_rmax))
    config = SourceConfig(spec, [(s["z"], s["zeta"]) for s in doc["sources"]],
                          tube)
    excl = exclusion_sets(spec, config)
    x_int = four_geodesic_intersection(spec, config)
    verdicts = []
    for y in doc["queries"]:
        try:
            v = detection_surrogate(spec, config, y, excl=excl,
                                    x_int=x_int, x_known=True)
            verdicts.append({"y": list(map(float, y)), "verdict": v})
        except ExcludedPoint:
            prov = []
            excl.in_small_set(y, provenance=prov)
            if excl.in_cut_future(y):
                prov.append("cut_future")
            verdicts.append({"y": list(map(float, y)), "verdict": None,
                             "excluded_by": prov or ["exclusion_set"]})
    payload = {
        "spacetime": spec.to_dict(),
        "intersection": None if x_int is None else [float(v) for v in x_int],
        "queries": verdicts,
    }
    write_json(args.out, _artifact(args, payload))
    print(f"{len(verdicts)} verdicts; wrote {args.out}")
    return EXIT_OK


def cmd_injectivity(args) -> int:
    from .detect import injectivity_report
    spec = _load_spec_arg(args)
    sources = [tuple(map(float, s.split(","))) for s in args.sources]
    rep = injectivity_report(spec, sources, _tube_from_args(args),
                             n_dirs=args.dirs, s_max=args.s_max)
    write_json(args.out, _artifact(args, rep))
    print(f"{len(rep['pairs'])} pairs; wrote {args.out}")
    return EXIT_OK


def cmd_fluid_decompose(args) -> int:
    import json
    with open(args.input, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    P = RationalSym2(tuple(rat(v) for v in doc["tensor"]))
    dirs = [covec(*[rat(c) for c in d]) for d in doc["directions"]]
    mu = fluid_decompose(P, dirs)
    payload = {"weights": [rat_str(m) for m in mu]}
    write_json(args.out, _artifact(args, payload))
    print(f"{len(mu)} weights; wrote {args.out}")
    return EXIT_OK


def _add_common(p, out_default):
    p.add_argument("--out", default=out_default, help="JSON artifact path")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fourwave")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-span", help="interaction-symbol span certificate")
    _add_common(p, "span_certificate.json")
    p.add_argument("--assert-rank", type=int, default=None)
    p.add_argument("--scalar-channels", type=int, default=4)
    p.set_defaults(func=cmd_verify_span)

    p = sub.add_parser("quadruples", help="census of direction subsets")
    _add_common(p, "quadruples.json")
    p.set_defaults(func=cmd_quadruples)

    p = sub.add_parser("kernel-basis", help="polarization subspace basis")
    _add_common(p, "kernel_basis.json")
    p.add_argument("xi", help="covector: 'a,b,c,d' or e0..e3")
    p.set_defaults(func=cmd_kernel_basis)

    p = sub.add_parser("genericity", help="random-family span sampling")
    _add_common(p, "genericity.json")
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_genericity)

    def add_geom(p):
        p.add_argument("--spec", help="spacetime spec JSON path")
        p.add_argument("--origin", type=float, nargs=4,
                       default=(0.0, 0.0, 0.0, 0.0))
        p.add_argument("--s-max", type=float, default=4.0)

    p = sub.add_parser("geodesic", help="flow one covector")
    _add_common(p, "geodesic.json")
    add_geom(p)
    p.add_argument("--dir", default="e1")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("cut-locus", help="cut value along one direction")
    _add_common(p, "cut_locus.json")
    add_geom(p)
    p.add_argument("--dir", default="e1")
    p.set_defaults(func=cmd_cut_locus)

    def add_tube(p):
        p.add_argument("--tube-axis", type=float, nargs=3, default=(0.0, 0.0, 0.0))
        p.add_argument("--tube-rmin", type=float, default=1.0)
        p.add_argument("--tube-rmax", type=float, default=2.0)

    p = sub.add_parser("observe", help="earliest light observation set")
    _add_common(p, "observe.json")
    add_geom(p)
    add_tube(p)
    p.add_argument("--dirs", type=int, default=64)
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("flowout", help="covector-ball flowout set")
    _add_common(p, "flowout.json")
    add_geom(p)
    p.add_argument("--dir", default="e1")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_flowout)

    p = sub.add_parser("fermi", help="Fermi chart axis verification")
    _add_common(p, "fermi.json")
    add_geom(p)
    p.add_argument("--worldline-dir", type=float, nargs=4,
                   default=(1.0, 0.0, 0.0, 0.0))
    p.set_defaults(func=cmd_fermi)

    p = sub.add_parser("detect", help="detection verdicts for query points")
    _add_common(p, "detect.json")
    add_geom(p)
    add_tube(p)
    p.add_argument("--queries", required=True, help="JSON query file")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("injectivity", help="observation-set separation report")
    _add_common(p, "injectivity.json")
    add_geom(p)
    add_tube(p)
    p.add_argument("--dirs", type=int, default=128)
    p.add_argument("--sources", nargs="+", required=True,
                   help="each 't,y1,y2,y3'")
    p.set_defaults(func=cmd_injectivity)

    p = sub.add_parser("fluid-decompose", help="fluid weights of a tensor")
    _add_common(p, "fluid.json")
    p.add_argument("--input", required=True,
                   help="JSON with 'tensor' (10 rationals) and 'directions'")
    p.set_defaults(func=cmd_fluid_decompose)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FileNotFoundError, KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, Unsupported) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except FourwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
