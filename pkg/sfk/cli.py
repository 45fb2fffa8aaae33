# BSD 3-Clause License

# Copyright (c) 2019, sfk authors
# All rights reserved.

# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:

# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.

# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.

# * Neither the name of the copyright holder nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.

# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Command line interface of sfk.

Exit codes: 0 success (all suites pass), 1 suite failure, 2 invalid input,
3 numerical failure.
"""
from __future__ import print_function

import argparse
import json
import logging
import os
import sys
import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from sfk import __version__
from sfk.correspondence import build_chart, check_admissible, read_chart
from sfk.datasets import resolve_polytope
from sfk.exceptions import InadmissibleParameter, NumericalFailure, SFKValueError
from sfk.harmonic import TaubNutParameter, admissible_cone, make_pair
from sfk.inverse import GuilleminSampler, invert_grid, read_potential_grid, write_potential_grid
from sfk.polytope import anchor_spacings, edges, interior_point, printed_anchor_spacings, recession_cone, vertices
from sfk.utils import DEFAULT_TOLERANCES, format_float, init_logger, n_jobs_from_env, namedtuple_with_defaults, to_builtin, write_json
from sfk.validation import check_grid_spec, parse_lattice
from sfk.verify import SUITES, VerificationReport, run_verification, verify_scalar_flat_sampler

EXIT_OK, EXIT_SUITE_FAILURE, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3

# options whose values may start with a minus sign
VALUE_OPTIONS = ("--grid", "--nu", "--base")

RunConfig = namedtuple_with_defaults(
    "RunConfig",
    "command polytope nu grid tolerances output seed suites potential method",
    dict(nu="ale", grid="-4:4:17,0.5:4:8", seed=0, method="fd"),
)


def _base(output):
    return os.path.splitext(output)[0]


def _echo_config(config):
    """Write the configuration beside the output."""
    data = config._asdict()
    data["tolerances"] = dict(config.tolerances._asdict()) if config.tolerances is not None else None
    data["version"] = __version__
    return write_json(data, _base(config.output) + ".config.json")


def _tolerances(items):
    kwargs = {}
    for item in items or []:
        key, _, value = item.partition("=")
        try:
            kwargs[key.strip()] = float(value)
        except ValueError:
            raise SFKValueError("Cannot parse tolerance %r, expected name=value" % item)
    return DEFAULT_TOLERANCES.tighten(**kwargs)


def _admissible_pair(P, nu):
    """Pair of P and nu; inadmissible parameters raise with the cone report."""
    pair = make_pair(P, nu, check_admissible=False)
    if nu.is_ale:
        return pair
    res = check_admissible(pair, P)
    if not res.admissible:
        logging.error(
            "cone report: det(nu_1, nu) = %.6g, det(nu_d, nu) = %.6g (both must be positive)", res.cone[0], res.cone[1]
        )
        if res.witness.V <= 0:
            raise InadmissibleParameter(nu.nu, point=res.witness.point, value=res.witness.V)
        raise InadmissibleParameter(nu.nu)
    return pair


def _summary(P, nu, pair, grid, chart):
    mask = chart.interior_mask()
    lines = [
        "polytope: %s" % (P.name or "<unnamed>"),
        "normals: %s" % P.normals.tolist(),
        "lambdas: %s" % [format_float(l) for l in P.lambdas],
        "nu: %s" % ("ale" if nu.is_ale else [format_float(v) for v in nu.nu]),
        "anchors: [%s]" % ", ".join(format_float(a) for a in pair.anchors),
        "grid: H %s:%s:%d, r %s:%s:%d" % (grid.H_min, grid.H_max, grid.nH, grid.r_min, grid.r_max, grid.nr),
        "nodes: %d" % chart.n_nodes,
        "max |s_resid| (interior): %s" % (format_float(np.nanmax(np.abs(chart.s_resid[mask]))) if mask.any() else "n/a"),
        "min V: %s" % format_float(np.min(chart.V)),
        "node errors: %d" % len(chart.errors),
    ]
    return "\n".join(lines) + "\n"


def cmd_build(args):
    """Build a metric chart."""
    config = RunConfig(
        command="build",
        polytope=args.polytope,
        nu=args.nu,
        grid=args.grid,
        tolerances=_tolerances(args.tol),
        output=args.output,
        seed=args.seed,
        method=args.method,
    )
    init_logger(_base(args.output), verbose=args.verbose)
    _echo_config(config)
    P = resolve_polytope(args.polytope)
    nu = TaubNutParameter.parse(args.nu)
    grid = check_grid_spec(args.grid)
    logging.info("building chart of %s with nu=%s on %s", P.name, nu, grid)
    pair = _admissible_pair(P, nu)
    chart = build_chart(
        pair,
        grid,
        P=P,
        method=args.method,
        tol=config.tolerances.quad_abs,
        n_jobs=n_jobs_from_env(),
        verbose=args.verbose,
    )
    chart.write_csv(args.output)
    with open(_base(args.output) + ".summary.txt", "w") as f:
        f.write(_summary(P, nu, pair, grid, chart))
    for node, message in chart.errors:
        logging.warning("node %d: %s", node, message)
    logging.info("wrote %s", args.output)
    return EXIT_OK


def _potential_points(sampler, margin=2):
    X1, X2 = np.meshgrid(sampler.x1[margin:-margin], sampler.x2[margin:-margin])
    return np.column_stack((X1.ravel(), X2.ravel()))


def cmd_verify(args):
    """Run verification suites."""
    suites = list(SUITES) if not args.suite or "all" in args.suite else args.suite
    config = RunConfig(
        command="verify",
        polytope=args.polytope,
        nu=args.nu,
        grid=args.grid,
        tolerances=_tolerances(args.tol),
        output=args.output,
        seed=args.seed,
        suites=suites,
        potential=args.potential,
        method=args.method,
    )
    init_logger(_base(args.output), verbose=args.verbose)
    _echo_config(config)
    P = resolve_polytope(args.polytope) if args.polytope else None

    if args.potential:
        if args.suite and set(suites) != {"flatness"}:
            raise SFKValueError("--potential runs the flatness suite only, got --suite %s" % ", ".join(args.suite))
        sampler = read_potential_grid(args.potential, polytope=P)
        report = VerificationReport(seed=args.seed)
        report.add(verify_scalar_flat_sampler(sampler, _potential_points(sampler), tol=config.tolerances.boundary_tol))
    else:
        if P is None and set(suites) - {"sphere"}:
            raise SFKValueError("--polytope is required for suites %s" % sorted(set(suites) - {"sphere"}))
        if P is not None:
            _admissible_pair(P, TaubNutParameter.parse(args.nu))
            report = run_verification(
                P,
                args.nu,
                suites=suites,
                grid=args.grid,
                random_state=args.seed,
                tolerances=config.tolerances,
                method=args.method,
                n_jobs=n_jobs_from_env(),
                verbose=args.verbose,
            )
        else:
            report = run_verification(None, suites=["sphere"], random_state=args.seed, verbose=args.verbose)

    report.write(args.output)
    print(report.summary())
    for s in report.failed():
        logging.error("suite %s failed: max residual %.3e > %.1e, witness %s", s.name, s.max_residual, s.tolerance, s.witness)
    return EXIT_OK if report.passed else EXIT_SUITE_FAILURE


def cmd_invert(args):
    """Isothermal coordinates of a potential grid."""
    config = RunConfig(command="invert", potential=args.potential, polytope=args.polytope, output=args.output)
    init_logger(_base(args.output), verbose=args.verbose)
    _echo_config(config)
    P = resolve_polytope(args.polytope) if args.polytope else None
    sampler = read_potential_grid(args.potential, polytope=P)
    base_x = None if args.base is None else np.array([float(t) for t in args.base.split(",")])
    frame = invert_grid(sampler, base_x=base_x, base_H=args.base_H, verbose=args.verbose)
    frame.to_csv(args.output, index=False, float_format="%.17g")
    worst = frame["closedness_residual"].abs().max()
    if worst > 1e-3:
        message = "closedness residual up to %.3g: the potential is not scalar-flat" % worst
        logging.warning(message)
        warnings.warn(message, ConvergenceWarning)
    return EXIT_OK


def cmd_plot(args):
    """Plot a chart."""
    from sfk.plotting import plot_chart

    chart = read_chart(args.chart)
    P = resolve_polytope(args.polytope) if args.polytope else None
    plot_chart(chart, filename=args.output, P=P)
    return EXIT_OK


def describe(P):
    """Summary of a polytope as a dict of builtin types."""
    lo, hi = admissible_cone(P)
    return to_builtin(
        dict(
            name=P.name,
            normals=P.normals,
            lambdas=P.lambdas,
            vertices=vertices(P),
            edges=[
                dict(index=e.index + 1, normal=e.normal, bounded=e.bounded, lattice_length=e.lattice_length)
                for e in edges(P)
            ],
            anchors=anchor_spacings(P),
            printed_anchor_spacings=printed_anchor_spacings(P),
            recession_cone=list(recession_cone(P)),
            admissible_cone=dict(first_normal=lo, last_normal=hi, condition="det(nu_1, nu) > 0 and det(nu_d, nu) > 0"),
            interior_point=interior_point(P),
        )
    )


def cmd_describe(args):
    P = resolve_polytope(args.polytope)
    print(json.dumps(describe(P), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_guillemin(args):
    """Write the Guillemin potential on a lattice."""
    P = resolve_polytope(args.polytope)
    x1, x2 = parse_lattice(args.grid)
    write_potential_grid(GuilleminSampler(P), x1, x2, args.output)
    return EXIT_OK


def _add_common(parser, polytope_required=True):
    parser.add_argument("--polytope", required=polytope_required, help="dataset name or polytope JSON file")
    parser.add_argument("--nu", default="ale", help="'ale' or 'a,b'")
    parser.add_argument("--grid", default="-4:4:17,0.5:4:8", help="H_min:H_max:nH,r_min:r_max:nr")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", choices=["fd", "exact"], default="fd", help="scalar curvature evaluation")
    parser.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tighten a tolerance")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="sfk", description="Scalar-flat Kahler toric metrics.")
    parser.add_argument("--version", action="version", version="sfk %s" % __version__)
    subparsers = parser.add_subparsers(dest="command")

    p = subparsers.add_parser("build", help="build a metric chart (CSV)")
    _add_common(p)
    p.add_argument("--output", default="chart.csv")
    p.set_defaults(func=cmd_build)

    p = subparsers.add_parser("verify", help="run verification suites")
    _add_common(p, polytope_required=False)
    p.add_argument("--suite", action="append", choices=list(SUITES) + ["all"])
    p.add_argument("--potential", help="potential grid CSV (x1,x2,u); runs the flatness suite only")
    p.add_argument("--output", default="report.json")
    p.set_defaults(func=cmd_verify)

    p = subparsers.add_parser("invert", help="isothermal coordinates of a potential grid")
    p.add_argument("--potential", required=True)
    p.add_argument("--polytope")
    p.add_argument("--base", help="x1,x2 where H takes the value --base-H (default: lattice centre)")
    p.add_argument("--base-H", dest="base_H", type=float, default=0.0)
    p.add_argument("--output", default="isothermal.csv")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_invert)

    p = subparsers.add_parser("plot", help="SVG of a chart")
    p.add_argument("--chart", required=True)
    p.add_argument("--polytope")
    p.add_argument("--output", default="chart.svg")
    p.set_defaults(func=cmd_plot)

    p = subparsers.add_parser("describe", help="vertices, edges, anchors and admissible cone of a polytope")
    p.add_argument("--polytope", required=True)
    p.set_defaults(func=cmd_describe)

    p = subparsers.add_parser("guillemin", help="Guillemin potential on a lattice (CSV)")
    p.add_argument("--polytope", required=True)
    p.add_argument("--grid", required=True, help="x1_min:x1_max:n1,x2_min:x2_max:n2")
    p.add_argument("--output", default="guillemin.csv")
    p.set_defaults(func=cmd_guillemin)
    return parser


def _attach_values(argv, options=VALUE_OPTIONS):
    """Join option values starting with '-' to their option, '--grid=-4:4:17,...'."""
    argv = list(argv)
    joined = []
    i = 0
    while i < len(argv):
        if argv[i] in options and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            joined.append("%s=%s" % (argv[i], argv[i + 1]))
            i += 2
        else:
            joined.append(argv[i])
            i += 1
    return joined


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    if getattr(args, "func", None) is None:
        parser.print_help()
        return EXIT_INVALID
    try:
        return args.func(args)
    except (SFKValueError, ValueError) as e:
        logging.error("%s", e)
        print(str(e), file=sys.stderr)
        return EXIT_INVALID
    except (NumericalFailure, ArithmeticError) as e:
        logging.error("%s", e)
        print(str(e), file=sys.stderr)
        return EXIT_NUMERICAL
    except (IOError, OSError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
