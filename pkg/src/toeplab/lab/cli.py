"""Command line entry point: ``toeplab <subcommand> ...``.

Exit codes: 0 all checks pass, 1 at least one failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .. import spectral, structured, symbols
from ..symbols import SymbolError
from .config import VERIFY_SUITES, ConfigError, ExperimentConfig, from_mapping, load_config
from .runner import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, run, run_suites
from .sections import hankel, hankel_gram, self_semicommutator


def _ints(text):
    return tuple(int(x) for x in text.split(","))


def _floats(text):
    return tuple(float(x) for x in text.split(","))


def _build(label, kind, n):
    spec = symbols.parse_label(label)
    if kind == "toeplitz":
        return structured.toeplitz(symbols.symbol_coeffs(spec, n), n)
    if kind == "hankel":
        return hankel(spec, n)
    if kind == "semicommutator":
        return self_semicommutator(spec, n)
    if kind == "hankel-gram":
        return hankel_gram(spec, n)
    raise ConfigError(f"unknown matrix kind {kind!r}")


def cmd_coeffs(args):
    spec = symbols.parse_label(args.symbol)
    if args.sampled or spec.kind is symbols.Kind.SAMPLED:
        c = symbols.sample_coeffs(symbols.sample_grid(spec, args.M) if spec.kind is not symbols.Kind.SAMPLED
                                  else spec, args.K)
    else:
        c = symbols.catalog_coeffs(spec, args.K)
    c.to_csv(sys.stdout)
    return EXIT_OK


def cmd_matrix(args):
    _build(args.symbol, args.kind, args.n).to_csv(sys.stdout)
    return EXIT_OK


def cmd_spectrum(args):
    from .._csv import write_rows
    rows = []
    for n in args.n:
        s = spectral.singular_values(_build(args.symbol, args.kind, n))
        rows.extend((n, i, float(v)) for i, v in enumerate(s.values))
    write_rows(sys.stdout, ("n", "index", "sigma"), rows)
    return EXIT_OK


def cmd_cluster(args):
    report = spectral.cluster_of_sections(lambda n: _build(args.symbol, args.kind, n),
                                          args.ns, args.epsilons)
    report.to_csv(sys.stdout)
    return EXIT_OK


def _config_from_args(args, base=None):
    values = {}
    for key, attr in (("symbols.f", "f"), ("symbols.g", "g"), ("grid.ns", "ns"),
                      ("grid.epsilons", "epsilons"), ("trunc.K", "K"), ("trunc.inner", "inner"),
                      ("sample.M", "M"), ("suites", "suites"), ("out.dir", "out"),
                      ("seed", "seed"), ("trials", "trials")):
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    if args.config:
        return load_config(args.config, values)
    return from_mapping(values, base)


def _report(reports, code, paths):
    for rep in reports:
        print(rep.text())
    if paths:
        print(f"wrote {len(paths)} files; manifest: {paths[-1]}")
    return code


def cmd_run(args):
    cfg = _config_from_args(args)
    reports, code, paths = run(cfg)
    return _report(reports, code, paths)


def cmd_verify(args):
    cfg = _config_from_args(args, ExperimentConfig(suites=VERIFY_SUITES))
    suites = cfg.suites or VERIFY_SUITES
    if args.out:
        reports, code, paths = run(cfg, suites)
        return _report(reports, code, paths)
    reports = run_suites(cfg, suites)
    return _report(reports, EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED, [])


def _add_run_options(p, need_symbol):
    p.add_argument("--config", help="key = value config file; flags override it")
    if need_symbol:
        p.add_argument("f", nargs="?", help="symbol label for f")
    else:
        p.add_argument("--f", help="symbol label for f")
    p.add_argument("--g", help="symbol label for g (default: conjugate of f)")
    p.add_argument("--ns", help="comma-separated sizes")
    p.add_argument("--epsilons", help="comma-separated thresholds, decreasing")
    p.add_argument("--K", help="coefficient truncation")
    p.add_argument("--inner", help="inner Hankel-product truncation")
    p.add_argument("--M", help="sampling grid size")
    p.add_argument("--suites", help="comma-separated suite names or 'all'")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", help="random seed")
    p.add_argument("--trials", help="random states for the Uchiyama check")


def build_parser():
    parser = argparse.ArgumentParser(prog="toeplab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="dump Fourier coefficients as CSV (k, re, im)")
    p.add_argument("symbol")
    p.add_argument("--K", type=int, default=symbols.DEFAULT_K)
    p.add_argument("--sampled", action="store_true", help="use DFT quadrature instead of closed form")
    p.add_argument("--M", type=int, default=symbols.DEFAULT_M)
    p.set_defaults(func=cmd_coeffs)

    kinds = ("toeplitz", "hankel", "semicommutator", "hankel-gram")
    p = sub.add_parser("matrix", help="dump a section as CSV (i, j, re, im)")
    p.add_argument("symbol")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=kinds, default="toeplitz")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("spectrum", help="singular values as CSV (n, index, sigma)")
    p.add_argument("symbol")
    p.add_argument("--n", type=_ints, required=True, help="size or comma-separated sizes")
    p.add_argument("--kind", choices=kinds, default="semicommutator")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("cluster", help="outlier counts N(n, eps) as CSV plus a verdict line")
    p.add_argument("symbol")
    p.add_argument("--ns", type=_ints, default=spectral.DEFAULT_NS)
    p.add_argument("--epsilons", type=_floats, default=spectral.DEFAULT_EPSILONS)
    p.add_argument("--kind", choices=kinds, default="semicommutator")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", help="run the semicommutator/VMO/product suites for a symbol")
    _add_run_options(p, need_symbol=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="run the suites selected by a config")
    _add_run_options(p, need_symbol=False)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, SymbolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
