"""``diffractkit`` command line: generate, run, verify, export.

Exit codes: 0 success, 1 configuration or input error (and failed verify
rows), 2 region underflow, 3 undetermined verdict when one was demanded.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import plotting
from .averaging import besicovitch_seminorm, default_shift_grid, mean_along, weyl_seminorm
from .classify import besicovitch_classify, mean_ap_delone, mean_ap_meyer, weyl_classify
from .comb import read_comb, write_comb
from .config import load_config
from .convergence import UNDETERMINED
from .correlation import autocorrelation, pair_correlation
from .errors import ConfigError, DiffractkitError, RegionUnderflow, UnknownFixture
from .fixtures import make_fixture
from .functions import SmoothedComb, tent
from .model_sets import bragg_spectrum, density_check, fibonacci
from .spectrum import cpp_check, fourier_bohr, fourier_bohr_uniform, parseval_check, peak_scan
from .verify import SUITES, rows_to_csv, run_suite

EXIT_OK, EXIT_ERROR, EXIT_UNDERFLOW, EXIT_UNDETERMINED = 0, 1, 2, 3


class _Outputs:
    """Writes exports into one directory with a common header."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.dir = cfg.out_dir
        os.makedirs(self.dir, exist_ok=True)
        self.written = []

    def path(self, suffix):
        return os.path.join(self.dir, f"{self.cfg.name}{suffix}")

    def csv(self, suffix, body):
        header = "".join(f"# {line}\n" for line in self.cfg.echo())
        self._write(suffix, header + body)

    def json(self, suffix, obj):
        obj = {"config": self.cfg.echo(), **obj}
        self._write(suffix, json.dumps(obj, indent=2, sort_keys=True, default=_json_default)
                    + "\n")

    def text(self, suffix, body):
        self._write(suffix, body)

    def figure(self, suffix, fn, *args):
        if self.cfg.figures:
            p = self.path(suffix)
            fn(*args, p)
            self.written.append(p)

    def _write(self, suffix, body):
        p = self.path(suffix)
        with open(p, "w", encoding="utf-8") as fh:
            fh.write(body)
        self.written.append(p)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if hasattr(o, "summary"):
        return o.summary()
    return str(o)


def load_input(cfg):
    """The point source named by the config (a fixture or a comb file)."""
    if cfg.file is not None:
        return read_comb(cfg.file)
    return make_fixture(cfg.fixture, **cfg.params)


def _shifts(cfg, n_max):
    shifts = list(cfg.shifts)
    if cfg.random_shifts:
        rng = np.random.default_rng(cfg.seed)
        shifts += [float(s) for s in rng.uniform(-0.5 * n_max, 0.5 * n_max, cfg.random_shifts)]
    return shifts


def _tag(fam):
    return fam.kind.replace("(", "").replace(")", "")


def _report_outputs(out, suffix, report):
    out.csv(f"{suffix}.csv", report.to_csv())
    out.json(f"{suffix}.json", {"report": report.summary()})
    out.figure(f"{suffix}.png", plotting.plot_report, report)


def run_experiment(cfg):
    """Run one recipe, write its exports and return ``(exit_code, written_paths)``."""
    out = _Outputs(cfg)
    mu = load_input(cfg)
    kw = {"q": cfg.q, "tol": cfg.tol}
    phi = tent(cfg.tent)
    code = EXIT_OK
    multi = len(cfg.families) > 1

    def sfx(fam, extra=""):
        return (f"_{_tag(fam)}" if multi else "") + extra

    if cfg.kind == "mean":
        for fam in cfg.families:
            _report_outputs(out, sfx(fam), mean_along(mu, fam, cfg.n, **kw))
    elif cfg.kind in ("besicovitch", "weyl"):
        f = SmoothedComb(mu, phi)
        for fam in cfg.families:
            if cfg.kind == "besicovitch":
                r = besicovitch_seminorm(f, cfg.p, fam, cfg.n, **kw)
            else:
                grid = _shifts(cfg, cfg.n)
                if not grid:
                    # the default grid draws random shifts; pin and echo its seed
                    cfg.seed = 0 if cfg.seed is None else cfg.seed
                    grid = default_shift_grid(cfg.n, seed=cfg.seed)
                r = weyl_seminorm(f, cfg.p, fam, cfg.n, grid, **kw)
            _report_outputs(out, sfx(fam), r)
    elif cfg.kind == "fourier_bohr":
        for fam in cfg.families:
            for k in cfg.freqs:
                r = fourier_bohr(mu, k, fam, cfg.n, **kw)
                _report_outputs(out, sfx(fam, f"_k{k:g}"), r)
    elif cfg.kind == "fourier_bohr_uniform":
        shifts = _shifts(cfg, cfg.n) or [0.0]
        for fam in cfg.families:
            for k in cfg.freqs:
                rec = fourier_bohr_uniform(mu, k, fam, cfg.n, shifts, **kw)
                out.json(sfx(fam, f"_k{k:g}.json"),
                         {"uniform": rec["uniform"], "spread": rec["spread"],
                          "limit": rec["limit"], "shifts": rec["shifts"],
                          "reports": [r.summary() for r in rec["reports"]]})
    elif cfg.kind == "autocorrelation":
        for fam in cfg.families:
            g = autocorrelation(mu, fam, cfg.n, cfg.cluster_tol, cfg.z_max)
            out.csv(sfx(fam, ".csv"), g.to_csv())
            out.figure(sfx(fam, ".png"), plotting.plot_autocorrelation, g)
    elif cfg.kind == "pair_correlation":
        for fam in cfg.families:
            for z in cfg.z:
                r = pair_correlation(mu, z, fam, cfg.n, cfg.match_tol, **kw)
                _report_outputs(out, sfx(fam, f"_z{z:g}"), r)
    elif cfg.kind == "cpp":
        for fam in cfg.families:
            tab = cpp_check(mu, fam, cfg.freqs, cfg.n, cfg.cpp_tol, cfg.z_max, q=cfg.q,
                            conv_tol=cfg.tol)
            out.csv(sfx(fam, ".csv"), tab.to_csv())
            out.json(sfx(fam, ".json"), {"table": tab.summary()})
            out.figure(sfx(fam, ".png"), plotting.plot_spectrum, tab)
            if cfg.require_verdict and any(r.status == UNDETERMINED for r in tab.rows):
                code = EXIT_UNDETERMINED
    elif cfg.kind == "parseval":
        f = SmoothedComb(mu, phi)
        for fam in cfg.families:
            rec = parseval_check(f, fam, cfg.freqs or [0.0], cfg.n)
            rec["coefficients"] = {repr(k): v for k, v in rec["coefficients"].items()}
            out.json(sfx(fam, ".json"), rec)
    elif cfg.kind == "peak_scan":
        for fam in cfg.families:
            peaks = peak_scan(mu, fam, cfg.k_range, cfg.k_step, cfg.n, cfg.threshold)
            body = "k,abs_a\n" + "".join(f"{k!r},{a!r}\n" for k, a in peaks)
            out.csv(sfx(fam, ".csv"), body)
    elif cfg.kind in ("density", "bragg"):
        cps = _scheme(cfg)
        if cfg.kind == "density":
            for fam in cfg.families:
                rec = density_check(cps, fam, cfg.n)
                out.json(sfx(fam, ".json"), {
                    "dens_estimate": rec["dens_estimate"], "dens_closed": rec["dens_closed"],
                    "maximal": rec["maximal"], "report": rec["report"].summary()})
        else:
            tab = bragg_spectrum(cps, cfg.k_max, cfg.intensity_floor)
            out.csv(".csv", tab.to_csv())
            out.figure(".png", plotting.plot_spectrum, tab)
    elif cfg.kind == "mean_ap":
        for fam in cfg.families:
            if cfg.u_radius is None:
                rec = mean_ap_meyer(mu, cfg.eps, fam, cfg.t_scan, cfg.t_step, cfg.n,
                                    match_tol=cfg.match_tol)
            else:
                rec = mean_ap_delone(mu, cfg.u_radius, cfg.eps, fam, cfg.t_scan, cfg.t_step,
                                     cfg.n)
            body = "t,defect\n" + "".join(f"{t!r},{d!r}\n"
                                          for t, d in zip(rec["t"], rec["defect"]))
            out.csv(sfx(fam, ".csv"), body)
            out.json(sfx(fam, ".json"), {k: v for k, v in rec.items()
                                         if k not in ("t", "defect")})
            out.figure(sfx(fam, ".png"), plotting.plot_scan, rec)
    elif cfg.kind == "classify_besicovitch":
        for fam in cfg.families:
            rec = besicovitch_classify(mu, phi, fam, cfg.freq_budget, cfg.n, cfg.deficit_tol,
                                       cfg.freqs, q=cfg.q, tol=cfg.tol)
            out.json(sfx(fam, ".json"), {
                k: v for k, v in rec.items() if k not in ("mean_sq_report", "fb_reports")})
            if cfg.require_verdict and rec["undetermined"]:
                code = EXIT_UNDETERMINED
    elif cfg.kind == "classify_weyl":
        grid = _shifts(cfg, cfg.n) or None
        v = weyl_classify(mu, phi, cfg.families, grid, cfg.freq_budget, cfg.n, cfg.freqs,
                          deficit_tol=cfg.deficit_tol, q=cfg.q, tol=cfg.tol)
        out.text(".json", v.to_json() + "\n")
        out.text(".txt", v.table() + "\n")
        if cfg.require_verdict and v.verdict == "inconclusive":
            code = EXIT_UNDETERMINED
    return code, out.written


def _scheme(cfg):
    if cfg.fixture is None or cfg.fixture.strip().lower() != "fibonacci":
        raise ConfigError("density and bragg need fixture = fibonacci",
                          cfg.lines.get(("input", "fixture")), cfg.path)
    return fibonacci()


# subcommands ------------------------------------------------------------------

def cmd_generate(args):
    if args.config:
        cfg = load_config(args.config)
        name, params, region = cfg.fixture, dict(cfg.params), cfg.region
        out = args.out or os.path.join(cfg.out_dir, f"{cfg.name}.comb")
        if name is None:
            raise ConfigError("generate needs [input] fixture", None, cfg.path)
    else:
        if not args.fixture:
            raise ConfigError("generate needs a config path or --fixture")
        name, params, region = args.fixture, _params(args.param), args.region
        out = args.out or f"{name}.comb"
    if region is None:
        raise ConfigError("generate needs a finite region (--region LO HI or [input] region)")
    lo, hi = region
    comb = make_fixture(name, **params).comb(lo, hi)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    write_comb(comb, out)
    print(f"wrote {len(comb)} atoms to {out}")
    return EXIT_OK


def _params(items):
    params = {}
    for item in items or []:
        key, _, value = item.partition("=")
        if not _:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = float(value)
    return params


def cmd_run(args):
    cfg = load_config(args.config)
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if args.figures:
        cfg.figures = True
    code, written = run_experiment(cfg)
    for p in written:
        print(p)
    if code == EXIT_UNDETERMINED:
        print("verdict undetermined", file=sys.stderr)
    return code


def cmd_verify(args):
    rows = run_suite(args.suite)
    for r in rows:
        print(r.line())
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(rows_to_csv(rows))
    return EXIT_OK if failed == 0 else EXIT_ERROR


def cmd_export(args):
    """Atom table (CSV) and comb file of the configured input over ``[input] region``."""
    cfg = load_config(args.config)
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if cfg.region is None:
        raise ConfigError("export needs [input] region", None, cfg.path)
    src = load_input(cfg)
    lo, hi = cfg.region
    comb = src.comb(lo, hi) if hasattr(src, "comb") else src.patch(lo, hi, 0)
    out = _Outputs(cfg)
    body = "x,re_w,im_w\n" + "".join(
        f"{float(x)!r},{float(w.real)!r},{float(w.imag)!r}\n"
        for x, w in zip(comb.x, comb.weights))
    out.csv("_atoms.csv", body)
    write_comb(comb, out.path(".comb"))
    out.written.append(out.path(".comb"))
    out.figure(".png", plotting.plot_comb, comb)
    for p in out.written:
        print(p)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="diffractkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a fixture over a finite region as a comb file")
    g.add_argument("config", nargs="?", help="recipe with [input] fixture and region")
    g.add_argument("--fixture", help="fixture name (lattice, a-defect, double-sided, blocks, "
                                     "fibonacci)")
    g.add_argument("--region", nargs=2, type=float, metavar=("LO", "HI"))
    g.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="fixture parameter, e.g. a=0.4142135")
    g.add_argument("--out", help="output comb file")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run an experiment recipe")
    r.add_argument("config")
    r.add_argument("--out-dir", help="override [output] dir")
    r.add_argument("--figures", action="store_true", help="also write PNG figures")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=["all", *SUITES])
    v.add_argument("--csv", help="also write the table as CSV")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="export the configured input as CSV and comb file")
    e.add_argument("config")
    e.add_argument("--out-dir", help="override [output] dir")
    e.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RegionUnderflow as exc:
        print(f"region underflow: {exc}", file=sys.stderr)
        return EXIT_UNDERFLOW
    except (ConfigError, UnknownFixture) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DiffractkitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
