"""Command-line interface over the ratio-distribution engines.

Subcommands: pdf and cdf write x,value CSV; modality prints the shape
verdict; interval prints the chosen evaluation window; bench runs the
timed accuracy protocol and exports records.

Engines: analytic (closed forms), mellin (DE Mellin convolution),
broda-kan (2D CF inversion), gil-pelaez (1D CF inversion of a single
distribution passed via --dist).  Engine errors exit with status 1 and a
one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from . import bench as bench_mod
from .cf import (
    CharFn,
    Grid2DConfig,
    auto_grid,
    bivariate_normal_joint_cf,
    broda_kan_cdf,
    broda_kan_pdf_indep,
    broda_kan_pdf_joint,
    cauchy_cf,
    cf_moments,
    chi_square_cf,
    gil_pelaez_cdf,
    gil_pelaez_pdf,
    normal_cf,
    product_joint_cf,
    six_sigma_interval,
)
from .errors import RatioDistError, InvalidParamsError
from .mellin import (
    Chebyshev,
    DensityFn,
    Direct,
    chi_square_density,
    normal_density,
    ratio_pdf_grid,
    uniform_density,
)
from .normal_ratio import (
    BivNormalParams,
    HakeInputs,
    MODALITY_A0,
    StdRatioParams,
    classify_modality,
    evaluation_interval,
    hake_params,
    modality_curve,
    ratio_cdf,
    ratio_pdf_phamgia,
    std_ratio_cdf,
    std_ratio_pdf,
    to_standard,
)
from .quadrature import QuadratureConfig

__all__ = ["RunConfig", "main"]


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand, one engine, one distribution spec."""

    subcommand: str
    engine: str = "analytic"
    std_ratio: Optional[StdRatioParams] = None
    biv: Optional[BivNormalParams] = None
    hake: Optional[HakeInputs] = None
    num: Optional[List[str]] = None
    den: Optional[List[str]] = None
    dist: Optional[List[str]] = None
    interval: Optional[Tuple[float, float]] = None
    auto_interval: bool = False
    n_points: int = 1000
    k: Optional[float] = None
    rel_tol: float = 1e-10
    cheb_nodes: Optional[int] = None
    grid_n: int = 500
    threads: int = 1
    out: str = "-"
    # bench-only settings
    methods: List[str] = field(default_factory=list)
    runs: int = 3
    reps: int = 10
    rel_tols: List[float] = field(default_factory=list)
    format: str = "csv"
    practical: bool = False
    seed: Optional[int] = None  # reserved for sampling-based workflows


def _parse_density(spec: List[str]) -> DensityFn:
    kind, args = spec[0], [float(v) for v in spec[1:]]
    if kind == "normal" and len(args) == 2:
        return normal_density(args[0], args[1])
    if kind == "chisq" and len(args) == 1:
        return chi_square_density(args[0])
    if kind == "uniform" and len(args) == 2:
        return uniform_density(args[0], args[1])
    raise InvalidParamsError(
        f"unknown density spec {spec!r}; expected 'normal MU SIGMA', 'chisq K' or 'uniform LO HI'"
    )


def _parse_cf(spec: List[str]) -> CharFn:
    kind, args = spec[0], [float(v) for v in spec[1:]]
    if kind == "normal" and len(args) == 2:
        return normal_cf(args[0], args[1])
    if kind == "chisq" and len(args) == 1:
        return chi_square_cf(int(args[0]))
    if kind == "cauchy" and len(args) == 2:
        return cauchy_cf(args[0], args[1])
    raise InvalidParamsError(
        f"no characteristic function for spec {spec!r}; expected 'normal MU SIGMA', "
        "'chisq K' or 'cauchy X0 GAMMA'"
    )


def _ratio_cfs(cfg: RunConfig) -> Tuple[CharFn, CharFn]:
    if cfg.std_ratio is not None:
        return normal_cf(cfg.std_ratio.a, 1.0), normal_cf(cfg.std_ratio.b, 1.0)
    if cfg.num is not None and cfg.den is not None:
        return _parse_cf(cfg.num), _parse_cf(cfg.den)
    raise InvalidParamsError("this engine needs --std-ratio or --num/--den")


def _biv_like(cfg: RunConfig) -> Optional[BivNormalParams]:
    if cfg.biv is not None:
        return cfg.biv
    if cfg.hake is not None:
        return hake_params(cfg.hake)
    return None


def _any_params(cfg: RunConfig) -> StdRatioParams:
    p = _biv_like(cfg)
    if p is not None:
        return to_standard(p)[0]
    if cfg.std_ratio is not None:
        return cfg.std_ratio
    raise InvalidParamsError("needs --std-ratio, --biv or --hake")


def _choose_interval(cfg: RunConfig) -> Tuple[float, float]:
    """Explicit --interval wins; otherwise the engine's natural moment source."""
    if cfg.interval is not None:
        lo, hi = cfg.interval
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InvalidParamsError(f"interval must be finite with lo < hi, got ({lo!r}, {hi!r})")
        return cfg.interval
    if not cfg.auto_interval:
        raise InvalidParamsError("pass --interval LO HI or --auto-interval")
    if cfg.engine in ("analytic", "mellin"):
        p = _biv_like(cfg)
        if p is not None:
            return evaluation_interval(p, cfg.k or 2.0)
        if cfg.std_ratio is not None:
            return evaluation_interval(cfg.std_ratio, cfg.k or 2.0)
        if cfg.num is not None and cfg.den is not None:
            # densities carry no moments; fall back to the CF route
            cf1, cf2 = _parse_cf(cfg.num), _parse_cf(cfg.den)
            return six_sigma_interval(cf1, cf2, cfg.k or 6.0)
        raise InvalidParamsError("auto interval needs a distribution spec")
    if cfg.dist is not None:
        mu, var = cf_moments(_parse_cf(cfg.dist))
        k = cfg.k or 6.0
        sd = math.sqrt(var)
        return (mu - k * sd, mu + k * sd)
    cf1, cf2 = _ratio_cfs(cfg)
    return six_sigma_interval(cf1, cf2, cfg.k or 6.0)


def _open_out(path: str) -> TextIO:
    return sys.stdout if path == "-" else open(path, "w", encoding="utf-8")


def _write_xy(cfg: RunConfig, xs: np.ndarray, fn: Callable[[float], float]) -> None:
    fh = _open_out(cfg.out)
    try:
        fh.write("x,value\n")
        for x in xs:
            fh.write(f"{float(x):.17g},{fn(float(x)):.17g}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_pdf(cfg: RunConfig) -> int:
    lo, hi = _choose_interval(cfg)
    xs = np.linspace(lo, hi, cfg.n_points)

    if cfg.engine == "analytic":
        p = _biv_like(cfg)
        if p is not None:
            _write_xy(cfg, xs, lambda x: ratio_pdf_phamgia(p, x))
        elif cfg.std_ratio is not None:
            sr = cfg.std_ratio
            _write_xy(cfg, xs, lambda x: std_ratio_pdf(sr, x))
        else:
            raise InvalidParamsError("analytic engine needs --std-ratio, --biv or --hake")
        return 0

    if cfg.engine == "mellin":
        p = _biv_like(cfg)
        if cfg.std_ratio is not None:
            f1, f2 = normal_density(cfg.std_ratio.a, 1.0), normal_density(cfg.std_ratio.b, 1.0)
        elif cfg.num is not None and cfg.den is not None:
            f1, f2 = _parse_density(cfg.num), _parse_density(cfg.den)
        elif p is not None and p.rho == 0.0:
            f1, f2 = normal_density(p.mu1, p.sigma1), normal_density(p.mu2, p.sigma2)
        elif p is not None:
            raise InvalidParamsError(
                "mellin convolution requires independent factors (rho = 0); "
                "use the analytic or broda-kan engine for correlated ratios"
            )
        else:
            raise InvalidParamsError("mellin engine needs --std-ratio, --num/--den or --biv")
        accel = Chebyshev(cfg.cheb_nodes) if cfg.cheb_nodes else Direct()
        qcfg = QuadratureConfig(rel_tol=cfg.rel_tol)
        vals = ratio_pdf_grid(f1, f2, xs, qcfg, accel, threads=cfg.threads)
        fh = _open_out(cfg.out)
        try:
            fh.write("x,value\n")
            for x, v in zip(xs, vals):
                fh.write(f"{float(x):.17g},{float(v):.17g}\n")
        finally:
            if fh is not sys.stdout:
                fh.close()
        return 0

    if cfg.engine == "broda-kan":
        p = _biv_like(cfg)
        if p is not None:
            jcf = bivariate_normal_joint_cf(p)
            grid = auto_grid(normal_cf(p.mu1, p.sigma1), normal_cf(p.mu2, p.sigma2), n=cfg.grid_n)
            _write_xy(cfg, xs, lambda x: broda_kan_pdf_joint(jcf, x, grid))
        else:
            cf1, cf2 = _ratio_cfs(cfg)
            grid = auto_grid(cf1, cf2, n=cfg.grid_n)
            _write_xy(cfg, xs, lambda x: broda_kan_pdf_indep(cf1, cf2, x, grid))
        return 0

    if cfg.engine == "gil-pelaez":
        if cfg.dist is None:
            raise InvalidParamsError(
                "gil-pelaez inverts a single characteristic function; pass --dist KIND ARGS"
            )
        cf = _parse_cf(cfg.dist)
        qcfg = QuadratureConfig(rel_tol=cfg.rel_tol)
        _write_xy(cfg, xs, lambda x: gil_pelaez_pdf(cf, x, qcfg))
        return 0

    raise InvalidParamsError(f"unknown engine {cfg.engine!r}")


def cmd_cdf(cfg: RunConfig) -> int:
    lo, hi = _choose_interval(cfg)
    xs = np.linspace(lo, hi, cfg.n_points)

    if cfg.engine == "analytic":
        p = _biv_like(cfg)
        if p is not None:
            _write_xy(cfg, xs, lambda x: ratio_cdf(p, x))
        elif cfg.std_ratio is not None:
            sr = cfg.std_ratio
            _write_xy(cfg, xs, lambda x: std_ratio_cdf(sr, x))
        else:
            raise InvalidParamsError("analytic engine needs --std-ratio, --biv or --hake")
        return 0

    if cfg.engine == "broda-kan":
        p = _biv_like(cfg)
        if p is not None:
            jcf = bivariate_normal_joint_cf(p)
            grid = auto_grid(normal_cf(p.mu1, p.sigma1), normal_cf(p.mu2, p.sigma2), n=cfg.grid_n)
        else:
            cf1, cf2 = _ratio_cfs(cfg)
            jcf = product_joint_cf(cf1, cf2)
            grid = auto_grid(cf1, cf2, n=cfg.grid_n)
        _write_xy(cfg, xs, lambda x: broda_kan_cdf(jcf, x, grid))
        return 0

    if cfg.engine == "gil-pelaez":
        if cfg.dist is None:
            raise InvalidParamsError(
                "gil-pelaez inverts a single characteristic function; pass --dist KIND ARGS"
            )
        cf = _parse_cf(cfg.dist)
        qcfg = QuadratureConfig(rel_tol=cfg.rel_tol)
        _write_xy(cfg, xs, lambda x: gil_pelaez_cdf(cf, x, qcfg))
        return 0

    if cfg.engine == "mellin":
        raise InvalidParamsError("the mellin engine computes densities only; use cdf with another engine")
    raise InvalidParamsError(f"unknown engine {cfg.engine!r}")


def cmd_modality(cfg: RunConfig) -> int:
    sr = _any_params(cfg)
    verdict = classify_modality(sr, practical=cfg.practical)
    fh = _open_out(cfg.out)
    try:
        fh.write(f"{verdict.value}\n")
        if 1.0 <= sr.a < MODALITY_A0:
            fh.write(f"b*({sr.a:.17g}) = {modality_curve(sr.a):.17g}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_interval(cfg: RunConfig) -> int:
    cfg.auto_interval = True
    lo, hi = _choose_interval(cfg)
    fh = _open_out(cfg.out)
    try:
        fh.write(f"{lo:.17g},{hi:.17g}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    if cfg.std_ratio is None:
        raise InvalidParamsError("bench needs --std-ratio A B")
    if cfg.interval is not None:
        lo, hi = cfg.interval
    else:
        lo, hi = evaluation_interval(cfg.std_ratio, cfg.k or 2.0)

    base = bench_mod.run_experiment(
        bench_mod.BASELINE_METHOD,
        cfg.std_ratio,
        (lo, hi),
        n_points=cfg.n_points,
        runs=cfg.runs,
        reps=cfg.reps,
        rel_tol=bench_mod.BASELINE_REL_TOL,
        label=f"{bench_mod.BASELINE_METHOD}@{bench_mod.BASELINE_REL_TOL:g}",
    )
    base = dataclasses.replace(base, speedup_vs_baseline=1.0)
    records = [base]
    for method in cfg.methods or []:
        if method in ("mellin-de", "mellin-de-cheb") and cfg.rel_tols:
            for tol in cfg.rel_tols:
                opts = {"rel_tol": tol}
                if method == "mellin-de-cheb" and cfg.cheb_nodes:
                    opts["n_nodes"] = cfg.cheb_nodes
                records.append(
                    bench_mod.run_experiment(
                        method, cfg.std_ratio, (lo, hi), n_points=cfg.n_points,
                        runs=cfg.runs, reps=cfg.reps, baseline=base,
                        label=f"{method}@{tol:g}", **opts,
                    )
                )
        else:
            opts = {}
            if method == "broda-kan":
                opts["n"] = cfg.grid_n
            elif method == "mellin-de-cheb" and cfg.cheb_nodes:
                opts["n_nodes"] = cfg.cheb_nodes
            records.append(
                bench_mod.run_experiment(
                    method, cfg.std_ratio, (lo, hi), n_points=cfg.n_points,
                    runs=cfg.runs, reps=cfg.reps, baseline=base, **opts,
                )
            )
    if cfg.out == "-":
        raise InvalidParamsError("bench needs --out PATH for the records file")
    bench_mod.export(records, cfg.format, cfg.out)
    return 0


def _add_dist_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--std-ratio", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("--biv", nargs=5, type=float, metavar=("MU1", "MU2", "SIGMA1", "SIGMA2", "RHO"))
    p.add_argument(
        "--hake", nargs=6, type=float,
        metavar=("MU_PRE", "MU_POST", "SD_PRE", "SD_POST", "RHO_STAR", "N"),
    )
    p.add_argument("--num", nargs="+", metavar="SPEC")
    p.add_argument("--den", nargs="+", metavar="SPEC")
    p.add_argument("--dist", nargs="+", metavar="SPEC")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=["analytic", "mellin", "broda-kan", "gil-pelaez"],
                   default="analytic")
    p.add_argument("--interval", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--auto-interval", action="store_true")
    p.add_argument("--n", type=int, default=1000, dest="n_points")
    p.add_argument("--k", type=float, default=None,
                   help="interval half-width in sd units (default 6 for CF engines, 2 otherwise)")
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--cheb-nodes", type=int, default=None)
    p.add_argument("--grid-n", type=int, default=500)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="-")


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "std_ratio", None) is not None:
        cfg.std_ratio = StdRatioParams(*args.std_ratio)
    if getattr(args, "biv", None) is not None:
        cfg.biv = BivNormalParams(*args.biv)
    if getattr(args, "hake", None) is not None:
        h = args.hake
        cfg.hake = HakeInputs(h[0], h[1], h[2], h[3], h[4], int(h[5]))
    if getattr(args, "interval", None) is not None:
        cfg.interval = (args.interval[0], args.interval[1])
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ratiodist", description="Ratio-distribution engines: PDF, CDF, modality, benchmarks."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_pdf = sub.add_parser("pdf", help="density values over a grid as x,value CSV")
    _add_dist_args(p_pdf)
    _add_grid_args(p_pdf)

    p_cdf = sub.add_parser("cdf", help="distribution function over a grid as x,value CSV")
    _add_dist_args(p_cdf)
    _add_grid_args(p_cdf)

    p_mod = sub.add_parser("modality", help="unimodal/bimodal verdict and critical curve")
    _add_dist_args(p_mod)
    p_mod.add_argument("--practical", action="store_true",
                       help="suppress theoretical modes too small to observe")
    p_mod.add_argument("--out", default="-")

    p_int = sub.add_parser("interval", help="moment-based evaluation interval as lo,hi")
    _add_dist_args(p_int)
    _add_grid_args(p_int)

    p_bench = sub.add_parser("bench", help="timed accuracy protocol; exports records")
    p_bench.add_argument("--std-ratio", nargs=2, type=float, metavar=("A", "B"))
    p_bench.add_argument("--method", action="append", dest="methods",
                         choices=list(bench_mod.method_ids()), default=[])
    p_bench.add_argument("--interval", nargs=2, type=float, metavar=("LO", "HI"))
    p_bench.add_argument("--n", type=int, default=1000, dest="n_points")
    p_bench.add_argument("--k", type=float, default=None)
    p_bench.add_argument("--runs", type=int, default=3)
    p_bench.add_argument("--reps", type=int, default=10)
    p_bench.add_argument("--rel-tol", type=float, nargs="+", dest="rel_tols", default=[])
    p_bench.add_argument("--cheb-nodes", type=int, default=None)
    p_bench.add_argument("--grid-n", type=int, default=500)
    p_bench.add_argument("--format", choices=["csv", "json"], default="csv")
    p_bench.add_argument("--out", default="-")

    args = parser.parse_args(argv)
    cfg = _build_config(args)
    handlers = {
        "pdf": cmd_pdf,
        "cdf": cmd_cdf,
        "modality": cmd_modality,
        "interval": cmd_interval,
        "bench": cmd_bench,
    }
    try:
        return handlers[cfg.subcommand](cfg)
    except RatioDistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
