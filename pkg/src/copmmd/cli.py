"""Command-line interface: ``copmmd {estimate,test,select,embed,bench}``.

Exit codes: 0 success, 2 configuration error, 3 data error,
4 numerical inconsistency.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import _kernels
from .copula import SampleMatrix
from .dependence import ESTIMATORS, estimate
from .embed import embed_profile
from .errors import ConfigError, CopulaMMDError
from .inference import independence_test_permutation
from .io import ResultDocument, RunConfig, load_csv, write_series
from .kernel import make_kernel
from .scenarios import SCENARIOS, run_scenario
from .select import OBJECTIVES, build_profile, select

log = logging.getLogger("copmmd")

COMMANDS = ("estimate", "test", "select", "embed", "bench")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON RunConfig; explicit flags override it")
    common.add_argument("--input", help="CSV file with a header row")
    common.add_argument("--no-header", dest="has_header", action="store_const", const=False)
    common.add_argument("--columns", help="comma-separated column names or 0-based indices")
    common.add_argument("--target", help="target column name or 0-based index")
    common.add_argument("--estimator", choices=ESTIMATORS)
    common.add_argument("--kernel", dest="kernel_family", choices=("gaussian", "laplace"))
    common.add_argument("--sigma", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--n-uniform", dest="n_uniform", type=int)
    common.add_argument("--permutations", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--h", type=int)
    common.add_argument("--objective", choices=OBJECTIVES)
    common.add_argument("--dims", type=int)
    common.add_argument("--jitter", type=float, help="relative tie-breaking noise in (0, 1]")
    common.add_argument("--scenario", help=f"one of {sorted(SCENARIOS)}")
    common.add_argument("--seeds", type=int, help="bench: number of consecutive seeds")
    common.add_argument("--plot-dir", dest="plot_dir", help="bench: directory for plot CSV series")
    common.add_argument("--output", help="result document path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="copmmd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for key in ("input", "has_header", "target", "estimator", "kernel_family", "sigma", "seed",
                "n_uniform", "permutations", "alpha", "h", "objective", "dims", "jitter",
                "scenario", "seeds", "plot_dir", "output"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if args.columns is not None:
        cfg.columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    return cfg.validate()


def _load(cfg: RunConfig) -> SampleMatrix:
    if not cfg.input:
        raise ConfigError("--input is required for this command")
    return load_csv(cfg.input, cfg.has_header, cfg.columns)


def _target_index(cfg: RunConfig, X: SampleMatrix) -> int:
    if cfg.target is None:
        raise ConfigError("--target is required for this command")
    t = str(cfg.target)
    if t.lstrip("-").isdigit():
        idx = int(t)
    elif t in X.column_names:
        idx = X.column_names.index(t)
    else:
        raise ConfigError(f"unknown target column {t!r}")
    if not (0 <= idx < X.d):
        raise ConfigError(f"target index {idx} out of range for {X.d} columns")
    return idx


def cli_estimate(cfg: RunConfig) -> dict:
    X = _load(cfg)
    est = estimate(X, cfg.estimator, make_kernel(cfg.kernel_family, cfg.sigma), seed=cfg.seed,
                   n=cfg.n_uniform, jitter_magnitude=cfg.jitter)
    for w in est.warnings:
        log.warning(w)
    return {"columns": X.column_names, "estimate": est.to_dict()}


def cli_test(cfg: RunConfig) -> dict:
    X = _load(cfg)
    res = independence_test_permutation(X, make_kernel(cfg.kernel_family, cfg.sigma),
                                        cfg.permutations, cfg.alpha, cfg.seed)
    return {"columns": X.column_names, "test": res.to_dict()}


def cli_select(cfg: RunConfig) -> dict:
    X = _load(cfg)
    target = _target_index(cfg, X)
    prof = build_profile(X, target, cfg.estimator, make_kernel(cfg.kernel_family, cfg.sigma),
                         seed=cfg.seed, n=cfg.n_uniform, jitter_magnitude=cfg.jitter,
                         include_pairwise=cfg.objective == "mrmr")
    res = select(prof, cfg.h, cfg.objective)
    return {"profile": prof.to_dict(), "selection": res.to_dict(),
            "selected_names": [X.column_names[j] for j in res.selected]}


def cli_embed(cfg: RunConfig) -> dict:
    X = _load(cfg)
    prof = build_profile(X, None, cfg.estimator, make_kernel(cfg.kernel_family, cfg.sigma),
                         seed=cfg.seed, n=cfg.n_uniform, jitter_magnitude=cfg.jitter)
    emb = embed_profile(prof, cfg.dims)
    if emb.truncated:
        log.warning("only %d positive eigenvalues; embedding has fewer than %d dims",
                    emb.coordinates.shape[1], cfg.dims)
    return {"profile": prof.to_dict(), "embedding": emb.to_dict()}


def cli_bench(cfg: RunConfig) -> dict:
    if cfg.scenario is None:
        raise ConfigError(f"--scenario is required; available: {sorted(SCENARIOS)}")
    runs = [run_scenario(cfg.scenario, cfg.seed + i) for i in range(cfg.seeds)]
    if cfg.plot_dir:
        _write_plot_series(cfg.scenario, runs, Path(cfg.plot_dir))
    return {"scenario": cfg.scenario, "runs": runs}


def _write_plot_series(scenario: str, runs: list[dict], out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    if scenario in ("synthetic61", "synthetic62"):
        keys = ["raw_mmd_Y_X1", "raw_mmd_Y_X2", "copula_Y_X1", "copula_Y_X2"]
        write_series(out / f"{scenario}_bars.csv", ["seed"] + keys,
                     [[r["seed"]] + [r["bars"][k] for k in keys] for r in runs])
        return
    names = runs[0]["column_names"]
    rows = []
    for r in runs:
        for j, err in r["regression_mse"].items():
            rows.append([r["seed"], j + 1, names[j], err])
    write_series(out / "housing_regression_mse.csv", ["seed", "feature", "name", "mse"], rows)
    for kind in ("copula", "raw"):
        key = f"embedding_{kind}"
        if key not in runs[0]:
            continue
        rows = [[r["seed"], j + 1, names[j], *xy]
                for r in runs for j, xy in enumerate(r[key]["coordinates"])]
        width = len(runs[0][key]["coordinates"][0])
        write_series(out / f"housing_embedding_{kind}.csv",
                     ["seed", "feature", "name"] + [f"dim{c + 1}" for c in range(width)], rows)


HANDLERS = {"estimate": cli_estimate, "test": cli_test, "select": cli_select,
            "embed": cli_embed, "bench": cli_bench}


def run(command: str, cfg: RunConfig) -> ResultDocument:
    t0 = time.perf_counter()
    payload = HANDLERS[command](cfg)
    payload["backend"] = _kernels.BACKEND
    return ResultDocument(command, cfg.to_dict(), payload, time.perf_counter() - t0)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config_from_args(args)
        doc = run(args.command, cfg)
        text = doc.dumps()
    except CopulaMMDError as exc:
        print(f"copmmd: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
