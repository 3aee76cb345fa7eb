"""Command line entry point: ``wicmax run | theta-sweep | compare-models | suggest-theta``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import bench
from .graph import parse_prob_scheme, parse_weight_scheme
from .reachability import PathBudgetExceeded
from .weight_reset import ThetaDomainError, analyze_theta, suggest_theta


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _scheme(parser):
    def parse(text: str):
        try:
            return parser(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def _experiment_args(p: argparse.ArgumentParser, default_algo: str) -> None:
    p.add_argument("--dataset", type=Path, required=True, help="SNAP edge list")
    p.add_argument("--undirected", action="store_true", help="add both directions for every edge")
    p.add_argument("--model", choices=bench.MODELS, default="wic")
    p.add_argument("--algo", default=default_algo, help=f"comma list of {', '.join(bench.ALGORITHMS)}")
    p.add_argument("--k", type=_int_list, default=bench.DEFAULT_K, help="seed-set sizes, e.g. 1,2,5,10")
    p.add_argument("--theta", type=float, default=1e-4)
    p.add_argument("--R-select", dest="R_select", type=int, default=10_000)
    p.add_argument("--R-eval", dest="R_eval", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--prob-scheme", type=_scheme(parse_prob_scheme), default="trivalency",
                   help="trivalency | constant:<p> | file:<path>")
    p.add_argument("--weight-scheme", type=_scheme(parse_weight_scheme), default=None,
                   help="uniform[:<w>] | randint[:<max>] | file:<path> (default per model)")
    p.add_argument("--out", type=Path, default=None, help="result file (.csv or .json)")
    p.add_argument("--threads", type=int, default=int(os.environ.get("WICMAX_THREADS", "1")))
    p.add_argument("--lazy", action="store_true", help="lazy-forward greedy")
    p.add_argument("--score-without-self", action="store_true",
                   help="rank WR/BWR candidates by V alone, without their own weight")
    p.add_argument("--max-paths", type=int, default=None, help="simple-path budget per source")
    p.add_argument("--cache-dir", type=Path, default=None, help="reuse reachability stores from here")
    p.add_argument("--force", action="store_true", help="allow greedy on very large graphs")
    p.add_argument("--large", action="store_true", help="allow graphs beyond desk scale")


def _config(ns: argparse.Namespace) -> bench.ExperimentConfig:
    prob = ns.prob_scheme if not isinstance(ns.prob_scheme, str) else parse_prob_scheme(ns.prob_scheme)
    return bench.ExperimentConfig(
        dataset=ns.dataset,
        model=ns.model,
        algorithms=tuple(a.strip() for a in ns.algo.split(",") if a.strip()),
        k_schedule=tuple(ns.k),
        theta=ns.theta,
        R_select=ns.R_select,
        R_eval=ns.R_eval,
        rng_seed=ns.seed,
        undirected=ns.undirected,
        prob_scheme=prob,
        weight_scheme=ns.weight_scheme,
        output=ns.out,
        threads=max(1, ns.threads),
        lazy=ns.lazy,
        score_self=not ns.score_without_self,
        max_paths=ns.max_paths,
        force=ns.force,
        large=ns.large,
        cache_dir=ns.cache_dir,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wicmax", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _experiment_args(sub.add_parser("run", help="k-sweep for one or more algorithms"), "bwr")

    sweep = sub.add_parser("theta-sweep", help="BWR spread and time across thresholds")
    _experiment_args(sweep, "bwr")
    sweep.add_argument("--thetas", type=_float_list, default=(1e-1, 1e-2, 1e-3, 1e-4, 1e-5))

    cmp_ = sub.add_parser("compare-models", help="WIC-aware vs weight-blind selection")
    _experiment_args(cmp_, "bwr,pagerank")
    cmp_.add_argument("--ic-weights", type=_scheme(parse_weight_scheme), default=None)
    cmp_.add_argument("--wic-weights", type=_scheme(parse_weight_scheme), default=None)

    st = sub.add_parser("suggest-theta", help="pruning threshold from mean-field parameters")
    st.add_argument("--p", type=float, required=True, help="mean edge probability")
    st.add_argument("--d", type=float, required=True, help="mean out-degree")
    st.add_argument("--alpha", type=float, default=math.inf, help="propagation horizon in steps")
    st.add_argument("--epsilon", type=float, default=None)
    st.add_argument("--theta", type=float, default=None, help="analyze this threshold instead")
    return parser


def _emit(rows, ns, columns=bench.RESULT_COLUMNS, schema=bench.SCHEMA) -> None:
    if ns.out is None:
        sys.stdout.write(bench.render_rows(rows, columns, schema))
    else:
        print(f"wrote {len(rows)} rows to {ns.out}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if ns.command == "suggest-theta":
            if ns.theta is not None:
                out = analyze_theta(ns.p, ns.d, ns.alpha, ns.theta)
            elif ns.epsilon is not None:
                if not math.isfinite(ns.alpha):
                    raise ThetaDomainError("suggest-theta needs a finite --alpha")
                out = suggest_theta(ns.p, ns.d, ns.alpha, ns.epsilon)
            else:
                raise ThetaDomainError("pass --epsilon to suggest a threshold or --theta to analyze one")
            print(json.dumps(dataclasses.asdict(out) | {"bounded_fraction": out.bounded_fraction}, indent=1))
            return 0
        cfg = _config(ns)
        if ns.command == "run":
            _emit(bench.run_experiment(cfg), ns)
        elif ns.command == "theta-sweep":
            _emit(bench.theta_sweep(cfg, ns.thetas), ns)
        elif ns.command == "compare-models":
            rows = bench.compare_models(cfg, ns.ic_weights, ns.wic_weights)
            _emit(rows, ns, bench.COMPARISON_COLUMNS, "wicmax-compare/1")
    except (bench.ExperimentError, ThetaDomainError, PathBudgetExceeded, OSError, ValueError) as exc:
        print(f"wicmax: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
