"""BWR spread and selection time as the pruning threshold shrinks.

    python scripts/theta_sweep.py                       # 500-node synthetic, p = 0.1
    python scripts/theta_sweep.py --dataset data/p2p-Gnutella08.txt --prob trivalency
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from wicmax import bench
from wicmax.generators import random_digraph, write_edge_list
from wicmax.graph import parse_prob_scheme, parse_weight_scheme
from wicmax.weight_reset import analyze_theta


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dataset", type=Path, default=None)
    ap.add_argument("--prob", default="constant:0.1")
    ap.add_argument("--weights", default="uniform")
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--thetas", default="1e-1,1e-2,1e-3,1e-4,1e-5")
    ap.add_argument("--R-eval", dest="R_eval", type=int, default=20_000)
    ap.add_argument("--out", type=Path, default=Path("results/theta_sweep.csv"))
    args = ap.parse_args()

    if args.dataset is None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.dataset = args.out.parent / "synthetic_500_2000.txt"
        write_edge_list(args.dataset, random_digraph(500, 2000, np.random.default_rng(6)))
    cfg = bench.ExperimentConfig(
        dataset=args.dataset,
        model="wic",
        k_schedule=(args.k,),
        R_eval=args.R_eval,
        prob_scheme=parse_prob_scheme(args.prob),
        weight_scheme=parse_weight_scheme(args.weights),
        output=args.out,
    )
    g = bench.prepare_graph(cfg)
    thetas = [float(t) for t in args.thetas.split(",")]
    rows = bench.theta_sweep(cfg, thetas, g)

    p_mean = float(g.probs.mean()) if g.edge_count else 0.0
    d_mean = g.edge_count / g.node_count
    print(f"mean p = {p_mean:.4g}, mean out-degree = {d_mean:.4g}")
    print(f"{'theta':>8}{'sigma':>10}{'stderr':>9}{'select ms':>11}{'bound':>8}")
    analyzable = 0 < p_mean < 1 and p_mean * d_mean < 1
    for r in rows:
        bound = analyze_theta(p_mean, d_mean, float("inf"), r.theta).bounded_fraction if analyzable else float("nan")
        print(f"{r.theta:>8.0e}{r.sigma_mean:>10.2f}{r.sigma_stderr:>9.3f}{r.select_time_ms:>11.1f}{bound:>8.3f}")


if __name__ == "__main__":
    main()
