"""Pilot runs that freeze the golden thresholds used by the test suite.

The limit theorems verified here come without convergence rates, so
finite-n tolerances cannot be derived a priori.  This script runs each
statistical check once under a dedicated pilot seed and records
thresholds with explicit slack:

* total-variation distances: 1.5 x the pilot value;
* pairwise correlations: 1.5 x max(pilot |corr|, 4/sqrt(R)) - the floor
  keeps a lucky near-zero pilot draw from freezing an unpassable bar;
* degree-distribution tolerance: the 0.01 target, with the pilot's
  observed deviations recorded to show the headroom (~50x);
* ratio bands (level sizes, max degree, deep-level counts): pilot mean
  +/- (5 x pilot SE + absolute slack).

Regenerate with:  python scripts/calibrate_golden.py [--quick]
(--quick shrinks replication counts ~100x for a smoke run; do not commit
its output).  The committed tests/golden.json was produced by a full run.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from urtlab import ExperimentConfig, run_experiment
from urtlab.experiments import run_level_sizes

PILOT_SEED = 20250101
OUT = Path(__file__).resolve().parent.parent / "tests" / "golden.json"


def pilot_first_level(reps: int, n: int = 100_000, d_max: int = 3) -> dict:
    cfg = ExperimentConfig(
        experiment="first_level_degrees", n_grid=(n,), replications=reps,
        seed=PILOT_SEED, d_max=d_max,
    )
    report = run_experiment(cfg)
    tv = {}
    corr = {}
    for row in report.rows:
        kind = row["point"].get("kind")
        if kind == "tv_poisson1":
            tv[str(row["point"]["d"])] = row["estimate"]
        elif kind == "correlation":
            corr[f"{row['point']['d1']}-{row['point']['d2']}"] = abs(row["estimate"])
    floor = 4.0 / math.sqrt(reps)
    return {
        "n": n,
        "replications": reps,
        "d_max": d_max,
        "pilot_tv": tv,
        "pilot_abs_corr": corr,
        "tv_threshold": {d: 1.5 * v for d, v in tv.items()},
        "corr_threshold": {p: 1.5 * max(v, floor) for p, v in corr.items()},
    }


def pilot_degree_distribution(reps: int, n: int = 1_000_000) -> dict:
    observed = {}
    for model in ("uniform", "preferential"):
        cfg = ExperimentConfig(
            experiment="degree_distribution", n_grid=(n,), replications=reps,
            seed=PILOT_SEED, model=model, d_max=5,
        )
        report = run_experiment(cfg)
        observed[model] = max(abs(r["estimate"] - r["limit"]) for r in report.rows)
    return {
        "n": n,
        "replications": reps,
        "tolerance": 0.01,
        "pilot_max_abs_diff": observed,
    }


def pilot_level_size_ratios(reps: int, n: int = 1_000_000) -> dict:
    cfg = ExperimentConfig(
        experiment="level_sizes", n_grid=(n,), replications=reps,
        seed=PILOT_SEED, k_grid=(1, 2, 3, 4),
    )
    report = run_level_sizes(cfg)
    bands = {}
    for row in report.rows:
        k = row["point"]["k"]
        ratio = row["estimate"] / row["scale"]
        se = (row["se"] or 0.0) / row["scale"]
        pad = 5.0 * se + 0.02
        bands[str(k)] = [ratio - pad, ratio + pad]
    return {"n": n, "seeds": reps, "bands": bands}


def pilot_max_degree_ratio(reps: int, n: int = 1_000_000) -> dict:
    cfg = ExperimentConfig(
        experiment="max_degree", n_grid=(n,), replications=reps, seed=PILOT_SEED,
    )
    report = run_experiment(cfg)
    row = report.rows[0]
    mean, se = row["mean_ratio"], row["se"] or 0.0
    pad = 5.0 * se + 0.02
    return {"n": n, "seeds": reps, "band": [mean - pad, mean + pad]}


def pilot_higher_level_ratio(reps: int, n: int = 2000, k: int = 2, d: int = 1) -> dict:
    cfg = ExperimentConfig(
        experiment="higher_level_small_degree", n_grid=(n,), replications=reps,
        seed=PILOT_SEED, k_grid=(k,), d_max=d,
    )
    report = run_experiment(cfg)
    row = [r for r in report.rows if r["point"]["d"] == d][0]
    ratio = row["estimate"]
    return {"n": n, "k": k, "d": d, "replications": reps,
            "band": [ratio - 0.1, ratio + 0.1]}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smoke run, ~100x smaller")
    parser.add_argument("--out", default=str(OUT))
    args = parser.parse_args()

    scale = 100 if args.quick else 1
    t0 = time.time()
    golden = {
        "pilot_seed": PILOT_SEED,
        "quick": bool(args.quick),
        "first_level_degrees": pilot_first_level(100_000 // scale),
        "degree_distribution": pilot_degree_distribution(3),
        "level_size_ratio_bands": pilot_level_size_ratios(max(50 // scale, 5)),
        "max_degree_ratio_band": pilot_max_degree_ratio(max(50 // scale, 5)),
        "higher_level_ratio_band": pilot_higher_level_ratio(2000 // scale),
    }
    golden["pilot_runtime_s"] = round(time.time() - t0, 1)
    Path(args.out).write_text(json.dumps(golden, indent=2) + "\n")
    print(f"wrote {args.out} in {golden['pilot_runtime_s']}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
