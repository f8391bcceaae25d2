#!/usr/bin/env python3
"""Threshold-recovery experiment on a constructed corpus.

True objects score in [0.22, 1.0], spurious detections in [0.05, 0.215],
so exactly one grid point reproduces the annotated numerosities. Prints
the full K-S grid and the recovered threshold.
"""

import argparse
import time

from scenestats import (
    FilterConfig,
    ItemSizeLaw,
    ScoreBands,
    SynthConfig,
    calibrate,
    generate,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-scenes", type=int, default=10_000)
    parser.add_argument("--spurious-rate", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=20240809)
    args = parser.parse_args()

    cfg = SynthConfig(
        n_scenes=args.n_scenes,
        zipf_alpha=1.6,
        n_max=12,
        image_size=(64, 64),
        item_size_law=ItemSizeLaw(base_fraction=0.01, exponent=-1.0,
                                  jitter_sigma=0.1),
        spurious_rate=args.spurious_rate,
        score_bands=ScoreBands(true_range=(0.22, 1.0),
                               spurious_range=(0.05, 0.215)),
        seed=args.seed,
    )
    start = time.perf_counter()
    annotations, detections = generate(cfg)
    reference = [scene.numerosity for scene in annotations]
    result = calibrate(detections, reference, FilterConfig(threshold=0.22))
    elapsed = time.perf_counter() - start

    print("tau     D         p")
    for tau, res in result.grid:
        marker = "  <- best" if tau == result.best_tau else ""
        print(f"{tau:.2f}  {res.statistic:8.5f}  {res.p_value:8.5f}{marker}")
    print(f"\nrecovered threshold {result.best_tau} "
          f"(D = {result.best.statistic}, n_e = {result.best.effective_n:.1f}) "
          f"in {elapsed:.1f}s over {args.n_scenes} scenes")


if __name__ == "__main__":
    main()
