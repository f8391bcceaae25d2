#!/usr/bin/env python3
"""End-to-end analysis of a real COCO-layout annotation file.

Prints the numerosity tail statistics, the Zipf fit, and the correlation
matrices of the homogeneous/heterogeneous scene splits, plus their mutual
consistency. Magnitudes need masks, so scenes without full segmentation
are counted for numerosity only.
"""

import argparse
from pathlib import Path

import numpy as np

from scenestats import (
    correlation_matrix,
    extract_magnitudes,
    fit_zipf,
    mask_to_bitmap,
    matrix_consistency,
    numerosity_distribution,
    parse_coco,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("instances", help="COCO instances JSON file")
    parser.add_argument("--stuff-list", help="file with stuff names, one per line")
    parser.add_argument("--min-numerosity", type=int, default=5)
    args = parser.parse_args()

    stuff = []
    if args.stuff_list:
        stuff = [ln.strip() for ln in Path(args.stuff_list).read_text().splitlines()
                 if ln.strip()]
    dataset = parse_coco(Path(args.instances).read_text(encoding="utf-8"), stuff)

    dist = numerosity_distribution(s.numerosity for s in dataset.scenes)
    print(f"scenes: {int(dist.total)}, max numerosity: {dist.max_n}, "
          f"fraction above 40 objects: {dist.tail_fraction(40):.5%}")
    fit = fit_zipf(dist, method="loglog_ls")
    print(f"Zipf log-log fit: alpha = {fit.alpha:.3f}, r^2 = {fit.r_squared:.4f}")

    homogeneous, heterogeneous = [], []
    skipped = 0
    for scene in dataset.scenes:
        if scene.numerosity == 0 or any(o.mask is None for o in scene.objects):
            skipped += scene.numerosity > 0
            continue
        bitmaps = [mask_to_bitmap(o.mask, scene.image) for o in scene.objects]
        if not all(b.any() for b in bitmaps):
            skipped += 1
            continue
        vec = extract_magnitudes(scene.image, bitmaps)
        bucket = homogeneous if len({o.category_id for o in scene.objects}) == 1 \
            else heterogeneous
        bucket.append(vec)
    print(f"magnitude rows: {len(homogeneous)} homogeneous, "
          f"{len(heterogeneous)} heterogeneous, {skipped} skipped (no masks)")

    np.set_printoptions(precision=3, suppress=True)
    a = correlation_matrix(homogeneous, min_n=args.min_numerosity)
    b = correlation_matrix(heterogeneous, min_n=args.min_numerosity)
    print("\nhomogeneous R:")
    print(a.r)
    print("\nheterogeneous R:")
    print(b.r)
    print(f"\nhomogeneous/heterogeneous consistency: "
          f"{matrix_consistency(a, b):.4f}")


if __name__ == "__main__":
    main()
