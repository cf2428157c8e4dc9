#!/usr/bin/env python3
"""Cut a grayscale PNG corpus for the equivariance-gap experiment.

Random square crops are taken from the sample photographs bundled with
scikit-image. The crop side defaults to 240 so that every downsampling
factor 2..6 divides it.
"""

import argparse
import sys
from pathlib import Path

import numpy as np
from PIL import Image
from skimage import color, data

SOURCES = [
    "camera", "astronaut", "coins", "moon", "brick", "grass", "gravel", "chelsea",
    "coffee", "rocket", "retina", "hubble_deep_field", "cell", "immunohistochemistry", "clock",
]


def load_gray(name: str) -> np.ndarray:
    image = getattr(data, name)()
    if image.ndim == 3:
        return color.rgb2gray(image[..., :3])
    return image / 255.0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/corpus"))
    parser.add_argument("--size", type=int, default=240)
    parser.add_argument("--per-image", type=int, default=8)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    count = 0
    for name in SOURCES:
        image = load_gray(name)
        h, w = image.shape
        if min(h, w) < args.size:
            continue
        for k in range(args.per_image):
            r = rng.integers(0, h - args.size + 1)
            c = rng.integers(0, w - args.size + 1)
            crop = np.clip(np.rint(image[r:r + args.size, c:c + args.size] * 255.0), 0, 255).astype(np.uint8)
            Image.fromarray(crop, mode="L").save(args.out / f"{name}_{k:02d}.png", optimize=True)
            count += 1
    print(f"wrote {count} crops to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
