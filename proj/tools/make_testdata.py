#!/usr/bin/env python3
"""Regenerate data/*.pgm from the photographs bundled with scikit-image.

The denoising checks run on real photographs. scikit-image ships a few
under a permissive license, so we convert them to 8-bit binary PGM once
and commit the results. Color images are reduced with Rec.601 luma.

Usage: python3 tools/make_testdata.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np
import skimage.data


def to_gray_u8(img):
    a = np.asarray(img)
    if a.ndim == 3:
        a = a[..., 0] * 0.299 + a[..., 1] * 0.587 + a[..., 2] * 0.114
    a = np.rint(a).clip(0, 255).astype(np.uint8)
    return a


def write_pgm(path, a):
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (a.shape[1], a.shape[0]))
        f.write(a.tobytes())


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "data"
    out.mkdir(parents=True, exist_ok=True)
    sources = {
        "camera": skimage.data.camera,
        "moon": skimage.data.moon,
        "astronaut": skimage.data.astronaut,
        "coffee": skimage.data.coffee,
        "chelsea": skimage.data.chelsea,
    }
    for name, fn in sources.items():
        a = to_gray_u8(fn())
        write_pgm(out / f"{name}.pgm", a)
        print(f"{name}.pgm {a.shape[1]}x{a.shape[0]}")


if __name__ == "__main__":
    main()
