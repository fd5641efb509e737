#!/usr/bin/env python3
"""Writes the 256x256 grayscale PGM test images used by the harness and acceptance suite.

Sources are the public-domain images bundled with scikit-image.
"""
import pathlib
import sys

import numpy as np
from skimage import color, data, transform

IMAGES = {
    "cameraman": data.camera,
    "astronaut": data.astronaut,
    "chelsea": data.chelsea,
    "coffee": data.coffee,
}


def to_square_gray(img, size):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3]) * 255.0
    img = img.astype(np.float64)
    h, w = img.shape
    side = min(h, w)
    top, left = (h - side) // 2, (w - side) // 2
    img = img[top:top + side, left:left + side]
    img = transform.resize(img, (size, size), anti_aliasing=True, preserve_range=True)
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in IMAGES.items():
        write_pgm(out / f"{name}.pgm", to_square_gray(loader(), 256))


if __name__ == "__main__":
    main()
