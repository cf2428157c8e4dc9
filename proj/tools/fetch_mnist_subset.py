#!/usr/bin/env python3
"""Build gzip IDX files from the 5000-digit MNIST sample shipped in mlxtend.

The mlxtend wheel carries mnist_5k.csv.gz (500 training digits per class,
784 pixel columns followed by the label). The wheel is fetched with pip
unless --wheel points at a local copy.
"""

import argparse
import gzip
import struct
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def fetch_wheel(dest: Path) -> Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "mlxtend==0.24.0", "--no-deps", "-d", str(dest)],
        check=True,
    )
    return next(dest.glob("mlxtend-*.whl"))


def write_idx(path: Path, dims, payload: bytes) -> None:
    header = struct.pack(">BBBB", 0, 0, 0x08, len(dims)) + b"".join(struct.pack(">I", d) for d in dims)
    # mtime=0 keeps the archive byte-identical across runs
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as out:
        out.write(header + payload)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/mnist-5k"))
    parser.add_argument("--wheel", type=Path)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(Path(tmp))
        rows = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode().split()

    pixels = bytearray()
    labels = bytearray()
    for row in rows:
        values = [int(v) for v in row.split(",")]
        if len(values) != 785:
            raise SystemExit(f"unexpected row width {len(values)}")
        pixels.extend(values[:784])
        labels.append(values[784])

    args.out.mkdir(parents=True, exist_ok=True)
    write_idx(args.out / "train-images-idx3-ubyte.gz", [len(labels), 28, 28], bytes(pixels))
    write_idx(args.out / "train-labels-idx1-ubyte.gz", [len(labels)], bytes(labels))
    print(f"wrote {len(labels)} digits to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
