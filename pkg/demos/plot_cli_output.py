"""
Terminal plots from CLI artifacts
=================================

Reads a csv-with-manifest file produced by the afrelay command line,
verifies its checksum, and draws a quick ASCII chart of one column against
another.  No plotting dependencies; pipe-friendly.

    afrelay perf --gamma-db-grid=-5:35:17 --out perf.csv
    python3 demos/plot_cli_output.py perf.csv gamma_db outage --log-y
"""

import argparse
import hashlib
import json
import math
import sys

WIDTH = 64
HEIGHT = 18


def load(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        body = fh.read()
    if not header.startswith("# "):
        sys.exit("not a csv-with-manifest artifact")
    manifest = json.loads(header[2:])
    digest = hashlib.sha256(body.encode()).hexdigest()
    if digest != manifest["artifact_checksum"]:
        sys.exit("checksum mismatch: file was edited after it was written")
    lines = body.rstrip("\n").split("\n")
    columns = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return manifest, columns, rows


def numeric_column(columns, rows, name):
    try:
        i = columns.index(name)
    except ValueError:
        sys.exit(f"no column {name!r}; available: {', '.join(columns)}")
    out = []
    for r in rows:
        cell = r[i]
        out.append(float(cell) if cell else math.nan)
    return out


def ascii_chart(xs, ys, log_y):
    pts = [
        (x, math.log10(y) if log_y else y)
        for x, y in zip(xs, ys)
        if math.isfinite(x) and math.isfinite(y) and (not log_y or y > 0)
    ]
    if len(pts) < 2:
        sys.exit("need at least two finite points")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    xspan = x1 - x0 or 1.0
    yspan = y1 - y0 or 1.0
    grid = [[" "] * WIDTH for _ in range(HEIGHT)]
    for x, y in pts:
        col = round((x - x0) / xspan * (WIDTH - 1))
        row = round((y - y0) / yspan * (HEIGHT - 1))
        grid[HEIGHT - 1 - row][col] = "*"
    top = f"1e{y1:.2f}" if log_y else f"{y1:.4g}"
    bottom = f"1e{y0:.2f}" if log_y else f"{y0:.4g}"
    print(f"{top:>10} +" + "".join(grid[0]))
    for row in grid[1:-1]:
        print(" " * 10 + "|" + "".join(row))
    print(f"{bottom:>10} +" + "".join(grid[-1]))
    print(" " * 11 + f"{x0:<10.4g}{'':^{WIDTH - 20}}{x1:>10.4g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[1])
    ap.add_argument("path")
    ap.add_argument("x_column")
    ap.add_argument("y_column")
    ap.add_argument("--log-y", action="store_true")
    args = ap.parse_args()

    manifest, columns, rows = load(args.path)
    print(f"command: {manifest['command']}   seed: {manifest['seed']}")
    print(f"checksum ok ({len(rows)} rows)\n")
    xs = numeric_column(columns, rows, args.x_column)
    ys = numeric_column(columns, rows, args.y_column)
    ascii_chart(xs, ys, args.log_y)


if __name__ == "__main__":
    main()
