"""Render a ``.plot`` file written by ``hybridom run`` with matplotlib.

    python3 scripts/render_plot.py out/fig5.plot -o fig5.png
"""
import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_commands(path: Path) -> dict:
    cmds = {"series": []}
    for line in path.read_text().splitlines():
        key, _, value = line.partition(" ")
        if key == "series":
            cmds["series"].append(value)
        else:
            cmds[key] = value
    return cmds


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("plot", type=Path)
    parser.add_argument("-o", "--output", type=Path)
    args = parser.parse_args()

    cmds = read_commands(args.plot)
    with (args.plot.parent / cmds["data"]).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r[cmds["x"]]) for r in rows]
    fig, ax = plt.subplots()
    for col in cmds["series"]:
        y = [float(r[col]) if r[col] else float("nan") for r in rows]
        ax.plot(x, y, label=col)
    ax.set_title(cmds.get("title", ""))
    ax.set_xlabel(cmds.get("xlabel", ""))
    ax.set_ylabel(cmds.get("ylabel", ""))
    if len(cmds["series"]) > 1:
        ax.legend()
    fig.savefig(args.output or args.plot.with_suffix(".png"), dpi=150)


if __name__ == "__main__":
    main()
