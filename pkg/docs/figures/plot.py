"""Figures from tables of ``qpolar prep-rate`` and ``qpolar ler``.

Usage::

    python docs/figures/plot.py prep.csv ler.csv --out figures/

"""

import argparse
import os

import matplotlib.pyplot as plt
import seaborn as sns

import audeer

import qpolar


METHODS = {  # estimator name mappings
    "mc": "Monte-Carlo",
    "de": "density evolution",
}


def plot_prep_rate(path, out):
    df, _ = qpolar.read_table(path)
    df["code"] = [f"N={length}, i={i}" for length, i in zip(df["N"], df["i"])]

    sns.set_style("whitegrid")
    fig = plt.figure()
    ax = sns.lineplot(
        data=df,
        x="p",
        y="p_prep",
        hue="code",
        style="target",
        marker="o",
    )
    for _, row in df.iterrows():
        ax.plot([row["p"]] * 2, [row["ci_low"], row["ci_high"]], color="0.6")
    ax.set_xscale("log")
    ax.set_xlabel("Physical error rate")
    ax.set_ylabel("Preparation rate")
    ax.set_ylim(0, 1.02)
    plt.tight_layout()
    fig.savefig(os.path.join(out, "prep-rate.png"), dpi=150)
    plt.close(fig)


def plot_ler(path, out):
    df, _ = qpolar.read_table(path)
    df = df[df["p_e_l"] > 0].copy()
    df["code"] = [f"N={length}, i={i}" for length, i in zip(df["N"], df["i"])]
    df["method"] = df["method"].map(METHODS)

    sns.set_style("whitegrid")
    fig = plt.figure()
    ax = sns.lineplot(
        data=df,
        x="p",
        y="p_e_l",
        hue="code",
        style="method",
        marker="o",
    )
    # Break-even line
    limits = [df["p"].min(), df["p"].max()]
    ax.plot(limits, limits, color="black", linestyle=":", linewidth=1)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("Physical error rate")
    ax.set_ylabel("Logical error rate")
    plt.tight_layout()
    fig.savefig(os.path.join(out, "ler.png"), dpi=150)
    plt.close(fig)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("prep", help="table of 'qpolar prep-rate'")
    parser.add_argument("ler", nargs="?", help="table of 'qpolar ler'")
    parser.add_argument("--out", default="figures", help="output folder")
    args = parser.parse_args()

    out = audeer.mkdir(args.out)
    plot_prep_rate(args.prep, out)
    if args.ler is not None:
        plot_ler(args.ler, out)
