"""Optional SVG renderings of CLI outputs. Figures are derived from the CSV data only."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .stability import RegionLabel  # noqa: E402

plt.rcParams["svg.hashsalt"] = "ideawaves"
_META = {"Date": None, "Creator": None}

REGION_COLORS = {
    RegionLabel.STABLE_FIRST: "gold",
    RegionLabel.STABLE_SECOND: "tab:blue",
    RegionLabel.STABLE_BOTH: "tab:green",
    RegionLabel.UNSTABLE: "tab:red",
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def trajectory_svg(traj, path):
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(traj.times, traj.s, label="S")
    ax.plot(traj.times, traj.i, label="I")
    ax.plot(traj.times, traj.gamma, label=r"$\Gamma$")
    ax.set_xlabel("t")
    ax.legend()
    _save(fig, path)


def stability_svg(smap, path, hopf=None):
    order = list(REGION_COLORS)
    codes = np.array([[order.index(lab) for lab in row] for row in smap.labels])
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.pcolormesh(smap.alphas, smap.deltas, codes.T, cmap=ListedColormap(list(REGION_COLORS.values())),
                  vmin=-0.5, vmax=3.5, shading="nearest")
    if hopf is not None:
        ax.plot([hopf], [hopf], "k*", markersize=12)
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel(r"$\delta$")
    _save(fig, path)


def scatter_svg(report, path):
    x = np.array([r.dtw_rw_mean for r in report.records])
    y = np.array([r.dtw_model for r in report.records])
    sig = np.array([r.significant for r in report.records], dtype=bool)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(x[~sig], y[~sig], facecolors="none", edgecolors="tab:blue")
    ax.scatter(x[sig], y[sig], color="tab:blue")
    if len(x):
        lim = [0, max(x.max(), y.max()) * 1.05]
        ax.plot(lim, lim, "k:")
    ax.set_xlabel("mean DTW distance to random walks")
    ax.set_ylabel("DTW distance to best-fit model")
    _save(fig, path)
