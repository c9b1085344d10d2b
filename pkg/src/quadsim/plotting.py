"""PNG figures for a finished run (matplotlib, headless backend)."""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_run(log_, path, title=None):
    """Position tracking (left) and attitude (right) panels written to ``path``."""
    t = log_.t
    true = log_.true_states
    est = log_.estimates
    ref = log_.references
    fig, axes = plt.subplots(3, 2, figsize=(10, 8), sharex=True)
    for i, name in enumerate("xyz"):
        ax = axes[i, 0]
        ax.plot(t, ref[:, i], "k--", lw=1, label="reference")
        ax.plot(t, true[:, i], lw=1.2, label="true")
        ax.plot(t, est[:, i], lw=0.8, alpha=0.7, label="estimate")
        ax.set_ylabel(f"{name} [m]")
    axes[0, 0].legend(loc="best", fontsize=8)
    for i, name in enumerate(("phi", "theta", "psi")):
        axes[i, 1].plot(t, true[:, 3 + i], lw=1)
        axes[i, 1].set_ylabel(f"{name} [rad]")
    axes[2, 1].plot(t, ref[:, 3], "k--", lw=1)
    axes[2, 0].set_xlabel("t [s]")
    axes[2, 1].set_xlabel("t [s]")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path

