"""Convergence-trace figures written next to the delimited reports."""

from __future__ import annotations

from pathlib import Path

__all__ = ["convergence_figure"]

_STYLES = {"emo": dict(color="tab:blue", ls="-"), "obemo": dict(color="tab:red", ls="--")}


def convergence_figure(function_id: str, traces: dict[str, list[float]], path) -> Path:
    """Plot best-so-far per iteration for each algorithm's best run.

    Uses a log scale when every plotted value is positive and the range is
    wide, which is the usual shape for the nonnegative test functions.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    lowest, highest = float("inf"), float("-inf")
    for name in sorted(traces):
        trace = traces[name]
        if not trace:
            continue
        style = _STYLES.get(name, {})
        ax.plot(range(1, len(trace) + 1), trace, label=name.upper(), lw=1.6, **style)
        lowest = min(lowest, min(trace))
        highest = max(highest, max(trace))
    if lowest > 0 and highest / max(lowest, 1e-300) > 1e3:
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel("best objective value")
    ax.set_title(f"{function_id}: best run convergence")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
