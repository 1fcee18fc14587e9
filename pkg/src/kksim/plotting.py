"""Rendering of result rows as figures.

Plots are strictly a rendering of CSV content, never a data source.  SVG
output is byte-deterministic: the hash salt is pinned and the date field
is stripped, so identical rows produce identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import ResultRow
from .receivers import SCHEMES

_X_LABELS = {
    "p": "interference probability p",
    "errors": "random bit flips per trial",
}
_SCHEME_STYLE = {
    "routing": dict(color="tab:red", marker="o"),
    "rlnc": dict(color="tab:blue", marker="s"),
    "subspace": dict(color="tab:green", marker="^"),
}
METRICS = ("failure_rate_per_destination", "failure_rate_system")


def emit_plot(
    rows: Iterable[ResultRow],
    path,
    metric: str = "failure_rate_per_destination",
) -> None:
    """One curve per scheme over the sweep variable, saved to ``path``."""
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to plot")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    sweep_vars = {r.sweep_var for r in rows}
    if len(sweep_vars) != 1:
        raise ValueError("plot rows must share a single sweep variable")
    sweep_var = sweep_vars.pop()

    with plt.rc_context({"svg.hashsalt": "kksim"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for scheme in SCHEMES:
            series = sorted(
                ((r.sweep_value, getattr(r, metric)) for r in rows if r.scheme == scheme)
            )
            if not series:
                continue
            xs, ys = zip(*series)
            ax.plot(xs, ys, label=scheme, **_SCHEME_STYLE[scheme])
        ax.set_xlabel(_X_LABELS[sweep_var])
        ax.set_ylabel("average decoding failure probability")
        ax.set_ylim(0.0, 1.0)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        try:
            fig.savefig(path, metadata=_deterministic_metadata(path))
        except OSError as exc:
            raise OSError(f"cannot write plot to {path}: {exc}") from exc
        finally:
            plt.close(fig)


def _deterministic_metadata(path) -> dict | None:
    suffix = Path(path).suffix.lower()
    if suffix == ".svg":
        return {"Date": None}
    if suffix == ".pdf":
        return {"CreationDate": None}
    return None
