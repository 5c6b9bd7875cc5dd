"""Pure file-to-file figure rendering for the sweep aggregate and noise-scale
CSV schemas.

Kinds:
  accuracy-vs-epsilon  one line per mechanism, mean accuracy vs epsilon with a
                       shaded +/-1 std band
  counts-vs-gini       the same layout restricted to the noisy-counts vs
                       noisy-Gini comparison
  noise-scale          smooth and global noise scales vs n on log-log axes;
                       series monotonicity is asserted before rendering
"""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

AGGREGATE_COLUMNS = [
    "mechanism",
    "epsilon",
    "mean_acc",
    "std_acc",
    "mean_vuln",
    "std_vuln",
]
NOISE_COLUMNS = ["n", "smooth_scale", "global_scale"]

KINDS = ("accuracy-vs-epsilon", "counts-vs-gini", "noise-scale")

COUNTS_GINI_MECHANISMS = ("noisy-counts", "sm-laplace", "gl-laplace", "none")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    input_path: str
    kind: str
    output_path: str
    log_x: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; expected one of {KINDS}"
            )


def _load(path, expected_columns):
    try:
        table = pd.read_csv(path)
    except FileNotFoundError:
        raise SchemaError(f"input CSV not found: {path}") from None
    except pd.errors.EmptyDataError:
        raise SchemaError(f"input CSV is empty: {path}") from None
    missing = [c for c in expected_columns if c not in table.columns]
    extra = [c for c in table.columns if c not in expected_columns]
    if missing:
        raise SchemaError(
            f"{path}: missing columns {missing}; found {list(table.columns)}"
            + (f" (unexpected: {extra})" if extra else "")
        )
    if table.empty:
        raise SchemaError(f"{path}: no data rows")
    return table


def _render_accuracy(table, spec, mechanisms=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = table.groupby("mechanism")
    plotted = 0
    for mechanism, rows in groups:
        if mechanisms is not None and mechanism not in mechanisms:
            continue
        rows = rows.sort_values("epsilon")
        ax.plot(rows["epsilon"], rows["mean_acc"], marker="o", label=mechanism)
        ax.fill_between(
            rows["epsilon"],
            rows["mean_acc"] - rows["std_acc"],
            rows["mean_acc"] + rows["std_acc"],
            alpha=0.2,
        )
        plotted += 1
    if plotted == 0:
        raise SchemaError(
            "no mechanism series to plot"
            + (f" among {sorted(mechanisms)}" if mechanisms else "")
        )
    if spec.log_x:
        ax.set_xscale("log")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("mean test accuracy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=120)
    plt.close(fig)


def _render_noise_scale(table, spec):
    table = table.sort_values("n")
    smooth = table["smooth_scale"].to_numpy()
    global_ = table["global_scale"].to_numpy()
    if not (global_ == global_[0]).all():
        raise SchemaError("global_scale series is not constant")
    if not all(b <= a for a, b in zip(smooth, smooth[1:])):
        raise SchemaError("smooth_scale series is not monotone non-increasing")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(table["n"], smooth, marker="o", label="smooth")
    ax.plot(table["n"], global_, linestyle="--", label="global")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("samples remaining (n)")
    ax.set_ylabel("Laplace noise scale")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=120)
    plt.close(fig)


def render(spec):
    """Render the figure described by spec; deterministic file -> file."""
    if spec.kind == "noise-scale":
        table = _load(spec.input_path, NOISE_COLUMNS)
        _render_noise_scale(table, spec)
    elif spec.kind == "counts-vs-gini":
        table = _load(spec.input_path, AGGREGATE_COLUMNS)
        _render_accuracy(table, spec, mechanisms=set(COUNTS_GINI_MECHANISMS))
    else:
        table = _load(spec.input_path, AGGREGATE_COLUMNS)
        _render_accuracy(table, spec)
    return spec.output_path
