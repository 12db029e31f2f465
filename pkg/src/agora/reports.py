"""Rendering of evaluation results: CSV, Markdown tables and figures.

The machine-readable CSV keeps full float precision; the Markdown
tables mirror the benchmark-grid presentation with ``F1_pol [F1_macro]``
cells rounded to two decimals. Heatmap figures are written next to the
delimited output.
"""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from agora.evaluation import EvalReport, GridCell, format_cell, round_display

CSV_COLUMNS = [
    "model",
    "mode",
    "eval_set",
    "tp",
    "fp",
    "fn",
    "tn",
    "p_pol",
    "r_pol",
    "f1_pol",
    "p_non",
    "r_non",
    "f1_non",
    "f1_macro",
    "error",
]


def _cell_row(cell: GridCell) -> dict:
    row = {"model": cell.model_name, "mode": cell.mode, "eval_set": cell.eval_set}
    if cell.report is not None:
        rep = cell.report
        cm = rep.confusion
        row.update(
            tp=cm.tp,
            fp=cm.fp,
            fn=cm.fn,
            tn=cm.tn,
            p_pol=repr(rep.political.precision),
            r_pol=repr(rep.political.recall),
            f1_pol=repr(rep.political.f1),
            p_non=repr(rep.non_political.precision),
            r_non=repr(rep.non_political.recall),
            f1_non=repr(rep.non_political.f1),
            f1_macro=repr(rep.macro.f1),
            error="",
        )
    else:
        row.update({k: "" for k in CSV_COLUMNS[3:]})
        row["error"] = cell.error or "failed"
    return row


def write_grid_csv(cells: list[GridCell], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for cell in cells:
            writer.writerow(_cell_row(cell))


def write_grid_markdown(cells: list[GridCell], path) -> None:
    """One Markdown table per eval set: models as rows, modes as columns."""
    eval_sets = list(dict.fromkeys(c.eval_set for c in cells))
    modes = list(dict.fromkeys(c.mode for c in cells))
    models = list(dict.fromkeys(c.model_name for c in cells))
    by_key = {(c.eval_set, c.model_name, c.mode): c for c in cells}
    lines = []
    for eval_set in eval_sets:
        lines.append(f"## {eval_set}")
        lines.append("")
        lines.append("| model | " + " | ".join(modes) + " |")
        lines.append("|" + "---|" * (len(modes) + 1))
        for model in models:
            rendered = []
            for mode in modes:
                cell = by_key.get((eval_set, model, mode))
                if cell is None or cell.error is not None:
                    rendered.append("failed")
                else:
                    rendered.append(format_cell(cell.f1_political, cell.f1_macro))
            lines.append(f"| {model} | " + " | ".join(rendered) + " |")
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def render_grid_heatmaps(cells: list[GridCell], out_dir) -> list[str]:
    """Macro-F1 heatmap (models x modes) per eval set; returns file paths."""
    eval_sets = list(dict.fromkeys(c.eval_set for c in cells))
    modes = list(dict.fromkeys(c.mode for c in cells))
    models = list(dict.fromkeys(c.model_name for c in cells))
    by_key = {(c.eval_set, c.model_name, c.mode): c for c in cells}
    paths = []
    for eval_set in eval_sets:
        grid = np.full((len(models), len(modes)), np.nan)
        for i, model in enumerate(models):
            for j, mode in enumerate(modes):
                cell = by_key.get((eval_set, model, mode))
                if cell is not None and cell.error is None:
                    grid[i, j] = cell.f1_macro
        fig, ax = plt.subplots(figsize=(1.6 * len(modes) + 2, 0.6 * len(models) + 2))
        im = ax.imshow(grid, vmin=0.0, vmax=1.0, cmap="viridis", aspect="auto")
        ax.set_xticks(range(len(modes)), modes, rotation=30, ha="right")
        ax.set_yticks(range(len(models)), models)
        for i in range(len(models)):
            for j in range(len(modes)):
                if not math.isnan(grid[i, j]):
                    ax.text(
                        j,
                        i,
                        f"{round_display(grid[i, j]):.2f}",
                        ha="center",
                        va="center",
                        color="white" if grid[i, j] < 0.6 else "black",
                        fontsize=8,
                    )
        ax.set_title(f"Macro F1 on {eval_set}")
        fig.colorbar(im, ax=ax, shrink=0.8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"grid_{eval_set}.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def write_report_csv(report: EvalReport, path, model: str = "", mode: str = "", eval_set: str = "") -> None:
    cell = GridCell(
        model_name=model,
        mode=mode,
        eval_set=eval_set,
        f1_political=report.political.f1,
        f1_macro=report.macro.f1,
        report=report,
    )
    write_grid_csv([cell], path)


def write_report_markdown(report: EvalReport, path, title: str = "evaluation") -> None:
    def fmt(m):
        return (
            f"{round_display(m.precision):.2f} | {round_display(m.recall):.2f} "
            f"| {round_display(m.f1):.2f}"
        )

    lines = [
        f"## {title}",
        "",
        "| class | precision | recall | F1 |",
        "|---|---|---|---|",
        f"| political | {fmt(report.political)} |",
        f"| non_political | {fmt(report.non_political)} |",
        f"| macro | {fmt(report.macro)} |",
        "",
        f"cell: {format_cell(report.political.f1, report.macro.f1)}",
        "",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def render_report_figure(report: EvalReport, path, title: str = "evaluation") -> None:
    """Grouped bar chart of per-class and macro metrics."""
    groups = ["political", "non_political", "macro"]
    metrics = [report.political, report.non_political, report.macro]
    x = np.arange(len(groups))
    width = 0.25
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(x - width, [m.precision for m in metrics], width, label="precision")
    ax.bar(x, [m.recall for m in metrics], width, label="recall")
    ax.bar(x + width, [m.f1 for m in metrics], width, label="F1")
    ax.set_xticks(x, groups)
    ax.set_ylim(0, 1.05)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
