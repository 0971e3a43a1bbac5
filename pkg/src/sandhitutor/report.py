"""Progress report rendering: delimited table plus a score chart.

The summary the tutor keeps per user is written out as a TSV for further
processing and as a PNG bar chart for a quick look; both land in the
requested directory.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def summary_rows(summary: dict) -> list[tuple]:
    rows = [("module", "title", "state", "best", "attempts")]
    for m in summary["modules"]:
        rows.append((m["module"], m["title"], m["state"],
                     f"{m['best']:.2f}", str(m["attempts"])))
    final = summary.get("finalExam")
    rows.append(("FINAL", "Comprehensive final exam",
                 "completed" if final is not None else "pending",
                 "-" if final is None else f"{final:.2f}", ""))
    return rows


def format_summary(summary: dict) -> str:
    rows = summary_rows(summary)
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def write_report(summary: dict, out_dir: str) -> tuple[str, str]:
    """Write summary.tsv and summary.png under out_dir; returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    tsv_path = os.path.join(out_dir, "summary.tsv")
    png_path = os.path.join(out_dir, "summary.png")

    with open(tsv_path, "w", encoding="utf-8") as fh:
        for row in summary_rows(summary):
            fh.write("\t".join(str(c) for c in row) + "\n")

    mods = summary["modules"]
    names = [m["module"] for m in mods]
    scores = [m["best"] for m in mods]
    colors = ["#2a9d8f" if m["state"] == "completed"
              else "#e9c46a" if m["state"] == "available" else "#bdbdbd"
              for m in mods]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bar(names, scores, color=colors)
    ax.axhline(summary.get("threshold", 0.6), color="#e76f51",
               linestyle="--", linewidth=1, label="unlock threshold")
    ax.set_ylim(0, 1.0)
    ax.set_ylabel("best score")
    ax.set_title(f"Module scores — {summary['user']}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return tsv_path, png_path
