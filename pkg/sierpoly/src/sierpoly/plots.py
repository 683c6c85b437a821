"""Census tables (CSV, numpy) and the profile heatmap (SVG, matplotlib extra)."""

from __future__ import annotations

import io
import logging
from pathlib import Path

import numpy as np

from . import conventions
from ._fileutil import atomic_write
from .reports import CensusReport

logger = logging.getLogger(__name__)


def profile_columns(report: CensusReport) -> list[str]:
    """Ball points, then witness labels."""
    first = report.profiles[report.profile_order[0]]
    return [*first.ball, *first.witnesses]


def profile_matrix(report: CensusReport) -> np.ndarray:
    """Rows follow ``profile_order``; columns follow ``profile_columns``."""
    first = report.profiles[report.profile_order[0]]
    rows = []
    for key in report.profile_order:
        entry = report.profiles[key]
        rows.append([*entry.values, *(entry.witnesses[label] for label in first.witnesses)])
    return np.array(rows, dtype=np.int64)


def _csv(header: list[str], rows: np.ndarray) -> str:
    buffer = io.StringIO()
    np.savetxt(buffer, rows, fmt="%s", delimiter=",", header=",".join(header), comments="")
    return buffer.getvalue()


def write_tables(report: CensusReport, directory: Path) -> list[Path]:
    order = report.profile_order
    labelled = np.column_stack([np.array(order, dtype=object), profile_matrix(report).astype(object)])
    profiles = atomic_write(
        directory / conventions.PROFILES_CSV, _csv(["profile", *profile_columns(report)], labelled)
    )

    failures = report.antipodal.almost_failures
    defect_rows = np.array([[f.n, f.s, f.t, f.defect] for f in failures], dtype=np.int64).reshape(-1, 4)
    defects = atomic_write(directory / conventions.DEFECTS_CSV, _csv(["N", "s", "t", "defect"], defect_rows))
    return [profiles, defects]


def write_heatmap(report: CensusReport, path: Path) -> Path | None:
    """Profile values as an SVG heatmap; None when matplotlib is not installed."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        logger.warning("matplotlib not installed; skipping %s (install sierpoly[plots])", path.name)
        return None

    values = profile_matrix(report)
    columns = profile_columns(report)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * len(columns)), max(2.5, 0.4 * len(values))))
    image = ax.imshow(values, cmap="coolwarm", aspect="auto")
    ax.set_xticks(range(len(columns)), labels=columns, rotation=90, fontsize=7)
    ax.set_yticks(range(len(report.profile_order)), labels=report.profile_order, fontsize=8)
    ax.set_title(f"horofunction profiles, r={report.spec['r']}, xi={report.xi}")
    fig.colorbar(image, ax=ax)
    fig.tight_layout()

    buffer = io.StringIO()
    fig.savefig(buffer, format="svg")
    plt.close(fig)
    return atomic_write(path, buffer.getvalue(), prefix=".plot-")


def write_census_plots(report: CensusReport, directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = write_tables(report, directory)
    svg = write_heatmap(report, directory / conventions.PROFILES_SVG)
    if svg is not None:
        written.append(svg)
    return written
