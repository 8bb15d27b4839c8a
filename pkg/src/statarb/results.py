"""Result emission: estimates.csv, per-horizon histogram CSVs, manifest.json.

Numbers are serialized with 12 significant digits so byte-identity of the
emitted files is a meaningful reproducibility check.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import List

from . import __version__
from .errors import ConfigurationError
from .schemas import HorizonRow, SimulateResponse

ESTIMATE_COLUMNS = ["horizon", "mean", "se_mean", "var", "var_over_t",
                    "loss_prob", "se_loss", "analytic_mean", "analytic_loss"]


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def hist_filename(horizon: float) -> str:
    return f"hist_T{horizon:g}.csv"


def write_outputs(response: SimulateResponse, out_dir, wall_time_s: float
                  ) -> Path:
    """Write the result files for one simulation run; returns the out dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    est_path = out / "estimates.csv"
    with est_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ESTIMATE_COLUMNS)
        for row in response.rows:
            writer.writerow([
                _fmt(row.horizon), _fmt(row.mean), _fmt(row.se_mean),
                _fmt(row.var), _fmt(row.var_over_t), _fmt(row.loss_prob),
                _fmt(row.se_loss), _fmt(row.analytic_mean),
                _fmt(row.analytic_loss_prob)])

    hist_paths = []
    for key, bins in response.histograms.items():
        path = out / f"hist_T{key}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_center", "count"])
            for center, count in bins:
                writer.writerow([_fmt(center), str(count)])
        hist_paths.append(path)

    checksums = {p.name: _sha256(p) for p in [est_path] + sorted(hist_paths)}
    manifest = {
        "config": response.config.model_dump(),
        "seed": response.config.seed,
        "version": __version__,
        "wall_time_s": round(wall_time_s, 3),
        "outputs": checksums,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def read_estimates_csv(path) -> List[HorizonRow]:
    """Parse an estimates.csv back into rows (for the check command)."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"estimates file not found: {path}")
    rows: List[HorizonRow] = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ESTIMATE_COLUMNS:
            raise ConfigurationError(
                f"unexpected estimates.csv header: {reader.fieldnames}")
        for rec in reader:
            rows.append(HorizonRow(
                horizon=float(rec["horizon"]), mean=float(rec["mean"]),
                se_mean=float(rec["se_mean"]), var=float(rec["var"]),
                var_over_t=float(rec["var_over_t"]),
                loss_prob=float(rec["loss_prob"]),
                se_loss=float(rec["se_loss"]),
                analytic_mean=(float(rec["analytic_mean"])
                               if rec["analytic_mean"] else None),
                analytic_loss_prob=(float(rec["analytic_loss"])
                                    if rec["analytic_loss"] else None)))
    return rows
