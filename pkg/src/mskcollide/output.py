"""Result tables and run manifests.

Tables are written as CSV with a fixed header or as JSON mirroring the CSV
fields one-to-one. Each table gets a manifest sidecar (<stem>.manifest.json)
recording the configuration snapshot, the master seed, tool version,
wall-clock duration, and a checksum of every data file, which ties outputs
to the run that produced them. Data files are byte-stable for a given
master seed; the manifest is not (it records the duration).
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .chipseq import chip_table_csv
from .montecarlo import MetricPoint, NInterfererPoint, ZoneCell

SWEEP_FIELDS = ("tau_over_T", "sir_db", "prr_mean", "prr_std", "ber", "ser", "packets")
ZONE_FIELDS = ("tau_over_T", "phi_c", "ber_or_ser")
NINTERF_FIELDS = ("n", "layout", "payload_mode", "prr_mean", "prr_std")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sweep_row(p: MetricPoint) -> dict:
    return {"tau_over_T": p.tau, "sir_db": p.sir_db, "prr_mean": p.prr_mean,
            "prr_std": p.prr_std, "ber": p.ber, "ser": p.ser, "packets": p.packets}


def _zone_row(c: ZoneCell) -> dict:
    return {"tau_over_T": c.tau, "phi_c": c.phi_c, "ber_or_ser": c.error_rate}


def _ninterf_row(r: NInterfererPoint) -> dict:
    return {"n": r.n, "layout": r.layout, "payload_mode": r.payload_mode,
            "prr_mean": r.prr_mean, "prr_std": r.prr_std}


def _write_rows(rows: list[dict], fields: tuple, path: Path, fmt: str):
    if fmt == "csv":
        lines = [",".join(fields)]
        lines += [",".join(_fmt(row[f]) for f in fields) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        path.write_text(json.dumps(rows, indent=2) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def write_sweep(points: list[MetricPoint], path, fmt: str = "csv"):
    _write_rows([_sweep_row(p) for p in points], SWEEP_FIELDS, Path(path), fmt)


def write_zone(cells: list[ZoneCell], path, fmt: str = "csv"):
    _write_rows([_zone_row(c) for c in cells], ZONE_FIELDS, Path(path), fmt)


def write_ninterf(rows: list[NInterfererPoint], path, fmt: str = "csv"):
    _write_rows([_ninterf_row(r) for r in rows], NINTERF_FIELDS, Path(path), fmt)


def write_chip_table(path=None):
    """Chip-table CSV to a file, or to stdout when no path is given."""
    text = chip_table_csv()
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path(output_path) -> Path:
    out = Path(output_path)
    return out.with_name(out.stem + ".manifest.json")


def write_manifest(output_path, command: str, config: dict, master_seed: int,
                   duration_s: float, extra: dict | None = None) -> Path:
    """Manifest sidecar for one output file; returns the sidecar path."""
    out = Path(output_path)
    doc = {
        "tool": "mskcollide",
        "version": __version__,
        "command": command,
        "master_seed": master_seed,
        "config": config,
        "duration_s": duration_s,
        "outputs": [{"path": out.name, "sha256": sha256_file(out)}],
    }
    if extra:
        doc.update(extra)
    side = manifest_path(out)
    side.write_text(json.dumps(doc, indent=2) + "\n")
    return side
