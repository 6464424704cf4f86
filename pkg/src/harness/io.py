"""CSV and JSON persistence for sweep results and plot data."""

import contextlib
import csv
import io
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Sequence, TextIO, Tuple, Union

import numpy as np

from .. import __version__
from ..errors import ExperimentError
from .config import ExperimentConfig
from .runner import SuccessCell, TrialRecord, aggregate_success

PathLike = Union[str, Path]

RESULT_HEADER = ("penalty", "s", "replicate", "seed", "rel_error", "success", "outer_iters", "wall_time")
SUCCESS_HEADER = ("penalty", "s", "success_rate", "successes", "trials")
MEASURE_HEADER = ("theta", "J")
CURVE_HEADER = ("t", "scaled_penalty")
WEIGHT_HEADER = ("t", "weight")
PDF_HEADER = ("t", "pdf")
CDF_HEADER = ("t", "cdf")

RESULTS_FILE = "results.csv"
MANIFEST_FILE = "manifest.json"
SUCCESS_FILE = "success_rates.csv"


def format_float(value: float) -> str:
    """Shortest round-tripping text for a float."""
    return repr(float(value))


def _format_bool(value: bool) -> str:
    return "true" if value else "false"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered not in ("true", "false"):
        raise ExperimentError(f"expected true/false, got {text!r}")
    return lowered == "true"


@contextlib.contextmanager
def atomic_write(path: PathLike) -> Iterator[TextIO]:
    """Write to a temporary file next to ``path`` and move it into place on success."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def write_csv(handle: TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    write_csv(buffer, header, rows)
    return buffer.getvalue()


def _read_rows(path: PathLike, header: Sequence[str]) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != tuple(header):
            raise ExperimentError(f"{path}: expected header {','.join(header)}, got {reader.fieldnames}")
        return list(reader)


def _record_row(record: TrialRecord) -> Tuple[str, ...]:
    return (
        record.penalty,
        str(record.s),
        str(record.replicate),
        str(record.seed),
        format_float(record.rel_error),
        _format_bool(record.success),
        str(record.outer_iters),
        format_float(record.wall_time),
    )


def write_records_csv(path: PathLike, records: Iterable[TrialRecord]):
    with atomic_write(path) as handle:
        write_csv(handle, RESULT_HEADER, (_record_row(r) for r in records))


def read_records_csv(path: PathLike) -> List[TrialRecord]:
    records = []
    for row in _read_rows(path, RESULT_HEADER):
        records.append(TrialRecord(
            penalty=row["penalty"],
            s=int(row["s"]),
            replicate=int(row["replicate"]),
            seed=int(row["seed"]),
            rel_error=float(row["rel_error"]),
            success=_parse_bool(row["success"]),
            outer_iters=int(row["outer_iters"]),
            wall_time=float(row["wall_time"]),
        ))
    return records


def success_rows(cells: Iterable[SuccessCell]) -> Iterator[Tuple[str, ...]]:
    for cell in cells:
        yield (cell.penalty, str(cell.s), format_float(cell.rate), str(cell.successes), str(cell.trials))


def write_success_csv(path: PathLike, cells: Iterable[SuccessCell]):
    """Success rate per (penalty, s) in long format, one row per cell."""
    with atomic_write(path) as handle:
        write_csv(handle, SUCCESS_HEADER, success_rows(cells))


def read_success_csv(path: PathLike) -> List[SuccessCell]:
    return [
        SuccessCell(row["penalty"], int(row["s"]), int(row["successes"]), int(row["trials"]))
        for row in _read_rows(path, SUCCESS_HEADER)
    ]


def series_rows(xs: Sequence[float], ys: Sequence[float]) -> Iterator[Tuple[str, str]]:
    for x, y in zip(xs, ys):
        yield format_float(x), format_float(y)


def write_series_csv(path: PathLike, header: Sequence[str], xs: Sequence[float], ys: Sequence[float]):
    """Two-column plot data (measure sweeps, scaled curves, weights)."""
    with atomic_write(path) as handle:
        write_csv(handle, header, series_rows(xs, ys))


def read_series_csv(path: PathLike, header: Sequence[str]) -> Tuple[np.ndarray, np.ndarray]:
    rows = _read_rows(path, header)
    xs = np.array([float(row[header[0]]) for row in rows], dtype=float)
    ys = np.array([float(row[header[1]]) for row in rows], dtype=float)
    return xs, ys


def build_manifest(cfg: ExperimentConfig, records: Sequence[TrialRecord]) -> Dict[str, Any]:
    return {
        "config": cfg.to_json_dict(),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "records": len(records),
        "nonconverged": sum(1 for r in records if r.converged is False),
        "files": {"results": RESULTS_FILE, "success_rates": SUCCESS_FILE},
    }


def write_manifest(path: PathLike, manifest: Dict[str, Any]):
    with atomic_write(path) as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_sweep_outputs(out_dir: PathLike, cfg: ExperimentConfig, records: Sequence[TrialRecord]) -> Dict[str, Path]:
    """Results CSV, success-rate plot data and the manifest for one sweep."""
    out_dir = Path(out_dir)
    paths = {
        "results": out_dir / RESULTS_FILE,
        "success_rates": out_dir / SUCCESS_FILE,
        "manifest": out_dir / MANIFEST_FILE,
    }
    write_records_csv(paths["results"], records)
    write_success_csv(paths["success_rates"], aggregate_success(records))
    write_manifest(paths["manifest"], build_manifest(cfg, records))
    return paths
