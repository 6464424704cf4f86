"""Seeded recovery experiments: generators, sweeps, aggregation and persistence."""

from .config import L1_BASELINE, ExperimentConfig, Irl1Options, canonical_penalty
from .generators import (
    cell_problem,
    compressible_signal,
    gen_gaussian_matrix,
    gen_sparse_signal,
    trial_problem,
    trial_seed,
)
from .io import (
    CDF_HEADER,
    CURVE_HEADER,
    MEASURE_HEADER,
    PDF_HEADER,
    RESULT_HEADER,
    SUCCESS_HEADER,
    WEIGHT_HEADER,
    atomic_write,
    csv_text,
    read_records_csv,
    read_series_csv,
    read_success_csv,
    series_rows,
    write_records_csv,
    write_series_csv,
    write_success_csv,
    write_sweep_outputs,
)
from .runner import (
    SuccessCell,
    TrialRecord,
    aggregate_success,
    run_sweep,
    sort_records,
    success_monotonicity_holds,
    success_rate,
)

__all__ = [
    "CDF_HEADER",
    "CURVE_HEADER",
    "ExperimentConfig",
    "Irl1Options",
    "L1_BASELINE",
    "MEASURE_HEADER",
    "PDF_HEADER",
    "RESULT_HEADER",
    "SUCCESS_HEADER",
    "SuccessCell",
    "TrialRecord",
    "WEIGHT_HEADER",
    "aggregate_success",
    "atomic_write",
    "canonical_penalty",
    "cell_problem",
    "compressible_signal",
    "csv_text",
    "gen_gaussian_matrix",
    "gen_sparse_signal",
    "read_records_csv",
    "read_series_csv",
    "read_success_csv",
    "run_sweep",
    "series_rows",
    "sort_records",
    "success_monotonicity_holds",
    "success_rate",
    "trial_problem",
    "trial_seed",
    "write_records_csv",
    "write_series_csv",
    "write_success_csv",
    "write_sweep_outputs",
]
