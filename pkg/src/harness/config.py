"""Experiment configuration for replicated recovery sweeps."""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..config import settings
from ..errors import ExperimentError, SparseRecoveryError
from ..penalties import PenaltyModel, parse_penalty_spec
from ..solvers import AdmmConfig, Irl1Config, check_irl1_model

# The plain lasso baseline; every other entry is a penalty spec run through IRL1.
L1_BASELINE = "l1"


def _default_admm() -> AdmmConfig:
    return AdmmConfig.from_settings()


class Irl1Options(BaseModel):
    """IRL1 outer-loop options; lambda comes from the experiment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_outer: int = Field(default_factory=lambda: settings.irl1_max_outer, ge=1)
    eps: float = Field(default_factory=lambda: settings.irl1_eps, ge=0)
    stop_tol: float = Field(default_factory=lambda: settings.irl1_stop_tol, gt=0)


class ExperimentConfig(BaseModel):
    """
    Sweep definition. Loaded from JSON with the same field names; the
    regularization weight is written ``lambda`` in files.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    N: int = Field(default=256, ge=1)
    m: int = Field(default=64, ge=1)
    sparsity_grid: List[int] = Field(default_factory=lambda: list(range(6, 33, 2)))
    replicates: int = Field(default=100, ge=1)
    lam: float = Field(default=1e-7, gt=0, alias="lambda")
    penalties: List[str] = Field(default_factory=lambda: [L1_BASELINE, "weibull(k=1,sigma=1)"])
    success_tol: float = Field(default=1e-3, gt=0)
    master_seed: int = Field(default=0, ge=0)
    nonzero_law: Literal["gaussian", "rademacher"] = "gaussian"
    matrix_scaling: Literal["inv_m", "unit"] = "inv_m"
    admm: AdmmConfig = Field(default_factory=_default_admm)
    irl1: Irl1Options = Field(default_factory=Irl1Options)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    record_wall_time: bool = True
    monotonicity_confidence: float = Field(default=0.99, gt=0, lt=1)

    @field_validator("penalties")
    @classmethod
    def validate_penalties(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("at least one penalty is required")
        canonical = []
        for text in v:
            if text.strip().lower() == L1_BASELINE:
                canonical.append(L1_BASELINE)
                continue
            try:
                model = parse_penalty_spec(text)
                check_irl1_model(model)
            except SparseRecoveryError as exc:
                raise ValueError(str(exc))
            canonical.append(model.spec)
        if len(set(canonical)) != len(canonical):
            raise ValueError("penalties must be distinct")
        return canonical

    @model_validator(mode="after")
    def validate_dimensions(self) -> "ExperimentConfig":
        if self.m >= self.N:
            raise ValueError(f"m must be smaller than N (got m={self.m}, N={self.N})")
        if not self.sparsity_grid:
            raise ValueError("sparsity_grid must not be empty")
        if min(self.sparsity_grid) < 1 or max(self.sparsity_grid) > self.m:
            raise ValueError(f"sparsity values must lie in [1, m={self.m}]")
        if len(set(self.sparsity_grid)) != len(self.sparsity_grid):
            raise ValueError("sparsity_grid values must be distinct")
        return self

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """Load and validate a config file; any problem raises ExperimentError."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ExperimentError(f"cannot read config {path}: {exc}")
        try:
            return cls.model_validate_json(text)
        except ValidationError as exc:
            raise ExperimentError(f"invalid config {path}: {exc}")

    def to_json_dict(self) -> Dict:
        return self.model_dump(mode="json", by_alias=True)

    def penalty_model(self, spec: str) -> Optional[PenaltyModel]:
        """The IRL1 model for a configured spec, None for the l1 baseline."""
        return None if spec == L1_BASELINE else parse_penalty_spec(spec)

    def irl1_config(self) -> Irl1Config:
        return Irl1Config(lam=self.lam, **self.irl1.model_dump())

    @property
    def sorted_sparsity(self) -> List[int]:
        return sorted(self.sparsity_grid)


def canonical_penalty(spec: str) -> str:
    """Canonical form of a penalty spec or the l1 baseline name."""
    if spec.strip().lower() == L1_BASELINE:
        return L1_BASELINE
    return parse_penalty_spec(spec).spec
