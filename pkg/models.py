"""
Pydantic v2 data models for scenarios, records and reports.
Defines the schemas shared by the CLI, the exporter and the HTTP service.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator
)

from exceptions import ConfigError
from settings import settings


# =====================================================================
# Enums
# =====================================================================

class EntropyUnits(str, Enum):
    """Logarithm base for exported entropies."""
    NATS = "nats"
    BITS = "bits"


class OutputQuantity(str, Enum):
    """Quantities a scenario can request."""
    S_L = "S_L"
    S_VON = "S_von"
    NEGATIVITY = "negativity"
    U1 = "U1"
    U2 = "U2"
    ALPHA = "alpha"
    GAMMA = "gamma"
    GAMMA1 = "gamma1"
    GAMMA2 = "gamma2"
    H1 = "h1"
    H2 = "h2"
    S_BT2 = "S_BT2"
    S_R2 = "S_R2"


CANONICAL_COLUMNS: Tuple[str, ...] = (
    "t", "S_L", "S_von", "negativity", "U1", "U2", "alpha", "gamma", "diverged"
)
EXTRA_QUANTITIES: Tuple[OutputQuantity, ...] = (
    OutputQuantity.GAMMA1,
    OutputQuantity.GAMMA2,
    OutputQuantity.H1,
    OutputQuantity.H2,
    OutputQuantity.S_BT2,
    OutputQuantity.S_R2,
)
DEFAULT_OUTPUTS: Tuple[OutputQuantity, ...] = (
    OutputQuantity.S_L,
    OutputQuantity.S_VON,
    OutputQuantity.NEGATIVITY,
    OutputQuantity.U1,
    OutputQuantity.U2,
    OutputQuantity.ALPHA,
)


class SweepAxis(str, Enum):
    """Parameter a sweep varies."""
    OMEGA_C = "omega_c"
    J_F = "J_f"
    OMEGA_F2 = "omega_f2"


class CheckStatus(str, Enum):
    """Outcome of a single validation check."""
    PASS = "pass"
    FAIL = "fail"
    EXPECTED_DIFFERENCE = "expected-difference"


# =====================================================================
# Physical Parameters
# =====================================================================

class SystemParams(BaseModel):
    """Instantaneous parameters of the coupled oscillators (hbar = m = 1)."""
    model_config = ConfigDict(frozen=True)

    omega1: float = Field(..., gt=0.0, description="Angular frequency of oscillator 1")
    omega2: float = Field(..., gt=0.0, description="Angular frequency of oscillator 2")
    J: float = Field(default=0.0, ge=0.0, description="Coupling (frequency-squared units)")
    omega_c: float = Field(default=0.0, ge=0.0, description="Cyclotron frequency eB/2c")


class QuenchSpec(BaseModel):
    """Sudden quench from initial to final parameters at t = 0."""
    model_config = ConfigDict(frozen=True)

    initial: SystemParams
    final: SystemParams

    @model_validator(mode='after')
    def check_static_field(self) -> "QuenchSpec":
        """The magnetic field does not change across the quench."""
        if self.initial.omega_c != self.final.omega_c:
            raise ValueError(
                f"omega_c must be identical before and after the quench "
                f"({self.initial.omega_c} != {self.final.omega_c})"
            )
        return self

    @property
    def omega_c(self) -> float:
        return self.initial.omega_c

    @classmethod
    def from_values(
        cls,
        initial: Tuple[float, float, float],
        final: Tuple[float, float, float],
        omega_c: float = 0.0,
    ) -> "QuenchSpec":
        """Build from (omega1, omega2, J) triples and a shared omega_c."""
        return cls(
            initial=SystemParams(omega1=initial[0], omega2=initial[1], J=initial[2], omega_c=omega_c),
            final=SystemParams(omega1=final[0], omega2=final[1], J=final[2], omega_c=omega_c),
        )


# =====================================================================
# Scenario Configuration
# =====================================================================

class ScenarioConfig(BaseModel):
    """One evolution run: a quench, a time window and the requested outputs."""
    model_config = ConfigDict(frozen=True)

    quench: QuenchSpec
    t_max: float = Field(default_factory=lambda: settings.t_max, gt=0.0, description="End of the time window")
    n_samples: int = Field(default_factory=lambda: settings.n_samples, ge=2, description="Number of equally spaced samples")
    outputs: List[OutputQuantity] = Field(
        default_factory=lambda: list(DEFAULT_OUTPUTS),
        description="Quantities to plot; extras are appended to the CSV"
    )
    entropy_units: EntropyUnits = Field(default_factory=lambda: EntropyUnits(settings.entropy_units))
    label: Optional[str] = Field(default=None, description="Free-form scenario name")

    @field_validator('outputs')
    @classmethod
    def dedupe_outputs(cls, v: List[OutputQuantity]) -> List[OutputQuantity]:
        """Drop repeated quantities, keeping first occurrence."""
        seen: List[OutputQuantity] = []
        for q in v:
            if q not in seen:
                seen.append(q)
        return seen

    @property
    def omega_c(self) -> float:
        return self.quench.omega_c

    @property
    def extra_columns(self) -> List[str]:
        """Non-canonical columns requested by this scenario, in fixed order."""
        return [q.value for q in EXTRA_QUANTITIES if q in self.outputs]

    def with_axis_value(self, axis: SweepAxis, value: float) -> "ScenarioConfig":
        """Copy of this scenario with one swept parameter replaced."""
        initial = self.quench.initial
        final = self.quench.final
        if axis == SweepAxis.OMEGA_C:
            initial = initial.model_copy(update={"omega_c": value})
            final = final.model_copy(update={"omega_c": value})
        elif axis == SweepAxis.J_F:
            final = final.model_copy(update={"J": value})
        elif axis == SweepAxis.OMEGA_F2:
            final = final.model_copy(update={"omega2": value})
        # model_copy skips validation; rebuild to re-check field bounds
        quench = QuenchSpec(initial=initial.model_dump(), final=final.model_dump())
        return self.model_copy(update={"quench": quench})

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        """
        Build from the scenario file layout.

        Expected keys: quench.initial.{omega1,omega2,J}, quench.final.{omega1,omega2,J},
        omega_c, t_max, n_samples, outputs, entropy_units.

        Raises:
            ConfigError: if keys are missing or values are invalid
        """
        try:
            quench = data["quench"]
            omega_c = float(data.get("omega_c", 0.0))
            spec = QuenchSpec(
                initial={**quench["initial"], "omega_c": omega_c},
                final={**quench["final"], "omega_c": omega_c},
            )
            fields: Dict[str, Any] = {"quench": spec}
            for key in ("t_max", "n_samples", "outputs", "entropy_units", "label"):
                if key in data:
                    fields[key] = data[key]
            return cls(**fields)
        except KeyError as e:
            raise ConfigError(f"Missing scenario key: {e}") from e
        except (TypeError, ValidationError) as e:
            raise ConfigError(f"Invalid scenario: {e}") from e

    @classmethod
    def from_file(cls, path: str) -> "ScenarioConfig":
        """Load a TOML (or YAML) scenario file."""
        file_path = Path(path)
        if not file_path.is_file():
            raise ConfigError(f"Scenario file not found: {path}")
        try:
            if file_path.suffix.lower() in (".yaml", ".yml"):
                import yaml
                with open(file_path, 'r') as f:
                    data = yaml.safe_load(f) or {}
            else:
                with open(file_path, 'rb') as f:
                    data = tomllib.load(f)
        except (tomllib.TOMLDecodeError, ValueError) as e:
            raise ConfigError(f"Could not parse {path}: {e}") from e
        if not isinstance(data, Mapping):
            raise ConfigError(f"Scenario file {path} must contain a table")
        return cls.from_mapping(data)

    def to_mapping(self) -> Dict[str, Any]:
        """Inverse of from_mapping."""
        def triple(p: SystemParams) -> Dict[str, float]:
            return {"omega1": p.omega1, "omega2": p.omega2, "J": p.J}

        data: Dict[str, Any] = {
            "quench": {"initial": triple(self.quench.initial), "final": triple(self.quench.final)},
            "omega_c": self.omega_c,
            "t_max": self.t_max,
            "n_samples": self.n_samples,
            "outputs": [q.value for q in self.outputs],
            "entropy_units": self.entropy_units.value,
        }
        if self.label:
            data["label"] = self.label
        return data


# =====================================================================
# Results
# =====================================================================

class DynamicsRecord(BaseModel):
    """One time sample of the evolved quantities."""
    t: float
    S_L: float
    S_von: float
    negativity: float
    U1: float
    U2: float
    alpha: float
    gamma: float
    diverged: bool = False
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    h1: Optional[float] = None
    h2: Optional[float] = None
    S_BT2: Optional[float] = None
    S_R2: Optional[float] = None


class SweepEntry(BaseModel):
    """Result of one swept value; failures are isolated per value."""
    value: float
    records: List[DynamicsRecord] = Field(default_factory=list)
    hyperbolic: List[bool] = Field(default_factory=lambda: [False, False])
    diverged: bool = False
    error: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class SweepResult(BaseModel):
    """All entries of a sweep, in input order."""
    axis: SweepAxis
    entries: List[SweepEntry]

    @property
    def values(self) -> List[float]:
        return [e.value for e in self.entries]

    @property
    def failures(self) -> List[SweepEntry]:
        return [e for e in self.entries if not e.ok]


class ValidationCheck(BaseModel):
    """Outcome of one validation check."""
    name: str
    status: CheckStatus
    error: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""
    runtime_ms: float = 0.0


class ValidationReport(BaseModel):
    """Machine-readable result of the validation suite."""
    checks: List[ValidationCheck] = Field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != CheckStatus.FAIL for c in self.checks)

    @property
    def failed(self) -> List[ValidationCheck]:
        return [c for c in self.checks if c.status == CheckStatus.FAIL]


# =====================================================================
# HTTP Models
# =====================================================================

class SweepRequest(BaseModel):
    """Request body for the sweep endpoint."""
    config: ScenarioConfig
    axis: SweepAxis
    values: List[float] = Field(..., min_length=1)


class EvolveResponse(BaseModel):
    """Response of the evolve endpoint."""
    records: List[DynamicsRecord]
    n_records: int
    diverged: bool
    runtime_ms: float


class HealthStatus(BaseModel):
    """Service health."""
    status: str
    version: str
    uptime_seconds: float
    memory_usage_mb: float
    max_workers: int


class ErrorResponse(BaseModel):
    """Error payload returned by the service."""
    error: str
    message: str
    details: Optional[Dict[str, Any]] = None
