"""
Configuration settings and constants for the lattice protein move explorer.

This module provides a centralized configuration system with environment variable
support, validation, and the per-run configuration used by the command line.
Precedence for a run: settings defaults (including LATMOVE_* environment
variables) < ``key = value`` config file < explicit command line flags.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional, TextIO

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

SUPPORTED_LATTICES = ("SQ", "CUB", "FCC")
SUPPORTED_MODELS = ("backbone", "sidechain")
SEED_MIN = -(2**63)
SEED_MAX = 2**64 - 1


def _check_lattice(v: str) -> str:
    name = str(v).upper()
    if name not in SUPPORTED_LATTICES:
        raise ValueError(f"Lattice must be one of {', '.join(SUPPORTED_LATTICES)}")
    return name


def _check_model(v: str) -> str:
    kind = str(v).lower()
    if kind not in SUPPORTED_MODELS:
        raise ValueError(f"Model must be one of {', '.join(SUPPORTED_MODELS)}")
    return kind


class AppSettings(BaseSettings):
    """Application configuration settings with environment variable support."""

    # App metadata
    app_name: str = Field(default="Lattice Move Explorer", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    debug: bool = Field(default=False, description="Debug mode")

    # Logging
    log_level: str = Field(default="WARNING", description="Console log level of the CLI")
    log_file: Optional[str] = Field(default=None, description="Optional rotating log file")

    # Model defaults
    default_lattice: str = Field(default="FCC", description="Default lattice")
    default_model: str = Field(default="sidechain", description="Default model kind")
    default_k: int = Field(default=3, description="Maximal move interval length")
    default_seed: int = Field(default=0, description="Default random seed")

    # Annealing schedule
    t_start: float = Field(default=2.0, description="Initial temperature")
    t_end: float = Field(default=0.05, description="Temperature floor")
    cooling: float = Field(default=0.97, description="Geometric cooling factor per sweep")
    sweeps: int = Field(default=100, description="Number of sweeps")
    steps_per_residue: int = Field(default=10, description="Steps per sweep per residue")

    # Runs
    restarts: int = Field(default=1, description="Independent seeded folding runs")
    workers: int = Field(default=1, description="Worker processes for restarts")
    max_growth_restarts: int = Field(default=1000, description="Random growth restarts")

    @field_validator("default_lattice")
    @classmethod
    def validate_lattice(cls, v):
        return _check_lattice(v)

    @field_validator("default_model")
    @classmethod
    def validate_model(cls, v):
        return _check_model(v)

    @field_validator("default_k", "sweeps", "steps_per_residue", "restarts", "workers")
    @classmethod
    def validate_positive_int(cls, v):
        if v < 1:
            raise ValueError("Value must be at least 1")
        return v

    @field_validator("t_start", "t_end")
    @classmethod
    def validate_temperature(cls, v):
        if v <= 0:
            raise ValueError("Temperature must be positive")
        return v

    @field_validator("cooling")
    @classmethod
    def validate_cooling(cls, v):
        if not (0.0 < v < 1.0):
            raise ValueError("Cooling factor must be between 0.0 and 1.0")
        return v

    model_config = SettingsConfigDict(
        env_prefix="LATMOVE_", env_file=".env", env_file_encoding="utf-8", case_sensitive=False
    )


class RunConfig(BaseModel):
    """Configuration of one command line invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lattice: str
    model: str
    k: int = Field(ge=1)
    potential: Optional[str] = None
    hpmap: Optional[str] = None
    t_start: float = Field(gt=0)
    t_end: float = Field(gt=0)
    cooling: float = Field(gt=0, lt=1)
    sweeps: int = Field(ge=1)
    steps_per_residue: int = Field(ge=1)
    seed: int = Field(ge=SEED_MIN, le=SEED_MAX)
    restarts: int = Field(ge=1)
    workers: int = Field(ge=1)
    out_dir: str = "."

    @field_validator("lattice")
    @classmethod
    def validate_lattice(cls, v):
        return _check_lattice(v)

    @field_validator("model")
    @classmethod
    def validate_model(cls, v):
        return _check_model(v)

    @field_validator("t_end")
    @classmethod
    def validate_t_end(cls, v, info):
        t_start = info.data.get("t_start")
        if t_start is not None and v > t_start:
            raise ValueError("t_end must not exceed t_start")
        return v


def parse_config_lines(lines: Iterable[str]) -> Dict[str, str]:
    """
    Parse ``key = value`` lines; ``#`` starts a comment line.

    Raises:
        ConfigurationError: For malformed or duplicate lines
    """
    from ..utils.exceptions import ConfigurationError

    values: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if not key:
            raise ConfigurationError(f"line {lineno}: empty key", line=lineno)
        if key in values:
            raise ConfigurationError(f"line {lineno}: duplicate key '{key}'", config_key=key)
        values[key] = value
    return values


def load_config_file(stream: TextIO) -> Dict[str, str]:
    """Read a ``key = value`` configuration file into a dictionary."""
    return parse_config_lines(stream)


def build_run_config(
    file_values: Optional[Dict[str, Any]] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """
    Merge settings defaults, config file values and command line overrides.

    Args:
        file_values: Values read from a config file
        overrides: Explicit command line values (``None`` entries are ignored)

    Returns:
        Validated RunConfig

    Raises:
        ConfigurationError: If a key is unknown or a value is invalid
    """
    from ..utils.exceptions import ConfigurationError

    merged: Dict[str, Any] = {
        "lattice": settings.default_lattice,
        "model": settings.default_model,
        "k": settings.default_k,
        "t_start": settings.t_start,
        "t_end": settings.t_end,
        "cooling": settings.cooling,
        "sweeps": settings.sweeps,
        "steps_per_residue": settings.steps_per_residue,
        "seed": settings.default_seed,
        "restarts": settings.restarts,
        "workers": settings.workers,
    }
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in RunConfig.model_fields:
                raise ConfigurationError(f"Unknown configuration key: {key}", config_key=key)
            merged[key] = value

    try:
        return RunConfig(**merged)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first.get("loc", ())) or None
        raise ConfigurationError(
            ERROR_MESSAGES["invalid_config"].format(key=key, error=first.get("msg")),
            config_key=key,
        ) from e


# Create settings instance
try:
    settings = AppSettings()
except Exception as e:
    # Fallback to default values if the environment holds invalid overrides
    print(f"Warning: Failed to load settings from environment: {e}")
    print("Using default configuration values.")
    settings = AppSettings.model_construct()

# Module-level constants
DEFAULT_LATTICE = settings.default_lattice
DEFAULT_MODEL = settings.default_model
DEFAULT_K = settings.default_k
DEFAULT_SEED = settings.default_seed
DEFAULT_T_START = settings.t_start
DEFAULT_T_END = settings.t_end
DEFAULT_COOLING = settings.cooling
DEFAULT_SWEEPS = settings.sweeps
DEFAULT_STEPS_PER_RESIDUE = settings.steps_per_residue
MAX_GROWTH_RESTARTS = settings.max_growth_restarts

# Å distance between neighbored lattice points
CA_DISTANCE_ANGSTROM = 3.8

# Output file names written by `fold` and `walk`
OUTPUT_FILES = {
    "hp": "c_hp.structure",
    "gradient": "g_hp.structure",
    "refine": "r_hp.structure",
    "hp_trace": "c_hp.trace",
    "gradient_trace": "g_hp.trace",
    "refine_trace": "r_hp.trace",
    "walk": "walk.structure",
    "walk_trace": "walk.trace",
}

# Error messages
ERROR_MESSAGES = {
    "file_not_found": "File not found: {path}",
    "invalid_config": "Invalid configuration value for {key}: {error}",
    "lattice_mismatch": "Structure file uses lattice {found}, but --lattice {expected} was given",
    "model_mismatch": "Structure file uses model {found}, but --model {expected} was given",
    "potential_alphabet": "Potential alphabet {alphabet} does not cover sequence symbol '{symbol}'",
    "processing_error": "Error processing input: {error}",
}

SAMPLE_DATA_DIR = Path(__file__).parent.parent.parent / "sample_data"
