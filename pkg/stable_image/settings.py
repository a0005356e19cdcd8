import os
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

SEED_ENV_VAR = "STABLE_IMAGE_SEED"


class SolverSettings(BaseModel):
    """Tunables shared by every analysis."""

    model_config = ConfigDict(frozen=True)

    degree_cap: int = Field(default=64, ge=1, description="Largest total degree accepted by expensive operations")
    seed: int = Field(default=0, ge=0, description="Seed for shear choice and random generators")
    shear_retries: int = Field(default=8, ge=1, description="Random shears tried before the deterministic scan")
    root_candidate_cap: int = Field(default=1_000_000, ge=1, description="Rational-root candidates tested per polynomial")
    k_max: int = Field(default=8, ge=1, description="Stabilization probe depth")
    probe_height: int = Field(default=5, ge=0, description="Height bound of auto-probe grids")
    orbit_bound: int = Field(default=50, ge=1, description="Forward orbit length checked by lemma1_witness")
    depth_cap: int = Field(default=10_000, ge=1, description="Backward orbit search cap")
    critical_line_span: int = Field(
        default=2, ge=0, description="Critical values of f are sampled on the vertical lines x = t, |t| <= span"
    )


DEFAULT_SETTINGS = SolverSettings()


def load_settings(**overrides: Any) -> SolverSettings:
    """
    Build settings from explicit overrides (None values ignored).

    STABLE_IMAGE_SEED, when set, wins over any seed given here.
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None and env_seed.strip():
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}")
    try:
        return SolverSettings(**values)
    except ValidationError as exc:
        raise ConfigError(str(exc))
