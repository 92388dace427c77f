from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

from dotenv import load_dotenv


@dataclass(frozen=True)
class Settings:
    log_level: str
    log_file: Optional[str]
    jobs: int
    seed: int
    minor_budget: int
    check_laplacian: bool
    tolerance: float
    alpha_tail: float
    torsion_tolerance: float
    laplacian_max_dim: int = 256

    def wants_laplacian_check(self, dims: Sequence[int]) -> bool:
        """Laplacian cross-check only while every chain group has rank <= laplacian_max_dim."""
        return self.check_laplacian and max(dims, default=0) <= self.laplacian_max_dim


_SETTINGS_CACHE: Optional[Settings] = None


def _get_env_int(name: str, default: int) -> int:
    raw: Optional[str] = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _get_env_float(name: str, default: float) -> float:
    raw: Optional[str] = os.getenv(name)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        return default
    return value if value > 0 else default


def _get_env_bool(name: str, default: bool) -> bool:
    raw: Optional[str] = os.getenv(name)
    if raw is None:
        return default

    value = raw.strip().lower()
    if value in {"1", "true", "t", "yes", "y"}:
        return True
    if value in {"0", "false", "f", "no", "n"}:
        return False
    return default


def load_settings() -> Settings:
    global _SETTINGS_CACHE
    if _SETTINGS_CACHE is not None:
        return _SETTINGS_CACHE

    # .env next to the working directory, never overriding real env vars
    load_dotenv(override=False)

    _SETTINGS_CACHE = Settings(
        log_level=os.getenv("HOMGROW_LOG_LEVEL", "INFO"),
        log_file=os.getenv("HOMGROW_LOG_FILE") or None,
        jobs=max(1, _get_env_int("HOMGROW_JOBS", 1)),
        seed=_get_env_int("HOMGROW_SEED", 20240611),
        minor_budget=max(1, _get_env_int("HOMGROW_MINOR_BUDGET", 4096)),
        check_laplacian=_get_env_bool("HOMGROW_CHECK_LAPLACIAN", True),
        tolerance=_get_env_float("HOMGROW_TOLERANCE", 1e-9),
        alpha_tail=_get_env_float("HOMGROW_ALPHA_TAIL", 5e-3),
        torsion_tolerance=_get_env_float("HOMGROW_TORSION_TOLERANCE", 1e-4),
        laplacian_max_dim=max(0, _get_env_int("HOMGROW_LAPLACIAN_MAX_DIM", 256)),
    )
    return _SETTINGS_CACHE


def reset_settings() -> None:
    global _SETTINGS_CACHE
    _SETTINGS_CACHE = None
