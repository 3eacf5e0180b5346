from __future__ import annotations

"""
Configuration for the classifier and its command-line surface.

Provides a dataclass ClassifierConfig and a helper to read environment variables.
"""

from dataclasses import dataclass
import os

from dotenv import load_dotenv

# Load environment variables from .env
load_dotenv()


@dataclass(frozen=True)
class ClassifierConfig:
    """
    Configuration values used by the numerical library and the CLI.

    Attributes:
        DEFAULT_EPS: Absolute threshold for treating a residual as zero.
        DEFAULT_REL: Relative threshold, scaled by operand magnitude.
        MAX_DIM: Soft cap on algebra dimension (resource safety only).
        ROOT_BISECTION_WIDTH: Interval width at which root bisection stops.
        FACTOR_ITERATION_BUDGET: Iterations allowed for peeling quadratic factors.
        TWIST_MAX_CONDITION: Largest condition number accepted for random basis changes.
        TWIST_MAX_ATTEMPTS: Rejection-sampling attempts before giving up on a twist.
        LOG_LEVEL: Logging level name used by the CLI.
    """
    DEFAULT_EPS: float
    DEFAULT_REL: float
    MAX_DIM: int
    ROOT_BISECTION_WIDTH: float
    FACTOR_ITERATION_BUDGET: int
    TWIST_MAX_CONDITION: float
    TWIST_MAX_ATTEMPTS: int
    LOG_LEVEL: str


def get_classifier_config() -> ClassifierConfig:
    """
    Read configuration from environment variables.

    Supported environment variables:
        - FROBENIUS_MAX_DIM (default "64")
        - FROBENIUS_LOG_LEVEL (default "WARNING")

    Tolerances, seeds and the remaining numerical constants are fixed here; the CLI
    overrides tolerances through flags only.

    Returns:
        ClassifierConfig: Parsed configuration.
    """
    try:
        max_dim = int(os.getenv("FROBENIUS_MAX_DIM", "64"))
    except ValueError:
        max_dim = 64
    if max_dim < 1:
        max_dim = 64

    log_level = os.getenv("FROBENIUS_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
    if log_level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        log_level = "WARNING"

    return ClassifierConfig(
        DEFAULT_EPS=1e-9,
        DEFAULT_REL=1e-9,
        MAX_DIM=max_dim,
        ROOT_BISECTION_WIDTH=1e-13,
        FACTOR_ITERATION_BUDGET=10_000,
        TWIST_MAX_CONDITION=1e3,
        TWIST_MAX_ATTEMPTS=1000,
        LOG_LEVEL=log_level,
    )
