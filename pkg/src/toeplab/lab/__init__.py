"""Config-driven experiment runner wiring symbols, sections, spectra and verdicts."""

from .config import ConfigError, ExperimentConfig, load_config
from .report import Case, SuiteReport, emit_csv
from .runner import run, run_suites
from .suites import SUITE_FUNCS

__all__ = ["Case", "ConfigError", "ExperimentConfig", "SUITE_FUNCS", "SuiteReport",
           "emit_csv", "load_config", "run", "run_suites"]
