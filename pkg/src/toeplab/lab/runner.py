"""Run the selected suites and write their artifacts."""

from __future__ import annotations

import logging

from .config import ExperimentConfig, check_output_dir
from .report import emit_csv
from .suites import SUITE_FUNCS

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def run_suites(cfg: ExperimentConfig, suites=None) -> list:
    """Execute suites in canonical order; independent of which others run."""
    cfg.validate()
    chosen = set(cfg.suites if suites is None else suites)
    reports = []
    for name, func in SUITE_FUNCS.items():
        if name in chosen:
            log.info("running suite %s", name)
            reports.append(func(cfg))
    return reports


def run(cfg: ExperimentConfig, suites=None):
    """Run, then write CSVs and the manifest.  Returns ``(reports, exit_code, paths)``.

    Configuration problems raise ``ConfigError`` before anything is written.
    """
    check_output_dir(cfg.out_dir)
    reports = run_suites(cfg, suites)
    paths = emit_csv(reports, cfg.out_dir)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED
    return reports, code, paths
