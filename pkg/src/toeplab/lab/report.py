"""Suite reports and deterministic CSV emission."""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field

from .._csv import fmt, rows_to_text
from .config import OutputDirError, check_output_dir

SUITE_HEADER = ("suite", "case", "measured", "tolerance", "pass")


@dataclass
class Case:
    """One checked quantity.  ``tolerance`` is a number or an expectation such
    as ``"strong"`` / ``"!=strong"``; never omitted."""

    name: str
    measured: object
    tolerance: object
    passed: bool


@dataclass
class Table:
    header: tuple
    rows: list
    footer: str = ""


@dataclass
class SuiteReport:
    name: str
    cases: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, name, measured, tolerance, passed):
        self.cases.append(Case(name, measured, tolerance, bool(passed)))

    def check_le(self, name, measured, tolerance):
        self.add(name, float(measured), float(tolerance), measured <= tolerance)

    def check_ge(self, name, measured, bound):
        self.add(name, float(measured), float(bound), measured >= bound)

    def rows(self):
        for c in self.cases:
            yield self.name, c.name, c.measured, c.tolerance, c.passed

    def text(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"]
        for c in self.cases:
            lines.append(f"  {'ok ' if c.passed else 'BAD'} {c.name}: measured={fmt(c.measured)} "
                         f"tolerance={fmt(c.tolerance)}")
        return "\n".join(lines)


def render(reports) -> dict:
    """File name -> content for every artifact except the manifest."""
    files = {}
    for rep in reports:
        files[f"{rep.name}.suite.csv"] = rows_to_text(SUITE_HEADER, rep.rows())
        meta = sorted((str(k), v) for k, v in rep.metadata.items())
        files[f"{rep.name}.meta.csv"] = rows_to_text(("key", "value"), meta)
        for tname, table in sorted(rep.tables.items()):
            text = rows_to_text(table.header, table.rows)
            if table.footer:
                text += table.footer + "\n"
            files[f"{tname}.csv"] = text
    if reports:
        summary = [(r.name, sum(c.passed for c in r.cases), sum(not c.passed for c in r.cases), r.passed)
                   for r in reports]
        files["summary.csv"] = rows_to_text(("suite", "passed", "failed", "pass"), summary)
    return files


def _atomic_write(path, content):
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except OSError as exc:
        raise OutputDirError(f"cannot write {path}: {exc}") from exc


def emit_csv(reports, out_dir) -> list:
    """Write every report artifact plus ``manifest.csv`` (file, sha256).

    Everything is rendered in memory first and each file is replaced
    atomically; returns the written paths, manifest last.
    """
    out_dir = check_output_dir(out_dir)
    files = render(list(reports))
    written = []
    manifest = []
    for name in sorted(files):
        content = files[name]
        path = os.path.join(out_dir, name)
        _atomic_write(path, content)
        manifest.append((name, hashlib.sha256(content.encode()).hexdigest()))
        written.append(path)
    path = os.path.join(out_dir, "manifest.csv")
    _atomic_write(path, rows_to_text(("file", "sha256"), manifest))
    written.append(path)
    return written
