"""Corpus evaluation against ground-truth annotations.

Each program <name>.c pairs with <name>.truth.json holding the variables
the tool is expected to flag and the declarations it should invent.  The
report aggregates per-file verdicts into one summary row plus four
category rows (scalar vs array findings, single-main vs multi-function
programs), with column arithmetic that always satisfies

    identified + not_identified == total
    fixed <= correctly_identified <= identified
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingTruth, SchemaError
from .pipeline import FixOptions, fix_source

_COLUMNS = (
    "Identified",
    "Not identified",
    "Correctly identified",
    "Wrongly identified",
    "Fixed",
    "Not fixed",
    "Total",
)


@dataclass(frozen=True)
class TruthEntry:
    name: str
    expected_type: str
    expected_array_size: int | None = None


@dataclass(frozen=True)
class TruthAnnotation:
    file: str
    expected: tuple

    @property
    def names(self):
        return {e.name for e in self.expected}

    @property
    def has_array(self):
        return any(e.expected_array_size is not None for e in self.expected)


def load_truth(path):
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise MissingTruth(str(path)) from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict) or "expected" not in doc:
        raise SchemaError(f"{path}: annotation needs an 'expected' list")
    entries = []
    seen = set()
    for raw in doc["expected"]:
        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaError(f"{path}: every expected entry needs a name")
        if name in seen:
            raise SchemaError(f"{path}: duplicate expected name '{name}'")
        seen.add(name)
        entries.append(
            TruthEntry(
                name=name,
                expected_type=raw.get("expected_type", "int"),
                expected_array_size=raw.get("expected_array_size"),
            )
        )
    return TruthAnnotation(file=doc.get("file", Path(path).name), expected=tuple(entries))


@dataclass
class FileVerdict:
    file: str
    status: str
    category: str  # variables | arrays
    functions: str  # main | multiple
    flagged: list
    truth: list
    identified: bool
    correct: bool
    fixed: bool

    def to_json_dict(self):
        return {
            "file": self.file,
            "status": self.status,
            "category": self.category,
            "functions": self.functions,
            "flagged": self.flagged,
            "truth": self.truth,
            "identified": self.identified,
            "correct": self.correct,
            "fixed": self.fixed,
        }


@dataclass
class EvalRow:
    key: str
    label: str
    total: int = 0
    identified: int | None = 0  # None renders N/A (category rows)
    correctly: int = 0
    fixed: int = 0

    @property
    def not_identified(self):
        return None if self.identified is None else self.total - self.identified

    @property
    def wrongly(self):
        return self.total - self.correctly

    @property
    def not_fixed(self):
        return self.total - self.fixed

    def to_json_dict(self):
        return {
            "key": self.key,
            "label": self.label,
            "identified": self.identified,
            "not_identified": self.not_identified,
            "correctly_identified": self.correctly,
            "wrongly_identified": self.wrongly,
            "fixed": self.fixed,
            "not_fixed": self.not_fixed,
            "total": self.total,
        }


def _cell(count, total):
    if count is None:
        return "N/A"
    pct = 0.0 if total == 0 else 100.0 * count / total
    return f"{count}({pct:.1f}%)"


@dataclass
class EvalReport:
    rows: list = field(default_factory=list)
    files: list = field(default_factory=list)

    @property
    def total(self):
        return self.rows[0].total if self.rows else 0

    def row(self, key):
        for row in self.rows:
            if row.key == key:
                return row
        raise KeyError(key)

    def to_json_dict(self):
        return {
            "total": self.total,
            "rows": [r.to_json_dict() for r in self.rows],
            "files": [f.to_json_dict() for f in self.files],
        }

    def write_json(self, path):
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")

    def table_text(self):
        header = ("Programs",) + _COLUMNS
        body = []
        for row in self.rows:
            body.append(
                (
                    row.label,
                    _cell(row.identified, row.total),
                    _cell(row.not_identified, row.total),
                    _cell(row.correctly, row.total),
                    _cell(row.wrongly, row.total),
                    _cell(row.fixed, row.total),
                    _cell(row.not_fixed, row.total),
                    str(row.total),
                )
            )
        widths = [
            max(len(header[i]), *(len(line[i]) for line in body)) if body else len(header[i])
            for i in range(len(header))
        ]
        lines = []
        lines.append("  ".join(header[i].ljust(widths[i]) for i in range(len(header))).rstrip())
        lines.append("  ".join("-" * widths[i] for i in range(len(header))))
        for line in body:
            cells = [line[0].ljust(widths[0])]
            cells += [line[i].rjust(widths[i]) for i in range(1, len(header))]
            lines.append("  ".join(cells).rstrip())
        return "\n".join(lines) + "\n"


def _verdict(path, truth, options):
    report = fix_source(path.read_text(), str(path), options)
    flagged = sorted({f.name for f in report.undeclared})
    truth_names = truth.names
    identified = bool(flagged)
    correct = identified and set(flagged) == truth_names
    fixed = correct
    if fixed:
        chosen = {f.name: f for f in report.undeclared}
        for entry in truth.expected:
            finding = chosen.get(entry.name)
            if (
                finding is None
                or finding.type_text != entry.expected_type
                or finding.array_size != entry.expected_array_size
            ):
                fixed = False
                break
    return FileVerdict(
        file=path.name,
        status=report.status,
        category="arrays" if truth.has_array else "variables",
        functions="multiple" if report.function_count > 1 else "main",
        flagged=flagged,
        truth=sorted(truth_names),
        identified=identified,
        correct=correct,
        fixed=fixed,
    )


def run_eval(corpus_dir, truth_dir, options=None):
    """Score every <name>.c in corpus_dir against <name>.truth.json."""
    options = options or FixOptions()
    options.repair = False  # verdicts compare declarations, not output text
    corpus = sorted(Path(corpus_dir).glob("*.c"))
    truth_root = Path(truth_dir)

    report = EvalReport()
    rows = {
        "all": EvalRow("all", "all programs"),
        "variables-main": EvalRow("variables-main", "variables, one function", identified=None),
        "variables-multi": EvalRow(
            "variables-multi", "variables, multiple functions", identified=None
        ),
        "arrays-main": EvalRow("arrays-main", "arrays, one function", identified=None),
        "arrays-multi": EvalRow("arrays-multi", "arrays, multiple functions", identified=None),
    }
    report.rows = list(rows.values())

    for path in corpus:
        truth = load_truth(truth_root / f"{path.stem}.truth.json")
        verdict = _verdict(path, truth, options)
        report.files.append(verdict)

        key = (
            f"{verdict.category}-multi"
            if verdict.functions == "multiple"
            else f"{verdict.category}-main"
        )
        for row in (rows["all"], rows[key]):
            row.total += 1
            row.correctly += int(verdict.correct)
            row.fixed += int(verdict.fixed)
            if row.identified is not None:
                row.identified += int(verdict.identified)
    return report
