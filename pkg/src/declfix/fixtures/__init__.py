"""Bundled regression corpus.

Each case is a directory holding a buggy program, its ground truth, a
metadata record (what the tool is expected to do with it, which parts of
the published listing had to be restored), and, for the golden cases, the
expected repaired source.  Cases whose metadata marks them golden cover
the nine type binding rules exactly once each; the rest are regressions
for the detector's edge behavior.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import FixtureIntegrityError

_REQUIRED_META = ("id", "golden", "expected")


@dataclass(frozen=True)
class FixtureCase:
    id: str
    buggy: str
    fixed: str | None
    truth: dict
    meta: dict

    @property
    def golden(self):
        return bool(self.meta["golden"])

    @property
    def expected(self):
        return self.meta["expected"]

    @property
    def expected_case_id(self):
        """The binding rule the tool is expected to apply (cases have
        exactly one undeclared variable each)."""
        return self.meta["expected"][0]["case"]


def _data_root():
    return resources.files(__package__) / "data"


def _load_case(entry):
    cid = entry.name
    buggy_path = entry / "buggy.c"
    truth_path = entry / "truth.json"
    meta_path = entry / "meta.json"
    for p in (buggy_path, truth_path, meta_path):
        if not p.is_file():
            raise FixtureIntegrityError(f"{cid}: missing {p.name}")
    try:
        truth = json.loads(truth_path.read_text())
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureIntegrityError(f"{cid}: bad JSON ({exc})") from exc
    for key in _REQUIRED_META:
        if key not in meta:
            raise FixtureIntegrityError(f"{cid}: metadata lacks {key!r}")
    if meta["id"] != cid:
        raise FixtureIntegrityError(
            f"{cid}: metadata id {meta['id']!r} does not match the directory"
        )
    if "expected" not in truth:
        raise FixtureIntegrityError(f"{cid}: truth lacks 'expected'")
    fixed_path = entry / "fixed.c"
    fixed = fixed_path.read_text() if fixed_path.is_file() else None
    if meta["golden"] and fixed is None:
        raise FixtureIntegrityError(f"{cid}: golden case without fixed.c")
    return FixtureCase(
        id=cid, buggy=buggy_path.read_text(), fixed=fixed, truth=truth, meta=meta
    )


def load_fixtures(golden_only=False):
    """All bundled cases, ordered by id."""
    cases = []
    for entry in sorted(_data_root().iterdir(), key=lambda e: e.name):
        if not entry.is_dir():
            continue
        case = _load_case(entry)
        if golden_only and not case.golden:
            continue
        cases.append(case)
    if not cases:
        raise FixtureIntegrityError("no fixture cases found")
    return cases


def load_fixture(case_id):
    for case in load_fixtures():
        if case.id == case_id:
            return case
    raise FixtureIntegrityError(f"no fixture named {case_id!r}")


def materialize_corpus(corpus_dir, truth_dir=None, golden_only=False):
    """Export the cases in the evaluator's flat layout: <id>.c in
    corpus_dir and <id>.truth.json in truth_dir (same directory when truth
    is omitted).  Returns the list of ids written.
    """
    corpus_dir = Path(corpus_dir)
    truth_dir = corpus_dir if truth_dir is None else Path(truth_dir)
    corpus_dir.mkdir(parents=True, exist_ok=True)
    truth_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for case in load_fixtures(golden_only=golden_only):
        (corpus_dir / f"{case.id}.c").write_text(case.buggy)
        truth = dict(case.truth)
        truth["file"] = f"{case.id}.c"
        (truth_dir / f"{case.id}.truth.json").write_text(
            json.dumps(truth, indent=2) + "\n"
        )
        written.append(case.id)
    return written
