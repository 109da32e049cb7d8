"""Integer encodings of AST tokens and the model vocabulary.

Every AST node kind has a small non-terminal code (its NodeKind ordinal,
1..47).  Every terminal lexeme gets a six-digit code from a band chosen by
its category, assigned first come, first served within a corpus:

    datatype words            111111   (all type names share one code)
    identifiers               200000 .. 499999
    keywords                  500000 .. 599999
    string and number literals 600000 .. 999999

A composite code is the decimal concatenation of a non-terminal code and a
terminal code.  Because terminal codes are always exactly six digits, the
concatenation is reversible: the terminal is the last six digits, the
non-terminal whatever precedes them.  IdentifierType paired with the
generalized datatype code is therefore always 9111111.

The vocabulary over a corpus holds one composite entry per (kind,
identifier) combination the model can see, a dense index per entry, and
the training pairs: for each variable-position ID occurrence, the input
ID-composite mapped to the declaration triple (Decl, TypeDecl,
IdentifierType) for the same identifier.  The triple is synthesized whether
or not the program declares the variable; that is the whole trick, the
model memorizes what the declaration *would* look like.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .astnodes import NodeKind
from .errors import CapacityError, RangeError
from .scopes import ScopeTree, build_scopes

DATATYPE_CODE = 111111

TERMINAL_BANDS = {
    "identifier": (200000, 499999),
    "keyword": (500000, 599999),
    "literal": (600000, 999999),
}

_CATEGORY_TO_BAND = {
    "identifier": "identifier",
    "keyword": "keyword",
    "string": "literal",
    "int-literal": "literal",
    "float-literal": "literal",
}

TERMINAL_CATEGORIES = frozenset(_CATEGORY_TO_BAND) | {"datatype"}

_MIN_TERMINAL = 100000
_MAX_TERMINAL = 999999


def encode_nonterminal(kind):
    """NodeKind -> its frozen 1..47 code."""
    return NodeKind(kind).value


def decode_nonterminal(code):
    return NodeKind(code)


def compose(nonterminal_code, terminal_code):
    """Decimal concatenation of the two codes."""
    if not 1 <= int(nonterminal_code) <= 47:
        raise RangeError(f"non-terminal code out of range: {nonterminal_code}")
    if not _MIN_TERMINAL <= int(terminal_code) <= _MAX_TERMINAL:
        raise RangeError(f"terminal code must have six digits: {terminal_code}")
    return int(f"{int(nonterminal_code)}{int(terminal_code)}")


def decompose(composite):
    """Inverse of compose: the terminal is the final six digits."""
    composite = int(composite)
    terminal = composite % 1000000
    nonterminal = composite // 1000000
    if not 1 <= nonterminal <= 47:
        raise RangeError(f"composite {composite} has no valid non-terminal prefix")
    if terminal < _MIN_TERMINAL:
        raise RangeError(f"composite {composite} has no valid terminal suffix")
    return nonterminal, terminal


def one_hot(index, size):
    if not 0 <= index < size:
        raise RangeError(f"index {index} outside [0, {size})")
    vec = np.zeros(size, dtype=np.float64)
    vec[index] = 1.0
    return vec


class TerminalCoder:
    """First-come-first-served terminal code assignment for one corpus."""

    def __init__(self, bands=None):
        self.bands = dict(bands or TERMINAL_BANDS)
        self._next = {band: lo for band, (lo, hi) in self.bands.items()}
        self._by_key = {}
        self._by_code = {}

    def encode_terminal(self, lexeme, category):
        if category not in TERMINAL_CATEGORIES:
            raise ValueError(f"unknown terminal category {category!r}")
        if category == "datatype":
            self._by_code.setdefault(DATATYPE_CODE, (lexeme, "datatype"))
            return DATATYPE_CODE
        band = _CATEGORY_TO_BAND[category]
        key = (band, lexeme)
        code = self._by_key.get(key)
        if code is not None:
            return code
        lo, hi = self.bands[band]
        code = self._next[band]
        if code > hi:
            raise CapacityError(f"band {band!r} exhausted at {hi}")
        self._next[band] = code + 1
        self._by_key[key] = code
        self._by_code[code] = (lexeme, category)
        return code

    def lexeme_of(self, code):
        """-> (lexeme, category) for an assigned code."""
        if code == DATATYPE_CODE:
            return self._by_code.get(code, ("type", "datatype"))
        return self._by_code[code]

    def known(self, lexeme, category="identifier"):
        band = _CATEGORY_TO_BAND.get(category)
        return self._by_key.get((band, lexeme))

    def snapshot(self):
        return [
            [code, lexeme, category]
            for code, (lexeme, category) in sorted(self._by_code.items())
        ]

    @classmethod
    def restore(cls, rows, bands=None):
        coder = cls(bands)
        for code, lexeme, category in rows:
            code = int(code)
            if category == "datatype":
                coder._by_code[DATATYPE_CODE] = (lexeme, "datatype")
                continue
            band = _CATEGORY_TO_BAND[category]
            coder._by_key[(band, lexeme)] = code
            coder._by_code[code] = (lexeme, category)
            if code >= coder._next[band]:
                coder._next[band] = code + 1
        return coder


@dataclass
class TrainingPair:
    """One ID occurrence and the declaration triple it should predict."""

    input_code: int
    targets: tuple  # (Decl composite, TypeDecl composite, IdentifierType composite)


@dataclass
class Vocabulary:
    entries: dict = field(default_factory=dict)  # composite -> dense index
    pairs: list = field(default_factory=list)
    coder: TerminalCoder = field(default_factory=TerminalCoder)

    @property
    def size(self):
        return len(self.entries)

    def index_of(self, composite):
        return self.entries[composite]

    def code_at(self, index):
        return self._ordered()[index]

    def _ordered(self):
        codes = [None] * len(self.entries)
        for code, idx in self.entries.items():
            codes[idx] = code
        return codes

    def identifier_code(self, lexeme):
        """Terminal code for an identifier seen in this corpus, or None."""
        return self.coder.known(lexeme, "identifier")

    def identifier_of_terminal(self, terminal_code):
        lexeme, _category = self.coder.lexeme_of(terminal_code)
        return lexeme

    def to_json(self):
        entries = sorted(self.entries.items(), key=lambda kv: kv[1])
        doc = {
            "entries": [[code, idx] for code, idx in entries],
            "pairs": [[p.input_code, list(p.targets)] for p in self.pairs],
            "terminals": self.coder.snapshot(),
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def sha256(self):
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        vocab = cls()
        vocab.entries = {int(code): int(idx) for code, idx in doc["entries"]}
        vocab.pairs = [
            TrainingPair(int(code), tuple(int(t) for t in targets))
            for code, targets in doc["pairs"]
        ]
        vocab.coder = TerminalCoder.restore(doc.get("terminals", []))
        return vocab

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


_ID_CODE = NodeKind.ID.value
_DECL_CODE = NodeKind.Decl.value
_TYPEDECL_CODE = NodeKind.TypeDecl.value
_IDENTIFIERTYPE_CODE = NodeKind.IdentifierType.value


def build_vocabulary(roots, coder=None):
    """Corpus of trees -> Vocabulary.

    Variable-position ID uses drive everything; call callees and declared-
    but-never-used names contribute nothing.  Entry order is first-use
    order, each new identifier adding its ID/Decl/TypeDecl composites (the
    shared IdentifierType entry joins after the first identifier).
    """
    vocab = Vocabulary(coder=coder or TerminalCoder())

    def add_entry(code):
        if code not in vocab.entries:
            vocab.entries[code] = len(vocab.entries)

    type_composite = None
    for root in roots:
        tree = root if isinstance(root, ScopeTree) else build_scopes(root)
        for use in sorted(tree.uses, key=lambda u: u.coord.as_pair()):
            terminal = vocab.coder.encode_terminal(use.name, "identifier")
            id_code = compose(_ID_CODE, terminal)
            decl_code = compose(_DECL_CODE, terminal)
            typedecl_code = compose(_TYPEDECL_CODE, terminal)
            if type_composite is None:
                type_code = vocab.coder.encode_terminal("type", "datatype")
                type_composite = compose(_IDENTIFIERTYPE_CODE, type_code)
            add_entry(id_code)
            add_entry(decl_code)
            add_entry(typedecl_code)
            add_entry(type_composite)
            vocab.pairs.append(
                TrainingPair(id_code, (decl_code, typedecl_code, type_composite))
            )
    return vocab
