"""declfix: find undeclared variables in C programs and declare them.

The package parses a practical C subset, walks scopes to flag identifiers
used without a declaration, infers each one's type from how it is used,
splices the missing declarations in, and emits compilable source.  A
from-scratch LSTM can replace the scope oracle as the detector once
trained on a corpus.
"""

from .astnodes import (
    Coord,
    NodeKind,
    build_parent_map,
    deserialize_ast,
    equal_ignoring_coords,
    new_node,
    preorder,
    serialize_ast,
)
from .cparser import parse_source, tokenize
from .emitter import emit
from .encoding import (
    TerminalCoder,
    Vocabulary,
    build_vocabulary,
    compose,
    decompose,
    one_hot,
)
from .errors import DeclfixError
from .evaluate import EvalReport, TruthAnnotation, load_truth, run_eval
from .generator import generate_buggy_program, generate_program, generate_tree
from .pipeline import (
    FixOptions,
    FixReport,
    NEURAL,
    ORACLE,
    fix_source,
    load_model,
    run_fix,
    run_train,
)
from .scopes import build_scopes, declared_set, find_undeclared
from .transform import insert_declarations, synthesize_decl
from .typebind import BindOptions, infer_type

__version__ = "0.1.0"

__all__ = [
    "BindOptions",
    "Coord",
    "DeclfixError",
    "EvalReport",
    "FixOptions",
    "FixReport",
    "NEURAL",
    "NodeKind",
    "ORACLE",
    "TerminalCoder",
    "TruthAnnotation",
    "Vocabulary",
    "build_parent_map",
    "build_scopes",
    "build_vocabulary",
    "compose",
    "declared_set",
    "decompose",
    "deserialize_ast",
    "emit",
    "equal_ignoring_coords",
    "find_undeclared",
    "fix_source",
    "generate_buggy_program",
    "generate_program",
    "generate_tree",
    "infer_type",
    "insert_declarations",
    "load_model",
    "load_truth",
    "new_node",
    "one_hot",
    "parse_source",
    "preorder",
    "run_eval",
    "run_fix",
    "run_train",
    "serialize_ast",
    "synthesize_decl",
    "tokenize",
    "__version__",
]
