"""Detect-and-repair driver.

One call runs the whole tool: parse the C source, flag undeclared
variables (scope analysis or the trained network), infer a declaration
for each, splice the declarations in, emit repaired source, and re-check
the result.  Training over a corpus directory lives here too so the CLI
stays thin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .astnodes import NodeKind, build_parent_map, serialize_ast
from .cparser import parse_source
from .emitter import emit
from .encoding import Vocabulary, build_vocabulary, compose, decompose
from .errors import (
    ConflictError,
    CSyntaxError,
    DuplicateDecl,
    EmitError,
    EmptyDataset,
    LexError,
)
from .scopes import GLOBAL_FUNCTION, UndeclaredUse, build_scopes
from .transform import insert_declarations, synthesize_decl
from .typebind import BindOptions, infer_type
from .nnet import modelfile
from .nnet.model import ModelConfig, predict_declaration
from .nnet.training import train, training_key_recall

ORACLE = "oracle"
NEURAL = "neural"

STATUS_CLEAN = "clean"
STATUS_FIXED = "fixed"
STATUS_UNFIXABLE = "unfixable"
STATUS_SYNTAX_ERROR = "syntax-error"

# exit codes depend on status alone, nothing else
STATUS_EXIT = {
    STATUS_CLEAN: 0,
    STATUS_FIXED: 0,
    STATUS_SYNTAX_ERROR: 1,
    STATUS_UNFIXABLE: 2,
}


@dataclass
class FixOptions:
    mode: str = ORACLE
    model_path: str | None = None
    fallback_type: str = "int"
    default_array_size: int = 1000
    best_evidence: bool = False
    emit_json_dir: str | None = None
    repair: bool = True  # detect-only callers switch this off


@dataclass
class Finding:
    """One undeclared variable plus the declaration chosen for it."""

    name: str
    function: str
    uses: list
    case_id: int | None = None
    type_text: str | None = None
    array_size: int | None = None

    def to_json_dict(self):
        return {
            "name": self.name,
            "function": self.function,
            "uses": [str(c) for c in self.uses],
            "case": self.case_id,
            "type": self.type_text,
            "array_size": self.array_size,
        }


@dataclass
class FixWarning:
    code: str
    name: str
    message: str

    def to_json_dict(self):
        return {"code": self.code, "name": self.name, "message": self.message}


@dataclass
class FixReport:
    file: str
    mode: str
    status: str
    undeclared: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    repaired_source: str | None = None
    error: str | None = None
    function_count: int = 0

    @property
    def exit_code(self):
        return STATUS_EXIT.get(self.status, 2)

    def to_json_dict(self):
        return {
            "file": self.file,
            "mode": self.mode,
            "status": self.status,
            "undeclared": [f.to_json_dict() for f in self.undeclared],
            "warnings": [w.to_json_dict() for w in self.warnings],
            "error": self.error,
        }


def _count_functions(tree):
    return sum(1 for _, node in tree.children if node.kind is NodeKind.FuncDef)


def _in_loop_header(use_node, parents):
    """True when the use sits inside a for-header cond/next or a while cond."""
    node = use_node
    while node is not None:
        parent, label = parents[id(node)]
        if parent is not None:
            if parent.kind is NodeKind.For and label in ("cond", "next"):
                return True
            if parent.kind in (NodeKind.While, NodeKind.DoWhile) and label == "cond":
                return True
        node = parent
    return False


def _use_nodes(scopes, entry):
    group = scopes.variable_groups().get((entry.enclosing_function, entry.name), [])
    return [u.node for u in group]


def load_model(model_path):
    """Read a model file plus its sidecar vocabulary (<path>.vocab.json)."""
    vocab_path = Path(str(model_path) + ".vocab.json")
    vocab = Vocabulary.load(vocab_path)
    model = modelfile.load(model_path, vocab)
    return model, vocab


def _neural_undeclared(scopes, model, vocab):
    """Membership-test detection.

    For every (function, identifier) use group, ask the network which
    declaration the identifier should have; if the predicted declaration
    names a variable with no declaration visible at that point, flag the
    group.  Unseen identifiers are predicted off a zero embedding and
    reported with a warning.
    """
    flagged = []
    warnings = []
    for (function, name), uses in sorted(
        scopes.variable_groups().items(), key=lambda kv: kv[1][0].coord.as_pair()
    ):
        terminal = vocab.identifier_code(name)
        id_code = None if terminal is None else compose(NodeKind.ID.value, terminal)
        pred = predict_declaration(model, vocab, id_code)
        _, decl_terminal = decompose(pred.decl_code)
        predicted = vocab.identifier_of_terminal(decl_terminal)
        if pred.unseen:
            warnings.append(
                FixWarning(
                    "unseen",
                    name,
                    f"'{name}' never appeared in training; prediction used a zero embedding",
                )
            )
        if predicted is not None and scopes.is_declared(function, predicted):
            continue
        flagged.append(
            UndeclaredUse(
                name=name,
                first_use=uses[0].coord,
                enclosing_function=function,
                all_uses=[u.coord for u in uses],
            )
        )
    flagged.sort(key=lambda u: u.first_use.as_pair())
    return flagged, warnings


def _write_ast_json(directory, stem, tag, tree):
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{stem}.{tag}.json").write_text(serialize_ast(tree))


def fix_source(source, filename="<text>", options=None):
    """Run detection (and repair unless options.repair is off) on one unit."""
    options = options or FixOptions()
    stem = Path(filename).stem if filename != "<text>" else "unit"

    try:
        tree = parse_source(source, filename)
    except (LexError, CSyntaxError) as exc:
        return FixReport(filename, options.mode, STATUS_SYNTAX_ERROR, error=str(exc))

    report = FixReport(filename, options.mode, STATUS_CLEAN)
    report.function_count = _count_functions(tree)

    try:
        scopes = build_scopes(tree)
    except DuplicateDecl as exc:
        report.status = STATUS_UNFIXABLE
        report.error = str(exc)
        return report

    if options.mode == NEURAL:
        model, vocab = load_model(options.model_path)
        undeclared, report.warnings = _neural_undeclared(scopes, model, vocab)
    else:
        undeclared = scopes.undeclared()

    for callee in scopes.unresolved_callees():
        report.warnings.append(
            FixWarning(
                "unresolved-callee",
                callee.name,
                f"call to '{callee.name}' has no definition here; "
                "its return type is unknown",
            )
        )

    if options.emit_json_dir:
        _write_ast_json(options.emit_json_dir, stem, "before", tree)

    if not undeclared:
        # untouched input is the output for a clean unit
        report.repaired_source = source
        if options.emit_json_dir:
            _write_ast_json(options.emit_json_dir, stem, "after", tree)
        return report

    parents = build_parent_map(tree)
    bind = BindOptions(
        fallback_type=options.fallback_type,
        default_array_size=options.default_array_size,
        best_evidence=options.best_evidence,
    )

    by_function = {}
    for entry in undeclared:
        evidence = infer_type(tree, scopes, entry, bind, parents)
        finding = Finding(
            name=entry.name,
            function=entry.enclosing_function,
            uses=list(entry.all_uses),
            case_id=evidence.case_id,
            type_text=evidence.ctype.text,
            array_size=evidence.array_size,
        )
        report.undeclared.append(finding)

        use_nodes = _use_nodes(scopes, entry)
        if len(entry.all_uses) == 1:
            report.warnings.append(
                FixWarning(
                    "single-use",
                    entry.name,
                    f"'{entry.name}' is used exactly once; it may be a typo "
                    "rather than a missing declaration",
                )
            )
            if any(_in_loop_header(n, parents) for n in use_nodes):
                report.warnings.append(
                    FixWarning(
                        "loop-risk",
                        entry.name,
                        f"the only use of '{entry.name}' controls a loop; "
                        "declaring it may hide an infinite-loop bug",
                    )
                )
        if evidence.case_id == 0:
            report.warnings.append(
                FixWarning(
                    "fallback",
                    entry.name,
                    f"no binding rule matched '{entry.name}'; "
                    f"defaulted to {evidence.ctype.text}",
                )
            )
        by_function.setdefault(entry.enclosing_function, []).append(
            synthesize_decl(entry.name, evidence.ctype.text, evidence.array_size)
        )

    if not options.repair:
        return report

    if GLOBAL_FUNCTION in by_function:
        # splicing targets function bodies; file-scope uses stay unrepaired
        report.status = STATUS_UNFIXABLE
        report.error = "undeclared identifier at file scope cannot be spliced"
        return report

    repaired = tree
    try:
        for function, decls in by_function.items():
            repaired = insert_declarations(repaired, function, decls)
        text = emit(repaired)
    except (ConflictError, EmitError, ValueError) as exc:
        report.status = STATUS_UNFIXABLE
        report.error = str(exc)
        return report

    report.repaired_source = text
    if options.emit_json_dir:
        _write_ast_json(options.emit_json_dir, stem, "after", repaired)

    # trust nothing: the repair counts only if the output parses clean
    try:
        check = build_scopes(parse_source(text, filename))
        still = check.undeclared()
    except (LexError, CSyntaxError, DuplicateDecl) as exc:
        report.status = STATUS_UNFIXABLE
        report.error = str(exc)
        return report
    if still:
        report.status = STATUS_UNFIXABLE
        report.error = "repair left undeclared identifiers: " + ", ".join(
            sorted({u.name for u in still})
        )
        return report

    report.status = STATUS_FIXED
    return report


def run_fix(path, options=None):
    source = Path(path).read_text()
    return fix_source(source, str(path), options)


@dataclass
class TrainSummary:
    model_path: str
    vocab_path: str
    vocab_size: int
    pair_count: int
    final_loss: float
    train_count: int
    test_count: int
    test_loss: float | None
    recall: float
    loss_history: list


def run_train(corpus_dir, config=None, out_path="model.dfx"):
    """Train the declaration predictor on every .c file under corpus_dir."""
    config = config or ModelConfig()
    paths = sorted(Path(corpus_dir).glob("*.c"))
    if not paths:
        raise EmptyDataset(f"no .c files under {corpus_dir}")
    trees = [parse_source(p.read_text(), str(p)) for p in paths]
    vocab = build_vocabulary(trees)
    result = train(config, vocab)
    vocab_path = str(out_path) + ".vocab.json"
    modelfile.save(result.model, out_path, vocab_path=vocab_path)
    return TrainSummary(
        model_path=str(out_path),
        vocab_path=vocab_path,
        vocab_size=vocab.size,
        pair_count=len(vocab.pairs),
        final_loss=result.loss_history[-1] if result.loss_history else float("nan"),
        train_count=result.train_count,
        test_count=result.test_count,
        test_loss=result.test_loss,
        recall=training_key_recall(result.model, vocab),
        loss_history=list(result.loss_history),
    )
