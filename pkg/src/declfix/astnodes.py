"""AST node model and its JSON form.

Trees are built from a closed inventory of 47 node kinds, the node-type set
of a C99 front end.  Each kind has a fixed schema: scalar attributes plus
named child slots (single or list).  The JSON form mirrors the conventions
of pycparser-style AST dumps: every node object carries ``_nodetype`` first,
the remaining keys (attributes and child edge labels together) follow in
alphabetical order, children are nested under their edge labels, and source
coordinates appear as a ``"file:line:column"`` string only when present.
Serialization is deterministic and round-trips to an identical tree.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .errors import SchemaError


class NodeKind(enum.Enum):
    """The 47 node kinds.  Ordinals are frozen: they double as the integer
    codes of the non-terminal dictionary, so reordering members is a
    breaking change.  The declaration chain (FileAST down to IdentifierType)
    comes first; everything else follows alphabetically."""

    FileAST = 1
    FuncDef = 2
    FuncDecl = 3
    ParamList = 4
    Decl = 5
    DeclList = 6
    ArrayDecl = 7
    TypeDecl = 8
    IdentifierType = 9
    ArrayRef = 10
    Assignment = 11
    BinaryOp = 12
    Break = 13
    Case = 14
    Cast = 15
    Compound = 16
    CompoundLiteral = 17
    Constant = 18
    Continue = 19
    Default = 20
    DoWhile = 21
    EllipsisParam = 22
    EmptyStatement = 23
    Enum = 24
    Enumerator = 25
    EnumeratorList = 26
    ExprList = 27
    For = 28
    FuncCall = 29
    Goto = 30
    ID = 31
    If = 32
    InitList = 33
    Label = 34
    NamedInitializer = 35
    Pragma = 36
    PtrDecl = 37
    Return = 38
    Struct = 39
    StructRef = 40
    Switch = 41
    TernaryOp = 42
    Typedef = 43
    Typename = 44
    UnaryOp = 45
    Union = 46
    While = 47


_KIND_BY_NAME = {k.name: k for k in NodeKind}

# Attribute value shapes.
_STR = "str"
_OPT_STR = "str?"
_STR_LIST = "str[]"

# Child slot arities.
ONE = "one"      # required single child
OPT = "opt"      # single child or None
MANY = "many"    # ordered list, possibly empty


@dataclass(frozen=True)
class Coord:
    """Source position, 1-based."""

    file: str
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"coord out of range: {self.line}:{self.column}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"

    def as_pair(self):
        return (self.line, self.column)

    @classmethod
    def parse(cls, text):
        head, line, col = text.rsplit(":", 2)
        return cls(head, int(line), int(col))


# kind -> (attrs: {name: shape}, children: ((label, arity), ...) in semantic order)
NODE_SCHEMA = {
    NodeKind.FileAST: ({"preamble": _STR_LIST}, (("ext", MANY),)),
    NodeKind.FuncDef: ({}, (("decl", ONE), ("param_decls", MANY), ("body", ONE))),
    NodeKind.FuncDecl: ({}, (("args", OPT), ("type", ONE))),
    NodeKind.ParamList: ({}, (("params", MANY),)),
    NodeKind.Decl: (
        {"name": _OPT_STR, "quals": _STR_LIST, "storage": _STR_LIST, "funcspec": _STR_LIST},
        (("type", ONE), ("init", OPT), ("bitsize", OPT)),
    ),
    NodeKind.DeclList: ({}, (("decls", MANY),)),
    NodeKind.ArrayDecl: ({"dim_quals": _STR_LIST}, (("type", ONE), ("dim", OPT))),
    NodeKind.TypeDecl: ({"declname": _OPT_STR, "quals": _STR_LIST}, (("type", ONE),)),
    NodeKind.IdentifierType: ({"names": _STR_LIST}, ()),
    NodeKind.ArrayRef: ({}, (("name", ONE), ("subscript", ONE))),
    NodeKind.Assignment: ({"op": _STR}, (("lvalue", ONE), ("rvalue", ONE))),
    NodeKind.BinaryOp: ({"op": _STR}, (("left", ONE), ("right", ONE))),
    NodeKind.Break: ({}, ()),
    NodeKind.Case: ({}, (("expr", ONE), ("stmts", MANY))),
    NodeKind.Cast: ({}, (("to_type", ONE), ("expr", ONE))),
    NodeKind.Compound: ({}, (("block_items", MANY),)),
    NodeKind.CompoundLiteral: ({}, (("type", ONE), ("init", ONE))),
    NodeKind.Constant: ({"type": _STR, "value": _STR}, ()),
    NodeKind.Continue: ({}, ()),
    NodeKind.Default: ({}, (("stmts", MANY),)),
    NodeKind.DoWhile: ({}, (("cond", ONE), ("stmt", ONE))),
    NodeKind.EllipsisParam: ({}, ()),
    NodeKind.EmptyStatement: ({}, ()),
    NodeKind.Enum: ({"name": _OPT_STR}, (("values", OPT),)),
    NodeKind.Enumerator: ({"name": _STR}, (("value", OPT),)),
    NodeKind.EnumeratorList: ({}, (("enumerators", MANY),)),
    NodeKind.ExprList: ({}, (("exprs", MANY),)),
    NodeKind.For: ({}, (("init", OPT), ("cond", OPT), ("next", OPT), ("stmt", ONE))),
    NodeKind.FuncCall: ({}, (("name", ONE), ("args", OPT))),
    NodeKind.Goto: ({"name": _STR}, ()),
    NodeKind.ID: ({"name": _STR}, ()),
    NodeKind.If: ({}, (("cond", ONE), ("iftrue", OPT), ("iffalse", OPT))),
    NodeKind.InitList: ({}, (("exprs", MANY),)),
    NodeKind.Label: ({"name": _STR}, (("stmt", ONE),)),
    NodeKind.NamedInitializer: ({}, (("name", MANY), ("expr", ONE))),
    NodeKind.Pragma: ({"string": _STR}, ()),
    NodeKind.PtrDecl: ({"quals": _STR_LIST}, (("type", ONE),)),
    NodeKind.Return: ({}, (("expr", OPT),)),
    NodeKind.Struct: ({"name": _OPT_STR}, (("decls", MANY),)),
    NodeKind.StructRef: ({"type": _STR}, (("name", ONE), ("field", ONE))),
    NodeKind.Switch: ({}, (("cond", ONE), ("stmt", ONE))),
    NodeKind.TernaryOp: ({}, (("cond", ONE), ("iftrue", ONE), ("iffalse", ONE))),
    NodeKind.Typedef: ({"name": _STR, "quals": _STR_LIST, "storage": _STR_LIST}, (("type", ONE),)),
    NodeKind.Typename: ({"name": _OPT_STR, "quals": _STR_LIST}, (("type", ONE),)),
    NodeKind.UnaryOp: ({"op": _STR}, (("expr", ONE),)),
    NodeKind.Union: ({"name": _OPT_STR}, (("decls", MANY),)),
    NodeKind.While: ({}, (("cond", ONE), ("stmt", ONE))),
}

assert len(NodeKind) == 47
assert set(NODE_SCHEMA) == set(NodeKind)
assert NodeKind.IdentifierType.value == 9


@dataclass(eq=False)
class AstNode:
    kind: NodeKind
    attrs: dict = field(default_factory=dict)
    children: list = field(default_factory=list)  # ordered (edge-label, AstNode)
    coord: Coord | None = None

    def child(self, label):
        """The single child under label, or None."""
        for lab, node in self.children:
            if lab == label:
                return node
        return None

    def child_list(self, label):
        return [node for lab, node in self.children if lab == label]

    def __eq__(self, other):
        if not isinstance(other, AstNode):
            return NotImplemented
        return (
            self.kind is other.kind
            and self.attrs == other.attrs
            and self.coord == other.coord
            and len(self.children) == len(other.children)
            and all(
                la == lb and ca == cb
                for (la, ca), (lb, cb) in zip(self.children, other.children)
            )
        )

    def __repr__(self):
        pos = f" @{self.coord}" if self.coord else ""
        return f"<{self.kind.name} {self.attrs}{pos} [{len(self.children)} children]>"


def new_node(kind, coord=None, **slots):
    """Schema-checked constructor.

    Keyword arguments fill attributes and child slots by name.  Unfilled
    attributes default to None or [], unfilled child slots to None or [].
    """
    attrs_schema, child_schema = NODE_SCHEMA[kind]
    attrs = {}
    for name, shape in attrs_schema.items():
        if name in slots:
            attrs[name] = slots.pop(name)
        else:
            attrs[name] = [] if shape == _STR_LIST else None
    children = []
    for label, arity in child_schema:
        value = slots.pop(label, None)
        if arity == MANY:
            for item in value or []:
                children.append((label, item))
        elif value is not None:
            children.append((label, value))
        elif arity == ONE:
            raise SchemaError(f"{kind.name}: missing required child '{label}'")
    if slots:
        raise SchemaError(f"{kind.name}: unknown slots {sorted(slots)}")
    return AstNode(kind, attrs, children, coord)


def preorder(root):
    """Depth-first traversal, parents before children, in stored order."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(child for _, child in reversed(node.children))


def build_parent_map(root):
    """id(node) -> (parent, edge-label).  The root maps to (None, None)."""
    parents = {id(root): (None, None)}
    for node in preorder(root):
        for label, child in node.children:
            parents[id(child)] = (node, label)
    return parents


def equal_ignoring_coords(a, b):
    if a.kind is not b.kind or a.attrs != b.attrs or len(a.children) != len(b.children):
        return False
    return all(
        la == lb and equal_ignoring_coords(ca, cb)
        for (la, ca), (lb, cb) in zip(a.children, b.children)
    )


def _check_attr(kind, name, shape, value):
    if shape == _STR:
        ok = isinstance(value, str)
    elif shape == _OPT_STR:
        ok = value is None or isinstance(value, str)
    else:  # _STR_LIST
        ok = isinstance(value, list) and all(isinstance(v, str) for v in value)
    if not ok:
        raise ValueError(f"{kind.name}.{name}: bad attribute value {value!r}")


def _node_to_obj(node):
    attrs_schema, child_schema = NODE_SCHEMA[node.kind]
    entries = {"_nodetype": node.kind.name}
    body = {}
    for name, shape in attrs_schema.items():
        value = node.attrs.get(name, [] if shape == _STR_LIST else None)
        _check_attr(node.kind, name, shape, value)
        body[name] = value
    if node.coord is not None:
        body["coord"] = str(node.coord)
    arity_of = dict(child_schema)
    grouped = {}
    for label, child in node.children:
        if label not in arity_of:
            raise SchemaError(f"{node.kind.name}: unknown child label '{label}'")
        grouped.setdefault(label, []).append(child)
    for label, arity in child_schema:
        items = grouped.get(label, [])
        if arity == MANY:
            body[label] = [_node_to_obj(c) for c in items]
        elif items:
            if len(items) > 1:
                raise SchemaError(f"{node.kind.name}: slot '{label}' is single-valued")
            body[label] = _node_to_obj(items[0])
        else:
            if arity == ONE:
                raise SchemaError(f"{node.kind.name}: missing required child '{label}'")
            body[label] = None
    for key in sorted(body):
        entries[key] = body[key]
    return entries


def serialize_ast(root):
    """Tree -> deterministic JSON text (4-space indent)."""
    return json.dumps(_node_to_obj(root), indent=4)


def _obj_to_node(obj):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a node object, got {type(obj).__name__}")
    if "_nodetype" not in obj:
        raise SchemaError("node object has no _nodetype")
    type_name = obj["_nodetype"]
    kind = _KIND_BY_NAME.get(type_name)
    if kind is None:
        raise SchemaError(f"unknown _nodetype {type_name!r}")
    attrs_schema, child_schema = NODE_SCHEMA[kind]
    arity_of = dict(child_schema)
    allowed = set(attrs_schema) | set(arity_of) | {"_nodetype", "coord"}
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"{type_name}: unknown keys {sorted(unknown)}")
    attrs = {}
    for name, shape in attrs_schema.items():
        if name not in obj:
            raise SchemaError(f"{type_name}: missing attribute '{name}'")
        value = obj[name]
        _check_attr(kind, name, shape, value)
        attrs[name] = list(value) if isinstance(value, list) else value
    coord = None
    if obj.get("coord") is not None:
        raw = obj["coord"]
        if not isinstance(raw, str):
            raise ValueError(f"{type_name}.coord: expected string, got {raw!r}")
        try:
            coord = Coord.parse(raw)
        except Exception as exc:
            raise ValueError(f"{type_name}.coord: malformed {raw!r}") from exc
    children = []
    for label, arity in child_schema:
        if label not in obj:
            raise SchemaError(f"{type_name}: missing child slot '{label}'")
        value = obj[label]
        if arity == MANY:
            if not isinstance(value, list):
                raise ValueError(f"{type_name}.{label}: expected a list")
            for item in value:
                children.append((label, _obj_to_node(item)))
        elif value is None:
            if arity == ONE:
                raise SchemaError(f"{type_name}: required child '{label}' is null")
        else:
            children.append((label, _obj_to_node(value)))
    return AstNode(kind, attrs, children, coord)


def deserialize_ast(text):
    """JSON text -> tree.  Strict: unknown kinds and keys are rejected."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return _obj_to_node(obj)
