"""C source generation from the AST.

The output is normalized rather than faithful to the input layout:

* preprocessor preamble lines first, verbatim;
* 4-space indentation, braces on their own lines;
* one declarator per declaration statement (the parser already splits
  multi-declarator statements, so trees arrive in this form);
* operands of a binary operator that are themselves binary operations are
  parenthesized, which makes evaluation order visible at a glance.

``emit`` and ``parse`` are adjoint on this normalized subset: parsing the
emitted text reproduces the tree (coordinates aside), and emitting again
reproduces the text.
"""

from __future__ import annotations

from .astnodes import NodeKind
from .errors import EmitError

_INDENT = "    "

# operand kinds that never need protective parentheses
_ATOMIC = (NodeKind.ID, NodeKind.Constant, NodeKind.ArrayRef, NodeKind.FuncCall)


def _expr(node):
    kind = node.kind
    if kind is NodeKind.ID:
        return node.attrs["name"]
    if kind is NodeKind.Constant:
        return node.attrs["value"]
    if kind is NodeKind.ArrayRef:
        return f"{_expr(node.child('name'))}[{_expr(node.child('subscript'))}]"
    if kind is NodeKind.FuncCall:
        args = node.child("args")
        arg_text = ", ".join(_expr(e) for e in args.child_list("exprs")) if args else ""
        return f"{_expr(node.child('name'))}({arg_text})"
    if kind is NodeKind.UnaryOp:
        op = node.attrs["op"]
        operand = node.child("expr")
        if op in ("p++", "p--"):
            return f"{_expr(operand)}{op[1:]}"
        inner = _expr(operand)
        if operand.kind not in _ATOMIC:
            inner = f"({inner})"
        return f"{op}{inner}"
    if kind is NodeKind.BinaryOp:
        left = node.child("left")
        right = node.child("right")
        lt = _expr(left)
        rt = _expr(right)
        if left.kind in (NodeKind.BinaryOp, NodeKind.Assignment):
            lt = f"({lt})"
        if right.kind in (NodeKind.BinaryOp, NodeKind.Assignment):
            rt = f"({rt})"
        return f"{lt} {node.attrs['op']} {rt}"
    if kind is NodeKind.Assignment:
        return f"{_expr(node.child('lvalue'))} {node.attrs['op']} {_expr(node.child('rvalue'))}"
    if kind is NodeKind.ExprList:
        return ", ".join(_expr(e) for e in node.child_list("exprs"))
    if kind is NodeKind.InitList:
        return "{" + ", ".join(_expr(e) for e in node.child_list("exprs")) + "}"
    raise EmitError(f"cannot emit expression node {kind.name}")


def _type_chain(decl):
    """Walk Decl.type through ArrayDecls to the TypeDecl; -> (dims, typedecl)."""
    dims = []
    node = decl.child("type")
    while node.kind is NodeKind.ArrayDecl:
        dims.append(node.child("dim"))
        node = node.child("type")
    if node.kind is not NodeKind.TypeDecl:
        raise EmitError(f"unsupported declarator chain ending in {node.kind.name}")
    return dims, node


def _decl_text(decl, with_type=True):
    dims, typedecl = _type_chain(decl)
    ident = typedecl.child("type")
    if ident.kind is not NodeKind.IdentifierType:
        raise EmitError(f"unsupported base type {ident.kind.name}")
    name = decl.attrs["name"]
    declarator = name + "".join(
        f"[{_expr(d)}]" if d is not None else "[]" for d in dims
    )
    init = decl.child("init")
    if init is not None:
        declarator += f" = {_expr(init)}"
    if not with_type:
        return declarator
    words = list(decl.attrs.get("quals") or []) + list(ident.attrs["names"])
    return " ".join(words) + " " + declarator


def _for_init_text(init):
    if init is None:
        return ""
    if init.kind is NodeKind.DeclList:
        decls = init.child_list("decls")
        parts = [_decl_text(decls[0])]
        parts.extend(_decl_text(d, with_type=False) for d in decls[1:])
        return ", ".join(parts)
    return _expr(init)


class _Writer:
    def __init__(self):
        self.lines = []

    def line(self, level, text):
        self.lines.append(_INDENT * level + text if text else "")

    def statement(self, node, level):
        kind = node.kind
        if kind is NodeKind.Compound:
            self.compound(node, level)
        elif kind is NodeKind.Decl:
            self.line(level, _decl_text(node) + ";")
        elif kind is NodeKind.For:
            cond = node.child("cond")
            nxt = node.child("next")
            head = "for ({}; {}; {})".format(
                _for_init_text(node.child("init")),
                _expr(cond) if cond is not None else "",
                _expr(nxt) if nxt is not None else "",
            )
            self.line(level, head)
            self.body(node.child("stmt"), level)
        elif kind is NodeKind.While:
            self.line(level, f"while ({_expr(node.child('cond'))})")
            self.body(node.child("stmt"), level)
        elif kind is NodeKind.If:
            self.line(level, f"if ({_expr(node.child('cond'))})")
            iftrue = node.child("iftrue")
            if iftrue is not None:
                self.body(iftrue, level)
            else:
                self.line(level + 1, ";")
            iffalse = node.child("iffalse")
            if iffalse is not None:
                self.line(level, "else")
                self.body(iffalse, level)
        elif kind is NodeKind.Return:
            expr = node.child("expr")
            self.line(level, f"return {_expr(expr)};" if expr is not None else "return;")
        elif kind is NodeKind.Break:
            self.line(level, "break;")
        elif kind is NodeKind.EmptyStatement:
            self.line(level, ";")
        else:
            # expression used as a statement
            self.line(level, _expr(node) + ";")

    def body(self, stmt, level):
        """A loop or branch body: braces stay at the parent level, a single
        statement is simply indented one step."""
        if stmt.kind is NodeKind.Compound:
            self.compound(stmt, level)
        else:
            self.statement(stmt, level + 1)

    def compound(self, node, level):
        self.line(level, "{")
        for item in node.child_list("block_items"):
            self.statement(item, level + 1)
        self.line(level, "}")

    def func_def(self, node):
        decl = node.child("decl")
        func_decl = decl.child("type")
        if func_decl.kind is not NodeKind.FuncDecl:
            raise EmitError("FuncDef.decl must wrap a FuncDecl")
        ret = func_decl.child("type").child("type")
        args = func_decl.child("args")
        params = (
            ", ".join(_decl_text(p) for p in args.child_list("params")) if args else ""
        )
        words = list(decl.attrs.get("quals") or []) + list(ret.attrs["names"])
        self.line(0, f"{' '.join(words)} {decl.attrs['name']}({params})")
        self.compound(node.child("body"), 0)


def emit(root):
    """FileAST tree -> normalized C source text."""
    if root.kind is not NodeKind.FileAST:
        raise EmitError(f"emit expects a FileAST root, got {root.kind.name}")
    writer = _Writer()
    for line in root.attrs.get("preamble") or []:
        writer.lines.append(line)
    for item in root.child_list("ext"):
        if item.kind is NodeKind.FuncDef:
            writer.func_def(item)
        elif item.kind is NodeKind.Decl:
            writer.line(0, _decl_text(item) + ";")
        else:
            raise EmitError(f"unsupported top-level node {item.kind.name}")
    return "\n".join(writer.lines) + "\n"
