"""Regenerate docs/ast-goldens: one minimal serialized example per node kind.

The goldens freeze the JSON interchange format.  Tests compare fresh
serializations against these files, so regenerating them is a deliberate
format change, not routine maintenance.

Run from the repository root:

    python3 tools/gen_ast_goldens.py
"""

from __future__ import annotations

import json
from pathlib import Path

from declfix.astnodes import NodeKind, new_node, serialize_ast

OUT_DIR = Path(__file__).resolve().parent.parent / "docs" / "ast-goldens"


def _id(name="x"):
    return new_node(NodeKind.ID, name=name)


def _const(value="1", ctype="int"):
    return new_node(NodeKind.Constant, type=ctype, value=value)


def _itype(words=("int",)):
    return new_node(NodeKind.IdentifierType, names=list(words))


def _typedecl(name="x"):
    return new_node(NodeKind.TypeDecl, declname=name, quals=[], type=_itype())


def _decl(name="x", type_node=None):
    return new_node(
        NodeKind.Decl,
        name=name,
        quals=[],
        storage=[],
        funcspec=[],
        type=type_node or _typedecl(name),
    )


def _compound(items=()):
    return new_node(NodeKind.Compound, block_items=list(items))


def _arraydecl():
    return new_node(NodeKind.ArrayDecl, dim_quals=[], type=_typedecl("a"), dim=_const("4"))


def _funcdecl():
    return new_node(NodeKind.FuncDecl, args=None, type=_typedecl("main"))


def _func_def():
    return new_node(
        NodeKind.FuncDef,
        decl=_decl("main", _funcdecl()),
        param_decls=[],
        body=_compound([new_node(NodeKind.Return, expr=_const("0"))]),
    )


EXAMPLES = {
    NodeKind.FileAST: lambda: new_node(
        NodeKind.FileAST, preamble=["#include <stdio.h>"], ext=[_func_def()]
    ),
    NodeKind.FuncDef: _func_def,
    NodeKind.FuncDecl: _funcdecl,
    NodeKind.ParamList: lambda: new_node(NodeKind.ParamList, params=[_decl("n")]),
    NodeKind.Decl: _decl,
    NodeKind.DeclList: lambda: new_node(NodeKind.DeclList, decls=[_decl("i")]),
    NodeKind.ArrayDecl: _arraydecl,
    NodeKind.TypeDecl: _typedecl,
    NodeKind.IdentifierType: _itype,
    NodeKind.ArrayRef: lambda: new_node(NodeKind.ArrayRef, name=_id("a"), subscript=_id("i")),
    NodeKind.Assignment: lambda: new_node(
        NodeKind.Assignment, op="=", lvalue=_id(), rvalue=_const()
    ),
    NodeKind.BinaryOp: lambda: new_node(NodeKind.BinaryOp, op="+", left=_id(), right=_const()),
    NodeKind.Break: lambda: new_node(NodeKind.Break),
    NodeKind.Case: lambda: new_node(
        NodeKind.Case, expr=_const(), stmts=[new_node(NodeKind.Break)]
    ),
    NodeKind.Cast: lambda: new_node(
        NodeKind.Cast,
        to_type=new_node(NodeKind.Typename, name=None, quals=[], type=_typedecl(None)),
        expr=_id(),
    ),
    NodeKind.Compound: lambda: _compound([new_node(NodeKind.EmptyStatement)]),
    NodeKind.CompoundLiteral: lambda: new_node(
        NodeKind.CompoundLiteral,
        type=new_node(NodeKind.Typename, name=None, quals=[], type=_typedecl(None)),
        init=new_node(NodeKind.InitList, exprs=[_const()]),
    ),
    NodeKind.Constant: _const,
    NodeKind.Continue: lambda: new_node(NodeKind.Continue),
    NodeKind.Default: lambda: new_node(NodeKind.Default, stmts=[new_node(NodeKind.Break)]),
    NodeKind.DoWhile: lambda: new_node(NodeKind.DoWhile, cond=_id(), stmt=_compound()),
    NodeKind.EllipsisParam: lambda: new_node(NodeKind.EllipsisParam),
    NodeKind.EmptyStatement: lambda: new_node(NodeKind.EmptyStatement),
    NodeKind.Enum: lambda: new_node(
        NodeKind.Enum,
        name="color",
        values=new_node(
            NodeKind.EnumeratorList,
            enumerators=[new_node(NodeKind.Enumerator, name="RED", value=None)],
        ),
    ),
    NodeKind.Enumerator: lambda: new_node(NodeKind.Enumerator, name="RED", value=_const("0")),
    NodeKind.EnumeratorList: lambda: new_node(
        NodeKind.EnumeratorList,
        enumerators=[new_node(NodeKind.Enumerator, name="RED", value=None)],
    ),
    NodeKind.ExprList: lambda: new_node(NodeKind.ExprList, exprs=[_id(), _const()]),
    NodeKind.For: lambda: new_node(
        NodeKind.For,
        init=None,
        cond=new_node(NodeKind.BinaryOp, op="<", left=_id("i"), right=_const("10")),
        next=new_node(NodeKind.UnaryOp, op="p++", expr=_id("i")),
        stmt=_compound(),
    ),
    NodeKind.FuncCall: lambda: new_node(
        NodeKind.FuncCall, name=_id("printf"), args=new_node(NodeKind.ExprList, exprs=[_id()])
    ),
    NodeKind.Goto: lambda: new_node(NodeKind.Goto, name="done"),
    NodeKind.ID: _id,
    NodeKind.If: lambda: new_node(NodeKind.If, cond=_id(), iftrue=_compound(), iffalse=None),
    NodeKind.InitList: lambda: new_node(NodeKind.InitList, exprs=[_const(), _const("2")]),
    NodeKind.Label: lambda: new_node(
        NodeKind.Label, name="done", stmt=new_node(NodeKind.EmptyStatement)
    ),
    NodeKind.NamedInitializer: lambda: new_node(
        NodeKind.NamedInitializer, name=[_id("field")], expr=_const()
    ),
    NodeKind.Pragma: lambda: new_node(NodeKind.Pragma, string="once"),
    NodeKind.PtrDecl: lambda: new_node(NodeKind.PtrDecl, quals=[], type=_typedecl("p")),
    NodeKind.Return: lambda: new_node(NodeKind.Return, expr=_const("0")),
    NodeKind.Struct: lambda: new_node(NodeKind.Struct, name="point", decls=[_decl("x")]),
    NodeKind.StructRef: lambda: new_node(
        NodeKind.StructRef, type=".", name=_id("p"), field=_id("x")
    ),
    NodeKind.Switch: lambda: new_node(NodeKind.Switch, cond=_id(), stmt=_compound()),
    NodeKind.TernaryOp: lambda: new_node(
        NodeKind.TernaryOp, cond=_id(), iftrue=_const(), iffalse=_const("2")
    ),
    NodeKind.Typedef: lambda: new_node(
        NodeKind.Typedef, name="len_t", quals=[], storage=["typedef"], type=_typedecl("len_t")
    ),
    NodeKind.Typename: lambda: new_node(
        NodeKind.Typename, name=None, quals=[], type=_typedecl(None)
    ),
    NodeKind.UnaryOp: lambda: new_node(NodeKind.UnaryOp, op="-", expr=_id()),
    NodeKind.Union: lambda: new_node(NodeKind.Union, name="value", decls=[_decl("x")]),
    NodeKind.While: lambda: new_node(NodeKind.While, cond=_id(), stmt=_compound()),
}


def main():
    assert set(EXAMPLES) == set(NodeKind)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for kind in NodeKind:
        node = EXAMPLES[kind]()
        obj = json.loads(serialize_ast(node))
        path = OUT_DIR / f"{kind.name}.json"
        path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(NodeKind)} goldens to {OUT_DIR}")


if __name__ == "__main__":
    main()
