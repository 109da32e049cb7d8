"""Declaration synthesis and insertion.

Insertion goes through the JSON form on purpose: the tree is serialized,
the synthesized declaration objects are spliced into position 0 of the
target function's body, and the result is deserialized back.  That keeps
the repair expressible as a pure transformation of the interchange format,
so any tool speaking the same JSON dialect could replay it.
"""

from __future__ import annotations

import json

from .astnodes import NodeKind, deserialize_ast, new_node, serialize_ast
from .errors import ConflictError
from .scopes import build_scopes
from .typebind import CType


def synthesize_decl(name, ctype, array_size=None):
    """A declaration node for `name`, unqualified, with no initializer.

    Scalar chains are Decl -> TypeDecl -> IdentifierType; an array size
    inserts an ArrayDecl with a plain integer dimension above the TypeDecl.
    """
    if isinstance(ctype, CType):
        words = ctype.words()
    else:
        words = str(ctype).split()
    type_node = new_node(
        NodeKind.TypeDecl,
        declname=name,
        quals=[],
        type=new_node(NodeKind.IdentifierType, names=words),
    )
    if array_size is not None:
        if array_size < 1:
            raise ValueError(f"array size must be positive, got {array_size}")
        type_node = new_node(
            NodeKind.ArrayDecl,
            dim_quals=[],
            type=type_node,
            dim=new_node(NodeKind.Constant, type="int", value=str(array_size)),
        )
    return new_node(
        NodeKind.Decl,
        name=name,
        quals=[],
        storage=[],
        funcspec=[],
        type=type_node,
    )


def _find_function_body(doc, function):
    for item in doc.get("ext", []):
        if item.get("_nodetype") != "FuncDef":
            continue
        decl = item.get("decl") or {}
        if decl.get("name") == function:
            return item.get("body")
    return None


def insert_declarations(root, function, decls):
    """-> a new tree with `decls` at the top of `function`'s body.

    `decls` keep their given order (evidence order), ahead of everything
    the body already contains.  Raises ConflictError when a name is already
    declared anywhere in the target function, and ValueError when the
    function does not exist.
    """
    scopes = build_scopes(root)
    declared = scopes.declared_set()
    for decl in decls:
        name = decl.attrs["name"]
        if (function, name) in declared:
            raise ConflictError(name, function)

    doc = json.loads(serialize_ast(root))
    body = _find_function_body(doc, function)
    if body is None:
        raise ValueError(f"no function named '{function}' in the translation unit")
    items = body.get("block_items") or []
    spliced = [json.loads(serialize_ast(d)) for d in decls]
    body["block_items"] = spliced + items
    return deserialize_ast(json.dumps(doc))
