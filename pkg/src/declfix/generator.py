"""Random program generator for round-trip and detection tests.

Programs are grown as trees inside the supported C subset, so emitting and
re-parsing one must reproduce the tree exactly; that adjunction is what
the round-trip tests exercise.  Every identifier is declared before use
and names are unique program-wide, which keeps the buggy variant simple:
delete one used local declaration and the deleted name is precisely the
set of undeclared names.

Determinism: everything is driven by one random.Random(seed), so a seed
identifies a program.
"""

from __future__ import annotations

import random

from .astnodes import NodeKind, new_node
from .emitter import emit
from .scopes import _decl_type_info, build_scopes

_TYPES = ("int", "int", "int", "double", "float", "char")
_NAME_WORDS = (
    "a b c d e g h i j k m n p q r s t u v w x y z acc count idx limit pos"
    " step sum tmp total val lo hi left right width depth".split()
)
_REL_OPS = ("<", ">", "<=", ">=", "==", "!=")
_ARITH_OPS = ("+", "-", "*", "/", "%")
_MAX_DEPTH = 3


def _constant(rng, ctype):
    if ctype in ("double", "float"):
        value = f"{rng.randint(0, 99)}.{rng.randint(0, 9)}"
        if ctype == "float":
            value += "f"
        return new_node(NodeKind.Constant, type=ctype, value=value)
    if ctype == "char":
        return new_node(NodeKind.Constant, type="char", value=f"'{rng.choice('abcxyz')}'")
    return new_node(NodeKind.Constant, type="int", value=str(rng.randint(0, 99)))


class _Vars:
    """Names visible at the current point, with a spawn/pop block stack."""

    def __init__(self):
        self.stack = [[]]

    def push(self):
        self.stack.append([])

    def pop(self):
        self.stack.pop()

    def add(self, name, ctype, kind, size=None):
        self.stack[-1].append((name, ctype, kind, size))

    def scalars(self):
        return [v for frame in self.stack for v in frame if v[2] == "scalar"]

    def arrays(self):
        return [v for frame in self.stack for v in frame if v[2] == "array"]


class _Builder:
    def __init__(self, rng, budget):
        self.rng = rng
        self.budget = budget
        self.name_counter = 0
        self.helpers = []  # (name, return type, param types)

    def fresh_name(self):
        i = self.name_counter
        self.name_counter += 1
        word = _NAME_WORDS[i % len(_NAME_WORDS)]
        return word if i < len(_NAME_WORDS) else f"{word}{i // len(_NAME_WORDS)}"

    def spend(self, n=1):
        if self.budget < n:
            return False
        self.budget -= n
        return True

    # -- expressions -----------------------------------------------------

    def expr(self, vars_, depth=0):
        rng = self.rng
        roll = rng.random()
        if depth >= _MAX_DEPTH or roll < 0.35:
            return self.leaf(vars_)
        if roll < 0.8 or not self.helpers:
            op = rng.choice(_ARITH_OPS)
            return new_node(
                NodeKind.BinaryOp, op=op,
                left=self.expr(vars_, depth + 1),
                right=self.expr(vars_, depth + 1),
            )
        name, _, params = rng.choice(self.helpers)
        args = [self.leaf(vars_) for _ in params]
        arg_node = None
        if args:
            arg_node = new_node(NodeKind.ExprList, exprs=args)
        return new_node(
            NodeKind.FuncCall,
            name=new_node(NodeKind.ID, name=name),
            args=arg_node,
        )

    def leaf(self, vars_):
        rng = self.rng
        scalars = vars_.scalars()
        arrays = vars_.arrays()
        roll = rng.random()
        if scalars and roll < 0.55:
            return new_node(NodeKind.ID, name=rng.choice(scalars)[0])
        if arrays and roll < 0.7:
            arr = rng.choice(arrays)
            sub = _constant(rng, "int") if not scalars or rng.random() < 0.5 else \
                new_node(NodeKind.ID, name=rng.choice(scalars)[0])
            return new_node(
                NodeKind.ArrayRef,
                name=new_node(NodeKind.ID, name=arr[0]),
                subscript=sub,
            )
        return _constant(rng, rng.choice(_TYPES))

    def condition(self, vars_):
        return new_node(
            NodeKind.BinaryOp, op=self.rng.choice(_REL_OPS),
            left=self.leaf(vars_), right=self.leaf(vars_),
        )

    def target(self, vars_):
        """An assignable place: a scalar or an element of an array."""
        rng = self.rng
        arrays = vars_.arrays()
        scalars = vars_.scalars()
        if arrays and (not scalars or rng.random() < 0.3):
            arr = rng.choice(arrays)
            sub = new_node(NodeKind.ID, name=rng.choice(scalars)[0]) if scalars \
                and rng.random() < 0.5 else _constant(rng, "int")
            return new_node(
                NodeKind.ArrayRef,
                name=new_node(NodeKind.ID, name=arr[0]),
                subscript=sub,
            )
        return new_node(NodeKind.ID, name=rng.choice(scalars)[0])

    # -- statements --------------------------------------------------------

    def declaration(self, vars_):
        rng = self.rng
        name = self.fresh_name()
        ctype = rng.choice(_TYPES)
        if rng.random() < 0.2:
            size = rng.randint(2, 50)
            vars_.add(name, ctype, "array", size)
            type_node = new_node(
                NodeKind.ArrayDecl, dim_quals=[],
                dim=new_node(NodeKind.Constant, type="int", value=str(size)),
                type=new_node(
                    NodeKind.TypeDecl, declname=name, quals=[],
                    type=new_node(NodeKind.IdentifierType, names=[ctype]),
                ),
            )
            init = None
        else:
            vars_.add(name, ctype, "scalar")
            type_node = new_node(
                NodeKind.TypeDecl, declname=name, quals=[],
                type=new_node(NodeKind.IdentifierType, names=[ctype]),
            )
            init = _constant(rng, ctype) if rng.random() < 0.6 else None
        return new_node(
            NodeKind.Decl, name=name, quals=[], storage=[], funcspec=[],
            type=type_node, init=init,
        )

    def assignment(self, vars_):
        op = "=" if self.rng.random() < 0.75 else self.rng.choice(("+=", "-=", "*="))
        return new_node(
            NodeKind.Assignment, op=op,
            lvalue=self.target(vars_), rvalue=self.expr(vars_),
        )

    def statement(self, vars_, depth):
        rng = self.rng
        scalars = vars_.scalars()
        roll = rng.random()
        if roll < 0.40 and scalars:
            return self.assignment(vars_)
        if roll < 0.50 and scalars:
            return new_node(
                NodeKind.UnaryOp, op=rng.choice(("p++", "p--")),
                expr=new_node(NodeKind.ID, name=rng.choice(scalars)[0]),
            )
        if roll < 0.62 and depth < 2:
            iffalse = None
            if rng.random() < 0.3:
                iffalse = self.block(vars_, depth + 1)
            return new_node(
                NodeKind.If, cond=self.condition(vars_),
                iftrue=self.block(vars_, depth + 1), iffalse=iffalse,
            )
        if roll < 0.74 and depth < 2 and scalars:
            return self.for_loop(vars_, depth)
        if roll < 0.80 and depth < 2:
            return new_node(
                NodeKind.While, cond=self.condition(vars_),
                stmt=self.block(vars_, depth + 1),
            )
        if roll < 0.9 and scalars:
            fmt = rng.choice(('"%d\\n"', '"%f\\n"', '"value %d\\n"'))
            args = [new_node(NodeKind.Constant, type="string", value=fmt)]
            args.append(new_node(NodeKind.ID, name=rng.choice(scalars)[0]))
            return new_node(
                NodeKind.FuncCall,
                name=new_node(NodeKind.ID, name="printf"),
                args=new_node(NodeKind.ExprList, exprs=args),
            )
        if scalars:
            return self.assignment(vars_)
        return new_node(NodeKind.EmptyStatement)

    def for_loop(self, vars_, depth):
        rng = self.rng
        limit = _constant(rng, "int")
        if rng.random() < 0.4:
            # counter declared in the loop head, scoped to the loop
            counter = self.fresh_name()
            vars_.push()
            vars_.add(counter, "int", "scalar")
            init = new_node(
                NodeKind.DeclList,
                decls=[new_node(
                    NodeKind.Decl, name=counter, quals=[], storage=[], funcspec=[],
                    type=new_node(
                        NodeKind.TypeDecl, declname=counter, quals=[],
                        type=new_node(NodeKind.IdentifierType, names=["int"]),
                    ),
                    init=new_node(NodeKind.Constant, type="int", value="0"),
                )],
            )
        else:
            counter = rng.choice([v[0] for v in vars_.scalars()])
            vars_.push()
            init = new_node(
                NodeKind.Assignment, op="=",
                lvalue=new_node(NodeKind.ID, name=counter),
                rvalue=new_node(NodeKind.Constant, type="int", value="0"),
            )
        cond = new_node(
            NodeKind.BinaryOp, op="<",
            left=new_node(NodeKind.ID, name=counter), right=limit,
        )
        nxt = new_node(NodeKind.UnaryOp, op="p++", expr=new_node(NodeKind.ID, name=counter))
        body = self.block(vars_, depth + 1)
        vars_.pop()
        return new_node(NodeKind.For, init=init, cond=cond, next=nxt, stmt=body)

    def block(self, vars_, depth):
        items = []
        vars_.push()
        want = self.rng.randint(1, 3)
        for _ in range(want):
            if not self.spend():
                break
            items.append(self.statement(vars_, depth))
        vars_.pop()
        if not items:
            items.append(new_node(NodeKind.EmptyStatement))
        return new_node(NodeKind.Compound, block_items=items)

    # -- functions -----------------------------------------------------------

    def function(self, name, ret_type, params, body_items):
        """Assemble a FuncDef; body_items must be complete (node
        constructors snapshot child lists)."""
        func_decl = new_node(
            NodeKind.FuncDecl, args=params,
            type=new_node(
                NodeKind.TypeDecl, declname=name, quals=[],
                type=new_node(NodeKind.IdentifierType, names=[ret_type]),
            ),
        )
        decl = new_node(
            NodeKind.Decl, name=name, quals=[], storage=[], funcspec=[],
            type=func_decl,
        )
        return new_node(
            NodeKind.FuncDef, decl=decl,
            body=new_node(NodeKind.Compound, block_items=body_items),
        )

    def helper_def(self):
        rng = self.rng
        name = f"calc{len(self.helpers)}"
        ret = rng.choice(("int", "double"))
        vars_ = _Vars()
        param_nodes = []
        param_types = []
        for _ in range(rng.randint(1, 2)):
            ptype = rng.choice(("int", "double"))
            pname = self.fresh_name()
            param_types.append(ptype)
            param_nodes.append(new_node(
                NodeKind.Decl, name=pname, quals=[], storage=[], funcspec=[],
                type=new_node(
                    NodeKind.TypeDecl, declname=pname, quals=[],
                    type=new_node(NodeKind.IdentifierType, names=[ptype]),
                ),
            ))
            vars_.add(pname, ptype, "scalar")
        items = []
        for _ in range(rng.randint(0, 2)):
            if self.spend():
                items.append(self.declaration(vars_))
        for _ in range(rng.randint(1, 3)):
            if self.spend():
                items.append(self.statement(vars_, 0))
        self.spend()
        items.append(new_node(NodeKind.Return, expr=self.expr(vars_)))
        node = self.function(
            name, ret, new_node(NodeKind.ParamList, params=param_nodes), items
        )
        self.helpers.append((name, ret, param_types))
        return node

    def main_def(self):
        rng = self.rng
        vars_ = _Vars()
        items = []
        anchor = None
        for _ in range(rng.randint(1, 5)):
            if not self.spend():
                break
            decl = self.declaration(vars_)
            if anchor is None and decl.child("type").kind == NodeKind.TypeDecl:
                anchor = decl.attrs["name"]
            items.append(decl)
        if anchor is None:
            # ensure at least one used scalar exists (deletion target)
            anchor = self.fresh_name()
            vars_.add(anchor, "int", "scalar")
            items.append(new_node(
                NodeKind.Decl, name=anchor, quals=[], storage=[], funcspec=[],
                type=new_node(
                    NodeKind.TypeDecl, declname=anchor, quals=[],
                    type=new_node(NodeKind.IdentifierType, names=["int"]),
                ),
                init=new_node(NodeKind.Constant, type="int", value="0"),
            ))
        items.append(new_node(
            NodeKind.Assignment, op="=",
            lvalue=new_node(NodeKind.ID, name=anchor),
            rvalue=new_node(
                NodeKind.BinaryOp, op="+",
                left=new_node(NodeKind.ID, name=anchor),
                right=_constant(rng, "int"),
            ),
        ))
        while self.spend():
            items.append(self.statement(vars_, 0))
        items.append(new_node(
            NodeKind.Return, expr=new_node(NodeKind.Constant, type="int", value="0")
        ))
        return self.function("main", "int", None, items)


def generate_tree(seed, max_stmts=40):
    """A fully declared program tree; deterministic in (seed, max_stmts)."""
    if max_stmts < 1:
        raise ValueError("max_stmts must be positive")
    rng = random.Random(seed)
    budget = rng.randint(3, max_stmts)
    builder = _Builder(rng, budget)
    ext = []
    for _ in range(rng.randint(0, 2)):
        if builder.budget > 6:
            ext.append(builder.helper_def())
    ext.append(builder.main_def())
    preamble = ["#include <stdio.h>"]
    return new_node(NodeKind.FileAST, preamble=preamble, ext=ext)


def generate_program(seed, max_stmts=40):
    """Source text of a fully declared program."""
    return emit(generate_tree(seed, max_stmts))


def generate_buggy_program(seed, max_stmts=40):
    """-> (source, truth) where the source misses exactly one declaration.

    The victim is a used local declaration picked at random; truth records
    the name, enclosing function, type and array size the repair should
    reconstruct.
    """
    tree = generate_tree(seed, max_stmts)
    # string seeds hash deterministically across processes; tuples do not
    rng = random.Random(f"victim:{seed}")
    scopes = build_scopes(tree)
    groups = scopes.variable_groups()
    candidates = []
    for func_def in tree.child_list("ext"):
        if func_def.kind != NodeKind.FuncDef:
            continue
        fname = func_def.child("decl").attrs["name"]
        body = func_def.child("body")
        for item in body.child_list("block_items"):
            if item.kind != NodeKind.Decl:
                continue
            uses = groups.get((fname, item.attrs["name"]))
            if uses:
                candidates.append((fname, item, body))
    if not candidates:
        raise AssertionError("generator invariant broken: no used local declaration")
    fname, victim, body = rng.choice(candidates)
    body.children.remove(("block_items", victim))
    _, type_text, array_size = _decl_type_info(victim)
    truth = {
        "expected": [
            {
                "name": victim.attrs["name"],
                "expected_type": type_text,
                "expected_array_size": array_size,
            }
        ],
        "function": fname,
    }
    return emit(tree), truth
