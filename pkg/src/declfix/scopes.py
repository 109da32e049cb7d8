"""Block-structured symbol tables and undeclared-identifier detection.

One walk over the tree produces a ScopeTree: nested scopes with their
bindings, every variable-position ID use with the binding it resolves to
(or None), and every call site.  Declaration position is significant inside
a block, matching C: a binding is visible from its declaration coordinate
onward, and a use that precedes the only declaration of that name keeps
searching outer scopes.

Function-call callee names are never treated as variable uses.  Calls that
resolve to no defined function and no known library routine are reported
separately as unresolved callees; they are diagnostics, not repair targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .astnodes import NodeKind
from .errors import DuplicateDecl

# library routines accepted as known callees (no #include expansion happens)
STD_CALLEES = frozenset(
    """printf scanf getchar putchar puts gets fabs abs sqrt pow exit
       malloc free rand srand strlen strcmp strcpy memset fgets""".split()
)

GLOBAL_FUNCTION = ""  # enclosing-function marker for file-scope code


@dataclass
class DeclInfo:
    """One binding: where a name was declared and what it names."""

    name: str
    kind: str  # scalar | array | function | parameter
    type_text: str
    coord: object
    function: str
    array_size: int | None = None
    return_type: str | None = None


@dataclass
class Scope:
    kind: str  # file | function | block
    function: str
    parent: "Scope | None" = None
    bindings: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    def spawn(self, kind, function=None):
        child = Scope(kind, self.function if function is None else function, self)
        self.children.append(child)
        return child


@dataclass
class IdUse:
    name: str
    coord: object
    function: str
    node: object
    binding: DeclInfo | None


@dataclass
class CalleeUse:
    name: str
    coord: object
    function: str
    resolved: bool


@dataclass
class UndeclaredUse:
    name: str
    first_use: object
    enclosing_function: str
    all_uses: list


def _decl_type_info(decl):
    """-> (kind, type_text, array_size) for a Decl's declarator chain."""
    node = decl.child("type")
    dims = []
    while node is not None and node.kind is NodeKind.ArrayDecl:
        dims.append(node.child("dim"))
        node = node.child("type")
    if node is not None and node.kind is NodeKind.FuncDecl:
        ret = node.child("type").child("type")
        return "function", " ".join(ret.attrs["names"]), None
    ident = node.child("type") if node is not None else None
    type_text = " ".join(ident.attrs["names"]) if ident is not None else "int"
    if dims:
        size = None
        dim = dims[0]
        if dim is not None and dim.kind is NodeKind.Constant and dim.attrs["type"] == "int":
            size = int(dim.attrs["value"])
        return "array", type_text, size
    return "scalar", type_text, None


class ScopeTree:
    """Result of one analysis pass over a translation unit."""

    def __init__(self, root_scope):
        self.root = root_scope
        self.uses: list[IdUse] = []
        self.callees: list[CalleeUse] = []
        self._binding_by_node: dict[int, DeclInfo | None] = {}
        self._functions: dict[str, DeclInfo] = {}

    # -- queries ---------------------------------------------------------

    def binding_of(self, id_node):
        """The binding an ID node resolved to during analysis, or None."""
        return self._binding_by_node.get(id(id_node))

    def function_return_type(self, name):
        info = self._functions.get(name)
        return info.type_text if info else None

    def declared_set(self):
        """All (enclosing-function, name) pairs with a declaration."""
        pairs = set()
        stack = [self.root]
        while stack:
            scope = stack.pop()
            for name, info in scope.bindings.items():
                if info.kind != "function":
                    pairs.add((scope.function, name))
            stack.extend(scope.children)
        return pairs

    def is_declared(self, function, name):
        pairs = self.declared_set()
        return (function, name) in pairs or (GLOBAL_FUNCTION, name) in pairs

    def variable_groups(self):
        """Every variable-position use, grouped: (function, name) -> [IdUse]."""
        groups = {}
        for use in self.uses:
            groups.setdefault((use.function, use.name), []).append(use)
        for uses in groups.values():
            # synthesized trees carry no coords; stable sort keeps their
            # discovery (preorder) order
            uses.sort(key=lambda u: u.coord.as_pair() if u.coord else (0, 0))
        return groups

    def undeclared(self):
        out = []
        for (function, name), uses in self.variable_groups().items():
            if any(u.binding is not None for u in uses):
                continue
            out.append(
                UndeclaredUse(
                    name=name,
                    first_use=uses[0].coord,
                    enclosing_function=function,
                    all_uses=[u.coord for u in uses],
                )
            )
        out.sort(key=lambda u: u.first_use.as_pair() if u.first_use else (0, 0))
        return out

    def unresolved_callees(self):
        seen = set()
        out = []
        for callee in self.callees:
            if callee.resolved or callee.name in STD_CALLEES:
                continue
            key = (callee.function, callee.name)
            if key not in seen:
                seen.add(key)
                out.append(callee)
        return out


class _Walker:
    def __init__(self):
        self.file_scope = Scope("file", GLOBAL_FUNCTION)
        self.tree = ScopeTree(self.file_scope)
        self.stack = [self.file_scope]

    @property
    def scope(self):
        return self.stack[-1]

    def bind(self, decl, kind_override=None):
        name = decl.attrs["name"]
        kind, type_text, size = _decl_type_info(decl)
        if kind_override:
            kind = kind_override
        info = DeclInfo(
            name=name,
            kind=kind,
            type_text=type_text,
            coord=decl.coord,
            function=self.scope.function,
            array_size=size,
            return_type=type_text if kind == "function" else None,
        )
        if name in self.scope.bindings:
            raise DuplicateDecl(name, decl.coord)
        self.scope.bindings[name] = info
        if kind == "function":
            self.tree._functions[name] = info
        return info

    def lookup(self, name, coord):
        for scope in reversed(self.stack):
            info = scope.bindings.get(name)
            if info is None:
                continue
            if info.coord is None or coord is None:
                return info
            if info.coord.as_pair() <= coord.as_pair():
                return info
            # declared later in this scope: C makes the outer binding visible
        return None

    # -- traversal --------------------------------------------------------

    def walk_unit(self, root):
        for item in root.child_list("ext"):
            if item.kind is NodeKind.FuncDef:
                self.walk_funcdef(item)
            elif item.kind is NodeKind.Decl:
                self.bind(item)
                self.walk_decl_exprs(item)

    def walk_funcdef(self, node):
        decl = node.child("decl")
        self.bind(decl, kind_override="function")
        name = decl.attrs["name"]
        func_scope = self.scope.spawn("function", function=name)
        self.stack.append(func_scope)
        func_decl = decl.child("type")
        args = func_decl.child("args") if func_decl is not None else None
        if args is not None:
            for param in args.child_list("params"):
                self.bind(param, kind_override="parameter")
        # the body's braces share the function scope with the parameters
        for item in node.child("body").child_list("block_items"):
            self.walk_statement(item)
        self.stack.pop()

    def walk_decl_exprs(self, decl):
        node = decl.child("type")
        while node is not None and node.kind is NodeKind.ArrayDecl:
            dim = node.child("dim")
            if dim is not None:
                self.walk_expr(dim)
            node = node.child("type")
        init = decl.child("init")
        if init is not None:
            self.walk_expr(init)

    def walk_statement(self, node):
        kind = node.kind
        if kind is NodeKind.Decl:
            self.bind(node)
            self.walk_decl_exprs(node)
        elif kind is NodeKind.Compound:
            self.stack.append(self.scope.spawn("block"))
            for item in node.child_list("block_items"):
                self.walk_statement(item)
            self.stack.pop()
        elif kind is NodeKind.For:
            self.stack.append(self.scope.spawn("block"))
            init = node.child("init")
            if init is not None:
                if init.kind is NodeKind.DeclList:
                    for d in init.child_list("decls"):
                        self.bind(d)
                        self.walk_decl_exprs(d)
                else:
                    self.walk_expr(init)
            for label in ("cond", "next"):
                child = node.child(label)
                if child is not None:
                    self.walk_expr(child)
            self.walk_statement(node.child("stmt"))
            self.stack.pop()
        elif kind is NodeKind.While:
            self.walk_expr(node.child("cond"))
            self.walk_statement(node.child("stmt"))
        elif kind is NodeKind.If:
            self.walk_expr(node.child("cond"))
            for label in ("iftrue", "iffalse"):
                child = node.child(label)
                if child is not None:
                    self.walk_statement(child)
        elif kind is NodeKind.Return:
            expr = node.child("expr")
            if expr is not None:
                self.walk_expr(expr)
        elif kind in (NodeKind.Break, NodeKind.EmptyStatement):
            pass
        else:
            self.walk_expr(node)

    def walk_expr(self, node):
        kind = node.kind
        if kind is NodeKind.ID:
            binding = self.lookup(node.attrs["name"], node.coord)
            use = IdUse(node.attrs["name"], node.coord, self.scope.function, node, binding)
            self.tree.uses.append(use)
            self.tree._binding_by_node[id(node)] = binding
        elif kind is NodeKind.FuncCall:
            callee = node.child("name")
            if callee.kind is NodeKind.ID:
                name = callee.attrs["name"]
                resolved = self.lookup(name, callee.coord) is not None
                self.tree.callees.append(
                    CalleeUse(name, callee.coord, self.scope.function, resolved)
                )
            else:
                self.walk_expr(callee)
            args = node.child("args")
            if args is not None:
                self.walk_expr(args)
        else:
            for _, child in node.children:
                self.walk_expr(child)


def build_scopes(root):
    """Translation unit -> ScopeTree.  Raises DuplicateDecl on redefinition
    of a name within one scope."""
    walker = _Walker()
    walker.walk_unit(root)
    return walker.tree


def find_undeclared(root):
    """The deterministic detection oracle: every (function, name) used in a
    variable position with no visible declaration, in first-use order."""
    tree = root if isinstance(root, ScopeTree) else build_scopes(root)
    return tree.undeclared()


def declared_set(root):
    tree = root if isinstance(root, ScopeTree) else build_scopes(root)
    return tree.declared_set()
