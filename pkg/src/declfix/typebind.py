"""Type inference for undeclared variables from their usage sites.

Nine binding rules, tried in a fixed order at each use of the undeclared
name, uses visited in source order.  The first (use, rule) pair that
produces evidence wins; rule ids are reported so a repair can be audited.

  1  u = <constant>                 -> the constant's type
  2  u = arr[i], arr declared       -> arr's element type
  3  u (+) v inside an if-condition -> declared neighbor v's type
  4  u = v, v declared scalar       -> v's type
  5  u inside a binary rvalue tree  -> the assignment's lvalue type if
                                       declared, else a declared neighbor
  6  u[i] = v, v declared scalar    -> array of v's type (default size)
  7  u (+) v inside a loop condition-> declared neighbor v's type
  8  u compared against a call      -> the call's return type
  9  u = ... f(...) ...             -> the call's return type

Neighbor searches walk outward through the enclosing binary-operator chain,
nearest subtree first, and never look inside call arguments or array
subscripts: a value that went through a call boundary says nothing direct
about u.  When no rule fires the fallback (rule id 0) is the configured
scalar type, or an array of it when u is only ever used as an array name.

Unresolvable call return types default to int, so a program calling
undefined helpers still binds (rules 8 and 9).
"""

from __future__ import annotations

from dataclasses import dataclass

from .astnodes import NodeKind, build_parent_map
from .scopes import ScopeTree, build_scopes


@dataclass(frozen=True)
class CType:
    """A plain C object type, e.g. 'int' or 'long long'."""

    text: str

    def words(self):
        return self.text.split()


@dataclass
class TypeEvidence:
    name: str
    case_id: int
    ctype: CType
    site: object  # Coord of the use that produced the evidence
    bound_from: str
    array_size: int | None = None


@dataclass
class BindOptions:
    fallback_type: str = "int"
    default_array_size: int = 1000
    best_evidence: bool = False


_CONST_TYPES = {"int": "int", "double": "double", "float": "float", "char": "char"}

_SCALARISH = ("scalar", "parameter")


def _constant_ctype(node):
    return _CONST_TYPES.get(node.attrs["type"])


def _scan_declared_id(subtree, scopes, exclude_name):
    """First declared scalar ID in preorder, not nested in a call or
    subscript; -> DeclInfo or None."""
    stack = [subtree]
    while stack:
        node = stack.pop()
        if node.kind in (NodeKind.FuncCall, NodeKind.ArrayRef):
            continue
        if node.kind is NodeKind.ID and node.attrs["name"] != exclude_name:
            info = scopes.binding_of(node)
            if info is not None and info.kind in _SCALARISH:
                return info
            continue
        stack.extend(child for _, child in reversed(node.children))
    return None


def _scan_funccall(subtree):
    for node in _preorder_local(subtree):
        if node.kind is NodeKind.FuncCall:
            callee = node.child("name")
            if callee is not None and callee.kind is NodeKind.ID:
                return callee.attrs["name"]
    return None


def _preorder_local(root):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(child for _, child in reversed(node.children))


def _chain_to_condition(use, parents):
    """Walk up from a use to an if/loop condition slot.

    -> (owner kind, crossed-call-or-subscript, [(BinaryOp, side-label), ...])
    or None when the use is not inside a condition.
    """
    chain = []
    crossed = False
    cur = use
    while True:
        parent, label = parents[id(cur)]
        if parent is None:
            return None
        kind = parent.kind
        if kind is NodeKind.BinaryOp:
            chain.append((parent, label))
        elif kind in (NodeKind.FuncCall, NodeKind.ArrayRef, NodeKind.ExprList):
            crossed = True
        elif kind is NodeKind.UnaryOp:
            pass
        elif kind in (NodeKind.If, NodeKind.While, NodeKind.For) and label == "cond":
            return parent.kind, crossed, chain
        else:
            return None
        cur = parent


def _chain_to_rvalue(use, parents):
    """Walk up from a use through pure operator nodes to an Assignment's
    rvalue slot; -> (Assignment, chain) or None."""
    chain = []
    cur = use
    while True:
        parent, label = parents[id(cur)]
        if parent is None:
            return None
        kind = parent.kind
        if kind is NodeKind.BinaryOp:
            chain.append((parent, label))
        elif kind is NodeKind.UnaryOp:
            pass
        elif kind is NodeKind.Assignment and label == "rvalue":
            return parent, chain
        else:
            return None
        cur = parent


def _neighbor_via_chain(use, chain, scopes):
    """Nearest declared scalar in the sibling subtrees of the operator
    chain, innermost binary operation first."""
    for binop, came_from in chain:
        other = binop.child("right" if came_from == "left" else "left")
        info = _scan_declared_id(other, scopes, exclude_name=use.attrs["name"])
        if info is not None:
            return info
    return None


def _call_via_chain(chain):
    for binop, came_from in chain:
        other = binop.child("right" if came_from == "left" else "left")
        callee = _scan_funccall(other)
        if callee is not None:
            return callee
    return None


def _direct_assignment(use, parents):
    parent, label = parents[id(use)]
    if parent is not None and parent.kind is NodeKind.Assignment and label == "lvalue":
        return parent
    return None


def _return_type(scopes, callee, options):
    rtype = scopes.function_return_type(callee)
    return rtype if rtype else options.fallback_type


class _Binder:
    def __init__(self, root, scopes, options, parents):
        self.root = root
        self.scopes = scopes
        self.options = options
        self.parents = parents

    def evidence_at(self, use):
        """First matching rule at one use node, lowest rule id first."""
        for rule in (
            self._rule1, self._rule2, self._rule3, self._rule4, self._rule5,
            self._rule6, self._rule7, self._rule8, self._rule9,
        ):
            ev = rule(use)
            if ev is not None:
                return ev
        return None

    def _evidence(self, use, case_id, type_text, bound_from, array_size=None):
        return TypeEvidence(
            name=use.attrs["name"],
            case_id=case_id,
            ctype=CType(type_text),
            site=use.coord,
            bound_from=bound_from,
            array_size=array_size,
        )

    def _rule1(self, use):
        asg = _direct_assignment(use, self.parents)
        if asg is None:
            return None
        rvalue = asg.child("rvalue")
        if rvalue.kind is not NodeKind.Constant:
            return None
        ctype = _constant_ctype(rvalue)
        if ctype is None:
            return None
        return self._evidence(use, 1, ctype, f"rvalue constant {rvalue.attrs['value']}")

    def _rule2(self, use):
        asg = _direct_assignment(use, self.parents)
        if asg is None:
            return None
        rvalue = asg.child("rvalue")
        if rvalue.kind is not NodeKind.ArrayRef:
            return None
        arr = rvalue.child("name")
        if arr.kind is not NodeKind.ID:
            return None
        info = self.scopes.binding_of(arr)
        if info is None or info.kind != "array":
            return None
        size = f"[{info.array_size}]" if info.array_size is not None else "[]"
        return self._evidence(use, 2, info.type_text, f"array {info.name}{size}")

    def _rule3(self, use):
        ctx = _chain_to_condition(use, self.parents)
        if ctx is None:
            return None
        owner, crossed, chain = ctx
        if owner is not NodeKind.If or crossed or not chain:
            return None
        info = _neighbor_via_chain(use, chain, self.scopes)
        if info is None:
            return None
        return self._evidence(use, 3, info.type_text, f"neighbor {info.name}")

    def _rule4(self, use):
        asg = _direct_assignment(use, self.parents)
        if asg is None:
            return None
        rvalue = asg.child("rvalue")
        if rvalue.kind is not NodeKind.ID:
            return None
        info = self.scopes.binding_of(rvalue)
        if info is None or info.kind not in _SCALARISH:
            return None
        return self._evidence(use, 4, info.type_text, f"variable {info.name}")

    def _rule5(self, use):
        found = _chain_to_rvalue(use, self.parents)
        if found is None:
            return None
        asg, chain = found
        if asg.child("rvalue").kind is not NodeKind.BinaryOp:
            return None
        lvalue = asg.child("lvalue")
        if lvalue.kind is NodeKind.ID:
            info = self.scopes.binding_of(lvalue)
            if info is not None and info.kind in _SCALARISH:
                return self._evidence(use, 5, info.type_text, f"lvalue {info.name}")
        elif lvalue.kind is NodeKind.ArrayRef and lvalue.child("name").kind is NodeKind.ID:
            info = self.scopes.binding_of(lvalue.child("name"))
            if info is not None and info.kind == "array":
                return self._evidence(use, 5, info.type_text, f"lvalue {info.name}")
        info = _neighbor_via_chain(use, chain, self.scopes)
        if info is None:
            return None
        return self._evidence(use, 5, info.type_text, f"neighbor {info.name}")

    def _rule6(self, use):
        parent, label = self.parents[id(use)]
        if parent is None or parent.kind is not NodeKind.ArrayRef or label != "name":
            return None
        outer, outer_label = self.parents[id(parent)]
        if outer is None or outer.kind is not NodeKind.Assignment or outer_label != "lvalue":
            return None
        rvalue = outer.child("rvalue")
        if rvalue.kind is not NodeKind.ID:
            return None
        info = self.scopes.binding_of(rvalue)
        if info is None or info.kind not in _SCALARISH:
            return None
        return self._evidence(
            use, 6, info.type_text, f"rvalue {info.name}",
            array_size=self.options.default_array_size,
        )

    def _rule7(self, use):
        ctx = _chain_to_condition(use, self.parents)
        if ctx is None:
            return None
        owner, crossed, chain = ctx
        if owner not in (NodeKind.While, NodeKind.For) or crossed or not chain:
            return None
        info = _neighbor_via_chain(use, chain, self.scopes)
        if info is None:
            return None
        return self._evidence(use, 7, info.type_text, f"neighbor {info.name}")

    def _rule8(self, use):
        ctx = _chain_to_condition(use, self.parents)
        if ctx is None:
            return None
        _, crossed, chain = ctx
        if crossed or not chain:
            return None
        callee = _call_via_chain(chain)
        if callee is None:
            return None
        rtype = _return_type(self.scopes, callee, self.options)
        return self._evidence(use, 8, rtype, f"function call {callee}")

    def _rule9(self, use):
        asg = _direct_assignment(use, self.parents)
        if asg is None:
            return None
        callee = _scan_funccall(asg.child("rvalue"))
        if callee is None:
            return None
        rtype = _return_type(self.scopes, callee, self.options)
        return self._evidence(use, 9, rtype, f"function call {callee}")


def _fallback(name, uses, options):
    array_positions = [u for u in uses if _is_array_name_position(u)]
    first = uses[0][1]
    if array_positions:
        return TypeEvidence(
            name=name,
            case_id=0,
            ctype=CType(options.fallback_type),
            site=first,
            bound_from="array usage",
            array_size=options.default_array_size,
        )
    return TypeEvidence(
        name=name,
        case_id=0,
        ctype=CType(options.fallback_type),
        site=first,
        bound_from="no evidence",
    )


def _is_array_name_position(use_entry):
    node, _coord, parents = use_entry
    parent, label = parents[id(node)]
    return parent is not None and parent.kind is NodeKind.ArrayRef and label == "name"


def infer_type(root, scopes, undeclared, options=None, parents=None):
    """-> TypeEvidence for one undeclared variable.

    `scopes` must be the ScopeTree built from `root`; `undeclared` an entry
    from its find_undeclared list.  With options.best_evidence the rules run
    at every use and the most frequent inferred type wins (first-seen breaks
    ties); otherwise the first match in source order decides.
    """
    options = options or BindOptions()
    if not isinstance(scopes, ScopeTree):
        scopes = build_scopes(root)
    if parents is None:
        parents = build_parent_map(root)
    binder = _Binder(root, scopes, options, parents)
    key = (undeclared.enclosing_function, undeclared.name)
    uses = scopes.variable_groups().get(key, [])
    use_nodes = [u.node for u in uses]

    evidences = []
    for node in use_nodes:
        ev = binder.evidence_at(node)
        if ev is not None:
            if not options.best_evidence:
                return _widen_to_array(ev, use_nodes, parents, options)
            evidences.append(ev)
    if not evidences:
        entries = [(n, n.coord, parents) for n in use_nodes]
        return _fallback(undeclared.name, entries, options)

    counts = {}
    first_seen = {}
    for i, ev in enumerate(evidences):
        text = ev.ctype.text
        counts[text] = counts.get(text, 0) + 1
        first_seen.setdefault(text, i)
    winner = max(counts, key=lambda t: (counts[t], -first_seen[t]))
    best = evidences[first_seen[winner]]
    return _widen_to_array(best, use_nodes, parents, options)


def _widen_to_array(evidence, use_nodes, parents, options):
    """A scalar verdict for a name that is used as an array name still has
    to declare an array, or the repaired program would not be valid."""
    if evidence.array_size is not None:
        return evidence
    for node in use_nodes:
        parent, label = parents[id(node)]
        if parent is not None and parent.kind is NodeKind.ArrayRef and label == "name":
            evidence.array_size = options.default_array_size
            return evidence
    return evidence
