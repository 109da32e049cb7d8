"""Scope analysis: visibility, grouping, and undeclared detection."""

import pytest

from declfix.cparser import parse_source
from declfix.errors import DuplicateDecl
from declfix.scopes import GLOBAL_FUNCTION, build_scopes, declared_set, find_undeclared


def _undeclared(src):
    return find_undeclared(parse_source(src))


def test_clean_program_has_no_findings():
    assert _undeclared("int main() { int x; x = 1; return 0; }") == []


def test_use_without_declaration_is_flagged():
    found = _undeclared("int main() { s = 0; return 0; }")
    assert [(u.name, u.enclosing_function) for u in found] == [("s", "main")]


def test_all_uses_collected_in_order():
    src = "int main() { s = 0; s = s + 1; return s; }"
    found = _undeclared(src)
    assert len(found) == 1
    assert len(found[0].all_uses) == 4
    lines = [c.line for c in found[0].all_uses]
    assert lines == sorted(lines)


def test_declaration_later_in_block_does_not_cover_earlier_use():
    # visibility is position-aware: the use on the left happens first
    found = _undeclared("int main() { x = 1; int x; return 0; }")
    assert [u.name for u in found] == ["x"]


def test_params_share_the_body_scope():
    assert _undeclared("int f(int a) { return a; }") == []


def test_param_redeclared_in_body_is_a_duplicate():
    with pytest.raises(DuplicateDecl):
        build_scopes(parse_source("int f(int a) { int a; return a; }"))


def test_shadowing_in_inner_block_is_fine():
    src = "int main() { int x; { int x; x = 1; } return 0; }"
    assert _undeclared(src) == []


def test_inner_block_scope_ends():
    src = "int main() { { int y; } y = 1; return 0; }"
    found = _undeclared(src)
    assert [u.name for u in found] == ["y"]


def test_for_decl_scopes_to_the_loop():
    src = "int main() { for (int i = 0; i < 3; i++) ; i = 9; return 0; }"
    tree = parse_source(src)
    scopes = build_scopes(tree)
    bindings = [u.binding is not None for u in scopes.uses if u.name == "i"]
    # header uses bind, the use after the loop does not
    assert bindings == [True, True, False]
    # but the name resolves somewhere in main, so the group is not flagged:
    # flagging it would invite a second declaration of the same name
    assert scopes.undeclared() == []


def test_globals_visible_everywhere():
    src = "int limit = 10;\nint main() { return limit; }"
    assert _undeclared(src) == []


def test_callee_names_are_not_variable_uses():
    src = "int main() { int x; x = helper(x); return 0; }"
    tree = parse_source(src)
    scopes = build_scopes(tree)
    assert _undeclared(src) == []
    unresolved = scopes.unresolved_callees()
    assert [c.name for c in unresolved] == ["helper"]


def test_standard_library_callees_resolve():
    src = 'int main() { printf("hi"); return 0; }'
    scopes = build_scopes(parse_source(src))
    assert scopes.unresolved_callees() == []


def test_defined_function_resolves_as_callee():
    src = "int half(int n) { return n / 2; }\nint main() { int x; x = half(8); return 0; }"
    scopes = build_scopes(parse_source(src))
    assert scopes.unresolved_callees() == []
    assert scopes.function_return_type("half") == "int"


def test_function_args_count_as_uses():
    found = _undeclared("int main() { printf(\"%d\", y); return 0; }")
    assert [u.name for u in found] == ["y"]


def test_scanf_address_args_count_as_uses():
    found = _undeclared('int main() { scanf("%d", &k); return 0; }')
    assert [u.name for u in found] == ["k"]


def test_two_undeclared_ordered_by_first_use():
    src = "int main() { b = 1; a = 2; return 0; }"
    found = _undeclared(src)
    assert [u.name for u in found] == ["b", "a"]


def test_same_name_in_two_functions_grouped_separately():
    src = (
        "int f() { t = 1; return t; }\n"
        "int main() { t = 2; return t; }"
    )
    found = _undeclared(src)
    assert [(u.name, u.enclosing_function) for u in found] == [("t", "f"), ("t", "main")]


def test_declared_set_and_membership():
    src = "int g;\nint main() { int x; return 0; }"
    tree = parse_source(src)
    scopes = build_scopes(tree)
    pairs = scopes.declared_set()
    assert (GLOBAL_FUNCTION, "g") in pairs
    assert ("main", "x") in pairs
    assert scopes.is_declared("main", "x")
    assert scopes.is_declared("main", "g")  # global fallback
    assert not scopes.is_declared("main", "nope")
    assert declared_set(tree) == pairs


def test_duplicate_declaration_same_scope_raises():
    with pytest.raises(DuplicateDecl):
        build_scopes(parse_source("int main() { int x; int x; return 0; }"))


def test_array_vs_scalar_recorded_in_groups():
    src = "int main() { int a[5]; int i; a[i] = 0; return 0; }"
    scopes = build_scopes(parse_source(src))
    groups = scopes.variable_groups()
    assert ("main", "a") in groups
    assert ("main", "i") in groups
