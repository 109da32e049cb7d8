"""Tokenizer and recursive-descent parser for the C subset.

The grammar covers the shape of small teaching programs: function
definitions, scalar/array declarations with initializers, for/while/if,
return and break, assignment (plain and compound), the usual binary
operators, unary ``& ! ++ -- -``, array subscripts and function calls.
Crucially, an identifier with no declaration is *not* a parse error; name
resolution happens later, so broken student programs still produce a tree.

Preprocessor lines (anything whose first non-blank character is ``#``) are
not parsed.  ``tokenize`` skips them; ``parse_source`` records them verbatim
so the emitter can replay them ahead of the generated code.

Conventions follow the usual recursive-descent shape: one ``_parse_*``
method per construct, each consuming tokens from the shared cursor and
returning a node.  Errors raise CSyntaxError with the offending coordinate
and the set of expected tokens; no partial tree escapes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .astnodes import Coord, NodeKind, new_node
from .errors import CSyntaxError, LexError

KEYWORDS = frozenset(
    """int float double char long short unsigned signed void const
       for while do if else return break continue""".split()
)

TYPE_WORDS = frozenset(
    "int float double char long short unsigned signed void".split()
)

# kind values form a closed set; single-quoted character constants ride in
# the string-literal kind and are told apart by their first lexeme character.
K_KEYWORD = "keyword"
K_IDENT = "identifier"
K_INT = "constant-int"
K_FLOAT = "constant-float"
K_STRING = "string-literal"
K_OP = "operator"
K_PUNCT = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    coord: Coord


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<linecomment>//[^\n]*)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fF]?|\d+[eE][+-]?\d+[fF]?)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<char>'(?:\\.|[^'\\\n])')
  | (?P<op>&&|\|\||<=|>=|==|!=|\+\+|--|\+=|-=|\*=|/=|%=|[-+*/%<>=!&])
  | (?P<punct>[(){}\[\];,])
    """,
    re.VERBOSE | re.DOTALL,
)


def _blank_directives(source):
    """Replace preprocessor lines with blanks, preserving layout."""
    kept = []
    directives = []
    for line in source.split("\n"):
        if line.lstrip().startswith("#"):
            directives.append(line.rstrip())
            kept.append(" " * len(line))
        else:
            kept.append(line)
    return "\n".join(kept), directives


def scan_directives(source):
    """The preprocessor lines of a source text, verbatim, in order."""
    return _blank_directives(source)[1]


def tokenize(source, filename="<text>"):
    """Source text -> list of Tokens with 1-based coordinates."""
    text, _ = _blank_directives(source)
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            coord = Coord(filename, line, pos - line_start + 1)
            raise LexError(coord, f"cannot tokenize {text[pos:pos + 10]!r}")
        group = m.lastgroup
        lexeme = m.group()
        coord = Coord(filename, line, pos - line_start + 1)
        if group == "nl":
            line += 1
            line_start = m.end()
        elif group in ("ws", "linecomment"):
            pass
        elif group == "blockcomment":
            inner_newlines = lexeme.count("\n")
            if inner_newlines:
                line += inner_newlines
                line_start = m.start() + lexeme.rindex("\n") + 1
        elif group == "name":
            kind = K_KEYWORD if lexeme in KEYWORDS else K_IDENT
            tokens.append(Token(kind, lexeme, coord))
        elif group == "int":
            tokens.append(Token(K_INT, lexeme, coord))
        elif group == "float":
            tokens.append(Token(K_FLOAT, lexeme, coord))
        elif group in ("string", "char"):
            tokens.append(Token(K_STRING, lexeme, coord))
        elif group == "op":
            tokens.append(Token(K_OP, lexeme, coord))
        else:
            tokens.append(Token(K_PUNCT, lexeme, coord))
        pos = m.end()
    return tokens


_ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%="])

# binary operator tiers, loosest first
_BINARY_TIERS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)

_UNARY_OPS = frozenset(["-", "!", "&", "++", "--"])


class _Parser:
    def __init__(self, tokens, filename="<text>"):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename

    # --- cursor helpers -------------------------------------------------

    def _peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def _coord_here(self):
        tok = self._peek()
        if tok is not None:
            return tok.coord
        if self.tokens:
            return self.tokens[-1].coord
        return Coord(self.filename, 1, 1)

    def _fail(self, expected):
        tok = self._peek()
        found = tok.lexeme if tok else "<eof>"
        raise CSyntaxError(self._coord_here(), expected, found)

    def _advance(self):
        tok = self._peek()
        if tok is None:
            self._fail({"<token>"})
        self.pos += 1
        return tok

    def _accept(self, lexeme):
        tok = self._peek()
        if tok is not None and tok.lexeme == lexeme:
            self.pos += 1
            return tok
        return None

    def _expect(self, lexeme):
        tok = self._accept(lexeme)
        if tok is None:
            self._fail({lexeme})
        return tok

    def _at_type(self):
        tok = self._peek()
        return tok is not None and tok.kind == K_KEYWORD and (
            tok.lexeme in TYPE_WORDS or tok.lexeme == "const"
        )

    # --- declarations ---------------------------------------------------

    def _parse_type_spec(self):
        """-> (quals, type words, coord of first token)."""
        quals = []
        names = []
        first = self._peek()
        while True:
            tok = self._peek()
            if tok is None or tok.kind != K_KEYWORD:
                break
            if tok.lexeme == "const":
                self._advance()
                if "const" not in quals:
                    quals.append("const")
            elif tok.lexeme in TYPE_WORDS:
                self._advance()
                names.append(tok.lexeme)
            else:
                break
        if not names:
            self._fail({"type name"})
        return quals, names, first.coord

    def _parse_declarator(self, quals, names):
        name_tok = self._peek()
        if name_tok is None or name_tok.kind != K_IDENT:
            self._fail({"identifier"})
        self._advance()
        dims = []
        while self._accept("["):
            if self._peek() is not None and self._peek().lexeme == "]":
                dims.append(None)
            else:
                dims.append(self._parse_expr())
            self._expect("]")
        init = None
        if self._accept("="):
            if self._peek() is not None and self._peek().lexeme == "{":
                init = self._parse_init_list()
            else:
                init = self._parse_assignment_expr()
        type_node = new_node(
            NodeKind.TypeDecl,
            coord=name_tok.coord,
            declname=name_tok.lexeme,
            quals=list(quals),
            type=new_node(NodeKind.IdentifierType, coord=name_tok.coord, names=list(names)),
        )
        for dim in reversed(dims):
            type_node = new_node(
                NodeKind.ArrayDecl, coord=name_tok.coord, dim_quals=[], type=type_node, dim=dim
            )
        return new_node(
            NodeKind.Decl,
            coord=name_tok.coord,
            name=name_tok.lexeme,
            quals=list(quals),
            storage=[],
            funcspec=[],
            type=type_node,
            init=init,
        )

    def _parse_init_list(self):
        start = self._expect("{")
        exprs = []
        if self._peek() is not None and self._peek().lexeme != "}":
            exprs.append(self._parse_assignment_expr())
            while self._accept(","):
                exprs.append(self._parse_assignment_expr())
        self._expect("}")
        return new_node(NodeKind.InitList, coord=start.coord, exprs=exprs)

    def _parse_declaration_body(self):
        """Declarators after a type spec; the caller handles ';'.

        Multi-declarator statements are split into one Decl per declarator
        right here, which is also the emitter's normal form.
        """
        quals, names, _ = self._parse_type_spec()
        decls = [self._parse_declarator(quals, names)]
        while self._accept(","):
            decls.append(self._parse_declarator(quals, names))
        return decls

    # --- statements -----------------------------------------------------

    def _parse_compound(self):
        open_tok = self._expect("{")
        items = []
        while True:
            tok = self._peek()
            if tok is None:
                self._fail({"}"})
            if tok.lexeme == "}":
                break
            items.extend(self._parse_block_item())
        self._expect("}")
        return new_node(NodeKind.Compound, coord=open_tok.coord, block_items=items)

    def _parse_block_item(self):
        """-> list of statement nodes (a declaration may expand to several)."""
        if self._at_type():
            decls = self._parse_declaration_body()
            self._expect(";")
            return decls
        return [self._parse_statement()]

    def _parse_statement(self):
        tok = self._peek()
        if tok is None:
            self._fail({"statement"})
        lex = tok.lexeme
        if lex == "{":
            return self._parse_compound()
        if lex == ";":
            self._advance()
            return new_node(NodeKind.EmptyStatement, coord=tok.coord)
        if lex == "for":
            return self._parse_for()
        if lex == "while":
            return self._parse_while()
        if lex == "if":
            return self._parse_if()
        if lex == "return":
            self._advance()
            expr = None
            if self._peek() is not None and self._peek().lexeme != ";":
                expr = self._parse_expr()
            self._expect(";")
            return new_node(NodeKind.Return, coord=tok.coord, expr=expr)
        if lex == "break":
            self._advance()
            self._expect(";")
            return new_node(NodeKind.Break, coord=tok.coord)
        expr = self._parse_expr()
        self._expect(";")
        return expr

    def _parse_expr_list_or_expr(self):
        first = self._parse_assignment_expr()
        if self._peek() is None or self._peek().lexeme != ",":
            return first
        exprs = [first]
        while self._accept(","):
            exprs.append(self._parse_assignment_expr())
        return new_node(NodeKind.ExprList, coord=exprs[0].coord, exprs=exprs)

    def _parse_for(self):
        start = self._expect("for")
        self._expect("(")
        init = None
        if self._at_type():
            decls = self._parse_declaration_body()
            init = new_node(NodeKind.DeclList, coord=decls[0].coord, decls=decls)
            self._expect(";")
        elif not self._accept(";"):
            init = self._parse_expr_list_or_expr()
            self._expect(";")
        cond = None
        if not self._accept(";"):
            cond = self._parse_expr()
            self._expect(";")
        nxt = None
        if self._peek() is not None and self._peek().lexeme != ")":
            nxt = self._parse_expr_list_or_expr()
        self._expect(")")
        stmt = self._parse_statement()
        return new_node(NodeKind.For, coord=start.coord, init=init, cond=cond, next=nxt, stmt=stmt)

    def _parse_while(self):
        start = self._expect("while")
        self._expect("(")
        cond = self._parse_expr()
        self._expect(")")
        stmt = self._parse_statement()
        return new_node(NodeKind.While, coord=start.coord, cond=cond, stmt=stmt)

    def _parse_if(self):
        start = self._expect("if")
        self._expect("(")
        cond = self._parse_expr()
        self._expect(")")
        iftrue = self._parse_statement()
        iffalse = None
        if self._accept("else"):
            iffalse = self._parse_statement()
        return new_node(NodeKind.If, coord=start.coord, cond=cond, iftrue=iftrue, iffalse=iffalse)

    # --- expressions ----------------------------------------------------

    def _parse_expr(self):
        return self._parse_assignment_expr()

    def _parse_assignment_expr(self):
        left = self._parse_binary(0)
        tok = self._peek()
        if tok is not None and tok.lexeme in _ASSIGN_OPS:
            if left.kind not in (NodeKind.ID, NodeKind.ArrayRef):
                raise CSyntaxError(tok.coord, {"assignable left side"}, tok.lexeme)
            self._advance()
            right = self._parse_assignment_expr()
            return new_node(
                NodeKind.Assignment, coord=left.coord, op=tok.lexeme, lvalue=left, rvalue=right
            )
        return left

    def _parse_binary(self, tier):
        if tier >= len(_BINARY_TIERS):
            return self._parse_unary()
        ops = _BINARY_TIERS[tier]
        node = self._parse_binary(tier + 1)
        while True:
            tok = self._peek()
            if tok is None or tok.kind != K_OP or tok.lexeme not in ops:
                return node
            self._advance()
            right = self._parse_binary(tier + 1)
            node = new_node(
                NodeKind.BinaryOp, coord=node.coord, op=tok.lexeme, left=node, right=right
            )

    def _parse_unary(self):
        tok = self._peek()
        if tok is not None and tok.kind == K_OP and tok.lexeme in _UNARY_OPS:
            self._advance()
            operand = self._parse_unary()
            return new_node(NodeKind.UnaryOp, coord=tok.coord, op=tok.lexeme, expr=operand)
        return self._parse_postfix()

    def _parse_postfix(self):
        node = self._parse_primary()
        while True:
            tok = self._peek()
            if tok is None:
                return node
            if tok.lexeme == "[":
                self._advance()
                subscript = self._parse_expr()
                self._expect("]")
                node = new_node(
                    NodeKind.ArrayRef, coord=node.coord, name=node, subscript=subscript
                )
            elif tok.lexeme == "(":
                self._advance()
                args = None
                if self._peek() is not None and self._peek().lexeme != ")":
                    exprs = [self._parse_assignment_expr()]
                    while self._accept(","):
                        exprs.append(self._parse_assignment_expr())
                    args = new_node(NodeKind.ExprList, coord=exprs[0].coord, exprs=exprs)
                self._expect(")")
                node = new_node(NodeKind.FuncCall, coord=node.coord, name=node, args=args)
            elif tok.lexeme in ("++", "--"):
                self._advance()
                node = new_node(NodeKind.UnaryOp, coord=node.coord, op="p" + tok.lexeme, expr=node)
            else:
                return node

    def _parse_primary(self):
        tok = self._peek()
        if tok is None:
            self._fail({"expression"})
        if tok.lexeme == "(":
            self._advance()
            expr = self._parse_expr()
            self._expect(")")
            return expr
        if tok.kind == K_IDENT:
            self._advance()
            return new_node(NodeKind.ID, coord=tok.coord, name=tok.lexeme)
        if tok.kind == K_INT:
            self._advance()
            return new_node(NodeKind.Constant, coord=tok.coord, type="int", value=tok.lexeme)
        if tok.kind == K_FLOAT:
            self._advance()
            ctype = "float" if tok.lexeme[-1] in "fF" else "double"
            return new_node(NodeKind.Constant, coord=tok.coord, type=ctype, value=tok.lexeme)
        if tok.kind == K_STRING:
            self._advance()
            ctype = "char" if tok.lexeme.startswith("'") else "string"
            return new_node(NodeKind.Constant, coord=tok.coord, type=ctype, value=tok.lexeme)
        self._fail({"expression"})

    # --- top level --------------------------------------------------------

    def _parse_external(self):
        quals, names, _ = self._parse_type_spec()
        name_tok = self._peek()
        if name_tok is None or name_tok.kind != K_IDENT:
            self._fail({"identifier"})
        # function definition or file-scope declaration: look one past the name
        after = self._peek(1)
        if after is not None and after.lexeme == "(":
            self._advance()
            self._expect("(")
            params = self._parse_params()
            self._expect(")")
            body = self._parse_compound()
            ret_type = new_node(
                NodeKind.TypeDecl,
                coord=name_tok.coord,
                declname=name_tok.lexeme,
                quals=list(quals),
                type=new_node(NodeKind.IdentifierType, coord=name_tok.coord, names=list(names)),
            )
            func_decl = new_node(
                NodeKind.FuncDecl, coord=name_tok.coord, args=params, type=ret_type
            )
            decl = new_node(
                NodeKind.Decl,
                coord=name_tok.coord,
                name=name_tok.lexeme,
                quals=list(quals),
                storage=[],
                funcspec=[],
                type=func_decl,
            )
            return [new_node(NodeKind.FuncDef, coord=name_tok.coord, decl=decl, body=body)]
        # plain declaration(s): re-use the declarator parser
        decls = [self._parse_declarator(quals, names)]
        while self._accept(","):
            decls.append(self._parse_declarator(quals, names))
        self._expect(";")
        return decls

    def _parse_params(self):
        tok = self._peek()
        if tok is not None and tok.lexeme == ")":
            return None
        if (
            tok is not None
            and tok.lexeme == "void"
            and self._peek(1) is not None
            and self._peek(1).lexeme == ")"
        ):
            self._advance()
            return None
        params = [self._parse_param()]
        while self._accept(","):
            params.append(self._parse_param())
        return new_node(NodeKind.ParamList, coord=params[0].coord, params=params)

    def _parse_param(self):
        quals, names, _ = self._parse_type_spec()
        return self._parse_declarator(quals, names)

    def parse_translation_unit(self, preamble):
        ext = []
        while self._peek() is not None:
            ext.extend(self._parse_external())
        return new_node(NodeKind.FileAST, preamble=list(preamble), ext=ext)


def parse(tokens, preamble=(), filename="<text>"):
    """Token list -> FileAST tree."""
    return _Parser(tokens, filename).parse_translation_unit(preamble)


def parse_source(source, filename="<text>"):
    """Convenience wrapper: text -> tree, directives captured as preamble."""
    tokens = tokenize(source, filename)
    return parse(tokens, scan_directives(source), filename)
