"""Recursive-descent front-end for a Python subset.

Indentation is resolved by the lexer into structural INDENT/DEDENT/NEWLINE
tokens that never become tree terminals, so the in-order leaf sequence equals
the visible token stream. String literals (including prefixed and
triple-quoted forms) are single terminals.
"""

from astsearch.errors import ParseError
from astsearch.ast_repr.lex import (
    DEDENT, EOF, INDENT, NAME, NEWLINE, NUMBER, OP, STRING, Scanner, Token,
    is_identifier_start, longest_operator, scan_identifier,
)
from astsearch.ast_repr.tree import Ast, NodeId, TreeBuilder

KEYWORDS = {
    "def", "return", "if", "elif", "else", "for", "while", "in", "is", "not",
    "and", "or", "pass", "break", "continue", "None", "True", "False",
    "import", "from", "class", "try", "except", "finally", "raise", "with",
    "lambda", "yield", "global", "nonlocal", "del", "assert", "as",
}

OPERATORS = sorted([
    "**=", "//=", "<<=", ">>=", "**", "//", "<<", ">>", "<=", ">=", "==",
    "!=", "->", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "@", "=", "+", "-",
    "*", "/", "%", "<", ">", "&", "|", "^", "~",
], key=len, reverse=True)

STRING_PREFIXES = {"r", "b", "f", "u", "R", "B", "F", "U"}

AUGMENTED_OPS = {"+=", "-=", "*=", "/=", "//=", "%=", "**=", "&=", "|=", "^=", "<<=", ">>="}

BINARY_LEVELS = [["|"], ["^"], ["&"], ["<<", ">>"], ["+", "-"], ["*", "/", "//", "%"]]

COMPARISON_OPS = {"<", ">", "<=", ">=", "==", "!="}


def tokenize(source: str) -> list[Token]:
    """Lex Python source; emits NEWLINE/INDENT/DEDENT structural tokens."""
    sc = Scanner(source)
    tokens: list[Token] = []
    indents = [0]
    bracket_depth = 0
    line_start = True

    while not sc.at_end():
        if line_start and bracket_depth == 0:
            indent, blank = _scan_indentation(sc)
            if blank:
                continue
            if sc.at_end():
                break
            offset = sc.byte_offset()
            if indent > indents[-1]:
                indents.append(indent)
                tokens.append(Token(INDENT, "", offset))
            while indent < indents[-1]:
                indents.pop()
                tokens.append(Token(DEDENT, "", offset))
            if indent != indents[-1]:
                raise sc.error("inconsistent dedent")
            line_start = False
            continue

        ch = sc.peek()
        if ch in " \t":
            sc.advance()
            continue
        if ch == "#":
            while not sc.at_end() and sc.peek() != "\n":
                sc.advance()
            continue
        if ch == "\\" and sc.peek(1) == "\n":
            sc.advance(2)
            continue
        if ch == "\n":
            sc.advance()
            if bracket_depth == 0:
                if tokens and tokens[-1].kind not in (NEWLINE, INDENT, DEDENT):
                    tokens.append(Token(NEWLINE, "", sc.byte_offset()))
                line_start = True
            continue

        offset = sc.byte_offset()
        if is_identifier_start(ch):
            word = scan_identifier(sc)
            if word in STRING_PREFIXES and sc.peek() in "\"'":
                tokens.append(Token(STRING, word + _scan_string(sc), offset))
            else:
                tokens.append(Token(NAME, word, offset))
            continue
        if ch.isdigit() or (ch == "." and sc.peek(1).isdigit()):
            tokens.append(Token(NUMBER, _scan_number(sc), offset))
            continue
        if ch in "\"'":
            tokens.append(Token(STRING, _scan_string(sc), offset))
            continue
        op = longest_operator(sc, OPERATORS)
        if op is not None:
            if op in "([{":
                bracket_depth += 1
            elif op in ")]}":
                bracket_depth = max(0, bracket_depth - 1)
            sc.advance(len(op))
            tokens.append(Token(OP, op, offset))
            continue
        raise sc.error(f"unexpected character {ch!r}")

    end = sc.byte_offset()
    if tokens and tokens[-1].kind not in (NEWLINE, INDENT, DEDENT):
        tokens.append(Token(NEWLINE, "", end))
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token(DEDENT, "", end))
    tokens.append(Token(EOF, "", end))
    return tokens


def _scan_indentation(sc: Scanner) -> tuple[int, bool]:
    """Measure leading spaces; returns (width, line_is_blank_or_comment)."""
    width = 0
    while not sc.at_end() and sc.peek() == " ":
        width += 1
        sc.advance()
    if not sc.at_end() and sc.peek() == "\t":
        raise sc.error("tab in indentation is not supported")
    if sc.at_end():
        return width, True
    if sc.peek() == "\n":
        sc.advance()
        return width, True
    if sc.peek() == "#":
        while not sc.at_end() and sc.peek() != "\n":
            sc.advance()
        if not sc.at_end():
            sc.advance()
        return width, True
    return width, False


def _scan_number(sc: Scanner) -> str:
    start = sc.pos
    while not sc.at_end() and (sc.peek().isdigit() or sc.peek() == "_"):
        sc.advance()
    if sc.peek() == "." and sc.peek(1).isdigit():
        sc.advance()
        while not sc.at_end() and sc.peek().isdigit():
            sc.advance()
    if sc.peek() in "eE" and (sc.peek(1).isdigit() or
                              (sc.peek(1) in "+-" and sc.peek(2).isdigit())):
        sc.advance(2 if sc.peek(1) in "+-" else 1)
        while not sc.at_end() and sc.peek().isdigit():
            sc.advance()
    if sc.peek() in "jJ":
        sc.advance()
    return sc.source[start:sc.pos]


def _scan_string(sc: Scanner) -> str:
    start = sc.pos
    quote = sc.peek()
    triple = sc.starts_with(quote * 3)
    closer = quote * 3 if triple else quote
    sc.advance(len(closer))
    while not sc.at_end():
        if sc.peek() == "\\":
            sc.advance(2)
            continue
        if sc.starts_with(closer):
            sc.advance(len(closer))
            return sc.source[start:sc.pos]
        if sc.peek() == "\n" and not triple:
            break
        sc.advance()
    raise sc.error("unterminated string literal", start)


class PythonParser:
    def __init__(self, tokens: list[Token], builder: TreeBuilder):
        self.tokens = tokens
        self.i = 0
        self.b = builder

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in (OP, NAME)

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != EOF:
            self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.peek().text!r}")
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.error(f"expected {kind}, found {self.peek().text!r}")
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().offset)

    def literal(self, text: str) -> NodeId:
        tok = self.expect(text)
        return self.b.terminal(tok.text, tok.text)

    def name_terminal(self) -> NodeId:
        tok = self.peek()
        if tok.kind != NAME or tok.text in KEYWORDS:
            raise self.error(f"expected identifier, found {tok.text!r}")
        self.advance()
        return self.b.terminal("identifier", tok.text)

    # --- entry ---

    def parse_module(self) -> NodeId:
        children: list[NodeId] = []
        while self.peek().kind != EOF:
            children.append(self.parse_statement())
        return self.b.interior("module", children)

    # --- statements ---

    def parse_statement(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NAME:
            handler = {
                "def": self.parse_function_definition,
                "if": self.parse_if,
                "for": self.parse_for,
                "while": self.parse_while,
            }.get(tok.text)
            if handler is not None:
                return handler()
            if tok.text in ("return", "pass", "break", "continue"):
                stmt = self.parse_simple_statement()
                self.expect_kind(NEWLINE)
                return stmt
        stmt = self.parse_simple_statement()
        while self.at(";"):
            # separators inside one logical line belong to no statement node
            raise self.error("compound simple-statement lines are not supported")
        self.expect_kind(NEWLINE)
        return stmt

    def parse_simple_statement(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NAME:
            if tok.text == "return":
                children = [self.literal("return")]
                if not self.at_kind(NEWLINE) and not self.at(";"):
                    children.append(self.parse_expression())
                return self.b.interior("return_statement", children)
            if tok.text in ("pass", "break", "continue"):
                return self.b.interior(f"{tok.text}_statement", [self.literal(tok.text)])
        return self.parse_expression_statement()

    def parse_expression_statement(self) -> NodeId:
        first = self.parse_expression()
        tok = self.peek()
        if tok.kind == OP and tok.text == "=":
            eq = self.literal("=")
            rhs = self.parse_expression()
            inner = self.b.interior("assignment", [first, eq, rhs])
            return self.b.interior("expression_statement", [inner])
        if tok.kind == OP and tok.text in AUGMENTED_OPS:
            op = self.advance()
            op_id = self.b.terminal(op.text, op.text)
            rhs = self.parse_expression()
            inner = self.b.interior("augmented_assignment", [first, op_id, rhs])
            return self.b.interior("expression_statement", [inner])
        return self.b.interior("expression_statement", [first])

    def parse_function_definition(self) -> NodeId:
        children = [self.literal("def"), self.name_terminal(), self.parse_parameters(),
                    self.literal(":"), self.parse_block()]
        return self.b.interior("function_definition", children)

    def parse_parameters(self) -> NodeId:
        children = [self.literal("(")]
        if not self.at(")"):
            children.append(self.parse_parameter())
            while self.at(","):
                children.append(self.literal(","))
                children.append(self.parse_parameter())
        children.append(self.literal(")"))
        return self.b.interior("parameters", children)

    def parse_parameter(self) -> NodeId:
        name = self.name_terminal()
        if self.at("="):
            eq = self.literal("=")
            value = self.parse_expression()
            return self.b.interior("default_parameter", [name, eq, value])
        return name

    def parse_block(self) -> NodeId:
        """Suite after ':': an indented statement list, or statements inline."""
        if self.at_kind(NEWLINE):
            self.advance()
            self.expect_kind(INDENT)
            children: list[NodeId] = []
            while not self.at_kind(DEDENT) and self.peek().kind != EOF:
                children.append(self.parse_statement())
            self.expect_kind(DEDENT)
            return self.b.interior("block", children)
        children = [self.parse_simple_statement()]
        self.expect_kind(NEWLINE)
        return self.b.interior("block", children)

    def parse_if(self) -> NodeId:
        children = [self.literal("if"), self.parse_expression(), self.literal(":"),
                    self.parse_block()]
        while self.at("elif"):
            clause = [self.literal("elif"), self.parse_expression(), self.literal(":"),
                      self.parse_block()]
            children.append(self.b.interior("elif_clause", clause))
        if self.at("else"):
            clause = [self.literal("else"), self.literal(":"), self.parse_block()]
            children.append(self.b.interior("else_clause", clause))
        return self.b.interior("if_statement", children)

    def parse_for(self) -> NodeId:
        children = [self.literal("for"), self.parse_target(), self.literal("in"),
                    self.parse_expression(), self.literal(":"), self.parse_block()]
        return self.b.interior("for_statement", children)

    def parse_target(self) -> NodeId:
        first = self.name_terminal()
        if not self.at(","):
            return first
        children = [first]
        while self.at(","):
            children.append(self.literal(","))
            children.append(self.name_terminal())
        return self.b.interior("pattern_list", children)

    def parse_while(self) -> NodeId:
        children = [self.literal("while"), self.parse_expression(), self.literal(":"),
                    self.parse_block()]
        return self.b.interior("while_statement", children)

    # --- expressions ---

    def parse_expression(self) -> NodeId:
        return self.parse_or()

    def parse_or(self) -> NodeId:
        left = self.parse_and()
        while self.at("or"):
            op = self.literal("or")
            right = self.parse_and()
            left = self.b.interior("boolean_operator", [left, op, right])
        return left

    def parse_and(self) -> NodeId:
        left = self.parse_not()
        while self.at("and"):
            op = self.literal("and")
            right = self.parse_not()
            left = self.b.interior("boolean_operator", [left, op, right])
        return left

    def parse_not(self) -> NodeId:
        if self.at("not") and self.peek(1).text != "in":
            op = self.literal("not")
            return self.b.interior("not_operator", [op, self.parse_not()])
        return self.parse_comparison()

    def parse_comparison(self) -> NodeId:
        left = self.parse_binary(0)
        if not self._at_comparison_op():
            return left
        children = [left]
        while self._at_comparison_op():
            children.extend(self._comparison_op_terminals())
            children.append(self.parse_binary(0))
        return self.b.interior("comparison_operator", children)

    def _at_comparison_op(self) -> bool:
        tok = self.peek()
        if tok.kind == OP and tok.text in COMPARISON_OPS:
            return True
        return tok.kind == NAME and tok.text in ("in", "is", "not")

    def _comparison_op_terminals(self) -> list[NodeId]:
        tok = self.peek()
        if tok.kind == OP:
            self.advance()
            return [self.b.terminal(tok.text, tok.text)]
        if tok.text == "not":
            return [self.literal("not"), self.literal("in")]
        if tok.text == "is":
            parts = [self.literal("is")]
            if self.at("not"):
                parts.append(self.literal("not"))
            return parts
        return [self.literal("in")]

    def parse_binary(self, level: int) -> NodeId:
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        ops = BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while self.peek().kind == OP and self.peek().text in ops:
            op = self.advance()
            op_id = self.b.terminal(op.text, op.text)
            right = self.parse_binary(level + 1)
            left = self.b.interior("binary_operator", [left, op_id, right])
        return left

    def parse_unary(self) -> NodeId:
        tok = self.peek()
        if tok.kind == OP and tok.text in ("-", "+", "~"):
            self.advance()
            op_id = self.b.terminal(tok.text, tok.text)
            return self.b.interior("unary_operator", [op_id, self.parse_unary()])
        return self.parse_power()

    def parse_power(self) -> NodeId:
        base = self.parse_postfix()
        if self.at("**"):
            op = self.literal("**")
            exponent = self.parse_unary()  # right-associative
            return self.b.interior("binary_operator", [base, op, exponent])
        return base

    def parse_postfix(self) -> NodeId:
        node = self.parse_atom()
        while True:
            if self.at("."):
                dot = self.literal(".")
                attr = self.name_terminal()
                node = self.b.interior("attribute", [node, dot, attr])
            elif self.at("("):
                node = self.b.interior("call", [node, self.parse_argument_list()])
            elif self.at("["):
                children = [node, self.literal("["), self.parse_expression(), self.literal("]")]
                node = self.b.interior("subscript", children)
            else:
                return node

    def parse_argument_list(self) -> NodeId:
        children = [self.literal("(")]
        if not self.at(")"):
            children.append(self.parse_argument())
            while self.at(","):
                children.append(self.literal(","))
                children.append(self.parse_argument())
        children.append(self.literal(")"))
        return self.b.interior("argument_list", children)

    def parse_argument(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NAME and tok.text not in KEYWORDS and self.peek(1).text == "=":
            name = self.name_terminal()
            eq = self.literal("=")
            value = self.parse_expression()
            return self.b.interior("keyword_argument", [name, eq, value])
        return self.parse_expression()

    def parse_atom(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            node_type = "float" if ("." in tok.text or
                                    "e" in tok.text.lower().rstrip("jJ")) else "integer"
            return self.b.terminal(node_type, tok.text)
        if tok.kind == STRING:
            self.advance()
            return self.b.terminal("string", tok.text)
        if tok.kind == NAME:
            if tok.text == "True":
                self.advance()
                return self.b.terminal("true", "True")
            if tok.text == "False":
                self.advance()
                return self.b.terminal("false", "False")
            if tok.text == "None":
                self.advance()
                return self.b.terminal("none", "None")
            if tok.text not in KEYWORDS:
                return self.name_terminal()
            raise self.error(f"unexpected keyword {tok.text!r} in expression")
        if self.at("("):
            return self.parse_paren_or_tuple()
        if self.at("["):
            return self.parse_list()
        raise self.error(f"unexpected token {tok.text!r} in expression")

    def parse_paren_or_tuple(self) -> NodeId:
        open_p = self.literal("(")
        if self.at(")"):
            return self.b.interior("tuple", [open_p, self.literal(")")])
        first = self.parse_expression()
        if self.at(","):
            children = [open_p, first]
            while self.at(","):
                children.append(self.literal(","))
                if self.at(")"):
                    break
                children.append(self.parse_expression())
            children.append(self.literal(")"))
            return self.b.interior("tuple", children)
        return self.b.interior("parenthesized_expression", [open_p, first, self.literal(")")])

    def parse_list(self) -> NodeId:
        children = [self.literal("[")]
        if not self.at("]"):
            children.append(self.parse_expression())
            while self.at(","):
                children.append(self.literal(","))
                if self.at("]"):
                    break
                children.append(self.parse_expression())
        children.append(self.literal("]"))
        return self.b.interior("list", children)


def parse_python(source: str) -> Ast:
    tokens = tokenize(source)
    if tokens[0].kind == EOF:
        raise ParseError("empty source", 0)
    builder = TreeBuilder("python")
    parser = PythonParser(tokens, builder)
    root = parser.parse_module()
    if parser.peek().kind != EOF:
        raise parser.error(f"trailing input {parser.peek().text!r}")
    return builder.build(root)
