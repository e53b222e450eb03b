"""Recursive-descent front-end for a Java subset.

Covers class and method declarations plus the statement and expression forms
common in method-level corpora. Node type names follow the conventional
grammar production names (binary_expression, parenthesized_expression, ...);
keywords, operators and punctuation become terminals whose node_type is the
literal itself.
"""

from astsearch.errors import ParseError
from astsearch.ast_repr.lex import (
    CHAR, EOF, NAME, NUMBER, OP, STRING, Scanner, Token,
    is_identifier_start, longest_operator, scan_identifier,
)
from astsearch.ast_repr.tree import Ast, NodeId, TreeBuilder

KEYWORDS = {
    "abstract", "boolean", "break", "byte", "case", "catch", "char", "class",
    "continue", "default", "do", "double", "else", "extends", "final",
    "finally", "float", "for", "if", "implements", "import", "instanceof",
    "int", "interface", "long", "native", "new", "null", "package", "private",
    "protected", "public", "return", "short", "static", "super", "switch",
    "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false",
}

MODIFIERS = {"public", "private", "protected", "static", "final", "abstract", "synchronized"}

INTEGRAL_TYPES = {"byte", "short", "int", "long", "char"}
FLOATING_TYPES = {"float", "double"}

# length-descending for longest-match scanning
OPERATORS = sorted([
    ">>>=", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->", "::",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "=", "<", ">", "+", "-", "*",
    "/", "%", "!", "~", "&", "|", "^", "?", ":", "@",
], key=len, reverse=True)

BINARY_LEVELS = [
    ["||"], ["&&"], ["|"], ["^"], ["&"], ["==", "!="],
    ["<", ">", "<=", ">="], ["<<", ">>", ">>>"], ["+", "-"], ["*", "/", "%"],
]

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}


def tokenize(source: str) -> list[Token]:
    """Lex Java source into tokens; comments and whitespace are dropped."""
    sc = Scanner(source)
    tokens: list[Token] = []
    while not sc.at_end():
        ch = sc.peek()
        if ch in " \t\r\n\f":
            sc.advance()
            continue
        if sc.starts_with("//"):
            while not sc.at_end() and sc.peek() != "\n":
                sc.advance()
            continue
        if sc.starts_with("/*"):
            start = sc.pos
            sc.advance(2)
            while not sc.at_end() and not sc.starts_with("*/"):
                sc.advance()
            if sc.at_end():
                raise sc.error("unterminated block comment", start)
            sc.advance(2)
            continue
        offset = sc.byte_offset()
        if is_identifier_start(ch):
            tokens.append(Token(NAME, scan_identifier(sc), offset))
            continue
        if ch.isdigit() or (ch == "." and sc.peek(1).isdigit()):
            tokens.append(Token(NUMBER, _scan_number(sc), offset))
            continue
        if ch == '"':
            tokens.append(Token(STRING, _scan_quoted(sc, '"'), offset))
            continue
        if ch == "'":
            tokens.append(Token(CHAR, _scan_quoted(sc, "'"), offset))
            continue
        op = longest_operator(sc, OPERATORS)
        if op is not None:
            sc.advance(len(op))
            tokens.append(Token(OP, op, offset))
            continue
        raise sc.error(f"unexpected character {ch!r}")
    tokens.append(Token(EOF, "", sc.byte_offset()))
    return tokens


def _scan_number(sc: Scanner) -> str:
    start = sc.pos
    if sc.starts_with("0x") or sc.starts_with("0X"):
        sc.advance(2)
        while not sc.at_end() and (sc.peek() in "0123456789abcdefABCDEF"):
            sc.advance()
    else:
        while not sc.at_end() and sc.peek().isdigit():
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
    if sc.peek() in "lLfFdD":
        sc.advance()
    return sc.source[start:sc.pos]


def _scan_quoted(sc: Scanner, quote: str) -> str:
    start = sc.pos
    sc.advance()
    while not sc.at_end():
        ch = sc.peek()
        if ch == "\\":
            sc.advance(2)
            continue
        if ch == quote:
            sc.advance()
            return sc.source[start:sc.pos]
        if ch == "\n":
            break
        sc.advance()
    raise sc.error("unterminated literal", start)


def _number_node_type(text: str) -> str:
    if text.lower().startswith("0x"):
        return "hex_integer_literal"
    if "." in text or "e" in text.lower().rstrip("lLfFdD") or text[-1] in "fFdD":
        return "decimal_floating_point_literal"
    return "decimal_integer_literal"


class JavaParser:
    def __init__(self, tokens: list[Token], builder: TreeBuilder):
        self.tokens = tokens
        self.i = 0
        self.b = builder

    # --- token helpers ---

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in (OP, NAME)

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != EOF:
            self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.peek().text!r}")
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().offset)

    def literal(self, text: str) -> NodeId:
        """Consume a keyword/operator token and emit it as a terminal."""
        tok = self.expect(text)
        return self.b.terminal(tok.text, tok.text)

    def name_terminal(self, node_type: str = "identifier") -> NodeId:
        tok = self.peek()
        if tok.kind != NAME or tok.text in KEYWORDS:
            raise self.error(f"expected identifier, found {tok.text!r}")
        self.advance()
        return self.b.terminal(node_type, tok.text)

    # --- entry ---

    def parse_program(self) -> NodeId:
        children: list[NodeId] = []
        while self.peek().kind != EOF:
            children.append(self.parse_top_level())
        return self.b.interior("program", children)

    def parse_top_level(self) -> NodeId:
        if self._class_ahead():
            return self.parse_class_declaration()
        method = self._try(self.parse_method_declaration)
        if method is not None:
            return method
        return self.parse_statement()

    def _class_ahead(self) -> bool:
        j = 0
        while self.peek(j).text in MODIFIERS:
            j += 1
        return self.peek(j).text == "class"

    def _try(self, parser):
        saved = self.i
        saved_ids = self.b._counter
        try:
            return parser()
        except ParseError:
            self.i = saved
            # discard nodes created by the failed attempt
            for node_id in [k for k in self.b.nodes if isinstance(k, int) and k > saved_ids]:
                del self.b.nodes[node_id]
            self.b._counter = saved_ids
            return None

    # --- declarations ---

    def parse_class_declaration(self) -> NodeId:
        children: list[NodeId] = []
        mods = self._parse_modifiers()
        if mods is not None:
            children.append(mods)
        children.append(self.literal("class"))
        children.append(self.name_terminal())
        children.append(self.parse_class_body())
        return self.b.interior("class_declaration", children)

    def parse_class_body(self) -> NodeId:
        children = [self.literal("{")]
        while not self.at("}") and self.peek().kind != EOF:
            children.append(self.parse_method_declaration())
        children.append(self.literal("}"))
        return self.b.interior("class_body", children)

    def _parse_modifiers(self) -> NodeId | None:
        mods: list[NodeId] = []
        while self.peek().kind == NAME and self.peek().text in MODIFIERS:
            tok = self.advance()
            mods.append(self.b.terminal(tok.text, tok.text))
        return self.b.interior("modifiers", mods) if mods else None

    def parse_method_declaration(self) -> NodeId:
        children: list[NodeId] = []
        mods = self._parse_modifiers()
        if mods is not None:
            children.append(mods)
        children.append(self.parse_type(allow_void=True))
        children.append(self.name_terminal())
        if not self.at("("):
            raise self.error("expected '(' after method name")
        children.append(self.parse_formal_parameters())
        if self.at("throws"):
            children.append(self.parse_throws())
        children.append(self.parse_block())
        return self.b.interior("method_declaration", children)

    def parse_throws(self) -> NodeId:
        children = [self.literal("throws"), self.parse_type()]
        while self.at(","):
            children.append(self.literal(","))
            children.append(self.parse_type())
        return self.b.interior("throws", children)

    def parse_formal_parameters(self) -> NodeId:
        children = [self.literal("(")]
        if not self.at(")"):
            children.append(self.parse_formal_parameter())
            while self.at(","):
                children.append(self.literal(","))
                children.append(self.parse_formal_parameter())
        children.append(self.literal(")"))
        return self.b.interior("formal_parameters", children)

    def parse_formal_parameter(self) -> NodeId:
        return self.b.interior("formal_parameter", [self.parse_type(), self.name_terminal()])

    # --- types ---

    def parse_type(self, allow_void: bool = False) -> NodeId:
        tok = self.peek()
        if tok.kind != NAME:
            raise self.error(f"expected type, found {tok.text!r}")
        if tok.text == "void":
            if not allow_void:
                raise self.error("'void' not allowed here")
            self.advance()
            base = self.b.interior("void_type", [self.b.terminal("void", "void")])
        elif tok.text in INTEGRAL_TYPES:
            self.advance()
            base = self.b.interior("integral_type", [self.b.terminal(tok.text, tok.text)])
        elif tok.text in FLOATING_TYPES:
            self.advance()
            base = self.b.interior("floating_point_type", [self.b.terminal(tok.text, tok.text)])
        elif tok.text == "boolean":
            self.advance()
            base = self.b.interior("boolean_type", [self.b.terminal("boolean", "boolean")])
        elif tok.text not in KEYWORDS:
            base = self.name_terminal("type_identifier")
            if self.at("<"):
                base = self.b.interior("generic_type", [base, self.parse_type_arguments()])
        else:
            raise self.error(f"expected type, found {tok.text!r}")
        if self.at("[") and self.peek(1).text == "]":
            dims: list[NodeId] = []
            while self.at("[") and self.peek(1).text == "]":
                dims.append(self.literal("["))
                dims.append(self.literal("]"))
            dimensions = self.b.interior("dimensions", dims)
            base = self.b.interior("array_type", [base, dimensions])
        return base

    def parse_type_arguments(self) -> NodeId:
        children = [self.literal("<"), self.parse_type()]
        while self.at(","):
            children.append(self.literal(","))
            children.append(self.parse_type())
        children.append(self.literal(">"))
        return self.b.interior("type_arguments", children)

    # --- statements ---

    def parse_statement(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NAME:
            handler = {
                "if": self.parse_if, "while": self.parse_while, "for": self.parse_for,
                "return": self.parse_return, "throw": self.parse_throw,
                "break": lambda: self.parse_jump("break"),
                "continue": lambda: self.parse_jump("continue"),
            }.get(tok.text)
            if handler is not None:
                return handler()
        if self.at("{"):
            return self.parse_block()
        decl = self._try(self.parse_local_variable_declaration)
        if decl is not None:
            return decl
        return self.parse_expression_statement()

    def parse_block(self) -> NodeId:
        children = [self.literal("{")]
        while not self.at("}") and self.peek().kind != EOF:
            children.append(self.parse_statement())
        children.append(self.literal("}"))
        return self.b.interior("block", children)

    def parse_local_variable_declaration(self) -> NodeId:
        children = [self.parse_type(), self.parse_variable_declarator()]
        while self.at(","):
            children.append(self.literal(","))
            children.append(self.parse_variable_declarator())
        children.append(self.literal(";"))
        return self.b.interior("local_variable_declaration", children)

    def parse_variable_declarator(self) -> NodeId:
        children = [self.name_terminal()]
        if self.at("="):
            children.append(self.literal("="))
            children.append(self.parse_expression())
        return self.b.interior("variable_declarator", children)

    def parse_expression_statement(self) -> NodeId:
        expr = self.parse_expression()
        semi = self.literal(";")
        return self.b.interior("expression_statement", [expr, semi])

    def parse_parenthesized(self) -> NodeId:
        children = [self.literal("("), self.parse_expression(), self.literal(")")]
        return self.b.interior("parenthesized_expression", children)

    def parse_if(self) -> NodeId:
        children = [self.literal("if"), self.parse_parenthesized(), self.parse_statement()]
        if self.at("else"):
            children.append(self.literal("else"))
            children.append(self.parse_statement())
        return self.b.interior("if_statement", children)

    def parse_while(self) -> NodeId:
        children = [self.literal("while"), self.parse_parenthesized(), self.parse_statement()]
        return self.b.interior("while_statement", children)

    def parse_for(self) -> NodeId:
        enhanced = self._try(self.parse_enhanced_for)
        if enhanced is not None:
            return enhanced
        children = [self.literal("for"), self.literal("(")]
        init = self._try(self.parse_local_variable_declaration)
        if init is not None:
            children.append(init)  # declaration owns the first ';'
        else:
            if not self.at(";"):
                children.append(self.parse_expression())
            children.append(self.literal(";"))
        if not self.at(";"):
            children.append(self.parse_expression())
        children.append(self.literal(";"))
        if not self.at(")"):
            children.append(self.parse_expression())
        children.append(self.literal(")"))
        children.append(self.parse_statement())
        return self.b.interior("for_statement", children)

    def parse_enhanced_for(self) -> NodeId:
        children = [self.literal("for"), self.literal("("), self.parse_type(),
                    self.name_terminal(), self.literal(":"), self.parse_expression(),
                    self.literal(")"), self.parse_statement()]
        return self.b.interior("enhanced_for_statement", children)

    def parse_return(self) -> NodeId:
        children = [self.literal("return")]
        if not self.at(";"):
            children.append(self.parse_expression())
        children.append(self.literal(";"))
        return self.b.interior("return_statement", children)

    def parse_throw(self) -> NodeId:
        children = [self.literal("throw"), self.parse_expression(), self.literal(";")]
        return self.b.interior("throw_statement", children)

    def parse_jump(self, keyword: str) -> NodeId:
        return self.b.interior(f"{keyword}_statement", [self.literal(keyword), self.literal(";")])

    # --- expressions ---

    def parse_expression(self) -> NodeId:
        return self.parse_assignment()

    def parse_assignment(self) -> NodeId:
        lhs_start = self.i
        lhs = self.parse_ternary()
        if self.peek().kind == OP and self.peek().text in ASSIGN_OPS:
            lhs_type = self.b.nodes[lhs].node_type
            if lhs_type not in ("identifier", "field_access", "array_access"):
                raise ParseError("invalid assignment target", self.tokens[lhs_start].offset)
            op = self.advance()
            op_id = self.b.terminal(op.text, op.text)
            rhs = self.parse_assignment()  # right-associative
            return self.b.interior("assignment_expression", [lhs, op_id, rhs])
        return lhs

    def parse_ternary(self) -> NodeId:
        cond = self.parse_binary(0)
        if self.at("?"):
            children = [cond, self.literal("?"), self.parse_expression(),
                        self.literal(":"), self.parse_expression()]
            return self.b.interior("ternary_expression", children)
        return cond

    def parse_binary(self, level: int) -> NodeId:
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        ops = BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while self.peek().kind == OP and self.peek().text in ops:
            op = self.advance()
            op_id = self.b.terminal(op.text, op.text)
            right = self.parse_binary(level + 1)
            left = self.b.interior("binary_expression", [left, op_id, right])
        return left

    def parse_unary(self) -> NodeId:
        tok = self.peek()
        if tok.kind == OP and tok.text in ("!", "~", "+", "-"):
            self.advance()
            op_id = self.b.terminal(tok.text, tok.text)
            return self.b.interior("unary_expression", [op_id, self.parse_unary()])
        if tok.kind == OP and tok.text in ("++", "--"):
            self.advance()
            op_id = self.b.terminal(tok.text, tok.text)
            return self.b.interior("update_expression", [op_id, self.parse_unary()])
        return self.parse_postfix()

    def parse_postfix(self) -> NodeId:
        node = self.parse_primary()
        while True:
            if self.at("."):
                dot = self.literal(".")
                member = self.name_terminal()
                if self.at("("):
                    args = self.parse_argument_list()
                    node = self.b.interior("method_invocation", [node, dot, member, args])
                else:
                    node = self.b.interior("field_access", [node, dot, member])
            elif self.at("(") and self.b.nodes[node].node_type == "identifier":
                args = self.parse_argument_list()
                node = self.b.interior("method_invocation", [node, args])
            elif self.at("["):
                children = [node, self.literal("["), self.parse_expression(), self.literal("]")]
                node = self.b.interior("array_access", children)
            elif self.peek().kind == OP and self.peek().text in ("++", "--"):
                op = self.advance()
                node = self.b.interior("update_expression",
                                       [node, self.b.terminal(op.text, op.text)])
            else:
                return node

    def parse_argument_list(self) -> NodeId:
        children = [self.literal("(")]
        if not self.at(")"):
            children.append(self.parse_expression())
            while self.at(","):
                children.append(self.literal(","))
                children.append(self.parse_expression())
        children.append(self.literal(")"))
        return self.b.interior("argument_list", children)

    def parse_primary(self) -> NodeId:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            return self.b.terminal(_number_node_type(tok.text), tok.text)
        if tok.kind == STRING:
            self.advance()
            return self.b.terminal("string_literal", tok.text)
        if tok.kind == CHAR:
            self.advance()
            return self.b.terminal("character_literal", tok.text)
        if tok.kind == NAME:
            if tok.text in ("true", "false"):
                self.advance()
                return self.b.terminal(tok.text, tok.text)
            if tok.text == "null":
                self.advance()
                return self.b.terminal("null_literal", "null")
            if tok.text == "this":
                self.advance()
                return self.b.terminal("this", "this")
            if tok.text == "new":
                return self.parse_new()
            if tok.text not in KEYWORDS:
                return self.name_terminal()
            raise self.error(f"unexpected keyword {tok.text!r} in expression")
        if self.at("("):
            return self.parse_parenthesized()
        raise self.error(f"unexpected token {tok.text!r} in expression")

    def parse_new(self) -> NodeId:
        new_kw = self.literal("new")
        created = self.parse_type()
        if self.at("["):
            dims = self.b.interior(
                "dimensions_expr",
                [self.literal("["), self.parse_expression(), self.literal("]")])
            return self.b.interior("array_creation_expression", [new_kw, created, dims])
        args = self.parse_argument_list()
        return self.b.interior("object_creation_expression", [new_kw, created, args])


def parse_java(source: str) -> Ast:
    tokens = tokenize(source)
    if tokens[0].kind == EOF:
        raise ParseError("empty source", 0)
    builder = TreeBuilder("java")
    parser = JavaParser(tokens, builder)
    root = parser.parse_program()
    if parser.peek().kind != EOF:
        raise parser.error(f"trailing input {parser.peek().text!r}")
    return builder.build(root)
