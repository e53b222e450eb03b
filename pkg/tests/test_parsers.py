"""Front-end tests: terminal streams against independent tokenizers."""

import io
import json
import re
import tokenize as std_tokenize

import pytest

from astsearch.ast_repr import parse_code
from astsearch.errors import ParseError, UnsupportedLanguage

# Independent Java token oracle: a single alternation regex, unrelated to the
# production scanner's character-walking implementation.
_JAVA_TOKEN_RE = re.compile(r"""
    //[^\n]* | /\*.*?\*/                                   # comments (dropped)
  | "(?:\\.|[^"\\\n])*" | '(?:\\.|[^'\\\n])*'              # string/char literals
  | 0[xX][0-9a-fA-F]+[lL]?
  | \d+\.\d+(?:[eE][+-]?\d+)?[fFdD]? | \d+(?:[eE][+-]?\d+)?[lLfFdD]?
  | [A-Za-z_][A-Za-z0-9_]*
  | >>>=|>>>|<<=|>>=|==|!=|<=|>=|&&|\|\||\+\+|--|\+=|-=|\*=|/=|%=|&=|\|=|\^=|<<|>>|->|::
  | [(){}\[\];,.=<>+\-*/%!~&|^?:@]
""", re.VERBOSE | re.DOTALL)


def java_oracle_tokens(source: str) -> list[str]:
    out = []
    for match in _JAVA_TOKEN_RE.finditer(source):
        text = match.group(0)
        if text.startswith("//") or text.startswith("/*"):
            continue
        out.append(text)
    return out


def python_oracle_tokens(source: str) -> list[str]:
    """Stdlib tokenize stream with structural/comment tokens removed."""
    skip = {std_tokenize.NEWLINE, std_tokenize.NL, std_tokenize.INDENT,
            std_tokenize.DEDENT, std_tokenize.COMMENT, std_tokenize.ENCODING,
            std_tokenize.ENDMARKER}
    out = []
    for tok in std_tokenize.generate_tokens(io.StringIO(source).readline):
        if tok.type not in skip and tok.string:
            out.append(tok.string)
    return out


THIRTY_LINE_METHOD = """
public class Sorter {
    public int[] organize(int[] values, boolean ascending) {
        int n = values.length;
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n - i - 1; j++) {
                boolean swap = false;
                if (ascending) {
                    if (values[j] > values[j + 1]) {
                        swap = true;
                    }
                } else {
                    if (values[j] < values[j + 1]) {
                        swap = true;
                    }
                }
                if (swap) {
                    int held = values[j];
                    values[j] = values[j + 1];
                    values[j + 1] = held;
                }
            }
        }
        int checksum = 0;
        for (int k = 0; k < n; k++) {
            checksum += values[k] * 31;
        }
        return values;
    }
}
"""


class TestJava:
    def test_minimal_declaration(self):
        ast = parse_code("boolean b;", "java")
        assert ast.node(ast.root).depth == 0
        assert ast.terminal_texts() == ["boolean", "b", ";"]

    def test_empty_source_rejected(self):
        with pytest.raises(ParseError):
            parse_code("", "java")
        with pytest.raises(ParseError):
            parse_code("   \n  ", "java")

    def test_unsupported_language(self):
        with pytest.raises(UnsupportedLanguage):
            parse_code("x", "rust")

    def test_thirty_line_method_token_stream(self):
        ast = parse_code(THIRTY_LINE_METHOD, "java")
        assert ast.terminal_texts() == java_oracle_tokens(THIRTY_LINE_METHOD)

    def test_desk_corpus_token_streams(self, desk_java_path):
        with open(desk_java_path, encoding="utf-8") as f:
            for line in f:
                record = json.loads(line)
                ast = parse_code(record["code"], "java")
                assert ast.terminal_texts() == java_oracle_tokens(record["code"]), record["id"]

    def test_comments_are_excluded(self):
        src = "int f() { // note\n  /* more */ return 1; }"
        ast = parse_code(src, "java")
        assert ast.terminal_texts() == ["int", "f", "(", ")", "{", "return", "1", ";", "}"]

    def test_operator_terminals_carry_literal_type(self):
        ast = parse_code("boolean r = a && b;", "java")
        ops = [n for n in ast.nodes.values() if n.node_type == "&&"]
        assert len(ops) == 1 and ops[0].is_terminal

    def test_parse_error_carries_byte_offset(self):
        with pytest.raises(ParseError) as exc:
            parse_code("int x = `bad`;", "java")
        assert exc.value.offset == 8

    def test_structural_invariants_hold(self):
        ast = parse_code(THIRTY_LINE_METHOD, "java")
        for node in ast.nodes.values():
            assert node.is_terminal == (len(node.children) == 0)
            for child_id in node.children:
                assert ast.node(child_id).depth == node.depth + 1
        reachable = sum(1 for _ in ast.walk())
        assert reachable == len(ast.nodes)


PYTHON_SNIPPET = '''
def summarize(rows, limit=10):
    total = 0
    seen = []
    for row in rows:
        if row is None:
            continue
        value = row.get("count", 0)
        if value > limit:
            total += value
        elif value in seen:
            total -= 1
        else:
            seen.append(value)
    while len(seen) > limit:
        seen.pop()
    return (total, seen)
'''


class TestPython:
    def test_token_stream_matches_stdlib(self):
        ast = parse_code(PYTHON_SNIPPET, "python")
        assert ast.terminal_texts() == python_oracle_tokens(PYTHON_SNIPPET)

    def test_desk_corpus_token_streams(self, desk_python_path):
        with open(desk_python_path, encoding="utf-8") as f:
            for line in f:
                record = json.loads(line)
                ast = parse_code(record["code"], "python")
                assert ast.terminal_texts() == python_oracle_tokens(record["code"]), record["id"]

    def test_string_literal_is_single_terminal(self):
        ast = parse_code('x = "a b c"\n', "python")
        strings = [n for n in ast.nodes.values() if n.node_type == "string"]
        assert len(strings) == 1
        assert strings[0].text == '"a b c"'

    def test_comments_and_blank_lines_excluded(self):
        src = "# header\n\nx = 1  # trailing\n\n\ny = 2\n"
        ast = parse_code(src, "python")
        assert ast.terminal_texts() == ["x", "=", "1", "y", "=", "2"]

    def test_indentation_error_reported(self):
        with pytest.raises(ParseError):
            parse_code("def f():\n    x = 1\n  y = 2\n", "python")

    def test_empty_source_rejected(self):
        with pytest.raises(ParseError):
            parse_code("", "python")
