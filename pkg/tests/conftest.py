"""Shared fixtures: the golden condition-subtree and desk corpus access."""

import pytest

from astsearch.ast_repr import TreeBuilder
from astsearch.data import desk_corpus_path


@pytest.fixture(scope="session")
def desk_java_path():
    return desk_corpus_path("java")


@pytest.fixture(scope="session")
def desk_python_path():
    return desk_corpus_path("python")


def build_condition_tree():
    """Hand-built sub-tree of `if ((cnt > 2) && (obj != null)) { return; }`.

    Returns (ast, names) where names maps semantic labels to node ids:
    root if_statement; its condition in parentheses; the `&&` conjunction
    whose operands are parenthesized comparisons; and the leaf `cnt` at
    depth 5 whose parent is the left comparison at depth 4.
    """
    b = TreeBuilder("java")
    names = {}

    names["lhs_var"] = b.terminal("identifier", "cnt")
    lhs_op = b.terminal(">", ">")
    lhs_lit = b.terminal("decimal_integer_literal", "2")
    names["lhs_cmp"] = b.interior("binary_expression", [names["lhs_var"], lhs_op, lhs_lit])
    names["lhs_paren"] = b.interior(
        "parenthesized_expression",
        [b.terminal("(", "("), names["lhs_cmp"], b.terminal(")", ")")])

    rhs_var = b.terminal("identifier", "obj")
    rhs_op = b.terminal("!=", "!=")
    rhs_null = b.terminal("null_literal", "null")
    names["rhs_cmp"] = b.interior("binary_expression", [rhs_var, rhs_op, rhs_null])
    names["rhs_paren"] = b.interior(
        "parenthesized_expression",
        [b.terminal("(", "("), names["rhs_cmp"], b.terminal(")", ")")])

    names["and_expr"] = b.interior(
        "binary_expression",
        [names["lhs_paren"], b.terminal("&&", "&&"), names["rhs_paren"]])
    names["cond"] = b.interior(
        "parenthesized_expression",
        [b.terminal("(", "("), names["and_expr"], b.terminal(")", ")")])

    ret = b.interior("return_statement",
                     [b.terminal("return", "return"), b.terminal(";", ";")])
    names["body"] = b.interior(
        "block", [b.terminal("{", "{"), ret, b.terminal("}", "}")])

    names["root"] = b.interior(
        "if_statement", [b.terminal("if", "if"), names["cond"], names["body"]])
    return b.build(names["root"]), names


@pytest.fixture
def condition_tree():
    return build_condition_tree()
