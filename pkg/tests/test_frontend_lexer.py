from __future__ import annotations

import pytest

from quarry.errors import LexError
from quarry.frontend.tokens import tokenize


def test_simple_declaration():
    tokens = tokenize("int a = 2;")
    assert [t.text for t in tokens] == ["int", "a", "=", "2", ";"]
    assert [t.kind for t in tokens] == ["keyword", "ident", "punct", "number", "punct"]


def test_empty_input():
    assert tokenize("") == []


def test_expression_statement_token_count():
    assert len(tokenize("b = b - a;")) == 6


def test_positions_are_one_based():
    tokens = tokenize("int a;\nint b;")
    assert (tokens[0].line, tokens[0].col) == (1, 1)
    assert (tokens[3].line, tokens[3].col) == (2, 1)
    assert (tokens[4].line, tokens[4].col) == (2, 5)


@pytest.mark.parametrize(
    "source",
    [
        "int a = 2;",
        "b = b - a;  // trailing comment\n",
        "/* lead */ int x; /* mid\nline */ x = 1;",
        'printf("a + b = %d", a + b);',
        "while (i <= 10) { i = i + 1; }",
        "p = &buf[2]; *p = 0;",
    ],
)
def test_tokens_reproduce_source(source: str):
    tokens = tokenize(source)
    rebuilt = []
    cursor = 0
    for tok in tokens:
        rebuilt.append(source[cursor : tok.offset])
        rebuilt.append(tok.text)
        assert source[tok.offset : tok.end] == tok.text
        cursor = tok.end
    rebuilt.append(source[cursor:])
    assert "".join(rebuilt) == source


def test_string_with_escapes():
    tokens = tokenize('s = "he said \\"hi\\"";')
    assert tokens[2].kind == "string"
    assert tokens[2].text == '"he said \\"hi\\""'


def test_two_char_operators():
    tokens = tokenize("a <= b != c && d || !e")
    texts = [t.text for t in tokens]
    assert texts == ["a", "<=", "b", "!=", "c", "&&", "d", "||", "!", "e"]


def test_illegal_character_reports_position():
    with pytest.raises(LexError) as err:
        tokenize("int a;\nint @b;", file="bad.c")
    assert err.value.line == 2
    assert err.value.col == 5
    assert "bad.c" in str(err.value)


def test_unterminated_string():
    with pytest.raises(LexError):
        tokenize('s = "oops;')


def test_comments_are_skipped():
    tokens = tokenize("// whole line\nint a; /* block */ int b;")
    assert [t.text for t in tokens] == ["int", "a", ";", "int", "b", ";"]
