"""
Regex lexer for the term / system / formula grammar.

Tokens are immutable and carry 1-based line and column so every parse error
can point at its source position.
"""
import re
from typing import List, NamedTuple

from app.core.exceptions import ParseError

INT = "INT"
NAME = "NAME"
OP = "OP"
EOF = "EOF"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|!=|[-+*^()&|!=<>,;\[\]:])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int

    def __str__(self):
        return self.text if self.kind != EOF else "end of input"


def tokenize(source: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split one line of source; newlines are rejected here, callers split lines first"""
    tokens = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if not match:
            raise ParseError(f"unexpected character {source[pos]!r}", line, column + pos)
        kind = match.lastgroup
        text = match.group(kind)
        if kind == "int":
            tokens.append(Token(INT, text, line, column + pos))
        elif kind == "name":
            tokens.append(Token(NAME, text, line, column + pos))
        elif kind == "op":
            tokens.append(Token(OP, text, line, column + pos))
        pos = match.end()
    tokens.append(Token(EOF, "", line, column + len(source)))
    return tokens
