"""
Recursive-descent parser for exponential polynomials, Khovanskii systems and
constraint formulas.

Grammar (whitespace-insensitive):

    term    := sum
    sum     := prod (('+' | '-') prod)*
    prod    := unary ('*' unary)*
    unary   := '-' unary | pow
    pow     := atom ('^' NAT)?
    atom    := INT | VAR | 'E' '(' term ')' | '(' term ')'
    VAR     := 'x' NAT | 'y' NAT? | 'z' NAT? | 'c' NAT

    formula := conj ('|' conj)*
    conj    := neg ('&' neg)*
    neg     := '!' neg | '(' formula ')' | term REL term
    REL     := '=' | '!=' | '<' | '<=' | '>' | '>='

A system is a `vars:` header (a count, or a comma-separated list of names)
followed by one equation per line or per ';'-separated statement. Equations
are terms (read as `= 0`) or `lhs = rhs`.
"""
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import ArityError, ParseError
from exppoly.canonical import normalize
from exppoly.terms import Const, Exp, ExpTerm, Pow, Prod, Sum, Var, negate
from syntax.formula import And, Atom, Formula, Not, Or, Relation
from syntax.lexer import EOF, INT, NAME, OP, Token, tokenize

MAX_NESTING = 64

_VAR_RE = re.compile(r"^([xyzc])([1-9]\d*)?$")
_FAMILY_RANK = {"y": 0, "z": 1, "x": 2, "c": 3}
_RELATIONS = {"=", "!=", "<", "<=", ">", ">="}
_ATOM_START = ("INT", "variable", "E", "(", "-")


def is_variable_name(text: str) -> bool:
    match = _VAR_RE.match(text)
    if not match:
        return False
    family, digits = match.groups()
    return digits is not None or family in ("y", "z")


def _name_key(name: str):
    family, digits = _VAR_RE.match(name).groups()
    return (_FAMILY_RANK[family], int(digits) if digits else 0, name)


def default_names(n: int) -> Tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def infer_names(found: Iterable[str]) -> Optional[Tuple[str, ...]]:
    """
    Variable order when no header is given.

    Returns None when only x<k>/c<k> names occur (they keep their own index);
    otherwise y-names come first, then z-names, then x-names, each by number.
    """
    found = set(found)
    if all(name[0] in "xc" for name in found):
        return None
    return tuple(sorted(found, key=_name_key))


class Naming:
    """Maps variable names to 1-based indices"""

    def __init__(self, names: Optional[Sequence[str]] = None):
        self.names = tuple(names) if names is not None else None
        self._index: Dict[str, int] = {name: i for i, name in enumerate(self.names or (), start=1)}

    def index_of(self, token: Token) -> int:
        if not is_variable_name(token.text):
            raise ParseError(f"unknown name {token.text!r}", token.line, token.column, _ATOM_START)
        if self.names is not None:
            if token.text not in self._index:
                raise ParseError(f"variable {token.text!r} not declared in vars header", token.line, token.column)
            return self._index[token.text]
        if token.text[0] not in "xc":
            raise ParseError(f"variable {token.text!r} needs a vars header", token.line, token.column)
        return int(token.text[1:])


def _statements(text: str) -> List[Tuple[str, int, int]]:
    """Split text into (statement, line, column) on newlines and ';'"""
    statements = []
    for line_number, line in enumerate(text.splitlines() or [""], start=1):
        content = line.split("#", 1)[0]
        column = 1
        for piece in content.split(";"):
            if piece.strip():
                statements.append((piece, line_number, column))
            column += len(piece) + 1
    return statements


def _tokens_of(text: str) -> List[Token]:
    tokens: List[Token] = []
    lines = text.splitlines() or [""]
    for line_number, line in enumerate(lines, start=1):
        line_tokens = tokenize(line, line_number)
        tokens.extend(line_tokens[:-1])
    last = len(lines)
    tokens.append(Token(EOF, "", last, len(lines[-1]) + 1))
    return tokens


def _variable_names(tokens: Iterable[Token]) -> List[str]:
    return [t.text for t in tokens if t.kind == NAME and t.text != "E" and is_variable_name(t.text)]


class Parser:
    """Cursor over a token list; one instance per parse call"""

    def __init__(self, tokens: List[Token], naming: Naming):
        self.tokens = tokens
        self.pos = 0
        self.naming = naming
        self.depth = 0

    # ---- cursor helpers -------------------------------------------------
    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def at(self, *texts: str) -> bool:
        token = self.current
        return token.kind == OP and token.text in texts

    def advance(self) -> Token:
        token = self.current
        if token.kind != EOF:
            self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"unexpected {self.current}", (text,))
        return self.advance()

    def fail(self, detail: str, expected: Iterable[str] = ()):
        token = self.current
        raise ParseError(detail, token.line, token.column, expected)

    def expect_end(self):
        if self.current.kind != EOF:
            self.fail(f"unexpected {self.current}", ("end of input",))

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail("expression nested too deeply")

    def _leave(self):
        self.depth -= 1

    # ---- terms ----------------------------------------------------------
    def term(self) -> ExpTerm:
        terms = [self.prod()]
        while self.at("+", "-"):
            op = self.advance().text
            operand = self.prod()
            terms.append(operand if op == "+" else negate(operand))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def prod(self) -> ExpTerm:
        factors = [self.unary()]
        while self.at("*"):
            self.advance()
            factors.append(self.unary())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def unary(self) -> ExpTerm:
        if self.at("-"):
            self.advance()
            self._enter()
            operand = self.unary()
            self._leave()
            return negate(operand)
        return self.power()

    def power(self) -> ExpTerm:
        base = self.atom()
        if self.at("^"):
            self.advance()
            token = self.current
            if token.kind != INT:
                self.fail(f"unexpected {token}", ("NAT",))
            self.advance()
            return Pow(base, int(token.text))
        return base

    def atom(self) -> ExpTerm:
        token = self.current
        if token.kind == INT:
            self.advance()
            return Const(int(token.text))
        if token.kind == NAME and token.text == "E":
            self.advance()
            self.expect("(")
            self._enter()
            argument = self.term()
            self._leave()
            self.expect(")")
            return Exp(argument)
        if token.kind == NAME:
            index = self.naming.index_of(token)
            self.advance()
            return Var(index)
        if self.at("("):
            self.advance()
            self._enter()
            inner = self.term()
            self._leave()
            self.expect(")")
            return inner
        self.fail(f"unexpected {token}", _ATOM_START)

    def equation(self) -> ExpTerm:
        lhs = self.term()
        if self.at("="):
            self.advance()
            rhs = self.term()
            return Sum((lhs, negate(rhs)))
        return lhs

    # ---- formulas -------------------------------------------------------
    def formula(self) -> Formula:
        operands = [self.conj()]
        while self.at("|"):
            self.advance()
            operands.append(self.conj())
        return operands[0] if len(operands) == 1 else Or(tuple(operands))

    def conj(self) -> Formula:
        operands = [self.neg()]
        while self.at("&"):
            self.advance()
            operands.append(self.neg())
        return operands[0] if len(operands) == 1 else And(tuple(operands))

    def neg(self) -> Formula:
        if self.at("!"):
            self.advance()
            self._enter()
            operand = self.neg()
            self._leave()
            return Not(operand)
        if self.at("("):
            start, depth = self.pos, self.depth
            try:
                return self.relation_atom()
            except ParseError as atom_error:
                self.pos, self.depth = start, depth
                self.advance()
                self._enter()
                try:
                    inner = self.formula()
                    self.expect(")")
                except ParseError as group_error:
                    # report whichever reading got further
                    raise max(atom_error, group_error, key=lambda e: (e.line, e.column))
                self._leave()
                return inner
        return self.relation_atom()

    def relation_atom(self) -> Atom:
        lhs = self.term()
        token = self.current
        if not (token.kind == OP and token.text in _RELATIONS):
            self.fail(f"unexpected {token}", _RELATIONS)
        self.advance()
        rhs = self.term()
        relation = token.text
        if relation == ">":
            return Atom.build(rhs, Relation.LT, lhs)
        if relation == ">=":
            return Atom.build(rhs, Relation.LE, lhs)
        return Atom.build(lhs, Relation(relation), rhs)


def _naming_for(tokens: List[Token], names: Optional[Sequence[str]]) -> Naming:
    if names is not None:
        return Naming(names)
    return Naming(infer_names(_variable_names(tokens)))


def parse_term(source: str, names: Optional[Sequence[str]] = None) -> ExpTerm:
    tokens = _tokens_of(source)
    parser = Parser(tokens, _naming_for(tokens, names))
    term = parser.term()
    parser.expect_end()
    return term


def parse_formula(source: str, names: Optional[Sequence[str]] = None) -> Formula:
    tokens = _tokens_of(source)
    parser = Parser(tokens, _naming_for(tokens, names))
    formula = parser.formula()
    parser.expect_end()
    return formula


def source_names(source: str) -> List[str]:
    """Variable names occurring in source, in order of appearance"""
    return _variable_names(_tokens_of(source))


def _parse_header(statement: str, line: int, column: int) -> Tuple[Optional[int], Optional[Tuple[str, ...]]]:
    body = statement.split(":", 1)[1]
    offset = column + statement.index(":") + 1
    if body.strip().isdigit():
        n = int(body.strip())
        if n < 1:
            raise ParseError("vars count must be positive", line, offset)
        return n, None
    names = tuple(part.strip() for part in body.split(","))
    for name in names:
        if not is_variable_name(name):
            raise ParseError(f"bad variable name {name!r} in vars header", line, offset)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable in vars header", line, offset)
    return len(names), names


def parse_system(source: str):
    """Parse a Khovanskii system; raises ArityError when #equations != #variables"""
    from khovanskii.system import KhovanskiiSystem

    statements = _statements(source)
    if not statements:
        raise ParseError("empty system", 1, 1, ("vars:", "equation"))
    n, names = None, None
    first, line, column = statements[0]
    if first.strip().startswith("vars") and ":" in first:
        n, names = _parse_header(first, line, column)
        statements = statements[1:]

    token_lists = [tokenize(text, line, column) for text, line, column in statements]
    if names is None:
        found = [name for tokens in token_lists for name in _variable_names(tokens)]
        inferred = infer_names(found)
        if inferred is not None:
            if n is not None and n != len(inferred):
                raise ArityError(f"vars header says {n} variables but {len(inferred)} names occur")
            names = inferred
            n = len(inferred)
        elif n is None:
            n = max((int(name[1:]) for name in found), default=0)
    naming = Naming(names) if names is not None else Naming(None)

    equations = []
    for tokens in token_lists:
        parser = Parser(tokens, naming)
        term = parser.equation()
        parser.expect_end()
        for token in tokens:
            if token.kind == NAME and names is None and is_variable_name(token.text):
                if token.text[0] != "x":
                    raise ParseError(f"only x-variables allowed in systems, got {token.text!r}", token.line, token.column)
                if int(token.text[1:]) > n:
                    raise ParseError(f"variable {token.text} exceeds vars count {n}", token.line, token.column)
        equations.append(normalize(term))
    if len(equations) != n:
        raise ArityError(f"system has {len(equations)} equations in {n} variables")
    return KhovanskiiSystem.build(equations, names)


_NUMBER = r"[-+]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
_INTERVAL_RE = re.compile(rf"^\s*\[\s*({_NUMBER})\s*,\s*({_NUMBER})\s*\]\s*$")


def parse_box(source: str) -> List[Tuple[str, str]]:
    """'[lo, hi]; [lo, hi]; ...' -> list of (lo, hi) decimal strings"""
    pieces = []
    column = 1
    for piece in source.split(";"):
        match = _INTERVAL_RE.match(piece)
        if not match:
            raise ParseError(f"malformed interval {piece.strip()!r}", 1, column, ("[lo, hi]",))
        pieces.append((match.group(1), match.group(2)))
        column += len(piece) + 1
    return pieces
