"""
Printers producing source text that the parser reads back.

Canonical polynomials print in descending monomial order; systems always
carry a `vars:` header.
"""
from typing import Optional, Sequence

from exppoly.canonical import CanonicalPoly, Monomial
from exppoly.terms import Const, Exp, ExpTerm, Pow, Prod, Sum, Var
from syntax.formula import And, Atom, Not, Or


def variable_name(index: int, names: Optional[Sequence[str]] = None) -> str:
    if names is not None and index <= len(names):
        return names[index - 1]
    return f"x{index}"


def _monomial_body(monomial: Monomial, names) -> str:
    factors = []
    for index, exponent in monomial.powers:
        name = variable_name(index, names)
        factors.append(name if exponent == 1 else f"{name}^{exponent}")
    for argument, multiplicity in monomial.atoms:
        atom = f"E({print_poly(argument, names)})"
        factors.append(atom if multiplicity == 1 else f"{atom}^{multiplicity}")
    return "*".join(factors)


def print_poly(p: CanonicalPoly, names: Optional[Sequence[str]] = None) -> str:
    if p.is_zero:
        return "0"
    parts = []
    for position, monomial in enumerate(reversed(p.monomials)):
        magnitude = abs(monomial.coefficient)
        body = _monomial_body(monomial, names)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        negative = monomial.coefficient < 0
        if position == 0:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f" - {text}" if negative else f" + {text}")
    return "".join(parts)


def _wrap(term: ExpTerm, names, sums_only: bool = True) -> str:
    text = print_term(term, names)
    if isinstance(term, Sum) or (not sums_only and isinstance(term, (Prod, Pow))):
        return f"({text})"
    if not sums_only and isinstance(term, Const) and term.value < 0:
        return f"({text})"
    return text


def print_term(t: ExpTerm, names: Optional[Sequence[str]] = None) -> str:
    """Print a raw expression tree; reparsing gives a tree with the same canonical form"""
    if isinstance(t, CanonicalPoly):
        return print_poly(t, names)
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return variable_name(t.index, names)
    if isinstance(t, Exp):
        return f"E({print_term(t.argument, names)})"
    if isinstance(t, Pow):
        return f"{_wrap(t.base, names, sums_only=False)}^{t.exponent}"
    if isinstance(t, Prod):
        if not t.factors:
            return "1"
        factors = list(t.factors)
        prefix = ""
        if len(factors) > 1 and factors[0] == Const(-1):
            prefix = "-"
            factors = factors[1:]
        return prefix + "*".join(_wrap(f, names) for f in factors)
    if isinstance(t, Sum):
        if not t.terms:
            return "0"
        text = _wrap(t.terms[0], names)
        for term in t.terms[1:]:
            if isinstance(term, Const) and term.value < 0:
                text += f" - {-term.value}"
            elif isinstance(term, Prod) and len(term.factors) > 1 and term.factors[0] == Const(-1):
                rest = Prod(term.factors[1:]) if len(term.factors) > 2 else term.factors[1]
                text += f" - {_wrap(rest, names)}"
            else:
                text += f" + {_wrap(term, names)}"
        return text
    raise TypeError(f"not an expression node: {t!r}")


def _header(system) -> str:
    names = system.names
    if names == tuple(f"x{i}" for i in range(1, system.n + 1)):
        return f"vars: {system.n}"
    return "vars: " + ", ".join(names)


def print_system(system) -> str:
    lines = [_header(system)]
    lines.extend(print_poly(f, system.names) for f in system.equations)
    return "\n".join(lines)


def print_system_inline(system) -> str:
    return "; ".join([_header(system)] + [print_poly(f, system.names) for f in system.equations])


def print_interval(interval, digits: int = 17) -> str:
    """`[lo, hi]` with lo rounded down and hi rounded up to `digits` significant digits"""
    return interval.to_decimal(digits)


_OPERATOR_PRECEDENCE = {Or: 1, And: 2}


def print_formula(formula, names: Optional[Sequence[str]] = None) -> str:
    if isinstance(formula, Atom):
        return f"{print_poly(formula.lhs, names)} {formula.relation.value} {print_poly(formula.rhs, names)}"
    if isinstance(formula, Not):
        return f"!({print_formula(formula.operand, names)})"
    separator = " | " if isinstance(formula, Or) else " & "
    parts = []
    for operand in formula.operands:
        text = print_formula(operand, names)
        if isinstance(operand, (And, Or)) and _OPERATOR_PRECEDENCE[type(operand)] <= _OPERATOR_PRECEDENCE[type(formula)]:
            text = f"({text})"
        parts.append(text)
    return separator.join(parts)


def to_source(value, names: Optional[Sequence[str]] = None) -> str:
    """Print any parseable value: term, canonical poly, system, formula or interval"""
    from interval.arith import Interval, IntervalBox
    from khovanskii.system import KhovanskiiSystem

    if isinstance(value, KhovanskiiSystem):
        return print_system(value)
    if isinstance(value, (Atom, And, Or, Not)):
        return print_formula(value, names)
    if isinstance(value, Interval):
        return print_interval(value)
    if isinstance(value, IntervalBox):
        return "; ".join(print_interval(interval) for interval in value)
    if isinstance(value, (ExpTerm, CanonicalPoly)):
        return print_term(value, names)
    raise TypeError(f"cannot print {type(value).__name__}")
