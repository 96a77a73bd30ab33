"""
Outward-rounded interval arithmetic over mpmath raw mpf values.

Endpoints are raw `mpmath.libmp` tuples. Every lower endpoint is rounded
toward -inf and every upper endpoint toward +inf, so an operation's result
contains every pointwise result over its inputs. Precision lives in an
immutable IntervalContext passed per call.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath.libmp as mlib

from app.core.exceptions import DomainError

Mpf = tuple

FLOOR = mlib.round_floor
CEILING = mlib.round_ceiling
NEAREST = mlib.round_nearest

_LOG10_2 = 0.30102999566398120


def is_finite(x: Mpf) -> bool:
    return x not in (mlib.finf, mlib.fninf, mlib.fnan)


def mpf_min(a: Mpf, b: Mpf) -> Mpf:
    return a if mlib.mpf_le(a, b) else b


def mpf_max(a: Mpf, b: Mpf) -> Mpf:
    return b if mlib.mpf_le(a, b) else a


def exact(value) -> Mpf:
    """Exact mpf for ints and dyadic Fractions / floats"""
    if isinstance(value, tuple):
        return value
    if isinstance(value, int):
        return mlib.from_int(value)
    if isinstance(value, float):
        return mlib.from_float(value)
    if isinstance(value, Fraction):
        p, q = value.numerator, value.denominator
        if q & (q - 1):
            raise ValueError(f"{value} is not dyadic")
        return mlib.from_man_exp(p, -(q.bit_length() - 1))
    raise TypeError(f"cannot convert {type(value).__name__} exactly")


def to_fraction(x: Mpf) -> Fraction:
    if not is_finite(x):
        raise ValueError("infinite endpoint has no rational value")
    p, q = mlib.to_rational(x)
    return Fraction(p, q)


def format_decimal(x: Mpf, digits: int, rnd) -> str:
    """Decimal string with `digits` significant digits, rounded in direction rnd"""
    if x == mlib.finf:
        return "inf"
    if x == mlib.fninf:
        return "-inf"
    if x == mlib.fzero:
        return "0"
    sign, man, exp, bc = x
    e10 = math.floor((exp + bc - 1) * _LOG10_2)
    scale = digits - 1 - e10
    value = to_fraction(x) * (Fraction(10) ** scale)
    n = math.floor(value) if rnd == FLOOR else math.ceil(value)
    if n == 0:
        return "0"
    text = str(abs(n))
    k = -scale
    magnitude = len(text) - 1 + k
    if -7 <= magnitude < 21:
        if k >= 0:
            body = text + "0" * k
        else:
            point = len(text) + k
            if point > 0:
                body = text[:point] + "." + text[point:]
            else:
                body = "0." + "0" * (-point) + text
            body = body.rstrip("0").rstrip(".")
    else:
        fraction = text[1:].rstrip("0")
        body = text[0] + ("." + fraction if fraction else "") + f"e{magnitude}"
    return ("-" if n < 0 else "") + body


def format_binary(x: Mpf) -> str:
    """Exact `<man>p<exp>` form"""
    if x == mlib.finf:
        return "inf"
    if x == mlib.fninf:
        return "-inf"
    if x == mlib.fzero:
        return "0p0"
    sign, man, exp, _ = x
    return f"{-man if sign else man}p{exp}"


def parse_binary(text: str) -> Mpf:
    text = text.strip()
    if text == "inf":
        return mlib.finf
    if text == "-inf":
        return mlib.fninf
    man, _, exp = text.partition("p")
    if not exp:
        raise ValueError(f"malformed binary rational {text!r}")
    return mlib.from_man_exp(int(man), int(exp))


def parse_decimal(text: str, prec: int, rnd) -> Mpf:
    """Round a decimal literal to prec bits in direction rnd"""
    text = text.strip().lower()
    if text in ("inf", "+inf"):
        return mlib.finf
    if text == "-inf":
        return mlib.fninf
    value = Fraction(text)
    return mlib.from_rational(value.numerator, value.denominator, prec, rnd)


@dataclass(frozen=True)
class Interval:
    lo: Mpf
    hi: Mpf

    def __post_init__(self):
        if mlib.fnan in (self.lo, self.hi):
            raise ValueError("interval endpoint is nan")
        if self.lo == mlib.finf or self.hi == mlib.fninf:
            raise ValueError("interval does not contain a real number")
        if not mlib.mpf_le(self.lo, self.hi):
            raise ValueError(f"empty interval [{format_binary(self.lo)}, {format_binary(self.hi)}]")

    @classmethod
    def point(cls, value) -> "Interval":
        x = exact(value)
        return cls(x, x)

    @classmethod
    def of(cls, lo, hi) -> "Interval":
        return cls(exact(lo), exact(hi))

    @classmethod
    def from_decimal(cls, lo: str, hi: str, prec: int) -> "Interval":
        return cls(parse_decimal(lo, prec, FLOOR), parse_decimal(hi, prec, CEILING))

    @classmethod
    def from_binary(cls, text: str) -> "Interval":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed interval {text!r}")
        lo, _, hi = body[1:-1].partition(",")
        return cls(parse_binary(lo), parse_binary(hi))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def is_finite(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def contains(self, x) -> bool:
        x = exact(x)
        return mlib.mpf_le(self.lo, x) and mlib.mpf_le(x, self.hi)

    def contains_zero(self) -> bool:
        return self.contains(mlib.fzero)

    def is_positive(self) -> bool:
        return mlib.mpf_gt(self.lo, mlib.fzero)

    def is_negative(self) -> bool:
        return mlib.mpf_lt(self.hi, mlib.fzero)

    def is_subset(self, other: "Interval") -> bool:
        return mlib.mpf_le(other.lo, self.lo) and mlib.mpf_le(self.hi, other.hi)

    def is_interior(self, other: "Interval") -> bool:
        """Strictly inside other"""
        return mlib.mpf_lt(other.lo, self.lo) and mlib.mpf_lt(self.hi, other.hi)

    def overlaps(self, other: "Interval") -> bool:
        return mlib.mpf_le(self.lo, other.hi) and mlib.mpf_le(other.lo, self.hi)

    def precedes(self, other: "Interval") -> bool:
        """Every point of self is below every point of other"""
        return mlib.mpf_lt(self.hi, other.lo)

    def width(self) -> float:
        if not self.is_finite:
            return math.inf
        return float(to_fraction(self.hi) - to_fraction(self.lo))

    def magnitude(self) -> Mpf:
        return mpf_max(mlib.mpf_abs(self.lo), mlib.mpf_abs(self.hi))

    def mignitude(self) -> Mpf:
        if self.contains_zero():
            return mlib.fzero
        return mpf_min(mlib.mpf_abs(self.lo), mlib.mpf_abs(self.hi))

    def fractions(self) -> Tuple[Fraction, Fraction]:
        return to_fraction(self.lo), to_fraction(self.hi)

    def sort_key(self):
        """Exact key ordering by lower then upper endpoint"""
        def key(x):
            if x == mlib.fninf:
                return (-1, Fraction(0))
            if x == mlib.finf:
                return (1, Fraction(0))
            return (0, to_fraction(x))
        return (key(self.lo), key(self.hi))

    def midpoint_float(self) -> float:
        return (mlib.to_float(self.lo) + mlib.to_float(self.hi)) / 2

    def to_decimal(self, digits: int = 17) -> str:
        return f"[{format_decimal(self.lo, digits, FLOOR)}, {format_decimal(self.hi, digits, CEILING)}]"

    def to_binary(self) -> str:
        return f"[{format_binary(self.lo)}, {format_binary(self.hi)}]"

    def __str__(self):
        return self.to_decimal()

    def __repr__(self):
        return f"Interval{self.to_decimal()}"


ZERO_INTERVAL = Interval(mlib.fzero, mlib.fzero)
ONE_INTERVAL = Interval(mlib.fone, mlib.fone)
ENTIRE = Interval(mlib.fninf, mlib.finf)


@dataclass(frozen=True)
class IntervalBox:
    intervals: Tuple[Interval, ...]

    @classmethod
    def of(cls, intervals: Iterable[Interval]) -> "IntervalBox":
        return cls(tuple(intervals))

    @classmethod
    def from_decimal(cls, pairs: Sequence[Tuple[str, str]], prec: int) -> "IntervalBox":
        return cls(tuple(Interval.from_decimal(lo, hi, prec) for lo, hi in pairs))

    @classmethod
    def from_binary(cls, text: str) -> "IntervalBox":
        return cls(tuple(Interval.from_binary(piece) for piece in text.split(";")))

    def __len__(self) -> int:
        return len(self.intervals)

    def __getitem__(self, index):
        return self.intervals[index]

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    @property
    def dimension(self) -> int:
        return len(self.intervals)

    @property
    def is_finite(self) -> bool:
        return all(interval.is_finite for interval in self.intervals)

    def replace(self, index: int, interval: Interval) -> "IntervalBox":
        items = list(self.intervals)
        items[index] = interval
        return IntervalBox(tuple(items))

    def is_subset(self, other: "IntervalBox") -> bool:
        return all(a.is_subset(b) for a, b in zip(self.intervals, other.intervals))

    def is_interior(self, other: "IntervalBox") -> bool:
        return all(a.is_interior(b) for a, b in zip(self.intervals, other.intervals))

    def overlaps(self, other: "IntervalBox") -> bool:
        return all(a.overlaps(b) for a, b in zip(self.intervals, other.intervals))

    def contains_point(self, point: Sequence) -> bool:
        return all(interval.contains(x) for interval, x in zip(self.intervals, point))

    def max_width(self) -> float:
        return max(interval.width() for interval in self.intervals)

    def volume(self) -> Fraction:
        total = Fraction(1)
        for interval in self.intervals:
            lo, hi = interval.fractions()
            total *= hi - lo
        return total

    def sort_key(self):
        return tuple(interval.sort_key() for interval in self.intervals)

    def to_decimal(self, digits: int = 17) -> str:
        return "; ".join(interval.to_decimal(digits) for interval in self.intervals)

    def to_binary(self) -> str:
        return "; ".join(interval.to_binary() for interval in self.intervals)

    def __str__(self):
        return self.to_decimal()


IntervalLike = Union[Interval, int, Fraction, float, str]


@dataclass(frozen=True)
class IntervalContext:
    """Interval operations at a fixed significand precision (bits)"""
    prec: int = 64

    def __post_init__(self):
        if self.prec < 2:
            raise ValueError(f"precision must be at least 2 bits, got {self.prec}")

    def with_precision(self, prec: int) -> "IntervalContext":
        return IntervalContext(prec)

    # ---- conversion -----------------------------------------------------
    def interval(self, value: IntervalLike) -> Interval:
        """Outward-rounded enclosure of a number"""
        if isinstance(value, Interval):
            return value
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return Interval.point(value)
        if isinstance(value, str):
            return Interval.from_decimal(value, value, self.prec)
        if isinstance(value, Fraction):
            p, q = value.numerator, value.denominator
            return Interval(
                mlib.from_rational(p, q, self.prec, FLOOR),
                mlib.from_rational(p, q, self.prec, CEILING),
            )
        raise TypeError(f"cannot enclose {type(value).__name__}")

    def round(self, a: Interval) -> Interval:
        """Round endpoints outward to this precision"""
        return Interval(mlib.mpf_pos(a.lo, self.prec, FLOOR), mlib.mpf_pos(a.hi, self.prec, CEILING))

    # ---- arithmetic -----------------------------------------------------
    def add(self, a: Interval, b: Interval) -> Interval:
        return Interval(
            mlib.mpf_add(a.lo, b.lo, self.prec, FLOOR),
            mlib.mpf_add(a.hi, b.hi, self.prec, CEILING),
        )

    def neg(self, a: Interval) -> Interval:
        return Interval(mlib.mpf_neg(a.hi), mlib.mpf_neg(a.lo))

    def sub(self, a: Interval, b: Interval) -> Interval:
        return self.add(a, self.neg(b))

    def _mul(self, x: Mpf, y: Mpf, rnd) -> Mpf:
        # 0 * inf is 0 for enclosures
        if x == mlib.fzero or y == mlib.fzero:
            return mlib.fzero
        return mlib.mpf_mul(x, y, self.prec, rnd)

    def mul(self, a: Interval, b: Interval) -> Interval:
        if mlib.mpf_ge(a.lo, mlib.fzero) and mlib.mpf_ge(b.lo, mlib.fzero):
            return Interval(self._mul(a.lo, b.lo, FLOOR), self._mul(a.hi, b.hi, CEILING))
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lows = [self._mul(x, y, FLOOR) for x, y in pairs]
        highs = [self._mul(x, y, CEILING) for x, y in pairs]
        lo, hi = lows[0], highs[0]
        for x in lows[1:]:
            lo = mpf_min(lo, x)
        for x in highs[1:]:
            hi = mpf_max(hi, x)
        return Interval(lo, hi)

    def scale(self, a: Interval, factor: int) -> Interval:
        return self.mul(a, Interval.point(factor))

    def div_int(self, a: Interval, divisor: int) -> Interval:
        if divisor <= 0:
            raise ValueError("divisor must be positive")
        d = mlib.from_int(divisor)
        return Interval(mlib.mpf_div(a.lo, d, self.prec, FLOOR), mlib.mpf_div(a.hi, d, self.prec, CEILING))

    def _pow(self, x: Mpf, n: int, rnd) -> Mpf:
        if not is_finite(x):
            if n % 2 == 0 or x == mlib.finf:
                return mlib.finf
            return mlib.fninf
        if x == mlib.fzero:
            return mlib.fzero
        sign, man, exp, _ = x
        return mlib.from_man_exp((-man if sign else man) ** n, exp * n, self.prec, rnd)

    def pow_nat(self, a: Interval, n: int) -> Interval:
        if n < 0:
            raise ValueError(f"exponent must be >= 0, got {n}")
        if n == 0:
            return ONE_INTERVAL
        if n == 1:
            return a
        if n % 2 or mlib.mpf_ge(a.lo, mlib.fzero):
            return Interval(self._pow(a.lo, n, FLOOR), self._pow(a.hi, n, CEILING))
        if mlib.mpf_le(a.hi, mlib.fzero):
            return Interval(self._pow(a.hi, n, FLOOR), self._pow(a.lo, n, CEILING))
        return Interval(mlib.fzero, self._pow(a.magnitude(), n, CEILING))

    def exp(self, a: Interval) -> Interval:
        from interval.expfn import exp_bound

        return Interval(exp_bound(a.lo, self.prec, FLOOR), exp_bound(a.hi, self.prec, CEILING))

    def reciprocal(self, a: Interval) -> Interval:
        if a.contains_zero():
            raise DomainError(f"reciprocal of an interval containing 0: {a}")
        return Interval(
            mlib.mpf_div(mlib.fone, a.hi, self.prec, FLOOR),
            mlib.mpf_div(mlib.fone, a.lo, self.prec, CEILING),
        )

    # ---- set operations -------------------------------------------------
    def hull(self, a: Interval, b: Interval) -> Interval:
        return Interval(mpf_min(a.lo, b.lo), mpf_max(a.hi, b.hi))

    def intersect(self, a: Interval, b: Interval) -> Optional[Interval]:
        lo, hi = mpf_max(a.lo, b.lo), mpf_min(a.hi, b.hi)
        if mlib.mpf_lt(hi, lo):
            return None
        return Interval(lo, hi)

    def midpoint(self, a: Interval) -> Mpf:
        if not a.is_finite:
            raise ValueError(f"midpoint of unbounded interval {a}")
        return mlib.mpf_shift(mlib.mpf_add(a.lo, a.hi, self.prec, NEAREST), -1)

    def split_point(self, a: Interval, fraction: Fraction) -> Mpf:
        """lo + fraction * (hi - lo), rounded to nearest at this precision"""
        lo, hi = a.fractions()
        value = lo + fraction * (hi - lo)
        point = mlib.from_rational(value.numerator, value.denominator, self.prec, NEAREST)
        if not (mlib.mpf_lt(a.lo, point) and mlib.mpf_lt(point, a.hi)):
            point = self.midpoint(a)
        return point

    def width(self, a: Interval) -> Mpf:
        return mlib.mpf_sub(a.hi, a.lo, self.prec, CEILING)

    def inflate(self, a: Interval, relative: float = 0.0, absolute: float = 0.0) -> Interval:
        """Widen both ends by relative * width + absolute"""
        amount = mlib.mpf_add(
            mlib.mpf_mul(self.width(a), mlib.from_float(relative), self.prec, CEILING),
            mlib.from_float(absolute),
            self.prec,
            CEILING,
        )
        return Interval(
            mlib.mpf_sub(a.lo, amount, self.prec, FLOOR),
            mlib.mpf_add(a.hi, amount, self.prec, CEILING),
        )

    # ---- boxes ----------------------------------------------------------
    def hull_box(self, a: IntervalBox, b: IntervalBox) -> IntervalBox:
        return IntervalBox(tuple(self.hull(x, y) for x, y in zip(a, b)))

    def intersect_box(self, a: IntervalBox, b: IntervalBox) -> Optional[IntervalBox]:
        parts: List[Interval] = []
        for x, y in zip(a, b):
            meet = self.intersect(x, y)
            if meet is None:
                return None
            parts.append(meet)
        return IntervalBox(tuple(parts))

    def midpoint_box(self, box: IntervalBox) -> Tuple[Mpf, ...]:
        return tuple(self.midpoint(interval) for interval in box)
