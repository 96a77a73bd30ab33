"""
Rigorous enclosure of the exponential.

e^x = 2^k * e^r with k = round(x / ln2) and r = x - k*ln2. e^r is enclosed
by its Taylor polynomial evaluated in interval arithmetic plus the Lagrange
remainder 2 * rho^(N+1) / (N+1)!, valid for |r| <= rho < ln2. Work is done
at prec + 20 guard bits (plus the bit length of k) and the final endpoint is
rounded once in the requested direction.
"""
import logging
import math
from functools import lru_cache

import mpmath.libmp as mlib

from interval.arith import CEILING, FLOOR, Interval, IntervalContext, Mpf, mpf_max

logger = logging.getLogger(__name__)

GUARD_BITS = 20
SATURATION = 2 ** 20


@lru_cache(maxsize=32)
def ln2_enclosure(prec: int) -> Interval:
    """
    ln 2 = sum_{k>=1} 1 / (k 2^k), summed in W-bit fixed point.

    Each term is truncated (error < 1 unit) and the tail after N >= W terms is
    below one unit, so ln2 * 2^W lies in [S, S + N + 1].
    """
    width = prec + 16
    terms = width + 8
    total = sum((1 << width) // (k << k) for k in range(1, terms + 1))
    return Interval(mlib.from_man_exp(total, -width), mlib.from_man_exp(total + terms + 1, -width))


def _taylor_order(rho: float, wp: int) -> int:
    """Smallest N with rho^(N+1) / (N+1)! below 2^-(wp+4)"""
    log_rho = math.log2(max(rho, 2.0 ** -wp))
    n = 1
    while (n + 1) * log_rho - math.lgamma(n + 2) / math.log(2) > -(wp + 4):
        n += 1
    return n


def _exp_reduced(r: Interval, ctx: IntervalContext) -> Interval:
    rho = mpf_max(mlib.mpf_abs(r.lo), mlib.mpf_abs(r.hi))
    order = _taylor_order(mlib.to_float(rho, rnd=CEILING), ctx.prec)
    acc = Interval(mlib.fone, mlib.fone)
    for j in range(order, 0, -1):
        acc = ctx.add(Interval(mlib.fone, mlib.fone), ctx.div_int(ctx.mul(r, acc), j))
    # 2 rho^(N+1) / (N+1)!
    remainder = mlib.mpf_pow_int(rho, order + 1, ctx.prec, CEILING)
    remainder = mlib.mpf_div(remainder, mlib.from_int(math.factorial(order + 1)), ctx.prec, CEILING)
    remainder = mlib.mpf_shift(remainder, 1)
    return Interval(
        mlib.mpf_sub(acc.lo, remainder, ctx.prec, FLOOR),
        mlib.mpf_add(acc.hi, remainder, ctx.prec, CEILING),
    )


def exp_point_enclosure(x: Mpf, prec: int) -> Interval:
    """Interval containing e^x for a finite x with |x| <= 2^20, at about prec bits"""
    k = int(round(mlib.to_float(x) / math.log(2)))
    wp = prec + GUARD_BITS + abs(k).bit_length()
    ctx = IntervalContext(wp)
    reduced = ctx.sub(Interval(x, x), ctx.mul(Interval.point(k), ln2_enclosure(wp)))
    enclosure = _exp_reduced(reduced, ctx)
    return Interval(mlib.mpf_shift(enclosure.lo, k), mlib.mpf_shift(enclosure.hi, k))


def exp_bound(x: Mpf, prec: int, rnd) -> Mpf:
    """Lower (rnd=floor) or upper (rnd=ceiling) bound of e^x at prec bits"""
    if x == mlib.fzero:
        return mlib.fone
    if x == mlib.fninf:
        return mlib.fzero
    if x == mlib.finf:
        return mlib.finf
    if mlib.mpf_gt(x, mlib.from_int(SATURATION)):
        # e^x > 2^x > 2^(2^20)
        return mlib.from_man_exp(1, SATURATION) if rnd == FLOOR else mlib.finf
    if mlib.mpf_lt(x, mlib.from_int(-SATURATION)):
        return mlib.fzero if rnd == FLOOR else mlib.from_man_exp(1, -SATURATION)
    enclosure = exp_point_enclosure(x, prec)
    if rnd == FLOOR:
        lo = mlib.mpf_pos(enclosure.lo, prec, FLOOR)
        return mpf_max(lo, mlib.fzero)
    return mlib.mpf_pos(enclosure.hi, prec, CEILING)


def exp_enclosure(x: Interval, prec: int = 64) -> Interval:
    """Enclosure of {e^r : r in x}; exp is increasing so only endpoints matter"""
    return IntervalContext(prec).exp(x)
