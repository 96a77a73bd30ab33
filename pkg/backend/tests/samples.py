from interval.arith import IntervalBox

E_SYSTEM = "x1 - E(1)"
OMEGA_SYSTEM = "x1*E(x1) - 1"
TWO_ROOTS_SYSTEM = "E(x1) - x1 - 2"

E_VALUE = 2.718281828459045
OMEGA_VALUE = 0.567143290409784
E_PLUS_OMEGA = 3.285425118868829
EXP_OMEGA = 1.763222834351897

DEMO_INSTANCE = """\
# e and omega as generators
system
x1 - E(1)
box: [0, 4]
system
x1*E(x1) = 1
box: [0, 1]
constraints:
c1 > 2
c2 < 1 & c2*E(c2) = 1
"""


def box_of(*pairs, prec: int = 64) -> IntervalBox:
    return IntervalBox.from_decimal([(str(lo), str(hi)) for lo, hi in pairs], prec)
