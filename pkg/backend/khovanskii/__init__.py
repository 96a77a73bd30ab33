from khovanskii.system import KhovanskiiSystem, determinant, jacobian_det
from khovanskii.builders import CombineOp, augment_log, combine, determinant_factor
