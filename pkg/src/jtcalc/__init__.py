"""jtcalc: exact Jordan-type invariants of modules over Frobenius kernels
of exponential-type group schemes, with determinantal stratification tools."""

from .fields import GF, FiniteField, PolyRing, Polynomial, RationalFunctionField, TruncatedCurveRing
from .jordan import JordanType, RankProfile, dominance_leq, jt_of_nilpotent, jt_tensor
from .linalg import ExactMatrix
from .modules import Explicit, ModuleExpr, Std, parse_module_expr
from .theta import CommutingTuple, jt_at_point, theta_exp, theta_full

__version__ = "0.1.0"

__all__ = [
    "GF",
    "FiniteField",
    "PolyRing",
    "Polynomial",
    "RationalFunctionField",
    "TruncatedCurveRing",
    "JordanType",
    "RankProfile",
    "dominance_leq",
    "jt_of_nilpotent",
    "jt_tensor",
    "ExactMatrix",
    "Explicit",
    "ModuleExpr",
    "Std",
    "parse_module_expr",
    "CommutingTuple",
    "jt_at_point",
    "theta_exp",
    "theta_full",
    "__version__",
]
