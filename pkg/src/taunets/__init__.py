"""Tempered generalized functions as concrete eps-indexed nets.

Nets are evaluated in signed log form so that powers such as ``eps**49`` at
``eps = 2**-40`` remain comparable.  Order statements (moderate, negligible,
strictly non-zero) are decided empirically on a geometric grid of eps values.
"""

from ._kernels import BACKEND
from .asymptotics import EpsGrid, OrderEstimate, ScalarNet, estimate_order, fit_order, is_negligible, is_O_eps_power
from .counterexample import (
    counterexample_net,
    g_eps,
    grad_g_eps,
    half_space_net,
    sigma,
    u1_eps,
    u_eps,
    verify_band_63,
    verify_estimate_61,
    verify_estimate_62,
    verify_noninvertibility,
    verify_pointwise_invertibility,
)
from .errors import DomainError, ModerationError, NetEvaluationError, NudgeConstructionError, TaunetsError
from .gfunction import (
    FunctionNet,
    check_moderate,
    check_negligible,
    evaluate_at_point,
    interior_nudge_check,
    pointwise_invertibility_sweep,
    reciprocal_test,
    scale_map,
    unit_ball_strictly_nonzero,
    witness_noninvertible_point,
)
from .gnumber import GeneralizedNumber, eq_in_rtilde, inf_min, is_strictly_nonzero, is_strictly_positive, strict_less
from .gpoint import Box, GeneralizedPoint, distance_to_boundary, equivalent, sample_moderate_points
from .netdsl import ParseError, compile_expr, parse, pretty_print
from .report import CheckRecord, VerificationReport
from .sampling import XSampleSpec

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Box",
    "CheckRecord",
    "DomainError",
    "EpsGrid",
    "FunctionNet",
    "GeneralizedNumber",
    "GeneralizedPoint",
    "ModerationError",
    "NetEvaluationError",
    "NudgeConstructionError",
    "OrderEstimate",
    "ParseError",
    "ScalarNet",
    "TaunetsError",
    "VerificationReport",
    "XSampleSpec",
    "check_moderate",
    "check_negligible",
    "compile_expr",
    "counterexample_net",
    "distance_to_boundary",
    "eq_in_rtilde",
    "equivalent",
    "estimate_order",
    "evaluate_at_point",
    "fit_order",
    "g_eps",
    "grad_g_eps",
    "half_space_net",
    "inf_min",
    "interior_nudge_check",
    "is_O_eps_power",
    "is_negligible",
    "is_strictly_nonzero",
    "is_strictly_positive",
    "parse",
    "pointwise_invertibility_sweep",
    "pretty_print",
    "reciprocal_test",
    "sample_moderate_points",
    "scale_map",
    "sigma",
    "strict_less",
    "u1_eps",
    "u_eps",
    "unit_ball_strictly_nonzero",
    "verify_band_63",
    "verify_estimate_61",
    "verify_estimate_62",
    "verify_noninvertibility",
    "verify_pointwise_invertibility",
    "witness_noninvertible_point",
]
