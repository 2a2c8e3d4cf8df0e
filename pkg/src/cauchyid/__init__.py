"""Mittag-Leffler functions, Gamma-type variables and infinite divisibility of alpha-Cauchy laws."""

from .classify import (
    Verdict,
    bounds_LU,
    classify_existence,
    classify_ml_nonneg,
    classify_two_param,
    ksw_D_exists,
    region_map,
    region_map_csv,
)
from .errors import CauchyIdError, ConsistencyError, ConvergenceError, ParameterError, RangeError
from .idcert import (
    Certificate,
    certify_alpha_cauchy,
    certify_half_power,
    certify_half_stable,
    certify_half_student,
    verify_identity,
)
from .mellin import MellinExpr, canonical, equals, janson_gate
from .specfun import EvalResult, MLParams, SignScanReport, eval_ml, eval_wright, sign_scan

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CauchyIdError",
    "ConsistencyError",
    "ConvergenceError",
    "EvalResult",
    "MLParams",
    "MellinExpr",
    "ParameterError",
    "RangeError",
    "SignScanReport",
    "Verdict",
    "bounds_LU",
    "canonical",
    "certify_alpha_cauchy",
    "certify_half_power",
    "certify_half_stable",
    "certify_half_student",
    "classify_existence",
    "classify_ml_nonneg",
    "classify_two_param",
    "equals",
    "eval_ml",
    "eval_wright",
    "janson_gate",
    "ksw_D_exists",
    "region_map",
    "region_map_csv",
    "sign_scan",
    "verify_identity",
]
