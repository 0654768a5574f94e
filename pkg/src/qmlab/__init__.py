"""Exact operator calculus on quasimodular forms."""
from .errors import (
    DegenerateLatticeError,
    EvaluationDomainError,
    InconclusiveError,
    InvalidRuleError,
    NonconvexSectorError,
    NonStationaryError,
    PreconditionError,
    QmlabError,
    UndefinedDepthError,
    UnsupportedModelError,
)
from .qm_algebra import (
    DELTA,
    E2,
    E4,
    E6,
    ONE,
    PHI,
    QmPolynomial,
    apply_D,
    apply_delta,
    apply_H,
    qexpansion,
)
from .qseries import QSeries, evaluate, theta_derivative
from .sl2_uea import UEAElement, pbw_reduce
from .structure import decompose, recompose

__version__ = "0.1.0"

__all__ = [
    "DELTA",
    "E2",
    "E4",
    "E6",
    "ONE",
    "PHI",
    "DegenerateLatticeError",
    "EvaluationDomainError",
    "InconclusiveError",
    "InvalidRuleError",
    "NonStationaryError",
    "NonconvexSectorError",
    "PreconditionError",
    "QSeries",
    "QmPolynomial",
    "QmlabError",
    "UEAElement",
    "UndefinedDepthError",
    "UnsupportedModelError",
    "apply_D",
    "apply_H",
    "apply_delta",
    "decompose",
    "evaluate",
    "pbw_reduce",
    "qexpansion",
    "recompose",
    "theta_derivative",
]
