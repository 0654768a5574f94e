"""Exception hierarchy. Every domain error carries a short machine code."""


class QmlabError(Exception):
    code = "error"


class PreconditionError(QmlabError, ValueError):
    code = "precondition"


class EvaluationDomainError(QmlabError, ValueError):
    code = "evaluation-domain"


class UndefinedDepthError(QmlabError, ValueError):
    code = "undefined-depth"


class UnsupportedModelError(QmlabError, ValueError):
    code = "unsupported-model"


class DegenerateLatticeError(QmlabError, ValueError):
    code = "degenerate-lattice"


class NonconvexSectorError(QmlabError, ValueError):
    code = "nonconvex-sector"


class InconclusiveError(QmlabError, RuntimeError):
    code = "inconclusive"


class InvalidRuleError(QmlabError, ValueError):
    code = "invalid-rule"


class NonStationaryError(QmlabError, RuntimeError):
    code = "non-stationary"
