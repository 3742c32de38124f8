"""Exception types.  Each carries a short machine-readable ``code``."""


class WeilMMPError(Exception):
    code = "Error"


class ZeroVectorError(WeilMMPError, ValueError):
    code = "ZeroVector"


class DimensionMismatchError(WeilMMPError, ValueError):
    code = "DimensionMismatch"


class HasLinealityError(WeilMMPError, ValueError):
    code = "HasLineality"


class ZeroConeError(WeilMMPError, ValueError):
    code = "ZeroCone"


class NotSeparableError(WeilMMPError, ValueError):
    code = "NotSeparable"


class RaysDegenerateError(WeilMMPError, ValueError):
    code = "RaysDegenerate"


class RequiresCompleteError(WeilMMPError, ValueError):
    code = "RequiresComplete"


class NonIntegralLevelError(WeilMMPError, ValueError):
    code = "NonIntegralLevel"


class NotExtremalFaceError(WeilMMPError, ValueError):
    code = "NotExtremalFace"


class SearchLimitExceeded(WeilMMPError, RuntimeError):
    code = "SearchLimitExceeded"


class InvalidFanError(WeilMMPError, ValueError):
    code = "InvalidFan"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ParseError(WeilMMPError, ValueError):
    code = "ParseError"

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class NotPlanarError(WeilMMPError, ValueError):
    code = "NotPlanar"
