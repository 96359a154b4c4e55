"""Exception hierarchy. Every error carries the offending index or parameter."""


class AbstatError(Exception):
    """Base class for all library errors."""


class InvalidScheme(AbstatError):
    def __init__(self, message: str, n: int | None = None):
        super().__init__(message if n is None else f"{message} (at n={n})")
        self.n = n


class OutOfHorizon(AbstatError):
    def __init__(self, n: int, horizon: int):
        super().__init__(f"n={n} outside [1, {horizon}]")
        self.n = n
        self.horizon = horizon


class ConstructionFailed(AbstatError):
    def __init__(self, message: str, j: int):
        super().__init__(f"{message} (reached j={j})")
        self.j = j


class NonPointLimitWithoutJoint(AbstatError):
    pass


class MomentUnavailable(AbstatError):
    pass


class CdfUnavailable(AbstatError):
    pass


class PushforwardUnavailable(AbstatError):
    pass


class SamplingUnavailable(AbstatError):
    pass


class AnalyticCountingUnavailable(AbstatError):
    pass


class AnalyticSummationUnavailable(AbstatError):
    pass


class GridHitsDiscontinuity(AbstatError):
    def __init__(self, x: float, jump: float):
        super().__init__(f"grid point x={x!r} is within 1e-9 of a jump of the limit CDF at {jump!r}")
        self.x = x


class EmptyWindowRange(AbstatError):
    pass


class WindowTooLarge(AbstatError):
    def __init__(self, n: int, width: int, limit: int):
        super().__init__(f"window n={n} has width {width} > {limit}")
        self.n = n


class UnknownId(AbstatError):
    pass


class ConfigError(AbstatError):
    pass
