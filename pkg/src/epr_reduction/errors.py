"""Exception hierarchy shared by all modules."""


class EPRReductionError(Exception):
    """Base class for every error raised by this package."""


class SpeedLimitError(EPRReductionError, ValueError):
    """A velocity reached or exceeded the speed of light."""


class DuplicateLabelError(EPRReductionError, ValueError):
    pass


class ZeroAxisError(EPRReductionError, ValueError):
    """The zero vector does not define a direction."""


class UnknownParticleError(EPRReductionError, KeyError):
    pass


class UnknownTestError(EPRReductionError, KeyError):
    pass


class UnknownReferenceError(EPRReductionError, KeyError):
    pass


class DegenerateStateError(EPRReductionError, ValueError):
    """State norm is too far from one to be a physical pure state."""


class ZeroConditionProbabilityError(EPRReductionError, ZeroDivisionError):
    """Conditioning event has (numerically) zero probability."""


class OrderMismatchError(EPRReductionError, ValueError):
    """Test orders passed together are not permutations of one set."""


class NotValidatedError(EPRReductionError, RuntimeError):
    """Operation requires a scenario that passes validation."""


class ScenarioFileError(EPRReductionError):
    """Base for problems reading a scenario file."""


class ParseError(ScenarioFileError, ValueError):
    pass


class SchemaError(ScenarioFileError, ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class NormError(ScenarioFileError, ValueError):
    pass
