"""Exception hierarchy with stable error codes (used by the CLI exit map)."""


class SingtraceError(Exception):
    code = "error"


class InputError(SingtraceError, ValueError):
    """Invalid input data or arguments; CLI exit code 2."""

    code = "input"


class SchemaError(InputError):
    code = "schema"


class NonMonotoneError(InputError):
    code = "non_monotone"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TailContinuityError(InputError):
    code = "tail_continuity"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainMismatchError(InputError):
    code = "domain_mismatch"


class DivergenceError(SingtraceError, ArithmeticError):
    """A requested quantity diverges or is evaluated below its abscissa."""

    code = "divergent"

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class HypothesisError(InputError):
    """The inputs violate the hypotheses the requested check relies on."""

    code = "hypothesis"


class UnsupportedInputError(InputError):
    """Operation not defined for this kind of spectral data."""

    code = "unsupported"
