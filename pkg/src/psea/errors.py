"""Exception hierarchy shared by the analysis, simulation and CLI layers."""


class PseaError(Exception):
    """Base class for all package errors."""


class DomainError(PseaError, ValueError):
    """An argument lies outside the domain of a function."""


class NumericalInstabilityError(PseaError, ArithmeticError):
    """A requested evaluation route is numerically unreliable for the inputs."""


class SingularChainError(PseaError, ArithmeticError):
    """The battery chain has no unique stationary distribution."""


class ConfigError(PseaError, ValueError):
    """Invalid or unparsable experiment configuration.

    ``line`` is the 1-based line number in the config file when known, and
    ``key`` names the offending parameter when the failure is a validation one.
    """

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
