"""Exceptions raised by the engine packages.

The CLI maps every ``EngineError`` to exit status 1 and the Flask service to
HTTP 422; anything else is treated as a bug.
"""


class EngineError(Exception):
    """Base class for failures the engine reports on purpose."""


class ModuleConstructionError(EngineError):
    """A Clifford module could not be built or failed its own verification."""


class UnsupportedVariantError(EngineError, ValueError):
    """The requested minimal-module variant does not exist for the signature."""


class UnverifiedModuleError(EngineError, ValueError):
    """An algebra was requested from a module that fails the module axioms."""


class SignatureError(EngineError, ValueError):
    """The operation is not defined for this signature (r, s)."""


class DomainError(EngineError, ValueError):
    """An argument lies outside the domain of the operation (t <= 0, z = 0, ...)."""


class TruncationError(EngineError):
    """Lattice truncation could not reach the requested tail tolerance."""

    def __init__(self, message, best_bound=None, radius=None):
        super().__init__(message)
        self.best_bound = best_bound
        self.radius = radius


class QuadratureError(EngineError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ScenarioFactError(EngineError):
    """A reproduced example ran but some of its checked facts do not hold."""

    def __init__(self, message, scenario=None, failed=()):
        super().__init__(message)
        self.scenario = scenario
        self.failed = tuple(failed)
