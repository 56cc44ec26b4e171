"""Exception and warning types shared across the package."""


class DlabError(Exception):
    """Base class for every error this package raises deliberately."""


class DomainError(DlabError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class EndpointProximityError(DomainError):
    """Evaluation point too close to a band edge for the PV quadrature."""


class BandError(DlabError, ValueError):
    """A frequency band is unusable (too narrow, empty interior, all markers)."""


class ZeroTransmissionError(DlabError, ValueError):
    """Transmission magnitude too close to zero for the requested operation."""


class BandViolationError(DlabError, ValueError):
    """A pulse spectrum leaks outside the band the model is calibrated on."""


class InsufficientDataError(DlabError, ValueError):
    """Too few usable samples remain for a fit."""


class ConvergenceError(DlabError, RuntimeError):
    """An iterative solver failed to converge; the message carries diagnostics."""


class ConfigError(DlabError, ValueError):
    """A run-configuration file or command option is malformed."""


class SingularTransmissionWarning(RuntimeWarning):
    """Group delay requested where the transmission nearly vanishes."""


class MultipleRootWarning(RuntimeWarning):
    """A root search found more than one crossing; all of them are returned."""


class BandLeakageWarning(RuntimeWarning):
    """Hard-fronted pulse spectrum leaks outside the calibrated band."""
