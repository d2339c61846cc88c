"""Exception hierarchy shared across the package."""


class QInterferenceError(Exception):
    """Base class for all package errors."""


class SpeciesMismatchError(QInterferenceError, ValueError):
    """Operators or modes of different particle species were combined."""


class DegenerateModeError(QInterferenceError, ValueError):
    """A mode with zero energy (k = 0 and mass = 0)."""


class RegistryError(QInterferenceError, ValueError):
    """Duplicate or unknown mode identifiers."""


class UnsupportedDegreeError(QInterferenceError, ValueError):
    """Normal ordering was asked for a monomial of degree > 2."""


class OrderingError(QInterferenceError, ValueError):
    """An expression that must be normal ordered is not."""


class PauliViolationError(QInterferenceError, ValueError):
    """A fermion (mode, channel) carries more than one quantum."""


class TruncationError(QInterferenceError, ValueError):
    """A Fock state reaches the cutoff of a truncated space."""


class ConfigError(QInterferenceError, ValueError):
    """Invalid scenario configuration.

    ``path`` names the offending field (dotted JSON path) when known.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
