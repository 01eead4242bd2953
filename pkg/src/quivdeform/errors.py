"""Typed errors.

Two families: InputError covers malformed files and bad command usage
(CLI exit code 2), ComputationError covers well-formed inputs on which a
computation cannot proceed (CLI exit code 1, reported by type name).
"""


class InputError(Exception):
    pass


class ComputationError(Exception):
    @property
    def name(self):
        return type(self).__name__


class NotFiniteDimensional(ComputationError):
    pass


class NotFullIdempotent(ComputationError):
    pass


class CharTwoUnsupported(ComputationError):
    pass


class EpsilonUnresolvable(ComputationError):
    pass


class NormalizationFailed(ComputationError):
    pass


class SignResolutionFailed(ComputationError):
    pass
