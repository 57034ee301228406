"""Exception types raised by the library.

All of them subclass ``ValueError`` so callers that only care about bad input
can catch that; the CLI maps them to exit code 2.
"""


class LognormalGPVError(ValueError):
    """Base class for invalid-input errors."""


class NonPositiveValue(LognormalGPVError):
    pass


class SampleTooSmall(LognormalGPVError):
    pass


class OutOfRange(LognormalGPVError):
    pass


class InvalidDf(LognormalGPVError):
    pass


class DegenerateVariance(LognormalGPVError):
    pass


class InvalidSettings(LognormalGPVError):
    pass
