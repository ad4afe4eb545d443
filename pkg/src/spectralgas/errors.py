"""Exception hierarchy shared by every module."""


class SpectralGasError(Exception):
    """Base class for library errors."""


class NotAPole(SpectralGasError):
    pass


class StepUnderflow(SpectralGasError):
    """The ODE integrator needed a step below its floor; usually a singularity."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class DegreeMismatch(SpectralGasError):
    pass


class NoOneCutSolution(SpectralGasError):
    pass


class NoTwoCutSolution(SpectralGasError):
    pass


class Unsolved(SpectralGasError):
    pass


class GenusUnsupported(SpectralGasError):
    pass


class OnBranchPoint(SpectralGasError):
    pass


class Coincident(SpectralGasError):
    pass


class BranchAmbiguity(SpectralGasError):
    pass


class TruncationFailure(SpectralGasError):
    pass


class Collision(SpectralGasError):
    """A proposed eigenvalue lands on top of another one."""


class EmptyData(SpectralGasError):
    pass
