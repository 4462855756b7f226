"""Exception hierarchy shared by every kslope module.

The CLI maps :class:`ConfigError` to exit code 2, :class:`UnconvergedFit` to
exit code 4 and every other :class:`KSlopeError` to exit code 3.
"""


class KSlopeError(Exception):
    """Base class for all library errors."""


# poly
class ZeroPolynomial(KSlopeError):
    pass


class DegreeExceedsLineBundle(KSlopeError):
    pass


class RootClusterAmbiguity(KSlopeError):
    pass


# diagram
class MissingQAxisPoint(KSlopeError):
    pass


class MissingPAxisPoint(KSlopeError):
    pass


# predictor / config validation
class WeightSumNonzero(KSlopeError):
    pass


class AnchorNotMinimal(KSlopeError):
    pass


class SectionsNotBasis(KSlopeError):
    pass


class DegenerateEmbedding(KSlopeError):
    pass


# quadrature
class AllTermsUnderflow(KSlopeError):
    pass


class GridUnresolved(KSlopeError):
    pass


# experiment
class TooFewSamples(KSlopeError):
    pass


class UnconvergedFit(KSlopeError):
    pass


class ConfigError(KSlopeError):
    """Invalid run configuration file; ``line`` points at the offending entry."""

    def __init__(self, message, line=None, cause=None):
        self.line = line
        self.cause = cause
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
