"""Exception hierarchy.

Every domain error carries a stable ``code`` token; the command line prints
it on standard error and exits with status 2.
"""


class BirkhoffError(ValueError):
    code = "DOMAIN_ERROR"


class InvalidMatrix(BirkhoffError):
    code = "INVALID_MATRIX"


class NotHyperbolic(BirkhoffError):
    code = "NOT_HYPERBOLIC"


class NegativeTrace(BirkhoffError):
    code = "NEGATIVE_TRACE"


class PowerOfOneGenerator(BirkhoffError):
    code = "POWER_OF_ONE_GENERATOR"


class NotHyperbolicPower(BirkhoffError):
    code = "NOT_HYPERBOLIC_POWER"


class NotMixed(BirkhoffError):
    code = "NOT_MIXED"


class InvalidWord(BirkhoffError):
    code = "INVALID_WORD"


class DegenerateEmbedding(BirkhoffError):
    code = "DEGENERATE_EMBEDDING"


class AmbiguousCrossing(BirkhoffError):
    code = "AMBIGUOUS_CROSSING"


class IncoherentOrientation(BirkhoffError):
    code = "INCOHERENT_ORIENTATION"


class CertificateFailure(BirkhoffError):
    code = "CERTIFICATE_FAILURE"


class AlreadyMinimal(BirkhoffError):
    code = "ALREADY_MINIMAL"


class UnsupportedOrbifold(BirkhoffError):
    code = "UNSUPPORTED_ORBIFOLD"


class CapExceeded(BirkhoffError):
    code = "CAP_EXCEEDED"


class BallTooSmall(BirkhoffError):
    code = "BALL_TOO_SMALL"
