"""Exception types raised by qencode."""


class QencodeError(Exception):
    pass


class InvalidArgumentError(QencodeError, ValueError):
    pass


class DegenerateBranchError(QencodeError):
    """A forced measurement branch has (numerically) zero probability."""


class ProtocolFailureError(QencodeError):
    """A pulse sequence left weight outside its intended support."""


class OracleScaleError(QencodeError, ValueError):
    pass


class DerivationError(QencodeError):
    pass
