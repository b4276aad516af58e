class TwistorError(Exception):
    """Base class for all errors raised by the package."""


class ConfigError(TwistorError, ValueError):
    """Invalid input: bad syntax, undeclared parameter, non-Lie bracket, invalid J."""


class NotIntegrableError(TwistorError):
    """The harmonicity criterion only applies to integrable complex structures."""


class RouteMismatchError(TwistorError):
    """Two independent computations of the same tensor disagree.

    ``where`` names the offending entry, e.g. ``R(E1,E2,E3,E4)``.
    """

    def __init__(self, identity: str, where: str, lhs=None, rhs=None):
        self.identity = identity
        self.where = where
        self.lhs = lhs
        self.rhs = rhs
        msg = f"{identity}: routes disagree at {where}"
        if lhs is not None:
            msg += f" ({lhs} != {rhs})"
        super().__init__(msg)
