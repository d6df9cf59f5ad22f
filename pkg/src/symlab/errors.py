"""Exception hierarchy shared by every symlab module."""


class SymlabError(Exception):
    pass


class RuleMissingError(SymlabError):
    """An opaque function has no registered derivative rule."""


class JetCapacityError(SymlabError):
    """A derivative would leave the bounded jet universe."""


class CyclicBindingError(SymlabError):
    pass


class SubstitutionError(SymlabError):
    pass


class UnboundCoordinateError(SymlabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unbound coordinate"


class DomainError(SymlabError, ValueError):
    pass


class ParseError(SymlabError, ValueError):
    pass


class NonPolynomialError(SymlabError, ValueError):
    pass


class NonClosureError(SymlabError):
    pass


class SeriesCapError(SymlabError):
    pass


class BlowUpError(SymlabError, ArithmeticError):
    def __init__(self, message, last_eta=None):
        super().__init__(message)
        self.last_eta = last_eta
