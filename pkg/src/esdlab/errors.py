"""Exception hierarchy for esdlab."""


class EsdlabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(EsdlabError, ValueError):
    pass


class TraceError(ValidationError):
    pass


class NegativePopulation(ValidationError):
    pass


class BlockPositivityError(ValidationError):
    pass


class NotXForm(ValidationError):
    def __init__(self, message, largest_offx=float("nan")):
        super().__init__(message)
        self.largest_offx = largest_offx


class DomainError(ValidationError):
    pass


class ZeroPolynomial(EsdlabError):
    pass


class NoSignChange(EsdlabError):
    pass


class NonFiniteState(EsdlabError, ArithmeticError):
    pass


class ComplexSpectrum(EsdlabError):
    pass


class NotEntangled(EsdlabError):
    pass


class ZeroTemperature(EsdlabError):
    pass


class DegenerateDenominator(EsdlabError, ZeroDivisionError):
    pass


class UnknownFamily(ValidationError):
    pass


class ParamOutOfRange(ValidationError):
    pass
