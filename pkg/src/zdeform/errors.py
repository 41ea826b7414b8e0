"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``InputError`` for malformed configuration and ``MathDomainError`` for
requests that are well-formed but have no answer (a pole beyond Nyquist,
an alternating mode with no continuous equivalent, ...).
"""


class ZDeformError(Exception):
    pass


class InputError(ZDeformError):
    pass


class MathDomainError(ZDeformError):
    pass


# configuration
class UnknownName(InputError):
    pass


class InvalidParam(InputError):
    pass


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class InvariantError(InputError):
    pass


# numerics
class ZeroPolynomial(MathDomainError):
    pass


class SingularSystem(MathDomainError):
    pass


class NyquistExceeded(MathDomainError):
    pass


class NonRepresentable(MathDomainError):
    pass


class DegenerateModel(MathDomainError):
    pass


class GrowthOverflow(MathDomainError):
    pass


class RankDeficient(MathDomainError):
    pass
