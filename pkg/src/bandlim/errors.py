"""Exception hierarchy shared by all bandlim modules."""


class BandlimError(Exception):
    """Base class for all library errors."""


class DivergentIntegral(BandlimError):
    """A tail integral fails its convergence criterion."""


class DivergentSum(BandlimError):
    """A band sum fails its convergence criterion."""


class NonConvergence(BandlimError):
    """Adaptive quadrature hit its depth limit without meeting tolerance."""


class UnsupportedTimeEval(BandlimError):
    """Time-domain evaluation requested for a spectrum with a power tail."""


class NotInSpace(BandlimError):
    """The input fails the membership criterion of the requested operator."""


class SingularParameter(BandlimError):
    """Parameter sits on a genuine singularity of a closed-form constant."""


class DegenerateFit(BandlimError):
    """Rate fit impossible: nonpositive data or zero variance."""


class InvalidFamilyParams(BandlimError):
    """Counterexample family parameters outside their admissible range."""


class ParseError(BandlimError):
    """Malformed function-spec input."""
