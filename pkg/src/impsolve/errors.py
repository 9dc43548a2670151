"""Exception types shared across the package."""


class SpecFormatError(ValueError):
    """An equation file or dictionary is malformed or violates a validation rule."""


class DomainError(RuntimeError):
    """A numerically well-posed request has no answer of the required kind.

    Raised, for example, when a convergence certificate is requested at a
    point where the comparison iteration diverges, or when a linear
    resolvent does not exist because the matrix to invert is singular.
    """


class MonotonicityError(DomainError):
    """The comparison iterates failed to increase.

    For an equation of positive type started from zero this cannot happen
    mathematically, so seeing it means the input was not of positive type
    after all or there is a bug upstream.
    """
