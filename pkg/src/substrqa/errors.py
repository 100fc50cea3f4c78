"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems (ParseError, DomainError)
exit 2, computational failures (saturation, reconstruction, resource limits,
cross-check discrepancies) exit 3, golden-value verification failures exit 1.
"""


class SubstRQAError(Exception):
    """Base class for all package errors."""


class ParseError(SubstRQAError, ValueError):
    """Malformed substitution text or invalid letters/words."""


class DomainError(SubstRQAError, ValueError):
    """Operation applied to a substitution outside its contract.

    Examples: asking for the recognizability constants of a non-primitive
    substitution, or a fixed point of a substitution whose image of 0 does
    not start with 0.
    """


class ResourceLimitError(SubstRQAError, RuntimeError):
    """A size cap was exceeded before the computation could finish."""


class SaturationError(ResourceLimitError):
    """A language or occurrence scan failed to stabilise below the size cap."""


class ReconstructionError(SubstRQAError, RuntimeError):
    """A base density failed its empirical cross-validation.

    Raised instead of ever returning a silently wrong rational; the message
    names the offending base length.
    """


class DiscrepancyError(SubstRQAError, RuntimeError):
    """Two independent computation routes disagreed beyond tolerance."""
