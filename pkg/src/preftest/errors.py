"""Exception types shared across the package."""


class PreftestError(Exception):
    """Base class for all library errors."""


class ConfigurationError(PreftestError, ValueError):
    """Invalid parameter combination (CLI maps this to exit code 2)."""


class DuplicateAlternativeError(ConfigurationError):
    """An alternative id occurs more than once in a ranking."""


class UnknownAlternativeError(ConfigurationError):
    """An alternative id is outside the profile's alternative set."""


class EmptySubsetError(ConfigurationError):
    """A restriction subset must contain at least one alternative."""


class SameAlternativeError(ConfigurationError):
    """A comparison query needs two distinct alternatives."""


class DivisibilityError(ConfigurationError):
    """A count parameter fails a required divisibility constraint."""


class ProfileFormatError(ConfigurationError):
    """Malformed profile text."""


class InstanceTooLargeError(PreftestError):
    """Input exceeds an exact-search cap; never silently approximated."""


class TooFewAlternativesError(ConfigurationError):
    """The instance has fewer alternatives than the tester can use."""


class EpsilonOutOfRangeError(ConfigurationError):
    """The requested epsilon lies in a provably untestable regime."""


class CapExceededError(ConfigurationError):
    """A derived size (bucket count, subsample length) exceeds its cap."""


class DegenerateSampleError(ConfigurationError):
    """The derived sample would be too small to carry any signal."""


class NotFoundWithinCapError(ConfigurationError):
    """A searched quantity (e.g. the critical alternative count) exceeds the search cap."""
