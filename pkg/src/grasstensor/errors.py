"""Exception types shared across the package."""


class GrassTensorError(Exception):
    """Base class for all package errors."""


class DimensionError(GrassTensorError, ValueError):
    """Shapes, multi-indices or ranges are inconsistent."""


class ProfileError(GrassTensorError, ValueError):
    """A profile does not partition ``k + 1`` within the view dimensions."""


class GenericityError(GrassTensorError):
    """The setup violates the genericity assumption (or ``i < 0``).

    Formula-based rank operations and canonicalization refuse such setups; the
    exact rank oracle still applies.
    """


class ParseError(GrassTensorError, ValueError):
    """An input file could not be decoded."""
