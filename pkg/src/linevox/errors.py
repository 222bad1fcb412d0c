"""Exception types shared across the package.

Every error raised on bad input derives from :class:`LinevoxError` so the
CLI can map any of them to a nonzero exit code with a typed message.
"""


class LinevoxError(Exception):
    """Base class for all typed errors raised by this package."""


# --- TCK parsing -----------------------------------------------------------

class TckError(LinevoxError):
    """Base class for TCK container errors."""


class MissingMagic(TckError):
    """File does not start with the 'mrtrix tracks' magic line."""


class MalformedHeader(TckError):
    """Header is not decodable 'key: value' lines terminated by END."""


class UnsupportedDatatype(TckError):
    """Header declares a datatype other than Float32LE."""


class BadOffset(TckError):
    """The 'file: . <offset>' field is missing, unparsable, or out of range."""


class TruncatedBody(TckError):
    """Binary body ends mid-triplet or without the Inf terminator."""


class CorruptBody(TckError):
    """A non-finite coordinate appears outside a sentinel triplet."""


# --- scene building / ordering ---------------------------------------------

class EmptyDataset(LinevoxError):
    """Operation requires at least one streamline point."""


class EmptyOrderSet(LinevoxError):
    """Order lookup on an order set that stores no directions."""


class DegenerateView(LinevoxError):
    """Voxel center coincides with the camera eye."""


class MismatchedSegmentSets(LinevoxError):
    """Two paint orders do not cover the same segment set."""


# --- rendering ---------------------------------------------------------------

class DimensionMismatch(LinevoxError):
    """Images being compared have different dimensions."""


# --- CLI / scene file --------------------------------------------------------

class BadSceneFile(LinevoxError):
    """Scene file has a bad magic, version, or inconsistent layout."""


class BadCameraFlags(LinevoxError):
    """Camera flags are unparsable or geometrically invalid."""
