"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: UsageError -> 1, DataError (and
subclasses) -> 2, NumericError -> 3.
"""


class RlidError(Exception):
    """Base class for all package errors."""


class UsageError(RlidError):
    """Bad flags or inconsistent options (CLI exit code 1)."""


class DataError(RlidError):
    """Malformed or missing input data (CLI exit code 2)."""


class TableError(DataError):
    """Invalid transliteration rule or table file."""


class ProviderError(DataError):
    """Translation backend failed (HTTP error, timeout, exhausted retries)."""


class FixtureMissError(ProviderError):
    """A (text, target-language) key is absent from the fixture map."""


class CheckpointError(DataError):
    """Base class for checkpoint file problems."""


class BadMagicError(CheckpointError):
    """Checkpoint does not start with the expected magic bytes."""


class UnsupportedVersionError(CheckpointError):
    """Checkpoint format version is not supported by this build."""


class TruncatedPayloadError(CheckpointError):
    """Checkpoint payload is shorter than the manifest declares."""


class ManifestMismatchError(CheckpointError):
    """Manifest entry disagrees with the payload or declared shapes."""


class NumericError(RlidError):
    """Non-finite loss or gradient encountered (CLI exit code 3)."""
