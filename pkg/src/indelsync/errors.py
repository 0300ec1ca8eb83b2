"""Exception hierarchy shared across the package."""


class IndelSyncError(Exception):
    """Base class for all library errors."""


class PatternLengthMismatch(IndelSyncError):
    """Edit pattern does not consume exactly the source length."""


class CursorOutOfRange(IndelSyncError):
    """Arbitrary edit cursor outside the current sequence."""


class SymbolOutOfRange(IndelSyncError):
    """Symbol value not representable in the alphabet."""


class AlphabetMismatch(IndelSyncError):
    """Two sequences do not share an alphabet."""


class TruncatedStream(IndelSyncError):
    """Bit stream or container ended before decoding finished."""


class ModelDesync(IndelSyncError):
    """Entropy decoder produced data failing its checksum."""


class BadMagic(IndelSyncError):
    """Container does not start with the expected magic bytes."""


class VersionUnsupported(IndelSyncError):
    """Container or protocol version not handled by this build."""


class DigestMismatch(IndelSyncError):
    """Reconstructed sequence does not match the transmitted digest."""


class PolicyPreconditionViolated(IndelSyncError):
    """Edit sampler policy applied to an unsupported input."""


class ComplementMisaligned(IndelSyncError):
    """Typicalized pattern and complement cannot be recombined."""


class Unalignable(IndelSyncError):
    """No typical edit pattern links the two sequences."""


class InstanceTooLarge(IndelSyncError):
    """Exhaustive computation refused: instance above the guard size."""


class DomainError(IndelSyncError, ValueError):
    """Numeric argument outside the formula's domain."""


class SyncProtocolError(IndelSyncError):
    """Peer violated the framed update protocol."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
