class EvtCodecError(Exception):
    """Base class for all package errors."""


class EventError(EvtCodecError, ValueError):
    """An event or stream violates polarity, bounds or ordering rules."""


class OutOfWindowError(EvtCodecError, ValueError):
    pass


class EncodeError(EvtCodecError, ValueError):
    pass


class CodecError(EvtCodecError, ValueError):
    """A tensor cannot be COO-encoded, or a COO buffer is corrupt."""


class FormatError(EvtCodecError, ValueError):
    """Malformed file contents; the message names the file location."""


class AugmentError(EvtCodecError, ValueError):
    pass
