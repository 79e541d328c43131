"""Exception types shared by the engines."""


class RamseyError(Exception):
    pass


class ParseError(RamseyError, ValueError):
    """Malformed input text. ``token`` names the offending piece when known."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class ResourceLimitError(RamseyError):
    """A configured search-space or size cap would be exceeded."""


class BitCapExceeded(ResourceLimitError):
    def __init__(self, message, bits=None, chain=None):
        super().__init__(message)
        self.bits = bits
        self.chain = chain
