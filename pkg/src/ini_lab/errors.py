"""Exception types raised by ini_lab."""


class IniLabError(ValueError):
    """Base class for all ini_lab errors."""


class ConfigError(IniLabError):
    """Invalid numerology pair or configuration."""


class NonIntegerGrid(ConfigError):
    pass


class BadQ(ConfigError):
    pass


class BadShare(ConfigError):
    pass


class IndexOutOfRange(IniLabError):
    pass


class BadIndex(IndexOutOfRange):
    pass


class LengthMismatch(IniLabError):
    pass


class SizeMismatch(IniLabError):
    pass


class FramingMismatch(IniLabError):
    pass


class BadSymbolIndex(IniLabError):
    pass


class DelayExceedsCp(ConfigError):
    pass


class SpectralNull(IniLabError):
    pass


class UnsupportedChannel(ConfigError):
    """Non-identity channel requested where only the identity channel is modelled."""
