"""Exception hierarchy shared by every eqsteg module."""

from __future__ import annotations


class EqStegError(Exception):
    """Base class for all domain errors raised by eqsteg."""

    #: short name used by the CLI when reporting the error
    kind = "error"


class KeymapIdError(EqStegError, ValueError):
    kind = "keymap id out of range"

    def __init__(self, keymap_id):
        super().__init__(f"keymap id {keymap_id!r} out of range (1-99)")
        self.keymap_id = keymap_id


class KeymapValidationError(EqStegError, ValueError):
    kind = "invalid keymap"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class KeymapParseError(EqStegError, ValueError):
    kind = "keymap parse error"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class TokenizeError(EqStegError, ValueError):
    """Raised when an equation string is not well formed.

    ``position`` is the zero-based character offset of the problem, or
    ``None`` when the error concerns the string as a whole.
    """

    kind = "malformed equation"

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)


class MalformedStego(EqStegError, ValueError):
    kind = "malformed stego"


class CapacityExceeded(EqStegError):
    kind = "capacity exceeded"

    def __init__(self, length, limit=140):
        self.length = length
        self.limit = limit
        super().__init__(f"stego text is {length} characters, limit is {limit}")


class UnsupportedCharacter(EqStegError, ValueError):
    kind = "unsupported character"

    def __init__(self, position, character):
        self.position = position
        self.character = character
        super().__init__(f"character {character!r} at position {position} has no charmap entry")


class ValueOutOfRange(EqStegError, ValueError):
    kind = "value out of range"

    def __init__(self, position, value):
        self.position = position
        self.value = value
        super().__init__(f"value {value} at position {position} has no charmap preimage")


class UnknownKeyMap(EqStegError, LookupError):
    kind = "unknown keymap"

    def __init__(self, keymap_id):
        self.keymap_id = keymap_id
        super().__init__(f"no keymap registered with id {keymap_id}")


class OperatorSequenceError(EqStegError, ValueError):
    kind = "invalid operator sequence"
