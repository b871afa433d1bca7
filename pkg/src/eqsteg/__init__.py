"""Hide short text messages in arithmetic equations sent as a math-quiz SMS."""

from .analysis import (
    CapacityReport,
    LintConfig,
    LintFinding,
    capacity_report,
    lint_equation,
    max_message_length,
)
from .codec import (
    choose_operators,
    decode,
    embed,
    encode,
    extract,
    map_message,
    unmap_values,
)
from .eqparse import (
    Equation,
    Number,
    Operator,
    StegoEnvelope,
    parse_envelope,
    render_envelope,
    render_equation,
    tokenize_equation,
)
from .errors import (
    CapacityExceeded,
    EqStegError,
    KeymapIdError,
    KeymapParseError,
    KeymapValidationError,
    MalformedStego,
    OperatorSequenceError,
    TokenizeError,
    UnknownKeyMap,
    UnsupportedCharacter,
    ValueOutOfRange,
)
from .keymap import (
    CharMap,
    KeyMapRegistry,
    KeyMapSet,
    OperatorKeyMap,
    default_keymap_set,
    default_registry,
    generate_keymap_set,
    parse_keymap_set,
    serialize_keymap_set,
    validate_keymap_set,
)

__version__ = "0.1.0"
