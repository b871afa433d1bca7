"""Equation tokenizer/renderer and the "Math Quiz" cover-text envelope.

An equation is written without whitespace as numbers separated by
operators and always closed by a single ``=``::

    63%51-220^201^107*115*237^92*119*130=
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import CapacityExceeded, MalformedStego, TokenizeError
from .keymap import EQUALS, OPERATORS, check_id

SMS_LIMIT = 140

ENVELOPE_HEAD = "Math Quiz ("
ENVELOPE_TAIL = " Pts) Answer: "

# int() refuses very long digit strings; real stego numbers have at most 4 digits
MAX_NUMBER_DIGITS = 1000

_DIGITS = frozenset("0123456789")
_OPERATOR_CHARS = frozenset(OPERATORS)


@dataclass(frozen=True)
class Number:
    value: int
    digits: int = 0

    def __post_init__(self):
        if self.digits == 0:
            object.__setattr__(self, "digits", len(str(self.value)))

    @property
    def text(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Operator:
    op: str

    @property
    def text(self) -> str:
        return self.op


EquationToken = Union[Number, Operator]


@dataclass(frozen=True)
class Equation:
    tokens: tuple[EquationToken, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def numbers(self) -> list[int]:
        return [t.value for t in self.tokens if isinstance(t, Number)]

    @property
    def operators(self) -> list[str]:
        return [t.op for t in self.tokens if isinstance(t, Operator)]

    def pairs(self) -> list[tuple[int, str]]:
        """``(number, following operator)`` pairs of a well-formed equation."""
        return list(zip(self.numbers, self.operators))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, str]]) -> Equation:
        tokens: list[EquationToken] = []
        for value, op in pairs:
            tokens.append(Number(value))
            tokens.append(Operator(op))
        return cls(tuple(tokens))


@dataclass(frozen=True)
class StegoEnvelope:
    keymap_id: int
    equation_text: str
    full_text: str

    def __len__(self):
        return len(self.full_text)

    def __str__(self):
        return self.full_text


def tokenize_equation(text: str | bytes) -> Equation:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise TokenizeError("non-ASCII byte in equation", exc.start) from None
    if not text:
        raise TokenizeError("empty equation")

    tokens: list[EquationToken] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _DIGITS:
            if tokens and isinstance(tokens[-1], Number):
                raise TokenizeError("two adjacent numbers", i)
            start = i
            while i < n and text[i] in _DIGITS:
                i += 1
            digits = text[start:i]
            if len(digits) > 1 and digits[0] == "0":
                raise TokenizeError("leading zero in number", start)
            if len(digits) > MAX_NUMBER_DIGITS:
                raise TokenizeError("number too long", start)
            tokens.append(Number(int(digits), len(digits)))
            continue
        if ch in _OPERATOR_CHARS:
            if not tokens:
                raise TokenizeError(f"equation starts with operator {ch!r}", i)
            if isinstance(tokens[-1], Operator):
                raise TokenizeError("two adjacent operators", i)
            if ch == EQUALS and i != n - 1:
                raise TokenizeError("'=' before end of equation", i)
            tokens.append(Operator(ch))
            i += 1
            continue
        raise TokenizeError(f"unexpected character {ch!r}", i)

    if not (isinstance(tokens[-1], Operator) and tokens[-1].op == EQUALS):
        raise TokenizeError("missing terminal '='")
    return Equation(tuple(tokens))


def check_equation(eq: Equation) -> None:
    """Raise :class:`TokenizeError` unless ``eq`` satisfies the equation invariants."""
    tokens = eq.tokens
    if not tokens:
        raise TokenizeError("empty equation")
    for idx, tok in enumerate(tokens):
        want = Number if idx % 2 == 0 else Operator
        if not isinstance(tok, want):
            raise TokenizeError(f"alternation violated at token {idx}")
        if isinstance(tok, Number):
            if isinstance(tok.value, bool) or not isinstance(tok.value, int) or tok.value < 0:
                raise TokenizeError(f"token {idx} is not a non-negative integer")
            if tok.digits != len(str(tok.value)):
                raise TokenizeError(f"token {idx} digit count does not match its value")
        else:
            if tok.op not in _OPERATOR_CHARS:
                raise TokenizeError(f"token {idx} is not an operator")
            last = idx == len(tokens) - 1
            if (tok.op == EQUALS) != last:
                msg = "missing terminal '='" if last else "'=' before end of equation"
                raise TokenizeError(f"{msg} at token {idx}")
    if len(tokens) % 2:
        raise TokenizeError("missing terminal '='")


def render_equation(eq: Equation) -> str:
    check_equation(eq)
    return "".join(t.text for t in eq.tokens)


def envelope_prefix(keymap_id: int) -> str:
    return f"{ENVELOPE_HEAD}{keymap_id}{ENVELOPE_TAIL}"


def render_envelope(keymap_id: int, equation_text: str) -> StegoEnvelope:
    check_id(keymap_id)
    full = envelope_prefix(keymap_id) + equation_text
    if len(full) > SMS_LIMIT:
        raise CapacityExceeded(len(full), SMS_LIMIT)
    if equation_text:
        tokenize_equation(equation_text)
    return StegoEnvelope(keymap_id, equation_text, full)


def parse_envelope(text: str | bytes) -> StegoEnvelope:
    """Split stego text into key map id and equation text.

    The empty equation is accepted and stands for the empty message.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError:
            raise MalformedStego("stego text is not ASCII") from None
    if not text.startswith(ENVELOPE_HEAD):
        raise MalformedStego("cover text prefix mismatch")
    rest = text[len(ENVELOPE_HEAD):]
    end = rest.find(ENVELOPE_TAIL)
    if end < 0:
        raise MalformedStego("cover text prefix mismatch")
    points = rest[:end]
    if not (1 <= len(points) <= 2 and points.isascii() and points.isdigit()) or points[0] == "0":
        raise MalformedStego(f"malformed points field {points!r}")
    return render_envelope(int(points), rest[end + len(ENVELOPE_TAIL):])
