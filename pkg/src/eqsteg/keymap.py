"""Character maps, operator key maps and the text format used to share them.

Both parties of a conversation hold the same :class:`KeyMapSet` objects. The
sender picks one by id, and the id travels in the cover text as the quiz's
points value so the receiver can pick the same set.
"""

from __future__ import annotations

import random
import string
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import (
    KeymapIdError,
    KeymapParseError,
    KeymapValidationError,
    UnknownKeyMap,
)

# canonical order, also the order of the opmap section in keymap files
OPERATORS = ("^", "+", "-", "*", "/", "%", "=")
EQUALS = "="
NON_EQUALS = OPERATORS[:-1]

MIN_ID, MAX_ID = 1, 99
MIN_VALUE, MAX_VALUE = 1, 999
MAX_OFFSET = 999

FORMAT_HEADER = "eqsteg-keymap v1"

DEFAULT_SYMBOLS = string.ascii_uppercase + string.ascii_lowercase + "1234567890 "
DEFAULT_OFFSETS = {"^": 174, "+": 32, "-": 5, "*": 78, "/": 100, "%": 62, "=": 81}


def check_id(keymap_id) -> int:
    if isinstance(keymap_id, bool) or not isinstance(keymap_id, int):
        raise KeymapIdError(keymap_id)
    if not MIN_ID <= keymap_id <= MAX_ID:
        raise KeymapIdError(keymap_id)
    return keymap_id


@dataclass(frozen=True)
class CharMap:
    """Ordered ``(symbol, value)`` pairs mapping plaintext characters to codes.

    Construction does not enforce the bijection; use
    :func:`validate_keymap_set` to collect violations.
    """

    entries: tuple[tuple[str, int], ...]
    _forward: Mapping[str, int] = field(init=False, repr=False, compare=False)
    _backward: Mapping[int, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple((sym, val) for sym, val in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_forward", {s: v for s, v in entries})
        object.__setattr__(self, "_backward", {v: s for s, v in entries})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> CharMap:
        return cls(tuple(pairs))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, symbol):
        return symbol in self._forward

    def value_of(self, symbol: str) -> int:
        return self._forward[symbol]

    def symbol_of(self, value: int) -> str:
        return self._backward[value]

    def get_value(self, symbol: str) -> int | None:
        return self._forward.get(symbol)

    def get_symbol(self, value: int) -> str | None:
        return self._backward.get(value)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.entries)


@dataclass(frozen=True)
class OperatorKeyMap:
    """Additive offset per operator.

    Entries are kept in canonical operator order so that two maps with the
    same assignments compare equal however they were built.
    """

    entries: tuple[tuple[str, int], ...]
    _offsets: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rank = {op: i for i, op in enumerate(OPERATORS)}
        entries = tuple(sorted(((op, off) for op, off in self.entries),
                               key=lambda e: rank.get(e[0], len(OPERATORS))))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_offsets", {op: off for op, off in entries})

    @classmethod
    def from_mapping(cls, offsets: Mapping[str, int]) -> OperatorKeyMap:
        return cls(tuple(offsets.items()))

    def __contains__(self, op):
        return op in self._offsets

    def embedding_offset(self, op: str) -> int:
        return self._offsets[op]

    def extraction_offset(self, op: str) -> int:
        return -self._offsets[op]

    def as_dict(self) -> dict[str, int]:
        return dict(self._offsets)


@dataclass(frozen=True)
class KeyMapSet:
    id: int
    charmap: CharMap
    opmap: OperatorKeyMap


class KeyMapRegistry(Mapping[int, KeyMapSet]):
    """Read-only collection of key map sets keyed by id."""

    def __init__(self, sets: Iterable[KeyMapSet] = ()):
        table: dict[int, KeyMapSet] = {}
        for s in sets:
            if s.id in table:
                raise ValueError(f"duplicate keymap id {s.id} in registry")
            table[s.id] = s
        self._sets = MappingProxyType(table)

    def __getitem__(self, keymap_id: int) -> KeyMapSet:
        try:
            return self._sets[keymap_id]
        except KeyError:
            raise UnknownKeyMap(keymap_id) from None

    def __iter__(self) -> Iterator[int]:
        return iter(self._sets)

    def __len__(self):
        return len(self._sets)

    def lookup(self, keymap_id: int) -> KeyMapSet:
        return self[keymap_id]

    def __repr__(self):
        return f"KeyMapRegistry(ids={sorted(self._sets)})"


def default_charmap() -> CharMap:
    return CharMap(tuple((sym, i) for i, sym in enumerate(DEFAULT_SYMBOLS, start=1)))


def default_opmap() -> OperatorKeyMap:
    return OperatorKeyMap.from_mapping(DEFAULT_OFFSETS)


def default_keymap_set(keymap_id: int) -> KeyMapSet:
    """The example tables (letters 1-52, digits 53-62, space 63) under ``keymap_id``."""
    return KeyMapSet(check_id(keymap_id), default_charmap(), default_opmap())


def default_registry() -> KeyMapRegistry:
    """Registry holding the default tables under every id from 1 to 99."""
    return KeyMapRegistry(default_keymap_set(i) for i in range(MIN_ID, MAX_ID + 1))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_keymap_set(kms: KeyMapSet) -> list[str]:
    """Return every invariant violation in ``kms``; an empty list means valid."""
    problems = []
    if not _is_int(kms.id) or not MIN_ID <= kms.id <= MAX_ID:
        problems.append(f"id {kms.id!r} out of range")

    entries = kms.charmap.entries
    if not entries:
        problems.append("empty charmap")
    for sym, val in entries:
        if not isinstance(sym, str) or len(sym) != 1:
            problems.append(f"symbol {sym!r} is not a single character")
        if not _is_int(val) or not MIN_VALUE <= val <= MAX_VALUE:
            problems.append(f"value {val!r} out of range")
    for sym, n in Counter(s for s, _ in entries).items():
        if n > 1:
            problems.append(f"duplicate symbol {sym!r}")
    for val, n in Counter(v for _, v in entries).items():
        if n > 1:
            problems.append(f"duplicate value {val}")

    ops = Counter(op for op, _ in kms.opmap.entries)
    for op in OPERATORS:
        if ops[op] == 0:
            problems.append(f"missing operator {op}")
        elif ops[op] > 1:
            problems.append(f"duplicate operator {op}")
    for op in ops:
        if op not in OPERATORS:
            problems.append(f"unknown operator {op!r}")
    for op, off in kms.opmap.entries:
        if not _is_int(off) or not 0 <= off <= MAX_OFFSET:
            problems.append(f"offset {off!r} for operator {op} out of range")
    return problems


def ensure_valid(kms: KeyMapSet) -> KeyMapSet:
    problems = validate_keymap_set(kms)
    if problems:
        raise KeymapValidationError(problems)
    return kms


def generate_keymap_set(keymap_id: int, seed: int) -> KeyMapSet:
    """Random but reproducible key map set.

    The 63 default symbols get distinct values drawn from 1-99 and the seven
    operators get distinct offsets drawn from 1-199. The result depends only
    on ``(keymap_id, seed)``.
    """
    check_id(keymap_id)
    rng = random.Random(f"eqsteg-keygen:{keymap_id}:{seed}")
    values = rng.sample(range(1, 100), len(DEFAULT_SYMBOLS))
    offsets = rng.sample(range(1, 200), len(OPERATORS))
    return KeyMapSet(
        keymap_id,
        CharMap(tuple(zip(DEFAULT_SYMBOLS, values))),
        OperatorKeyMap(tuple(zip(OPERATORS, offsets))),
    )


def serialize_keymap_set(kms: KeyMapSet) -> str:
    ensure_valid(kms)
    lines = [FORMAT_HEADER, f"id {kms.id}", f"charmap {len(kms.charmap)}"]
    lines += [f"{ord(sym)} {val}" for sym, val in kms.charmap.entries]
    lines.append(f"opmap {len(OPERATORS)}")
    lines += [f"{op} {kms.opmap.embedding_offset(op)}" for op in OPERATORS]
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, what: str) -> int:
    # digits only: int() would also take "+5", " 5" and "5_0"
    if not token.isascii() or not token.isdigit():
        raise KeymapParseError(f"malformed {what} {token!r}", lineno)
    if len(token) > 1 and token[0] == "0":
        raise KeymapParseError(f"malformed {what} {token!r}", lineno)
    return int(token)


def _header(line: str, lineno: int, name: str) -> int:
    parts = line.split(" ")
    if len(parts) != 2:
        raise KeymapParseError("malformed line", lineno)
    if parts[0] != name:
        raise KeymapParseError(f"unknown section {parts[0]!r}", lineno)
    return _parse_int(parts[1], lineno, name)


def parse_keymap_set(doc: str) -> KeyMapSet:
    """Inverse of :func:`serialize_keymap_set`. Errors carry a line number."""
    if not doc.endswith("\n"):
        raise KeymapParseError("missing trailing newline")
    lines = doc[:-1].split("\n")
    pos = 0

    def next_line():
        nonlocal pos
        if pos >= len(lines):
            raise KeymapParseError("unexpected end of document", pos + 1)
        pos += 1
        return lines[pos - 1], pos

    line, n = next_line()
    if line != FORMAT_HEADER:
        if line.startswith("eqsteg-keymap "):
            raise KeymapParseError(f"unsupported version {line.split(' ', 1)[1]!r}", n)
        raise KeymapParseError("missing eqsteg-keymap header", n)

    line, n = next_line()
    keymap_id = _header(line, n, "id")
    if not MIN_ID <= keymap_id <= MAX_ID:
        raise KeymapParseError(f"id {keymap_id} out of range", n)

    line, n = next_line()
    count = _header(line, n, "charmap")
    pairs = []
    seen_sym, seen_val = set(), set()
    for _ in range(count):
        line, n = next_line()
        parts = line.split(" ")
        if len(parts) != 2:
            raise KeymapParseError("malformed line", n)
        cp = _parse_int(parts[0], n, "codepoint")
        if cp > 0x10FFFF or 0xD800 <= cp <= 0xDFFF:
            raise KeymapParseError(f"invalid codepoint {cp}", n)
        sym = chr(cp)
        val = _parse_int(parts[1], n, "value")
        if not MIN_VALUE <= val <= MAX_VALUE:
            raise KeymapParseError(f"value {val} out of range", n)
        if sym in seen_sym:
            raise KeymapParseError(f"duplicate symbol {sym!r}", n)
        if val in seen_val:
            raise KeymapParseError(f"duplicate value {val}", n)
        seen_sym.add(sym)
        seen_val.add(val)
        pairs.append((sym, val))

    line, n = next_line()
    count = _header(line, n, "opmap")
    if count != len(OPERATORS):
        raise KeymapParseError(f"opmap must list {len(OPERATORS)} operators, not {count}", n)
    offsets = []
    seen_op = set()
    for _ in range(count):
        line, n = next_line()
        parts = line.split(" ")
        if len(parts) != 2:
            raise KeymapParseError("malformed line", n)
        op = parts[0]
        if op not in OPERATORS:
            raise KeymapParseError(f"unknown operator {op!r}", n)
        if op in seen_op:
            raise KeymapParseError(f"duplicate operator {op}", n)
        seen_op.add(op)
        off = _parse_int(parts[1], n, "offset")
        if off > MAX_OFFSET:
            raise KeymapParseError(f"offset {off} out of range", n)
        offsets.append((op, off))

    if pos != len(lines):
        raise KeymapParseError("trailing content", pos + 1)

    kms = KeyMapSet(keymap_id, CharMap(tuple(pairs)), OperatorKeyMap(tuple(offsets)))
    problems = validate_keymap_set(kms)
    if problems:
        raise KeymapParseError("validation failed: " + "; ".join(problems), n)
    return kms
