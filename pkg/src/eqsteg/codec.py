"""Hide a message in an equation and get it back.

Sender: characters become charmap values, an operator is picked after each
value (the last one is always ``=``), and each value is shifted by the
offset of the operator that follows it. Receiver: subtract the offsets and
look the values up in the charmap again.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from .eqparse import (
    Equation,
    StegoEnvelope,
    check_equation,
    parse_envelope,
    render_envelope,
    render_equation,
    tokenize_equation,
)
from .errors import OperatorSequenceError, UnsupportedCharacter, ValueOutOfRange
from .keymap import EQUALS, NON_EQUALS, CharMap, KeyMapRegistry, KeyMapSet, OperatorKeyMap

Weights = Mapping[str, float]


def map_message(msg: str, cm: CharMap) -> list[int]:
    values = []
    for pos, ch in enumerate(msg):
        value = cm.get_value(ch)
        if value is None:
            raise UnsupportedCharacter(pos, ch)
        values.append(value)
    return values


def unmap_values(vals: Sequence[int], cm: CharMap) -> str:
    chars = []
    for pos, value in enumerate(vals):
        sym = cm.get_symbol(value)
        if sym is None:
            raise ValueOutOfRange(pos, value)
        chars.append(sym)
    return "".join(chars)


def _weight_vector(weights: Weights | None) -> list[float]:
    if weights is None:
        return [1.0] * len(NON_EQUALS)
    unknown = set(weights) - set(NON_EQUALS)
    if unknown:
        raise OperatorSequenceError(f"weights given for unknown operators {sorted(unknown)}")
    vec = [float(weights.get(op, 0.0)) for op in NON_EQUALS]
    if any(w < 0 or w != w for w in vec):
        raise OperatorSequenceError("operator weights must be non-negative numbers")
    return vec


def choose_operators(n: int, om: OperatorKeyMap | None = None, seed: int = 0,
                     weights: Weights | None = None) -> list[str]:
    """Pick ``n - 1`` random non-equals operators and close with ``=``.

    Operators missing from ``weights`` get weight 0. ``om`` is accepted for
    symmetry with :func:`embed`; the choice does not depend on offsets.
    """
    if n < 1:
        raise OperatorSequenceError("need at least one operator")
    vec = _weight_vector(weights)
    if n > 1 and not any(vec):
        raise OperatorSequenceError("all operator weights are zero")
    rng = random.Random(seed)
    ops = rng.choices(NON_EQUALS, weights=vec, k=n - 1) if n > 1 else []
    ops.append(EQUALS)
    return ops


def check_operator_sequence(ops: Sequence[str]) -> None:
    if not ops:
        raise OperatorSequenceError("empty operator sequence")
    for i, op in enumerate(ops[:-1]):
        if op == EQUALS:
            raise OperatorSequenceError(f"'=' before end of operator sequence (index {i})")
        if op not in NON_EQUALS:
            raise OperatorSequenceError(f"unknown operator {op!r} at index {i}")
    if ops[-1] != EQUALS:
        raise OperatorSequenceError("operator sequence must end with '='")


def embed(vals: Sequence[int], ops: Sequence[str], om: OperatorKeyMap) -> Equation:
    if len(vals) != len(ops):
        raise OperatorSequenceError(f"{len(vals)} values but {len(ops)} operators")
    check_operator_sequence(ops)
    return Equation.from_pairs([(v + om.embedding_offset(op), op) for v, op in zip(vals, ops)])


def extract(eq: Equation, om: OperatorKeyMap) -> list[int]:
    check_equation(eq)
    vals = []
    for pos, (number, op) in enumerate(eq.pairs()):
        value = number + om.extraction_offset(op)
        if value <= 0:
            raise ValueOutOfRange(pos, value)
        vals.append(value)
    return vals


def encode(msg: str, kms: KeyMapSet, seed: int = 0, weights: Weights | None = None) -> StegoEnvelope:
    vals = map_message(msg, kms.charmap)
    if not vals:
        return render_envelope(kms.id, "")
    ops = choose_operators(len(vals), kms.opmap, seed, weights)
    return render_envelope(kms.id, render_equation(embed(vals, ops, kms.opmap)))


def decode(text: str, registry: KeyMapRegistry) -> str:
    env = parse_envelope(text)
    kms = registry[env.keymap_id]
    if not env.equation_text:
        return ""
    vals = extract(tokenize_equation(env.equation_text), kms.opmap)
    return unmap_values(vals, kms.charmap)
