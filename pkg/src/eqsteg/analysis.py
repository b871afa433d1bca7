"""Capacity accounting and plausibility checks for stego equations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .codec import Weights, _weight_vector, choose_operators, embed, map_message
from .eqparse import (
    SMS_LIMIT,
    Equation,
    Number,
    Operator,
    check_equation,
    envelope_prefix,
    render_equation,
)
from .keymap import EQUALS, NON_EQUALS, KeyMapSet, OperatorKeyMap


def digits(n: int) -> int:
    return len(str(n))


def percent_of_limit(total: int, limit: int = SMS_LIMIT) -> int:
    """``100 * total / limit`` rounded half up, in integer arithmetic."""
    return (200 * total + limit) // (2 * limit)


def _allowed_ops(weights: Weights | None) -> list[str]:
    vec = _weight_vector(weights)
    return [op for op, w in zip(NON_EQUALS, vec) if w > 0]


def char_cost_range(value: int, om: OperatorKeyMap, last: bool,
                    ops: list[str] | None = None) -> tuple[int, int]:
    """Cheapest and dearest number of equation characters one value can take.

    That is the digits of ``value + offset`` plus one for the operator.
    """
    if last:
        c = digits(value + om.embedding_offset(EQUALS)) + 1
        return c, c
    costs = [digits(value + om.embedding_offset(op)) + 1 for op in (ops or NON_EQUALS)]
    return min(costs), max(costs)


@dataclass(frozen=True)
class CapacityReport:
    message_length: int
    prefix_length: int
    min_total: int
    max_total: int
    actual_total: Optional[int] = None

    @property
    def percent_used(self) -> int:
        total = self.actual_total if self.actual_total is not None else self.min_total
        return percent_of_limit(total)

    @property
    def fits(self) -> bool:
        total = self.actual_total if self.actual_total is not None else self.min_total
        return total <= SMS_LIMIT


def capacity_report(msg: str, kms: KeyMapSet, seed: int | None = None,
                    weights: Weights | None = None) -> CapacityReport:
    """Length bounds of the stego text for ``msg``.

    ``actual_total`` is filled in when ``seed`` is given; it is the real
    length produced by :func:`~eqsteg.codec.encode`, which may exceed the
    SMS limit, so it is computed without the limit check.
    """
    vals = map_message(msg, kms.charmap)
    prefix = len(envelope_prefix(kms.id))
    ops = _allowed_ops(weights) if weights is not None else None
    lo = hi = prefix
    for i, v in enumerate(vals):
        a, b = char_cost_range(v, kms.opmap, last=i == len(vals) - 1, ops=ops)
        lo += a
        hi += b
    actual = None
    if seed is not None:
        actual = _unchecked_length(msg, kms, seed, weights)
    return CapacityReport(len(vals), prefix, lo, hi, actual)


def _unchecked_length(msg, kms, seed, weights):
    vals = map_message(msg, kms.charmap)
    prefix = len(envelope_prefix(kms.id))
    if not vals:
        return prefix
    ops = choose_operators(len(vals), kms.opmap, seed, weights)
    return prefix + len(render_equation(embed(vals, ops, kms.opmap)))


def max_message_length(kms: KeyMapSet, pessimistic: bool = False,
                       weights: Weights | None = None) -> int:
    """Longest message guaranteed (pessimistic) or able (optimistic) to fit one SMS."""
    ops = _allowed_ops(weights) if weights is not None else None
    pick = max if pessimistic else min
    idx = 1 if pessimistic else 0
    values = kms.charmap.values
    body = pick(char_cost_range(v, kms.opmap, False, ops)[idx] for v in values)
    tail = pick(char_cost_range(v, kms.opmap, True)[idx] for v in values)
    room = SMS_LIMIT - len(envelope_prefix(kms.id))
    if room < tail:
        return 0
    return 1 + (room - tail) // body


@dataclass(frozen=True)
class LintConfig:
    exponent_max: int = 9
    dominance: float = 0.60
    dominance_min_ops: int = 5


@dataclass(frozen=True)
class LintFinding:
    severity: str  # "warn" or "info"
    token_index: int
    rule: str
    note: str


def lint_equation(eq: Equation, config: LintConfig | None = None) -> list[LintFinding]:
    config = config or LintConfig()
    check_equation(eq)
    findings = []
    tokens = eq.tokens
    for i, tok in enumerate(tokens):
        if isinstance(tok, Operator) and tok.op == "^":
            operand = tokens[i + 1]
            assert isinstance(operand, Number)
            if operand.value > config.exponent_max:
                findings.append(LintFinding(
                    "warn", i + 1, "large-exponent",
                    f"exponent {operand.value} exceeds {config.exponent_max}",
                ))

    ops = [(i, t.op) for i, t in enumerate(tokens)
           if isinstance(t, Operator) and t.op != EQUALS]
    if len(ops) >= config.dominance_min_ops:
        counts = Counter(op for _, op in ops)
        for op, count in counts.items():
            share = count / len(ops)
            if share > config.dominance:
                first = next(i for i, o in ops if o == op)
                findings.append(LintFinding(
                    "info", first, "operator-dominance",
                    f"{op!r} is {round(100 * share)}% of operators (threshold {round(100 * config.dominance)}%)",
                ))
    findings.sort(key=lambda f: f.token_index)
    return findings
