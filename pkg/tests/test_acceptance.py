"""Acceptance gate: one test per exit criterion.

Each test records a one-line verdict which ``conftest.py`` prints in the
terminal summary. Run just this gate with::

    pytest tests/test_acceptance.py
"""

from __future__ import annotations

import random
import statistics
import time
from pathlib import Path

import pytest

from eqsteg.analysis import capacity_report, char_cost_range, lint_equation, percent_of_limit
from eqsteg.cli import run
from eqsteg.codec import choose_operators, decode, embed, encode, extract, map_message, unmap_values
from eqsteg.eqparse import parse_envelope, render_equation, tokenize_equation
from eqsteg.errors import CapacityExceeded, EqStegError
from eqsteg.keymap import (
    DEFAULT_SYMBOLS,
    KeyMapRegistry,
    default_keymap_set,
    generate_keymap_set,
    parse_keymap_set,
    serialize_keymap_set,
)

GOLDEN = Path(__file__).parent / "golden" / "default_keymap_id2.txt"
EQ2 = "63%51-220^201^107*115*237^92*119*130="
DEFAULT = default_keymap_set(2)

RESULTS: dict[str, tuple[bool, str]] = {}


def record(name: str, ok: bool, detail: str) -> None:
    RESULTS[name] = (ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


def random_message(rng: random.Random, lo: int, hi: int) -> str:
    return "".join(rng.choice(DEFAULT_SYMBOLS) for _ in range(rng.randint(lo, hi)))


def expected_length(msg, kms, ops):
    """Stego length from the length law, computed without the encoder."""
    prefix = len(f"Math Quiz ({kms.id} Pts) Answer: ")
    return prefix + sum(len(str(kms.charmap.value_of(c) + kms.opmap.embedding_offset(o))) + 1
                        for c, o in zip(msg, ops))


def test_ac01_worked_example():
    t0 = time.perf_counter()
    vals = [1, 46, 46, 27, 29, 37, 63, 14, 41, 49]
    ops = ["%", "-", "^", "^", "*", "*", "^", "*", "*", "="]
    text = render_equation(embed(vals, ops, DEFAULT.opmap))
    back = extract(tokenize_equation(text), DEFAULT.opmap)
    ms = 1000 * (time.perf_counter() - t0)
    ok = text == EQ2 and back == vals and ms < 100
    record("AC1 worked-example fidelity", ok, f"embed -> {text!r}, extract exact={back == vals}, {ms:.2f} ms")


def test_ac02_mapping():
    got = map_message("Attack now", DEFAULT.charmap)
    want = [1, 46, 46, 27, 29, 37, 63, 40, 41, 49]
    record("AC2 mapping fidelity", got == want, f"map('Attack now') = {got}")


def test_ac03_round_trip():
    rng = random.Random(20240603)
    sets = [DEFAULT, generate_keymap_set(3, 42), generate_keymap_set(41, 1001)]
    registry = KeyMapRegistry(sets)
    seeds = [0, 7, 123456789]
    messages = [random_message(rng, 0, 31) for _ in range(1000)]
    t0 = time.perf_counter()
    trips = over = failures = 0
    for msg in messages:
        for kms in sets:
            for seed in seeds:
                try:
                    env = encode(msg, kms, seed)
                except CapacityExceeded:
                    # too long for one SMS: the length law must confirm it, and the
                    # equation itself must still invert
                    ops = choose_operators(len(msg), kms.opmap, seed)
                    eq = embed(map_message(msg, kms.charmap), ops, kms.opmap)
                    if expected_length(msg, kms, ops) <= 140:
                        failures += 1
                    if unmap_values(extract(eq, kms.opmap), kms.charmap) != msg:
                        failures += 1
                    over += 1
                    continue
                trips += 1
                if decode(env.full_text, registry) != msg:
                    failures += 1
    secs = time.perf_counter() - t0
    ok = failures == 0 and secs < 5.0 and trips > 0
    record("AC3 round-trip property", ok,
           f"{len(messages)} msgs x {len(sets)} sets x {len(seeds)} seeds: {trips} envelope round trips, "
           f"{over} over 140 chars (equation-level round trip), {failures} failures, {secs:.2f} s")


# (message, reported total) per row of the capacity table
TABLE = [
    ("", 26),
    ("RUN", 39),
    ("Sunway", 50),
    ("High Five", 60),
    ("I Love Sunway", 75),
    ("Kill him ASAP after noon", 113),
    ("Kill him ASAP after noon thanks", 139),
]


def test_ac04_capacity_table():
    t0 = time.perf_counter()
    lines, ok = [], True
    for msg, reported in TABLE:
        rep = capacity_report(msg, DEFAULT)
        if msg == "RUN":
            row_ok = not (rep.min_total <= reported <= rep.max_total)
            tag = "outside achievable band (as expected)"
        else:
            row_ok = rep.min_total - 2 <= reported <= rep.max_total + 2
            tag = "in band"
        if msg == "":
            row_ok &= rep.min_total == rep.max_total == 26 and rep.percent_used == 19
        if len(msg) == 31:
            row_ok &= percent_of_limit(reported) == 99
        ok &= row_ok
        lines.append(f"{len(msg)}ch {reported} in [{rep.min_total},{rep.max_total}] {tag if row_ok else 'MISMATCH'}")
    secs = time.perf_counter() - t0
    ok &= secs < 1.0
    record("AC4 capacity reproduction", ok, "; ".join(lines) + f"; {secs * 1000:.1f} ms")


def test_ac05_per_character_cost():
    rng = random.Random(5)
    t0 = time.perf_counter()
    costs = []
    while len(costs) < 200:
        msg = random_message(rng, 1, 20)
        try:
            env = encode(msg, DEFAULT, rng.randrange(2**32))
        except CapacityExceeded:
            continue
        costs.append((len(env.full_text) - 26) / len(msg))
    secs = time.perf_counter() - t0
    mean, median = statistics.mean(costs), statistics.median(costs)
    ok = 3.0 <= mean <= 5.0 and 3.0 <= median <= 4.5 and secs < 2.0
    record("AC5 per-character cost", ok, f"mean {mean:.3f}, median {median:.3f} over {len(costs)} encodings, {secs:.2f} s")


def test_ac06_hard_limit():
    rng = random.Random(6)
    weights = {"^": 1}
    checked = rejected = bad = 0
    for n in range(0, 41):
        samples = {"A" * n, "z" * n, " " * n} | {random_message(rng, n, n) for _ in range(30)}
        for msg in samples:
            ops = ["^"] * (n - 1) + ["="] if n else []
            want = expected_length(msg, DEFAULT, ops) if n else 26
            checked += 1
            try:
                env = encode(msg, DEFAULT, rng.randrange(1000), weights)
            except CapacityExceeded:
                rejected += 1
                bad += want <= 140
                continue
            bad += len(env.full_text) > 140 or len(env.full_text) != want
    record("AC6 hard 140-char limit", bad == 0,
           f"{checked} encodings at lengths 0-40 with '^' forced: {checked - rejected} fit, "
           f"{rejected} CapacityExceeded, {bad} violations")


def test_ac07_keymap_format():
    sets = [DEFAULT] + [generate_keymap_set(1 + i % 99, 1000 + i) for i in range(50)]
    exact = all(parse_keymap_set(serialize_keymap_set(s)) == s
                and serialize_keymap_set(parse_keymap_set(serialize_keymap_set(s))) == serialize_keymap_set(s)
                for s in sets)
    golden = serialize_keymap_set(DEFAULT) == GOLDEN.read_text(encoding="utf-8")
    stable = len({serialize_keymap_set(default_keymap_set(2)) for _ in range(5)}) == 1
    record("AC7 keymap format", exact and golden and stable,
           f"{len(sets)} sets round trip exact={exact}, golden match={golden}, stable={stable}")


def _fuzz_inputs(rng, count):
    pieces = ["Math Quiz (", " Pts) Answer: ", "2", "99", "=", "^", "0", "82=", "(", ")"]
    for i in range(count):
        kind = i % 3
        if kind == 0:
            yield bytes(rng.randrange(256) for _ in range(rng.randint(0, 200)))
        elif kind == 1:
            s = "".join(rng.choice("0123456789^+-*/%= x") for _ in range(rng.randint(0, 200)))
            yield s
        else:
            s = "".join(rng.choice(pieces) for _ in range(rng.randint(0, 20)))
            yield s[:200]


def test_ac08_parser_robustness():
    rng = random.Random(8)
    worst = 0.0
    crashes = []
    n = 0
    for data in _fuzz_inputs(rng, 10_000):
        n += 1
        for fn in (tokenize_equation, parse_envelope):
            t0 = time.perf_counter()
            try:
                fn(data)
            except EqStegError:
                pass
            except Exception as exc:  # noqa: BLE001
                crashes.append((fn.__name__, data, repr(exc)))
            worst = max(worst, time.perf_counter() - t0)
    ok = not crashes and worst < 0.010
    record("AC8 parser robustness", ok,
           f"{n} inputs x 2 parsers, {len(crashes)} crashes, slowest {worst * 1000:.3f} ms")


def test_ac09_lint():
    eq2 = lint_equation(tokenize_equation(EQ2))
    warns = [f for f in eq2 if f.severity == "warn" and f.rule == "large-exponent"]
    clean = lint_equation(tokenize_equation("2+3="))
    record("AC9 lint", bool(warns) and not clean,
           f"worked example: {len(warns)} exponent warnings; '2+3=': {len(clean)} findings")


def test_ac10_cli_round_trip(tmp_path):
    rng = random.Random(10)
    mismatches = 0
    for i in range(100):
        msg = random_message(rng, 0, 20)
        code, stego, err = run(["encode", "--keymap", "default", "--id", str(1 + i % 99),
                                "--seed", str(i), "--message", msg])
        if code != 0:
            mismatches += 1
            continue
        code, out, err = run(["decode", "--keymap", "default"], stego)
        mismatches += code != 0 or out != msg.encode() + b"\n"

    km3, km4 = tmp_path / "km3.txt", tmp_path / "km4.txt"
    km3.write_text(serialize_keymap_set(generate_keymap_set(3, 5)), encoding="utf-8")
    km4.write_text(serialize_keymap_set(generate_keymap_set(4, 5)), encoding="utf-8")
    _, stego, _ = run(["encode", "--keymap", str(km3), "--seed", "1", "--message", "Sunway"])
    code, out, err = run(["decode", "--keymap", str(km4)], stego)
    wrong_id = code == 1 and out == b"" and b"unknown keymap" in err
    record("AC10 CLI round trip", mismatches == 0 and wrong_id,
           f"100 encode|decode pipes, {mismatches} mismatches; wrong id -> exit {code}, {err.decode().strip()!r}")


@pytest.mark.parametrize("msg", ["A", "Zz", "Sun", "9 0"])
def test_length_law_cost_bounds(msg):
    # supplementary: per-character cost with the default tables is 2 to 4
    vals = map_message(msg, DEFAULT.charmap)
    for i, v in enumerate(vals):
        lo, hi = char_cost_range(v, DEFAULT.opmap, last=i == len(vals) - 1)
        assert 2 <= lo <= hi <= 4
