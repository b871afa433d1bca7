"""Command line front end.

    eqsteg encode  --keymap default --id 2 --seed 7 --message "Attack now"
    eqsteg decode  --keymap default < stego.txt
    eqsteg keygen  --id 3 --seed 42 --output km3.txt
    eqsteg capacity --keymap km3.txt --message "Sunway" --seed 1 --figure cap.png
    eqsteg lint    < stego.txt

Exit status is 0 on success, 1 on domain errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import random
import sys
from pathlib import Path

from . import analysis, codec, eqparse, keymap
from .errors import EqStegError, KeymapParseError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_weights(text: str) -> dict[str, float]:
    """``"^:0,+:1,*:2"`` -> ``{"^": 0.0, "+": 1.0, "*": 2.0}``; unlisted operators get 0."""
    weights = {}
    for item in text.split(","):
        op, sep, w = item.strip().rpartition(":")
        if not sep or op not in keymap.NON_EQUALS:
            raise UsageError(f"bad weight {item!r}; expected OP:WEIGHT with OP in {' '.join(keymap.NON_EQUALS)}")
        try:
            weights[op] = float(w)
        except ValueError:
            raise UsageError(f"bad weight {item!r}") from None
    return weights


def load_registry(specs: list[str]) -> keymap.KeyMapRegistry:
    sets = {}
    for spec in specs:
        if spec == "default":
            new = list(keymap.default_registry().values())
        else:
            try:
                doc = Path(spec).read_text(encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot read keymap {spec}: {exc.strerror}") from None
            try:
                new = [keymap.parse_keymap_set(doc)]
            except KeymapParseError as exc:
                raise KeymapParseError(f"{spec}: {exc}") from None
        for s in new:
            # later files override the default tables for their id
            sets[s.id] = s
    return keymap.KeyMapRegistry(sets.values())


def _select(registry: keymap.KeyMapRegistry, keymap_id: int | None) -> keymap.KeyMapSet:
    if keymap_id is None:
        if len(registry) != 1:
            raise UsageError("--id is required when more than one keymap is loaded")
        return next(iter(registry.values()))
    keymap.check_id(keymap_id)
    return registry[keymap_id]


def _strip_newline(text: str) -> str:
    if text.endswith("\r\n"):
        return text[:-2]
    if text.endswith("\n"):
        return text[:-1]
    return text


def _read_text(args, stdin) -> str:
    if getattr(args, "message", None) is not None:
        return args.message
    if getattr(args, "input", None):
        data = Path(args.input).read_bytes()
    elif stdin is None:
        raise UsageError("no input: pass --message/--input or pipe text on stdin")
    else:
        data = stdin.read() if hasattr(stdin, "read") else stdin
    try:
        return _strip_newline(data.decode("utf-8"))
    except UnicodeDecodeError:
        raise UsageError("input is not valid UTF-8") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return random.SystemRandom().randrange(2**32)


def cmd_encode(args, stdin):
    registry = load_registry(args.keymap)
    kms = _select(registry, args.id)
    weights = parse_weights(args.weights) if args.weights else None
    msg = _read_text(args, stdin)
    return codec.encode(msg, kms, _seed(args), weights).full_text + "\n"


def cmd_decode(args, stdin):
    registry = load_registry(args.keymap)
    text = _read_text(args, stdin)
    return codec.decode(text, registry) + "\n"


def cmd_keygen(args, stdin):
    if args.default:
        kms = keymap.default_keymap_set(args.id)
    else:
        if args.seed is None:
            raise UsageError("keygen needs --seed (or --default)")
        kms = keymap.generate_keymap_set(args.id, args.seed)
    return keymap.serialize_keymap_set(kms)


def cmd_capacity(args, stdin):
    registry = load_registry(args.keymap)
    kms = _select(registry, args.id)
    weights = parse_weights(args.weights) if args.weights else None
    msg = _read_text(args, stdin)
    rep = analysis.capacity_report(msg, kms, args.seed, weights)
    rows = [
        ("keymap_id", kms.id),
        ("message_length", rep.message_length),
        ("prefix_length", rep.prefix_length),
        ("min_total", rep.min_total),
        ("max_total", rep.max_total),
    ]
    if rep.actual_total is not None:
        rows.append(("actual_total", rep.actual_total))
    rows += [
        ("percent_used", rep.percent_used),
        ("fits", "yes" if rep.fits else "no"),
        ("max_length_optimistic", analysis.max_message_length(kms, False, weights)),
        ("max_length_pessimistic", analysis.max_message_length(kms, True, weights)),
    ]
    if args.figure:
        from .plotting import plot_capacity

        plot_capacity(msg, kms, args.figure, args.seed, weights)
        rows.append(("figure", args.figure))
    return "".join(f"{k}\t{v}\n" for k, v in rows)


def cmd_lint(args, stdin):
    text = _read_text(args, stdin)
    if text.startswith(eqparse.ENVELOPE_HEAD):
        text = eqparse.parse_envelope(text).equation_text
    config = analysis.LintConfig(args.exponent_max, args.dominance, args.min_ops)
    findings = analysis.lint_equation(eqparse.tokenize_equation(text), config) if text else []
    lines = [f"{f.severity}\t{f.token_index}\t{f.rule}\t{f.note}\n" for f in findings]
    lines.append(f"total\t{len(findings)}\n")
    return "".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eqsteg", description="Hide short messages in math-quiz equations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def keymap_opt(p):
        p.add_argument("--keymap", action="append", required=True, metavar="PATH|default",
                       help="keymap file, or 'default' for the built-in tables under every id (repeatable)")

    def output_opt(p):
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("encode", help="hide a message")
    keymap_opt(p)
    p.add_argument("--id", type=int, help="keymap id to use (shown as the quiz points)")
    p.add_argument("--seed", type=int, help="operator choice seed; random if omitted")
    p.add_argument("--weights", help="operator weights, e.g. '+:3,-:3,*:1'")
    p.add_argument("--message", "-m", help="secret message; read from stdin when omitted")
    p.add_argument("--input", "-i", help="read the message from a file")
    output_opt(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a message from stego text")
    keymap_opt(p)
    p.add_argument("--input", "-i", help="read stego text from a file instead of stdin")
    output_opt(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("keygen", help="write a keymap file")
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--default", action="store_true", help="write the built-in tables instead of random ones")
    output_opt(p)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("capacity", help="report stego length bounds for a message")
    keymap_opt(p)
    p.add_argument("--id", type=int)
    p.add_argument("--seed", type=int, help="also report the actual length for this seed")
    p.add_argument("--weights")
    p.add_argument("--message", "-m")
    p.add_argument("--input", "-i")
    p.add_argument("--figure", metavar="PATH", help="render the cumulative length chart to PATH")
    output_opt(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("lint", help="flag implausible-looking equations")
    p.add_argument("--input", "-i", help="stego text or bare equation; stdin when omitted")
    p.add_argument("--exponent-max", type=int, default=9)
    p.add_argument("--dominance", type=float, default=0.60)
    p.add_argument("--min-ops", type=int, default=5)
    output_opt(p)
    p.set_defaults(func=cmd_lint)
    return parser


def run(argv: list[str], stdin=None) -> tuple[int, bytes, bytes]:
    """Execute one invocation; returns ``(exit_code, stdout, stderr)``.

    ``stdin`` is bytes or a binary stream, read only if the command needs it.
    """
    out, err = io.StringIO(), io.StringIO()
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except UsageError as exc:
        return 2, b"", f"{exc}\n{parser.format_usage()}".encode()
    except SystemExit as exc:  # --help
        return (exc.code or 0), out.getvalue().encode(), err.getvalue().encode()

    try:
        result = args.func(args, stdin)
        if getattr(args, "output", None):
            Path(args.output).write_text(result, encoding="utf-8", newline="\n")
            result = ""
    except UsageError as exc:
        return 2, b"", f"eqsteg {args.command}: {exc}\n".encode()
    except EqStegError as exc:
        return 1, b"", f"error: {exc.kind}: {exc}\n".encode()
    except OSError as exc:
        return 1, b"", f"error: {exc}\n".encode()
    return 0, result.encode("utf-8"), b""


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    stdin = None if sys.stdin is None or sys.stdin.isatty() else sys.stdin.buffer
    code, out, err = run(argv, stdin)
    sys.stdout.buffer.write(out)
    sys.stderr.buffer.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
