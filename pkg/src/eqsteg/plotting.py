"""Figures for the capacity report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .analysis import char_cost_range  # noqa: E402
from .codec import choose_operators, embed, map_message  # noqa: E402
from .eqparse import SMS_LIMIT, envelope_prefix  # noqa: E402


def cumulative_lengths(msg, kms, seed=None, weights=None):
    """Running stego length after each character: (min, max, actual or None)."""
    vals = map_message(msg, kms.charmap)
    prefix = len(envelope_prefix(kms.id))
    lo, hi = [prefix], [prefix]
    for i, v in enumerate(vals):
        a, b = char_cost_range(v, kms.opmap, last=i == len(vals) - 1)
        lo.append(lo[-1] + a)
        hi.append(hi[-1] + b)
    actual = None
    if seed is not None:
        actual = [prefix]
        if vals:
            ops = choose_operators(len(vals), kms.opmap, seed, weights)
            for number, _ in embed(vals, ops, kms.opmap).pairs():
                actual.append(actual[-1] + len(str(number)) + 1)
    return lo, hi, actual


def plot_capacity(msg, kms, path, seed=None, weights=None, width=6.0):
    lo, hi, actual = cumulative_lengths(msg, kms, seed, weights)
    xs = list(range(len(lo)))

    fig, ax = plt.subplots(figsize=(width, width * 0.618))
    ax.fill_between(xs, lo, hi, color="0.85", label="achievable")
    ax.plot(xs, lo, color="0.4", lw=1)
    ax.plot(xs, hi, color="0.4", lw=1)
    if actual is not None:
        ax.plot(xs, actual, color="C0", marker="o", ms=3, lw=1.5, label=f"seed {seed}")
    ax.axhline(SMS_LIMIT, color="C3", ls="--", lw=1, label=f"{SMS_LIMIT}-char limit")
    ax.set_xlabel("secret characters embedded")
    ax.set_ylabel("stego text length")
    ax.set_xlim(0, max(1, len(xs) - 1))
    ax.set_title(f"keymap {kms.id}: {len(msg)}-character message", fontsize=10)
    ax.legend(loc="upper left", fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
