"""IAST tokenisation into phoneme sequences and back.

Segmentation is greedy longest-match over the inventory (so "ai", "kh",
"ā3" win over their prefixes).  IAST is fully spelled, so no inherent
vowels are assumed.  A "." in the input breaks an accidental digraph and
is consumed; "+" marks a word junction supplied by the caller; a plain
apostrophe (or U+2019) is the avagraha.
"""
from __future__ import annotations

import unicodedata

from .phonemes import AVAGRAHA_SYMBOL, PHONEMES, RUTVA_SYMBOL

JUNCTION = "<+>"
SPACE = " "

_APOSTROPHES = {"'", "’", "ʼ", "ऽ"}

_SYMBOLS = sorted(PHONEMES, key=len, reverse=True)
_MAXLEN = max(len(s) for s in _SYMBOLS)
_SYMSET = set(_SYMBOLS)


class TokenizerError(ValueError):
    pass


class EmptyInput(TokenizerError):
    pass


class UnknownGlyph(TokenizerError):
    def __init__(self, text: str, position: int):
        self.position = position
        super().__init__(f"unknown glyph {text[position]!r} at position {position} in {text!r}")


class UnresolvedRutva(TokenizerError):
    pass


def tokenize(text: str, allow_junction: bool = True) -> list[str]:
    """Segment an IAST string into inventory symbols.

    Returns a list whose items are phoneme symbols, SPACE or JUNCTION.
    """
    if text is None or text == "":
        raise EmptyInput("empty input")
    text = unicodedata.normalize("NFC", text)
    items: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ".":
            i += 1
            continue
        if ch == " ":
            items.append(SPACE)
            i += 1
            continue
        if ch == "+" and allow_junction:
            items.append(JUNCTION)
            i += 1
            continue
        if ch in _APOSTROPHES:
            items.append(AVAGRAHA_SYMBOL)
            i += 1
            continue
        for ln in range(min(_MAXLEN, n - i), 0, -1):
            cand = text[i:i + ln]
            if cand in _SYMSET:
                items.append(cand)
                i += ln
                break
        else:
            raise UnknownGlyph(text, i)
    return items


def detokenize(items: list[str], allow_rutva: bool = False) -> str:
    """Exact inverse of :func:`tokenize` on valid input."""
    out: list[str] = []
    for it in items:
        if it == JUNCTION:
            out.append("+")
        elif it == SPACE:
            out.append(" ")
        elif it == RUTVA_SYMBOL and not allow_rutva:
            raise UnresolvedRutva("form still carries the rutva marker '#'")
        else:
            out.append(it)
    return "".join(out)
