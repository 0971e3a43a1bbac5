"""IAST <-> Devanagari transliteration.

Standard Unicode Devanagari with correct matra/virama placement.  The two
directions are mutually inverse on the supported inventory.  Vedic accents
and other signs outside the inventory raise ``UnsupportedSign``.
"""
from __future__ import annotations

import unicodedata

from .phonemes import PHONEMES, VOWEL
from .tokenizer import JUNCTION, SPACE, UnknownGlyph, tokenize

VIRAMA = "्"
PLUTA_DIGIT = "३"  # DEVANAGARI DIGIT THREE

_INDEP = {
    "a": "अ", "ā": "आ", "i": "इ", "ī": "ई", "u": "उ", "ū": "ऊ",
    "ṛ": "ऋ", "ṝ": "ॠ", "ḷ": "ऌ", "e": "ए", "ai": "ऐ", "o": "ओ", "au": "औ",
}
_MATRA = {
    "ā": "ा", "i": "ि", "ī": "ी", "u": "ु", "ū": "ू",
    "ṛ": "ृ", "ṝ": "ॄ", "ḷ": "ॢ", "e": "े", "ai": "ै", "o": "ो", "au": "ौ",
}
_CONS = {
    "k": "क", "kh": "ख", "g": "ग", "gh": "घ", "ṅ": "ङ",
    "c": "च", "ch": "छ", "j": "ज", "jh": "झ", "ñ": "ञ",
    "ṭ": "ट", "ṭh": "ठ", "ḍ": "ड", "ḍh": "ढ", "ṇ": "ण",
    "t": "त", "th": "थ", "d": "द", "dh": "ध", "n": "न",
    "p": "प", "ph": "फ", "b": "ब", "bh": "भ", "m": "म",
    "y": "य", "r": "र", "l": "ल", "v": "व",
    "ś": "श", "ṣ": "ष", "s": "स", "h": "ह",
}
_SIGNS = {"ṃ": "ं", "ḥ": "ः", "ẖ": "ᳵ", "ḫ": "ᳶ", "'": "ऽ", "#": "#"}

_INDEP_REV = {v: k for k, v in _INDEP.items()}
_MATRA_REV = {v: k for k, v in _MATRA.items()}
_CONS_REV = {v: k for k, v in _CONS.items()}
_SIGNS_REV = {v: k for k, v in _SIGNS.items() if v != "#"}


class UnsupportedSign(ValueError):
    pass


def _vowel_parts(symbol: str) -> tuple[str, bool]:
    """Split a vowel symbol into (base, is_pluta)."""
    if symbol.endswith("3"):
        return symbol[:-1], True
    return symbol, False


def iast_to_deva(text: str) -> str:
    items = tokenize(text)
    out: list[str] = []
    i = 0
    while i < len(items):
        it = items[i]
        if it == SPACE:
            out.append(" ")
            i += 1
            continue
        if it == JUNCTION:
            out.append("+")
            i += 1
            continue
        ph = PHONEMES.get(it)
        if ph is None:
            raise UnsupportedSign(it)
        if ph.is_consonant():
            out.append(_CONS[it])
            nxt = items[i + 1] if i + 1 < len(items) else None
            nph = PHONEMES.get(nxt) if nxt else None
            if nph is not None and nph.klass == VOWEL:
                base, pluta = _vowel_parts(nxt)
                if base != "a":
                    out.append(_MATRA[base])
                if pluta:
                    out.append(PLUTA_DIGIT)
                i += 2
            else:
                out.append(VIRAMA)
                i += 1
            continue
        if ph.klass == VOWEL:
            base, pluta = _vowel_parts(it)
            out.append(_INDEP[base])
            if pluta:
                out.append(PLUTA_DIGIT)
            i += 1
            continue
        out.append(_SIGNS[it])
        i += 1
    return "".join(out)


def deva_to_iast(text: str) -> str:
    text = unicodedata.normalize("NFC", text)
    out: list[str] = []
    pending = False  # a consonant awaiting its vowel
    for pos, ch in enumerate(text):
        if ch in _CONS_REV:
            if pending:
                out.append("a")
            out.append(_CONS_REV[ch])
            pending = True
        elif ch in _MATRA_REV:
            if not pending:
                raise UnsupportedSign(f"dangling matra at {pos}")
            out.append(_MATRA_REV[ch])
            pending = False
        elif ch == VIRAMA:
            if not pending:
                raise UnsupportedSign(f"dangling virama at {pos}")
            pending = False
        elif ch in _INDEP_REV:
            if pending:
                out.append("a")
                pending = False
            out.append(_INDEP_REV[ch])
        elif ch == PLUTA_DIGIT:
            if pending:
                out.append("a")
                pending = False
            out.append("3")
        elif ch in _SIGNS_REV:
            if pending:
                out.append("a")
                pending = False
            out.append(_SIGNS_REV[ch])
        elif ch in (" ", "+", "#"):
            if pending:
                out.append("a")
                pending = False
            out.append(ch)
        else:
            raise UnsupportedSign(f"unsupported sign {ch!r} at {pos}")
    if pending:
        out.append("a")
    return "".join(out)


def transliterate(text: str, direction: str) -> str:
    """direction: "iast-deva" or "deva-iast"."""
    if direction in ("iast-deva", "deva"):
        return iast_to_deva(text)
    if direction in ("deva-iast", "iast"):
        return deva_to_iast(text)
    raise ValueError(f"unknown direction {direction!r}")


__all__ = [
    "iast_to_deva",
    "deva_to_iast",
    "transliterate",
    "UnsupportedSign",
    "UnknownGlyph",
]
