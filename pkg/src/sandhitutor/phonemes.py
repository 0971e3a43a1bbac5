"""Sanskrit sound inventory, Maheshvara aphorisms and pratyahara expansion.

The inventory models the classical 50-letter alphabet (13 vowels, 33
consonants, 4 special consonants) plus three kinds of extra symbols that
never count toward the 50: pluta vowel variants (written with a trailing
"3", e.g. "a3" is not used -- pluta exists for the long grades only, "ā3"),
the avagraha, and the rutva placeholder "#" that marks the intermediate
"ru" substitute during derivations.

All tables are immutable module-level constants; every function here is
pure.  The alphabet itself is shipped as ``data/alphabet.tsv`` so it can be
audited without reading code; this module loads and cross-checks it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

# klass values
VOWEL = "vowel"
SEMIVOWEL = "semivowel"
MUTE = "mute"
SIBILANT = "sibilant"
ASPIRATE = "aspirate"
ANUSVARA = "anusvāra"
VISARGA = "visarga"
JIHVAMULIYA = "jihvāmūlīya"
UPADHMANIYA = "upadhmanīya"
AVAGRAHA = "avagraha"
RUTVA = "rutva-marker"

AVAGRAHA_SYMBOL = "'"
RUTVA_SYMBOL = "#"


class UnknownPratyahara(ValueError):
    """No initial/it-marker combination yields this pratyahara."""


@dataclass(frozen=True)
class Phoneme:
    symbol: str
    klass: str
    length: str = "none"        # short | long | pluta | none
    varga: str = "none"         # guttural | palatal | cerebral | dental | labial | none
    nasal: bool = False
    voiced: bool = False
    aspirated: bool = False

    def is_vowel(self) -> bool:
        return self.klass == VOWEL

    def is_consonant(self) -> bool:
        return self.klass in (SEMIVOWEL, MUTE, SIBILANT, ASPIRATE)


def _load_alphabet() -> dict[str, Phoneme]:
    table: dict[str, Phoneme] = {}
    text = resources.files("sandhitutor.data").joinpath("alphabet.tsv").read_text("utf-8")
    for line in text.splitlines():
        line = line.rstrip()
        if not line or line.startswith("//"):
            continue
        sym, klass, length, varga, nasal, voiced, aspirated = line.split("\t")
        table[sym] = Phoneme(
            symbol=sym,
            klass=klass,
            length=length,
            varga=varga,
            nasal=nasal == "y",
            voiced=voiced == "y",
            aspirated=aspirated == "y",
        )
    return table


PHONEMES: dict[str, Phoneme] = _load_alphabet()

SHORT_VOWELS = ["a", "i", "u", "ṛ", "ḷ"]
LONG_VOWELS = ["ā", "ī", "ū", "ṝ", "e", "ai", "o", "au"]
PLUTA_VOWELS = ["ā3", "ī3", "ū3", "ṝ3", "e3", "ai3", "o3", "au3"]
VOWELS = SHORT_VOWELS + LONG_VOWELS

SEMIVOWELS = ["y", "r", "l", "v"]
MUTES = [
    "k", "kh", "g", "gh", "ṅ",
    "c", "ch", "j", "jh", "ñ",
    "ṭ", "ṭh", "ḍ", "ḍh", "ṇ",
    "t", "th", "d", "dh", "n",
    "p", "ph", "b", "bh", "m",
]
SIBILANTS = ["ś", "ṣ", "s"]
CONSONANTS = SEMIVOWELS + MUTES + SIBILANTS + ["h"]
SPECIALS = ["ṃ", "ḥ", "ẖ", "ḫ"]

# savarna families: short/long/pluta grades of one articulation place.
# ṛ and ḷ are treated as one family (their shared long grade is ṝ); the
# diphthong grades e/ai/o/au have no short partner and are self-savarna.
_SAVARNA_FAMILIES = [
    {"a", "ā", "ā3"},
    {"i", "ī", "ī3"},
    {"u", "ū", "ū3"},
    {"ṛ", "ṝ", "ḷ", "ṝ3"},
    {"e", "e3"},
    {"ai", "ai3"},
    {"o", "o3"},
    {"au", "au3"},
]
_SAVARNA_INDEX: dict[str, int] = {}
for _i, _fam in enumerate(_SAVARNA_FAMILIES):
    for _s in _fam:
        _SAVARNA_INDEX[_s] = _i

# long grade used by the savarna-dirgha substitution, keyed by family
_FAMILY_LONG = {0: "ā", 1: "ī", 2: "ū", 3: "ṝ", 4: "e", 5: "ai", 6: "o", 7: "au"}


def is_savarna(a: str, b: str) -> bool:
    """True iff the two vowels belong to one savarna family.

    Only vowel savarna is consumed by the rule corpus; consonants are never
    savarna to each other here, and every symbol is savarna to itself.
    """
    if a == b:
        return True
    ia, ib = _SAVARNA_INDEX.get(a), _SAVARNA_INDEX.get(b)
    return ia is not None and ia == ib


def savarna_dirgha(symbol: str) -> str:
    """Long grade of the symbol's savarna family (used by 'savarṇa-dīrgha')."""
    return _FAMILY_LONG[_SAVARNA_INDEX[symbol]]


def savarna_family(symbol: str) -> set[str]:
    idx = _SAVARNA_INDEX.get(symbol)
    if idx is None:
        return {symbol}
    return set(_SAVARNA_FAMILIES[idx])


# ---------------------------------------------------------------------------
# Maheshvara aphorisms
# ---------------------------------------------------------------------------
# Fourteen aphorisms; each entry is (letters..., it-marker).  The it-marker
# is a mere place-holder and never enters an expansion.  The nasal row of
# the printed source is normalised to the standard ñ m ṅ ṇ n.

MAHESHVARA_SUTRAS: tuple[tuple[tuple[str, ...], str], ...] = (
    (("a", "i", "u"), "ṇ"),
    (("ṛ", "ḷ"), "k"),
    (("e", "o"), "ṅ"),
    (("ai", "au"), "c"),
    (("h", "y", "v", "r"), "ṭ"),
    (("l",), "ṇ"),
    (("ñ", "m", "ṅ", "ṇ", "n"), "m"),
    (("jh", "bh"), "ñ"),
    (("gh", "ḍh", "dh"), "ṣ"),
    (("j", "b", "g", "ḍ", "d"), "ś"),
    (("kh", "ph", "ch", "ṭh", "th", "c", "ṭ", "t"), "v"),
    (("k", "p"), "y"),
    (("ś", "ṣ", "s"), "r"),
    (("h",), "l"),
)

# flat scan order: (letter, aphorism index)
_SCAN: list[tuple[str, int]] = []
for _ai, (_letters, _it) in enumerate(MAHESHVARA_SUTRAS):
    for _ltr in _letters:
        _SCAN.append((_ltr, _ai))


@lru_cache(maxsize=None)
def expand_pratyahara(name: str, savarna_closure: bool = False) -> frozenset[str]:
    """Expand a pratyahara like "ik" or "hal" into its phoneme set.

    The name is initial letter + it-marker.  Letters occurring twice (h)
    start from their first occurrence.  Duplicates collapse; it-markers are
    excluded.  With ``savarna_closure`` each short vowel also contributes
    its long and pluta family members (the Paninian convention when a rule
    consumes the set).
    """
    if len(name) < 2:
        raise UnknownPratyahara(name)
    marker, body = name[-1], name[:-1]
    letters = {ltr for ltr, _ in _SCAN}
    # consonant initials carry a pronunciation "a" in the written name
    # (haL = h + a + L); vowel initials do not (ik, ac).
    if body in letters:
        initial = body
    elif body.endswith("a") and body[:-1] in letters:
        initial = body[:-1]
    else:
        raise UnknownPratyahara(name)
    if not any(marker == it for _, it in MAHESHVARA_SUTRAS):
        raise UnknownPratyahara(name)

    # ambiguous starts (h occurs twice): take the first occurrence
    start = next(i for i, (ltr, _) in enumerate(_SCAN) if ltr == initial)
    # the marker closes the first aphorism at or after the start position
    end_aph = None
    for ai in range(_SCAN[start][1], len(MAHESHVARA_SUTRAS)):
        if MAHESHVARA_SUTRAS[ai][1] == marker:
            end_aph = ai
            break
    if end_aph is None:
        raise UnknownPratyahara(name)

    out: set[str] = set()
    for ltr, ai in _SCAN[start:]:
        if ai > end_aph:
            break
        out.add(ltr)
    if not out:
        raise UnknownPratyahara(name)
    if savarna_closure:
        # long grades join their short partners; pluta variants stay outside
        # expansions just as they stay outside the 50-letter count
        for sym in list(out):
            if sym in _SAVARNA_INDEX:
                out |= {s for s in savarna_family(sym) if not s.endswith("3")}
    return frozenset(out)


# varga rows by their traditional short names
VARGAS = {
    "ku": ["k", "kh", "g", "gh", "ṅ"],
    "cu": ["c", "ch", "j", "jh", "ñ"],
    "ṭu": ["ṭ", "ṭh", "ḍ", "ḍh", "ṇ"],
    "tu": ["t", "th", "d", "dh", "n"],
    "pu": ["p", "ph", "b", "bh", "m"],
}

_VARGA_OF: dict[str, str] = {}
for _row, _members in VARGAS.items():
    for _m in _members:
        _VARGA_OF[_m] = _row


def scan_order(symbols) -> list[str]:
    """Sort letters by their first position in the fourteen aphorisms."""
    pos: dict[str, int] = {}
    for i, (ltr, _) in enumerate(_SCAN):
        pos.setdefault(ltr, i)
    return sorted(symbols, key=lambda s: (pos.get(s, 99), s))


def varga_of(symbol: str) -> str | None:
    return _VARGA_OF.get(symbol)


def varga_nasal(symbol: str) -> str | None:
    """Nasal of the symbol's varga row, if it belongs to one."""
    row = _VARGA_OF.get(symbol)
    return VARGAS[row][4] if row else None


def sanity_check() -> None:
    """Assert the §-independent structural facts about the inventory."""
    assert len(VOWELS) == 13
    assert len(CONSONANTS) == 33
    assert len(SPECIALS) == 4
    assert len(PLUTA_VOWELS) == 8
    base = [s for s, p in PHONEMES.items()
            if p.klass not in (AVAGRAHA, RUTVA) and p.length != "pluta"]
    assert len(base) == 50, len(base)
    nas = [s for s, p in PHONEMES.items() if p.klass == MUTE and p.nasal]
    assert len(nas) == 5
    non = [s for s, p in PHONEMES.items() if p.klass == MUTE and not p.nasal]
    assert len(non) == 20
    assert [s for s, p in PHONEMES.items() if p.klass == RUTVA] == [RUTVA_SYMBOL]


sanity_check()
