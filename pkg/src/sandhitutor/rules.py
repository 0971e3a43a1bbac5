"""Rule base: the ordered corpus of euphonic-conjunction aphorisms.

Each rule carries an ordinal (``lam``), an Ashtadhyayi reference, a module
assignment M1..M13, a category (alpha, beta1..beta2, gamma1..gamma7,
delta1..delta3, epsilon1..epsilon2, eta1..eta3), a context pattern over
the junction letters (u, x, y, w), and a transform.  The corpus ships as
``data/sutras.txt`` (one record per line, ``key=value`` fields separated
by `` | ``); the loader validates the whole structure and fails closed.

Context mini-language (documented for auditors):

    u:EXPR ; x:EXPR ; y:EXPR ; w:EXPR   letter-set conditions
    boundary:junction|internal|either   where the site may sit
    pos:final|final_or_jhali|nonfinal   pada-position of x
    lw:WORD  lw_in:W1,W2  not_lw_in:..  the word carrying x (as input)
    rw:WORD  rw_in:..     rw_prefix_in: the word after the junction
    lw_suffix_in:S1,S2                  left word ends with one of these
    lw_nsyms:N                          left word has N phonemes
    u_alt_words:W1,W2                   u-condition also met by these words
    y_savarna_x:y|n                     y must (not) be savarna with x
    x_ne_y:y                            x and y must differ
    not_xy:x1~y1,x2~y2                  excluded (x, y) pairs

    EXPR is atoms joined by + or - (left to right):
      a pratyahara (ac, ik, hal, jhal, ...; expanded with savarna closure),
      a varga row (ku, cu, ṭu, tu, pu),
      a class word (hrasva, dirgha, pluta, vowel, nasal),
      a literal list [a,ā,e], or avasana (end of utterance, y only).

Transform field: ``KIND [RESULT] [flags]``:
    kinds: none sub_x sub_y sub_both del_x del_y ins_x ins_y dbl_x dbl_y assim
    result: lit:a,v | map:TABLE:x|y | copy:y | special:kupvoh | assim:scu|stu
    flags: block fuse lengthen_u suppress:tag1,tag2
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from . import phonemes as ph
from .phonemes import UnknownPratyahara, expand_pratyahara, is_savarna, savarna_dirgha
from .tokenizer import tokenize

AVASANA = "<avasana>"

MODULE_CATEGORIES: dict[int, frozenset[str]] = {
    1: frozenset({"alpha"}),
    2: frozenset({"delta1", "epsilon1"}),
    3: frozenset({"beta1"}),
    4: frozenset({"beta2"}),
    5: frozenset({"gamma1"}),
    6: frozenset({"delta2", "eta1"}),
    7: frozenset({"gamma2", "delta3"}),
    8: frozenset({"gamma3", "eta2"}),
    9: frozenset({"gamma4"}),
    10: frozenset({"epsilon2"}),
    11: frozenset({"gamma5"}),
    12: frozenset({"gamma6"}),
    13: frozenset({"gamma7", "eta3"}),
}

GAMMA_CATEGORIES = frozenset(f"gamma{i}" for i in range(1, 8))
ALL_CATEGORIES = frozenset().union(*MODULE_CATEGORIES.values())

RULE_COUNT = 104
GAMMA_TOTAL = 37
LARGEST_MODULE = 14


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------
class RuleBaseError(ValueError):
    pass


class ParseError(RuleBaseError):
    def __init__(self, line_no: int, msg: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {msg}")


class LambdaCollision(RuleBaseError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"two rules share ordinal {n}")


class LambdaGap(RuleBaseError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"no rule carries ordinal {n}")


class ModuleOverlap(RuleBaseError):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        super().__init__(f"ordinal ranges of M{a} and M{b} are not ordered/contiguous")


class WrongCardinality(RuleBaseError):
    def __init__(self, what: str, found: int, expected: int):
        self.found = found
        super().__init__(f"{what}: found {found}, expected {expected}")


class UnknownMappingTable(RuleBaseError):
    pass


class CategoryMismatch(RuleBaseError):
    def __init__(self, module: int, category: str):
        super().__init__(f"category {category} cannot sit in module M{module}")


class NotFound(LookupError):
    pass


# ---------------------------------------------------------------------------
# mapping tables
# ---------------------------------------------------------------------------
def _t(pairs: dict[str, str | tuple[str, ...]]) -> dict[str, tuple[str, ...]]:
    return {k: (v,) if isinstance(v, str) else v for k, v in pairs.items()}


MAPPING_TABLES: dict[str, dict[str, tuple[str, ...]]] = {
    "guna": _t({"i": "e", "ī": "e", "u": "o", "ū": "o",
                "ṛ": ("a", "r"), "ṝ": ("a", "r"), "ḷ": ("a", "l")}),
    "vrddhi": _t({"i": "ai", "ī": "ai", "u": "au", "ū": "au",
                  "ṛ": ("ā", "r"), "ṝ": ("ā", "r"), "ḷ": ("ā", "l"),
                  "e": "ai", "ai": "ai", "o": "au", "au": "au"}),
    "yan": _t({"i": "y", "ī": "y", "u": "v", "ū": "v", "ṛ": "r", "ṝ": "r", "ḷ": "l"}),
    "ayadi": _t({"e": ("a", "y"), "o": ("a", "v"),
                 "ai": ("ā", "y"), "au": ("ā", "v")}),
    "savarna-dirgha": _t({"a": "ā", "ā": "ā", "i": "ī", "ī": "ī",
                          "u": "ū", "ū": "ū", "ṛ": "ṝ", "ṝ": "ṝ", "ḷ": "ṝ"}),
    "jas": _t({"k": "g", "kh": "g", "g": "g", "gh": "g",
               "c": "j", "ch": "j", "j": "j", "jh": "j",
               "ṭ": "ḍ", "ṭh": "ḍ", "ḍ": "ḍ", "ḍh": "ḍ",
               "t": "d", "th": "d", "d": "d", "dh": "d",
               "p": "b", "ph": "b", "b": "b", "bh": "b", "ṣ": "ḍ"}),
    "car": _t({"k": "k", "kh": "k", "g": "k", "gh": "k",
               "c": "c", "ch": "c", "j": "c", "jh": "c",
               "ṭ": "ṭ", "ṭh": "ṭ", "ḍ": "ṭ", "ḍh": "ṭ",
               "t": "t", "th": "t", "d": "t", "dh": "t",
               "p": "p", "ph": "p", "b": "p", "bh": "p"}),
    "scu": _t({"s": "ś", "t": "c", "th": "ch", "d": "j", "dh": "jh", "n": "ñ"}),
    "stu": _t({"s": "ṣ", "t": "ṭ", "th": "ṭh", "d": "ḍ", "dh": "ḍh", "n": "ṇ"}),
    "anunasika": _t({s: ph.varga_nasal(s) for s in
                     ["k", "kh", "g", "gh", "c", "ch", "j", "jh",
                      "ṭ", "ṭh", "ḍ", "ḍh", "t", "th", "d", "dh",
                      "p", "ph", "b", "bh"]}),
    "parasavarna": _t({s: ph.varga_nasal(s) for s in
                       ["k", "kh", "g", "gh", "ṅ", "c", "ch", "j", "jh", "ñ",
                        "ṭ", "ṭh", "ḍ", "ḍh", "ṇ", "t", "th", "d", "dh", "n",
                        "p", "ph", "b", "bh", "m"]}),
    "purvasavarna": _t({"k": "kh", "g": "gh", "c": "ch", "j": "jh",
                        "ṭ": "ṭh", "ḍ": "ḍh", "t": "th", "d": "dh",
                        "p": "ph", "b": "bh"}),
    "visarga-rutva": _t({"s": "#", "ḥ": "#"}),
}

# assimilation rules: (substitution table, trigger letters on the other side)
ASSIM_SPECS = {
    "scu": (MAPPING_TABLES["scu"], frozenset({"ś", "c", "ch", "j", "jh", "ñ"})),
    "stu": (MAPPING_TABLES["stu"], frozenset({"ṣ", "ṭ", "ṭh", "ḍ", "ḍh", "ṇ"})),
}


# ---------------------------------------------------------------------------
# letter-set expressions
# ---------------------------------------------------------------------------
_CLASS_SETS = {
    "hrasva": frozenset(ph.SHORT_VOWELS),
    "dirgha": frozenset(ph.LONG_VOWELS),
    "pluta": frozenset(ph.PLUTA_VOWELS),
    "vowel": frozenset(ph.VOWELS + ph.PLUTA_VOWELS),
    "nasal": frozenset({"ṅ", "ñ", "ṇ", "n", "m", "ṃ"}),
}


def parse_set_expr(expr: str) -> frozenset[str]:
    """Evaluate an atom expression like ``khar-[k,kh,p,ph]-śar`` to a set."""
    tokens = re.findall(r"([+-]?)(\[[^\]]*\]|[^+\-\[\]]+)", expr.strip())
    if not tokens:
        raise UnknownPratyahara(expr)
    out: set[str] = set()
    first = True
    for op, atom in tokens:
        atom = atom.strip()
        if atom.startswith("["):
            vals = frozenset(s.strip() for s in atom[1:-1].split(",") if s.strip())
        elif atom == "avasana":
            vals = frozenset({AVASANA})
        elif atom in _CLASS_SETS:
            vals = _CLASS_SETS[atom]
        elif atom in ph.VARGAS:
            vals = frozenset(ph.VARGAS[atom])
        else:
            vals = expand_pratyahara(atom, savarna_closure=True)
        if first and op in ("", "+"):
            out = set(vals)
        elif op == "-":
            out -= vals
        else:
            out |= vals
        first = False
    return frozenset(out)


# ---------------------------------------------------------------------------
# context / transform / rule types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ContextPattern:
    u_set: frozenset[str] | None = None
    x_set: frozenset[str] | None = None
    y_set: frozenset[str] | None = None
    w_set: frozenset[str] | None = None
    boundary: str = "junction"          # junction | internal | either
    positional: str = ""                # "" | final | final_or_jhali | nonfinal
    lw_in: frozenset[str] | None = None
    not_lw_in: frozenset[str] | None = None
    rw_in: frozenset[str] | None = None
    rw_prefix_in: tuple[str, ...] | None = None
    lw_suffix_in: tuple[str, ...] | None = None
    lw_nsyms: int | None = None
    u_alt_words: frozenset[str] | None = None
    y_savarna_x: str = ""               # "" | "y" | "n"
    x_ne_y: bool = False
    not_xy: frozenset[tuple[str, str]] = frozenset()


@dataclass(frozen=True)
class TransformSpec:
    kind: str                            # none sub_x sub_y sub_both del_x del_y
    #                                      ins_x ins_y dbl_x dbl_y assim
    result: tuple[str, ...] = ()         # parsed result spec, see module docstring
    block: bool = False
    fuse: bool = False
    lengthen_u: bool = False
    suppresses: frozenset[str] = frozenset()


@dataclass(frozen=True)
class SutraRule:
    lam: int
    ref: str
    module: int
    category: str
    text_iast: str
    text_deva: str
    gloss: str
    optional: bool
    scope: str                           # internal | external | both
    semantic: frozenset[str]
    context: ContextPattern
    transform: TransformSpec
    tags: frozenset[str]
    examples: tuple[str, ...]            # "left+right=expected [@hints=..] [@suppress=..]"

    def describe(self) -> str:
        opt = "optional" if self.optional else "mandatory"
        return f"λ={self.lam} [{self.ref}] {self.text_iast} ({opt}, {self.scope})"


_JHAL = None


def jhal_set() -> frozenset[str]:
    global _JHAL
    if _JHAL is None:
        _JHAL = expand_pratyahara("jhal")
    return _JHAL


# ---------------------------------------------------------------------------
# working form + matching
# ---------------------------------------------------------------------------
@dataclass
class Form:
    """A join in progress: one or two words plus junction state."""
    words: list[list[str]]
    left_src: str
    right_src: str
    junction_inert: bool = False
    affix_join: bool = False
    hints: frozenset[str] = frozenset()

    def clone(self) -> "Form":
        return Form([list(w) for w in self.words], self.left_src, self.right_src,
                    self.junction_inert, self.affix_join, self.hints)

    def has_junction(self) -> bool:
        return len(self.words) == 2

    def items(self) -> list[str]:
        """PhonemeString items with the junction marker."""
        from .tokenizer import JUNCTION
        if len(self.words) == 1:
            return list(self.words[0])
        return list(self.words[0]) + [JUNCTION] + list(self.words[1])

    def rendered(self) -> str:
        """Surface string; the junction renders as a space."""
        from .tokenizer import detokenize
        if len(self.words) == 1:
            return detokenize(list(self.words[0]), allow_rutva=True)
        left = detokenize(list(self.words[0]), allow_rutva=True)
        right = detokenize(list(self.words[1]), allow_rutva=True)
        if not right:
            return left
        return f"{left} {right}"


@dataclass(frozen=True)
class MatchSite:
    kind: str            # junction | internal | avasana
    word_idx: int
    pos: int             # index of x within its word
    u: str | None
    x: str
    y: str | None        # AVASANA at utterance end
    w: str | None


def _sites(form: Form) -> list[MatchSite]:
    sites: list[MatchSite] = []
    words = form.words
    for wi, word in enumerate(words):
        for p, x in enumerate(word):
            u = word[p - 1] if p > 0 else None
            y = word[p + 1] if p + 1 < len(word) else None
            w = word[p + 2] if p + 2 < len(word) else None
            if y is not None:
                sites.append(MatchSite("internal", wi, p, u, x, y, w))
            else:
                # word-final position: junction site for word 0, else handled
                # as the avasana site below; also emit a y-less internal site
                # for purely left-context rules.
                sites.append(MatchSite("internal", wi, p, u, x, None, None))
                if wi == 0 and len(words) == 2 and not form.junction_inert:
                    right = words[1]
                    sites.append(MatchSite(
                        "junction", 0, p, u, x,
                        right[0] if right else None,
                        right[1] if len(right) > 1 else None,
                    ))
    last = words[-1]
    if last:
        sites.append(MatchSite(
            "avasana", len(words) - 1, len(last) - 1,
            last[-2] if len(last) > 1 else None, last[-1], AVASANA, None))
    return sites


def _word_src(form: Form, word_idx: int) -> str:
    return form.left_src if word_idx == 0 else form.right_src


def _pada_final(form: Form, site: MatchSite) -> bool:
    if site.kind == "avasana":
        return True
    if site.kind == "junction":
        return not form.affix_join
    return False


def _site_matches(rule: SutraRule, form: Form, site: MatchSite) -> bool:
    c = rule.context
    # boundary
    if c.boundary == "junction" and site.kind == "internal":
        return False
    if c.boundary == "internal" and site.kind != "internal":
        return False
    # scope vs site kind
    if rule.scope == "external" and site.kind == "internal":
        return False
    if rule.scope == "internal" and site.kind == "junction" and not form.affix_join:
        return False
    # junction rules never fire on an inert junction
    if site.kind == "junction" and form.junction_inert:
        return False
    # hints
    if rule.semantic and not rule.semantic <= form.hints:
        return False
    # letter sets
    if c.x_set is not None and site.x not in c.x_set:
        return False
    if c.u_set is not None:
        ok = site.u is not None and site.u in c.u_set
        if not ok and c.u_alt_words:
            ok = _word_src(form, site.word_idx) in c.u_alt_words
        if not ok:
            return False
    if c.y_set is not None:
        if site.y is None:
            return False
        if site.y == AVASANA:
            if AVASANA not in c.y_set:
                return False
        elif site.y not in c.y_set:
            return False
    if c.w_set is not None and (site.w is None or site.w not in c.w_set):
        return False
    # positional
    if c.positional == "final" and not _pada_final(form, site):
        return False
    if c.positional == "final_or_jhali":
        if not (_pada_final(form, site)
                or (site.y is not None and site.y != AVASANA and site.y in jhal_set())):
            return False
    if c.positional == "nonfinal" and _pada_final(form, site):
        return False
    # word predicates
    if c.lw_in is not None and _word_src(form, site.word_idx) not in c.lw_in:
        return False
    if c.not_lw_in is not None and _word_src(form, site.word_idx) in c.not_lw_in:
        return False
    if c.rw_in is not None:
        if site.kind != "junction" or form.right_src not in c.rw_in:
            return False
    if c.rw_prefix_in is not None:
        if site.kind != "junction":
            return False
        if not any(form.right_src.startswith(p) for p in c.rw_prefix_in):
            return False
    if c.lw_suffix_in is not None:
        if not any(_word_src(form, site.word_idx).endswith(s) for s in c.lw_suffix_in):
            return False
    if c.lw_nsyms is not None:
        src = _word_src(form, site.word_idx)
        try:
            if len(tokenize(src)) != c.lw_nsyms:
                return False
        except Exception:
            return False
    # savarna relations
    if c.y_savarna_x:
        if site.y is None or site.y == AVASANA:
            return False
        sav = is_savarna(site.x, site.y)
        if c.y_savarna_x == "y" and not sav:
            return False
        if c.y_savarna_x == "n" and sav:
            return False
    if c.x_ne_y and (site.y is None or site.x == site.y):
        return False
    if c.not_xy and site.y is not None and (site.x, site.y) in c.not_xy:
        return False
    # transforms that need a real y
    if rule.transform.kind in ("sub_y", "sub_both", "del_y", "dbl_y", "assim", "ins_x", "ins_y"):
        if site.y is None or site.y == AVASANA:
            return False
    return True


def _resolve_result(t: TransformSpec, site: MatchSite) -> tuple[str, ...] | None:
    """Concrete replacement symbols for substitution kinds; None if undefined."""
    if not t.result:
        return ()
    head = t.result[0]
    if head == "lit":
        return t.result[1:]
    if head == "map":
        table_name, key = t.result[1], t.result[2]
        table = MAPPING_TABLES[table_name]
        src = site.x if key == "x" else site.y
        if src is None or src not in table:
            return None
        return table[src]
    if head == "copy":
        return (site.y,) if t.result[1] == "y" else (site.x,)
    if head == "special" and t.result[1] == "kupvoh":
        if site.y in ("k", "kh"):
            return ("ẖ",)
        if site.y in ("p", "ph"):
            return ("ḫ",)
        return None
    if head == "special" and t.result[1] == "aplutavat":
        if site.x.endswith("3"):
            return (site.x[:-1],)
        return None
    raise UnknownMappingTable(str(t.result))


def match_rule(rule: SutraRule, form: Form) -> MatchSite | None:
    """Leftmost site where the rule's context holds and the transform is
    defined and non-vacuous; None when the rule cannot apply."""
    for site in _sites(form):
        if not _site_matches(rule, form, site):
            continue
        applied = _try_apply(rule, form, site)
        if applied is None:
            continue
        if rule.transform.kind != "none" and applied.items() == form.items():
            continue  # vacuous substitution (e.g. jas of an already-jas letter)
        return site
    return None


def _try_apply(rule: SutraRule, form: Form, site: MatchSite) -> Form | None:
    try:
        return apply_rule(rule, form, site)
    except InternalInconsistency:
        return None


class InternalInconsistency(RuleBaseError):
    pass


def _assim_plan(t: TransformSpec, site: MatchSite) -> tuple[str, tuple[str, ...]] | None:
    table, trigger = ASSIM_SPECS[t.result[1]]
    if site.y is None or site.y == AVASANA:
        return None
    if site.x in table and site.y in trigger:
        return "x", table[site.x]
    if site.y in table and site.x in trigger:
        return "y", table[site.y]
    return None


def apply_rule(rule: SutraRule, form: Form, site: MatchSite) -> Form:
    """Apply exactly one transformation at the site; other positions stay."""
    t = rule.transform
    out = form.clone()
    word = out.words[site.word_idx]
    p = site.pos
    kind = t.kind

    if kind == "assim":
        plan = _assim_plan(t, site)
        if plan is None:
            raise InternalInconsistency(f"assim undefined at {site}")
        side, res = plan
        kind = "sub_x" if side == "x" else "sub_y"
        result: tuple[str, ...] | None = res
    elif kind in ("sub_x", "sub_y", "sub_both", "ins_x", "ins_y"):
        result = _resolve_result(t, site)
        if result is None or (kind.startswith("sub") and not result):
            raise InternalInconsistency(f"transform {t} undefined for {site}")
    else:
        result = ()

    at_junction = site.kind == "junction"

    def right_word() -> list[str]:
        return out.words[1]

    if kind == "none":
        pass
    elif kind == "sub_x":
        word[p:p + 1] = list(result)
    elif kind == "sub_y":
        if at_junction:
            right_word()[0:1] = list(result)
        else:
            word[p + 1:p + 2] = list(result)
    elif kind == "sub_both":
        if at_junction:
            merged = word[:p] + list(result) + right_word()[1:]
            out.words = [merged]
        else:
            word[p:p + 2] = list(result)
    elif kind == "del_x":
        del word[p:p + 1]
    elif kind == "del_y":
        if at_junction:
            del right_word()[0:1]
        else:
            del word[p + 1:p + 2]
    elif kind == "ins_x":
        word[p + 1:p + 1] = list(result)
    elif kind == "ins_y":
        if at_junction:
            right_word()[0:0] = list(result)
        else:
            word[p + 1:p + 1] = list(result)
    elif kind == "dbl_x":
        word[p + 1:p + 1] = [site.x]
    elif kind == "dbl_y":
        if at_junction:
            right_word()[0:0] = [site.y]
        else:
            word[p + 1:p + 1] = [site.y]
    else:
        raise InternalInconsistency(f"unknown transform kind {kind}")

    if t.lengthen_u:
        if p == 0:
            raise InternalInconsistency("lengthen_u with no preceding letter")
        word[p - 1] = savarna_dirgha(word[p - 1])

    if t.block:
        out.junction_inert = True
    if t.fuse and at_junction and len(out.words) == 2:
        out.words = [out.words[0] + out.words[1]]
    if any(not w for w in out.words) and len(out.words) == 2:
        # a deletion may empty a word entirely; merge the remnant
        out.words = [out.words[0] + out.words[1]]
    return out


# ---------------------------------------------------------------------------
# parsing the rule file
# ---------------------------------------------------------------------------
_KINDS = {"none", "sub_x", "sub_y", "sub_both", "del_x", "del_y",
          "ins_x", "ins_y", "dbl_x", "dbl_y", "assim"}


def _parse_context(spec: str, line_no: int) -> ContextPattern:
    kw: dict = {}
    if spec:
        for clause in spec.split(";"):
            clause = clause.strip()
            if not clause:
                continue
            if ":" not in clause:
                raise ParseError(line_no, f"bad context clause {clause!r}")
            key, val = clause.split(":", 1)
            key, val = key.strip(), val.strip()
            if key in ("u", "x", "y", "w"):
                kw[f"{key}_set"] = parse_set_expr(val)
            elif key == "boundary":
                kw["boundary"] = val
            elif key == "pos":
                kw["positional"] = val
            elif key == "lw":
                kw["lw_in"] = frozenset({val})
            elif key == "lw_in":
                kw["lw_in"] = frozenset(v.strip() for v in val.split(","))
            elif key == "not_lw_in":
                kw["not_lw_in"] = frozenset(v.strip() for v in val.split(","))
            elif key == "rw":
                kw["rw_in"] = frozenset({val})
            elif key == "rw_in":
                kw["rw_in"] = frozenset(v.strip() for v in val.split(","))
            elif key == "rw_prefix_in":
                kw["rw_prefix_in"] = tuple(v.strip() for v in val.split(","))
            elif key == "lw_suffix_in":
                kw["lw_suffix_in"] = tuple(v.strip() for v in val.split(","))
            elif key == "lw_nsyms":
                kw["lw_nsyms"] = int(val)
            elif key == "u_alt_words":
                kw["u_alt_words"] = frozenset(v.strip() for v in val.split(","))
            elif key == "y_savarna_x":
                kw["y_savarna_x"] = val
            elif key == "x_ne_y":
                kw["x_ne_y"] = val == "y"
            elif key == "not_xy":
                pairs = set()
                for pair in val.split(","):
                    a, b = pair.split("~")
                    pairs.add((a.strip(), b.strip()))
                kw["not_xy"] = frozenset(pairs)
            else:
                raise ParseError(line_no, f"unknown context key {key!r}")
    return ContextPattern(**kw)


def _parse_transform(spec: str, line_no: int) -> TransformSpec:
    parts = spec.split()
    if not parts or parts[0] not in _KINDS:
        raise ParseError(line_no, f"bad transform {spec!r}")
    kind = parts[0]
    result: tuple[str, ...] = ()
    block = fuse = lengthen = False
    suppresses: set[str] = set()
    for tok in parts[1:]:
        if tok == "block":
            block = True
        elif tok == "fuse":
            fuse = True
        elif tok == "lengthen_u":
            lengthen = True
        elif tok.startswith("suppress:"):
            suppresses |= set(tok.split(":", 1)[1].split(","))
        elif tok.startswith("lit:"):
            result = ("lit", *[s for s in tok[4:].split(",") if s])
        elif tok.startswith("map:"):
            _, table, key = tok.split(":")
            if table not in MAPPING_TABLES:
                raise UnknownMappingTable(table)
            result = ("map", table, key)
        elif tok.startswith("copy:"):
            result = ("copy", tok.split(":")[1])
        elif tok.startswith("special:"):
            result = ("special", tok.split(":")[1])
        elif tok.startswith("assim:"):
            name = tok.split(":")[1]
            if name not in ASSIM_SPECS:
                raise UnknownMappingTable(name)
            result = ("assim", name)
        else:
            raise ParseError(line_no, f"unknown transform token {tok!r}")
    if kind == "assim" and (not result or result[0] != "assim"):
        raise ParseError(line_no, "assim kind needs assim:scu or assim:stu")
    return TransformSpec(kind, result, block, fuse, lengthen, frozenset(suppresses))


def parse_rule_line(line: str, line_no: int) -> SutraRule:
    fields: dict[str, str] = {}
    for chunk in line.split(" | "):
        if "=" not in chunk:
            raise ParseError(line_no, f"field without '=': {chunk!r}")
        key, val = chunk.split("=", 1)
        fields[key.strip()] = val.strip()
    required = ["lambda", "ref", "module", "category", "opt", "scope",
                "context", "transform", "text", "deva", "gloss"]
    for req in required:
        if req not in fields:
            raise ParseError(line_no, f"missing field {req!r}")
    try:
        lam = int(fields["lambda"])
    except ValueError:
        raise ParseError(line_no, f"bad lambda {fields['lambda']!r}") from None
    module_txt = fields["module"]
    if not re.fullmatch(r"M([1-9]|1[0-3])", module_txt):
        raise ParseError(line_no, f"bad module {module_txt!r}")
    module = int(module_txt[1:])
    category = fields["category"]
    if category not in ALL_CATEGORIES:
        raise ParseError(line_no, f"unknown category {category!r}")
    if not re.fullmatch(r"\d+\.\d+\.\d+", fields["ref"]):
        raise ParseError(line_no, f"bad reference {fields['ref']!r}")
    optional = fields["opt"] == "y"
    scope = fields["scope"]
    if scope not in ("internal", "external", "both"):
        raise ParseError(line_no, f"bad scope {scope!r}")
    semantic = frozenset(s.strip() for s in fields.get("sem", "").split(",") if s.strip())
    tags = frozenset(s.strip() for s in fields.get("tags", "").split(",") if s.strip())
    examples = tuple(e.strip() for e in fields.get("ex", "").split("||") if e.strip())
    context = _parse_context(fields["context"], line_no)
    transform = _parse_transform(fields["transform"], line_no)

    text_iast = fields["text"]
    text_deva = fields["deva"]
    if text_deva == "@auto":
        from .translit import iast_to_deva
        text_deva = iast_to_deva(text_iast)
    return SutraRule(
        lam=lam, ref=fields["ref"], module=module, category=category,
        text_iast=text_iast, text_deva=text_deva, gloss=fields["gloss"],
        optional=optional, scope=scope, semantic=semantic,
        context=context, transform=transform, tags=tags, examples=examples,
    )


# ---------------------------------------------------------------------------
# rule base
# ---------------------------------------------------------------------------
@dataclass
class RuleBase:
    rules: list[SutraRule]
    by_lambda: dict[int, SutraRule] = field(default_factory=dict)
    by_ref: dict[str, SutraRule] = field(default_factory=dict)
    module_ranges: dict[int, tuple[int, int]] = field(default_factory=dict)

    def lookup(self, selector: int | str) -> SutraRule:
        if isinstance(selector, int) or str(selector).isdigit():
            rule = self.by_lambda.get(int(selector))
        else:
            rule = self.by_ref.get(str(selector))
        if rule is None:
            raise NotFound(f"no rule for selector {selector!r}")
        return rule

    def module_rules(self, module: int) -> list[SutraRule]:
        lo, hi = self.module_ranges[module]
        return [self.by_lambda[n] for n in range(lo, hi + 1)]

    def known_hints(self) -> frozenset[str]:
        hints = {"affix", "reduplication"}
        for r in self.rules:
            hints |= r.semantic
        return frozenset(hints)


def validate_rules(rules: list[SutraRule]) -> RuleBase:
    if len(rules) != RULE_COUNT:
        raise WrongCardinality("rule count", len(rules), RULE_COUNT)
    by_lambda: dict[int, SutraRule] = {}
    for r in rules:
        if r.lam in by_lambda:
            raise LambdaCollision(r.lam)
        by_lambda[r.lam] = r
    for n in range(1, RULE_COUNT + 1):
        if n not in by_lambda:
            raise LambdaGap(n)
    by_ref: dict[str, SutraRule] = {}
    for r in rules:
        if r.ref in by_ref:
            raise LambdaCollision(r.lam)
        by_ref[r.ref] = r

    # module ranges: contiguous, ordered
    ranges: dict[int, tuple[int, int]] = {}
    for m in range(1, 14):
        lams = sorted(r.lam for r in rules if r.module == m)
        if not lams:
            raise WrongCardinality(f"rules in M{m}", 0, 1)
        if lams != list(range(lams[0], lams[-1] + 1)):
            raise ModuleOverlap(m, m)
        ranges[m] = (lams[0], lams[-1])
    for m in range(1, 13):
        if ranges[m][1] >= ranges[m + 1][0]:
            raise ModuleOverlap(m, m + 1)

    # category placement and tallies
    for r in rules:
        if r.category not in MODULE_CATEGORIES[r.module]:
            raise CategoryMismatch(r.module, r.category)
    gamma = sum(1 for r in rules if r.category in GAMMA_CATEGORIES)
    if gamma != GAMMA_TOTAL:
        raise WrongCardinality("consonant-category rules", gamma, GAMMA_TOTAL)
    largest = max(ranges[m][1] - ranges[m][0] + 1 for m in ranges)
    if largest != LARGEST_MODULE:
        raise WrongCardinality("largest module", largest, LARGEST_MODULE)
    for cat in sorted(ALL_CATEGORIES):
        if not any(r.category == cat for r in rules):
            raise WrongCardinality(f"rules in subset {cat}", 0, 1)

    rules_sorted = sorted(rules, key=lambda r: r.lam)
    return RuleBase(rules_sorted, by_lambda, by_ref, ranges)


def load_rule_base(path: str | None = None) -> RuleBase:
    """Parse and validate the rule file; any broken invariant fails the load."""
    if path is None:
        text = resources.files("sandhitutor.data").joinpath("sutras.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    rules: list[SutraRule] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("//"):
            continue
        rules.append(parse_rule_line(line, line_no))
    return validate_rules(rules)
