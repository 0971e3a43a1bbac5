"""Monotone derivation engine.

A derivation sweeps the ordinal cursor upward from 0: at each step the
smallest ordinal above the cursor whose rule matches the current form is
applied, and the cursor moves to that ordinal.  A rule therefore never
sees the output of a later-ordered rule -- the corpus ordering, not any
special-casing, is what blocks retrograde applications.  Optional rules
fork the derivation into applied and skipped branches; results are
deduplicated by final surface form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .rules import Form, RuleBase, SutraRule, apply_rule, match_rule
from .tokenizer import JUNCTION, SPACE, UnresolvedRutva, tokenize

MAX_LAMBDA = 104


class EngineError(ValueError):
    pass


class BranchExplosion(EngineError):
    pass


class UnknownHint(EngineError):
    pass


@dataclass(frozen=True)
class DerivationStep:
    lam: int
    ref: str
    before: str
    after: str
    optional_branch: bool


@dataclass(frozen=True)
class DerivationResult:
    final: str
    trace: tuple[DerivationStep, ...]
    hints: frozenset[str]

    def lambdas(self) -> list[int]:
        return [s.lam for s in self.trace]


@dataclass(frozen=True)
class JoinOptions:
    hints: frozenset[str] = frozenset()
    suppress_tags: frozenset[str] = frozenset()
    max_branches: int = 64

    def __post_init__(self):
        if self.max_branches < 1:
            raise ValueError("max_branches must be >= 1")


def make_options(hints=(), suppress=(), max_branches: int = 64) -> JoinOptions:
    return JoinOptions(frozenset(hints), frozenset(suppress), max_branches)


def _word_items(word: str) -> list[str]:
    items = tokenize(word)
    if JUNCTION in items or SPACE in items:
        raise EngineError(f"a single word may not contain '+' or spaces: {word!r}")
    return items


def start_form(left: str, right: str, opts: JoinOptions) -> Form:
    if not left:
        raise EngineError("left word must be non-empty")
    words = [_word_items(left)]
    if right:
        words.append(_word_items(right))
    # an affix join is a morpheme seam, not a pada boundary: word-final
    # rules stay silent there while word-internal rules may reach across
    return Form(words=words, left_src=left, right_src=right,
                hints=opts.hints, affix_join="affix" in opts.hints)


@dataclass
class _Branch:
    form: Form
    cursor: int
    trace: list[DerivationStep] = field(default_factory=list)
    suppress: frozenset[str] = frozenset()


def step(form: Form, cursor: int, rb: RuleBase,
         suppress: frozenset[str] = frozenset()) -> tuple[DerivationStep, Form, int] | None:
    """Smallest ordinal above the cursor whose rule matches, applied once."""
    for lam in range(cursor + 1, MAX_LAMBDA + 1):
        rule = rb.by_lambda[lam]
        if rule.tags & suppress:
            continue
        site = match_rule(rule, form)
        if site is None:
            continue
        after = apply_rule(rule, form, site)
        ds = DerivationStep(lam, rule.ref, form.rendered(), after.rendered(), rule.optional)
        return ds, after, lam
    return None


def join(left: str, right: str, opts: JoinOptions | None = None,
         rb: RuleBase | None = None) -> list[DerivationResult]:
    """All permissible conjunctions of the two words, each with its trace."""
    from .runtime import default_rule_base
    rb = rb or default_rule_base()
    opts = opts or JoinOptions()

    unknown = opts.hints - rb.known_hints()
    if unknown:
        raise UnknownHint(", ".join(sorted(unknown)))

    live: list[_Branch] = [_Branch(start_form(left, right, opts), 0, [], opts.suppress_tags)]
    done: list[_Branch] = []
    while live:
        br = live.pop()
        nxt = _next_application(br, rb)
        if nxt is None:
            done.append(br)
            continue
        rule, ds, after_form, lam = nxt
        applied = _Branch(after_form, lam, br.trace + [ds],
                          br.suppress | rule.transform.suppresses)
        live.append(applied)
        if rule.optional:
            live.append(_Branch(br.form, lam, br.trace, br.suppress))
        if len(live) + len(done) > opts.max_branches:
            raise BranchExplosion(
                f"more than {opts.max_branches} live branches for {left!r}+{right!r}")

    results: dict[str, DerivationResult] = {}
    for br in sorted(done, key=lambda b: (b.form.rendered(), len(b.trace),
                                          [s.lam for s in b.trace])):
        final_items = br.form.items()
        if "#" in final_items:
            raise UnresolvedRutva(
                f"derivation of {left!r}+{right!r} left a rutva marker: "
                f"{br.form.rendered()!r} (rule-base curation bug)")
        final = br.form.rendered()
        if final not in results:
            results[final] = DerivationResult(final, tuple(br.trace), opts.hints)
    return sorted(results.values(), key=lambda r: r.final)


def _next_application(br: _Branch, rb: RuleBase):
    for lam in range(br.cursor + 1, MAX_LAMBDA + 1):
        rule = rb.by_lambda[lam]
        if rule.tags & br.suppress:
            continue
        site = match_rule(rule, br.form)
        if site is None:
            continue
        after = apply_rule(rule, br.form, site)
        ds = DerivationStep(lam, rule.ref, br.form.rendered(), after.rendered(),
                            rule.optional)
        return rule, ds, after, lam
    return None


def explain_trace(result: DerivationResult, rb: RuleBase) -> list[str]:
    """One learner-facing line per applied rule."""
    lines = []
    for s in result.trace:
        rule = rb.by_lambda[s.lam]
        opt = " (optional)" if s.optional_branch else ""
        lines.append(
            f"λ={s.lam} · {s.ref} · {rule.text_iast} / {rule.text_deva}{opt}\n"
            f"    {rule.gloss}\n"
            f"    {s.before} → {s.after}")
    return lines


def join_text(words: list[str], opts: JoinOptions | None = None,
              rb: RuleBase | None = None) -> list[DerivationResult]:
    """Fold a multi-word phrase left to right through binary joins."""
    from .runtime import default_rule_base
    rb = rb or default_rule_base()
    opts = opts or JoinOptions()
    if not words:
        raise EngineError("no words given")
    if len(words) == 1:
        return join(words[0], "", opts, rb)

    partials: list[DerivationResult] = join(words[0], words[1], opts, rb)
    for word in words[2:]:
        merged: dict[str, DerivationResult] = {}
        for part in partials:
            prefix, _, last = part.final.rpartition(" ")
            for res in join(last, word, opts, rb):
                final = f"{prefix} {res.final}".strip()
                if final not in merged:
                    merged[final] = DerivationResult(
                        final, part.trace + res.trace, opts.hints)
        partials = sorted(merged.values(), key=lambda r: r.final)
        if len(partials) > opts.max_branches:
            raise BranchExplosion(f"phrase fold exceeded {opts.max_branches} forms")
    return partials
