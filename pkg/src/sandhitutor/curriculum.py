"""Staged curriculum: three preliminary modules, M1..M13, tests, grading
and persistent per-user progress.

The curriculum never looks ahead: module m's lessons and generated tests
only use rules whose ordinal falls at or before the end of m, and worked
examples are re-derived with the engine so their traces can be inspected
(examples whose traces also touch earlier modules are the carried-forward
ones).  Progress lives in one JSON file, one record per user, written with
atomic replace.
"""
from __future__ import annotations

import json
import os
import random
import tempfile
import time
import zlib
from dataclasses import dataclass, field

from . import phonemes as ph
from .engine import DerivationResult, explain_trace, join, make_options
from .rules import RuleBase, SutraRule

UNLOCK_THRESHOLD = 0.6

MODULE_ORDER = ["P1", "P2", "P3"] + [f"M{i}" for i in range(1, 14)]

QUESTION_KINDS = (
    "apply-sandhi",
    "identify-rule",
    "next-rule",
    "choose-final-form",
    "pratyahara-expansion",
    "optional-or-mandatory",
)

_MODULE_TITLES = {
    "P1": "The alphabet and the fourteen aphorisms",
    "P2": "The four kinds of transformation",
    "P3": "Why the order of rules matters",
    "M1": "Words that resist change: pragṛhya and prakṛtibhāva",
    "M2": "Visarga, the ru marker and early deletions",
    "M3": "Vowel junctions I: fusion",
    "M4": "Vowel junctions II: semivowels and ay/av",
    "M5": "Consonant junctions I: augments, deletions, word-final softening",
    "M6": "Nasals into ru",
    "M7": "Resolving ru: y, r and deletion",
    "M8": "Anusvāra and related m-rules",
    "M9": "The small augments",
    "M10": "Visarga outcomes",
    "M11": "Retroflexion and row assimilation",
    "M12": "Nasal option, doubling and stop grades",
    "M13": "Row assimilations and inner deletions",
}

_P_LESSONS = {
    "P1": [
        "The alphabet counts 50 letters: 13 vowels, 33 consonants, 4 special consonants.",
        "Short vowels: a i u ṛ ḷ; long vowels: ā ī ū ṝ e ai o au; prolated (pluta) vowels are written with a trailing 3.",
        "Fourteen ordering aphorisms list the letters; the last letter of each is only a place-holder.",
        "A compressed name (initial letter + place-holder) names the whole stretch of letters: ik = i u ṛ ḷ, ac = all vowels, hal = all consonants.",
        "Vowels of one articulation place (a/ā, i/ī, u/ū, ṛ/ṝ/ḷ) are savarṇa: like sounds.",
    ],
    "P2": [
        "Substitution: one letter replaces another, on either side of the junction or both (ramā iva = rameva).",
        "Deletion: a letter vanishes (viṣṇav iha = viṣṇa iha).",
        "Addition: a new letter appears between the words (rāma chatram = rāmat chatram mid-derivation) or a letter doubles (san acyutaḥ = sann acyutaḥ).",
        "No change: some junctions stay in their natural form (harī etau when harī is a dual).",
    ],
    "P3": [
        "Every rule carries an ordinal from 1 to 104 and belongs to one of thirteen modules.",
        "The output of a rule is offered only to later-ordered rules: the cursor never moves backwards.",
        "A rule that would have applied earlier is simply out of reach once a later rule has acted; no special exceptions are needed.",
        "Optional rules fork a derivation: every permitted surface form is produced, each with its own trace.",
    ],
}

_P_TEST_SPEC = {"pratyahara-expansion": 6}
_M_TEST_SPEC = {
    "apply-sandhi": 2,
    "identify-rule": 2,
    "next-rule": 1,
    "choose-final-form": 1,
    "optional-or-mandatory": 2,
}

_PRATYAHARAS = ["ik", "ac", "hal", "yaṇ", "ñam", "jhal", "khar", "haś", "śar",
                "ak", "ec", "eṅ", "jaś", "car", "chav", "yay", "yar", "aṭ"]


class CurriculumError(ValueError):
    pass


class InsufficientMaterial(CurriculumError):
    pass


class ModuleLocked(CurriculumError):
    pass


class PrerequisitesUnmet(CurriculumError):
    pass


class MalformedAnswer(CurriculumError):
    pass


class PersistenceFailure(OSError):
    pass


@dataclass(frozen=True)
class WorkedExample:
    left: str
    right: str
    hints: tuple[str, ...]
    suppress: tuple[str, ...]
    finals: tuple[str, ...]
    lambdas: tuple[tuple[int, ...], ...]
    carried_forward: bool


@dataclass(frozen=True)
class CurriculumModule:
    id: str
    title: str
    lesson_items: tuple
    examples: tuple[WorkedExample, ...]
    test_spec: dict
    unlock_threshold: float = UNLOCK_THRESHOLD
    lambda_range: tuple[int, int] | None = None


@dataclass(frozen=True)
class Question:
    kind: str
    prompt: str
    answer_key: tuple[str, ...]
    module_id: str
    rubric: str
    choices: tuple[str, ...] = ()
    payload: dict = field(default_factory=dict)


def parse_example_spec(spec: str) -> tuple[str, str, frozenset[str], frozenset[str], str]:
    """Parse "left+right=expected [@hints=a,b] [@suppress=c]" from rule data."""
    parts = spec.split(" @")
    core = parts[0]
    io, expected = core.split("=", 1)
    left, _, right = io.partition("+")
    hints: frozenset[str] = frozenset()
    suppress: frozenset[str] = frozenset()
    for ann in parts[1:]:
        key, val = ann.split("=", 1)
        vals = frozenset(v for v in val.split(",") if v)
        if key == "hints":
            hints = vals
        elif key == "suppress":
            suppress = vals
    return left, right, hints, suppress, expected


_DERIVE_CACHE: dict[tuple, list[DerivationResult]] = {}
_MODULE_CACHE: dict[int, list] = {}


def _derive(left: str, right: str, hints, suppress, rb: RuleBase) -> list[DerivationResult]:
    key = (id(rb), left, right, frozenset(hints), frozenset(suppress))
    hit = _DERIVE_CACHE.get(key)
    if hit is None:
        hit = join(left, right, make_options(hints=hints, suppress=suppress), rb)
        _DERIVE_CACHE[key] = hit
    return hit


def _worked_examples(module_id: str, lo: int, hi: int, rb: RuleBase) -> tuple[WorkedExample, ...]:
    """Rule examples usable at this stage: full derivations stay within
    ordinal hi; ones whose traces also touch earlier modules are flagged
    carried-forward.  Until the module that actually teaches the doubling
    rules, examples are derived with doubling suppressed, as the source
    presentation does."""
    out: list[WorkedExample] = []
    seen: set[tuple[str, str]] = set()
    first_doubling = min(r.lam for r in rb.rules if "doubling" in r.tags)
    # the module's own rules contribute examples first, then earlier modules'
    ordered = ([r for r in rb.rules if lo <= r.lam <= hi]
               + [r for r in rb.rules if r.lam < lo])
    for rule in ordered:
        if rule.lam > hi:
            break
        for spec in rule.examples:
            left, right, hints, suppress, _ = parse_example_spec(spec)
            if hi < first_doubling:
                suppress = suppress | {"doubling"}
            if (left, right) in seen:
                continue
            seen.add((left, right))
            try:
                results = _derive(left, right, hints, suppress, rb)
            except Exception:
                continue
            lambdas = [res.lambdas() for res in results]
            flat = [n for lams in lambdas for n in lams]
            if any(n > hi for n in flat):
                continue  # needs future knowledge; a later module will carry it
            touches_here = any(lo <= n <= hi for n in flat)
            touches_before = any(n < lo for n in flat)
            if not touches_here and rule.lam < lo:
                continue
            out.append(WorkedExample(
                left=left, right=right,
                hints=tuple(sorted(hints)), suppress=tuple(sorted(suppress)),
                finals=tuple(r.final for r in results),
                lambdas=tuple(tuple(lams) for lams in lambdas),
                carried_forward=touches_before and touches_here,
            ))
    return tuple(out[:12])


def list_modules(rb: RuleBase) -> list[CurriculumModule]:
    """The sixteen curriculum modules in study order."""
    cached = _MODULE_CACHE.get(id(rb))
    if cached is not None:
        return cached
    modules: list[CurriculumModule] = []
    for pid in ("P1", "P2", "P3"):
        modules.append(CurriculumModule(
            id=pid, title=_MODULE_TITLES[pid],
            lesson_items=tuple(_P_LESSONS[pid]),
            examples=(), test_spec=dict(_P_TEST_SPEC)))
    for m in range(1, 14):
        lo, hi = rb.module_ranges[m]
        rules = rb.module_rules(m)
        lesson_items = tuple(
            {
                "lambda": r.lam,
                "ref": r.ref,
                "text_iast": r.text_iast,
                "text_deva": r.text_deva,
                "gloss": r.gloss,
                "optional": r.optional,
                "scope": r.scope,
                "category": r.category,
            }
            for r in rules
        )
        modules.append(CurriculumModule(
            id=f"M{m}", title=_MODULE_TITLES[f"M{m}"],
            lesson_items=lesson_items,
            examples=_worked_examples(f"M{m}", lo, hi, rb),
            test_spec=dict(_M_TEST_SPEC),
            lambda_range=(lo, hi)))
    _MODULE_CACHE[id(rb)] = modules
    return modules


def get_module(rb: RuleBase, module_id: str) -> CurriculumModule:
    for mod in list_modules(rb):
        if mod.id == module_id:
            return mod
    raise CurriculumError(f"no module {module_id!r}")


def _rng(module_id: str, seed: int) -> random.Random:
    return random.Random((zlib.crc32(module_id.encode("utf-8")) << 32) ^ (int(seed) & 0xFFFFFFFF))


def _fmt_opts(ex: WorkedExample) -> str:
    bits = []
    if ex.hints:
        bits.append("hints: " + ", ".join(ex.hints))
    if ex.suppress:
        bits.append("suppressed: " + ", ".join(ex.suppress))
    return f" ({'; '.join(bits)})" if bits else ""


def _mutate_final(final: str, rng: random.Random) -> str:
    """A plausible-but-wrong final form for multiple-choice distractors."""
    swaps = [("e", "ai"), ("o", "au"), ("ś", "s"), ("ṣ", "s"), ("d", "t"),
             ("n", "ṇ"), ("ṃ", "m"), ("ā", "a"), ("ī", "i"), ("g", "k")]
    for a, b in rng.sample(swaps, len(swaps)):
        if a in final:
            cand = final.replace(a, b, 1)
            if cand != final:
                return cand
        if b in final:
            cand = final.replace(b, a, 1)
            if cand != final:
                return cand
    return final + "m"


def generate_test(module: CurriculumModule, seed: int, rb: RuleBase) -> list[Question]:
    """Deterministic question list for (module, seed)."""
    rng = _rng(module.id, seed)
    questions: list[Question] = []

    if module.id.startswith("P"):
        names = list(_PRATYAHARAS)
        rng.shuffle(names)
        want = module.test_spec.get("pratyahara-expansion", 0)
        if want > len(names):
            raise InsufficientMaterial(module.id)
        for name in names[:want]:
            members = sorted(ph.expand_pratyahara(name))
            questions.append(Question(
                kind="pratyahara-expansion",
                prompt=f"List the base letters named by the pratyāhāra '{name}'.",
                answer_key=tuple(members),
                module_id=module.id,
                rubric="Full credit for the exact set; partial credit per correct letter.",
                payload={"name": name}))
        return questions

    assert module.lambda_range is not None
    lo, hi = module.lambda_range
    rules = [rb.by_lambda[n] for n in range(lo, hi + 1)]
    examples = [ex for ex in module.examples if ex.finals]
    if not rules:
        raise InsufficientMaterial(module.id)

    def pick_examples(n: int) -> list[WorkedExample]:
        n = min(n, len(examples))
        return rng.sample(examples, n)

    for ex in pick_examples(module.test_spec.get("apply-sandhi", 0)):
        questions.append(Question(
            kind="apply-sandhi",
            prompt=(f"Join {ex.left} + {ex.right}{_fmt_opts(ex)}. "
                    "Give all permissible forms, separated by commas."),
            answer_key=ex.finals,
            module_id=module.id,
            rubric="Score = correctly given forms / all permissible forms.",
            payload={"left": ex.left, "right": ex.right,
                     "hints": list(ex.hints), "suppress": list(ex.suppress)}))

    # identify-rule: name the aphorism behind one derivation step; when a
    # module's derivations cannot complete this early, fall back to naming
    # the aphorism from its lesson wording
    step_pool = []
    for ex in examples:
        for lams in ex.lambdas:
            for n in lams:
                if lo <= n <= hi:
                    step_pool.append((ex, n))
    for _ in range(module.test_spec.get("identify-rule", 0)):
        if step_pool:
            ex, lam = rng.choice(step_pool)
            rule = rb.by_lambda[lam]
            res = _derive(ex.left, ex.right, frozenset(ex.hints), frozenset(ex.suppress), rb)
            shown = next((r for r in res if lam in r.lambdas()), res[0])
            ds = next(s for s in shown.trace if s.lam == lam)
            questions.append(Question(
                kind="identify-rule",
                prompt=(f"In deriving {ex.left} + {ex.right}{_fmt_opts(ex)}, one step turns "
                        f"'{ds.before}' into '{ds.after}'. Cite the aphorism (chapter.pāda.number)."),
                answer_key=(rule.ref,),
                module_id=module.id,
                rubric="Exact reference only.",
                payload={"lambda": lam, "left": ex.left, "right": ex.right,
                         "hints": list(ex.hints), "suppress": list(ex.suppress)}))
        else:
            rule = rng.choice(rules)
            questions.append(Question(
                kind="identify-rule",
                prompt=(f"Which aphorism teaches this? \"{rule.gloss}\" "
                        "Cite it as chapter.pāda.number."),
                answer_key=(rule.ref,),
                module_id=module.id,
                rubric="Exact reference only.",
                payload={"lambda": rule.lam}))

    for _ in range(min(module.test_spec.get("next-rule", 0), len(step_pool))):
        ex, lam = rng.choice(step_pool)
        rule = rb.by_lambda[lam]
        res = _derive(ex.left, ex.right, frozenset(ex.hints), frozenset(ex.suppress), rb)
        shown = next((r for r in res if lam in r.lambdas()), res[0])
        idx = shown.lambdas().index(lam)
        cursor = shown.lambdas()[idx - 1] if idx else 0
        ds = shown.trace[idx]
        questions.append(Question(
            kind="next-rule",
            prompt=(f"The form stands at '{ds.before}' and the cursor has passed ordinal "
                    f"{cursor}. Which aphorism acts next? Give its reference."),
            answer_key=(rule.ref,),
            module_id=module.id,
            rubric="Exact reference only.",
            payload={"cursor": cursor, "lambda": lam}))

    for _ in range(min(module.test_spec.get("choose-final-form", 0), len(examples))):
        ex = rng.choice(examples)
        correct = rng.choice(list(ex.finals))
        wrong: list[str] = []
        attempt = 0
        while len(wrong) < 3 and attempt < 24:
            attempt += 1
            cand = _mutate_final(correct, rng)
            if cand not in ex.finals and cand not in wrong:
                wrong.append(cand)
        choices = wrong + [correct]
        rng.shuffle(choices)
        questions.append(Question(
            kind="choose-final-form",
            prompt=(f"Which of these is a permissible result of "
                    f"{ex.left} + {ex.right}{_fmt_opts(ex)}?"),
            answer_key=tuple(sorted(set(ex.finals) & set(choices))),
            module_id=module.id,
            rubric="Choose any one permissible form.",
            choices=tuple(choices),
            payload={"left": ex.left, "right": ex.right}))

    want = min(module.test_spec.get("optional-or-mandatory", 0), len(rules))
    for rule in rng.sample(rules, want):
        questions.append(Question(
            kind="optional-or-mandatory",
            prompt=(f"Is the rule {rule.ref} ({rule.text_iast}) optional or mandatory?"),
            answer_key=("optional" if rule.optional else "mandatory",),
            module_id=module.id,
            rubric="One word: optional or mandatory.",
            payload={"lambda": rule.lam}))

    return questions


# ---------------------------------------------------------------------------
# grading
# ---------------------------------------------------------------------------
def _norm(s: str) -> str:
    import unicodedata
    return unicodedata.normalize("NFC", s.strip())


def grade_answer(q: Question, answer, rb: RuleBase) -> tuple[float, str]:
    """Score in [0, 1] plus learner-facing feedback."""
    if not isinstance(answer, str) or not answer.strip():
        raise MalformedAnswer("answer must be a non-empty string")
    answer = _norm(answer)

    if q.kind == "apply-sandhi":
        given = [_norm(a) for a in answer.replace(";", ",").split(",") if a.strip()]
        correct = set(q.answer_key)
        inter = [g for g in given if g in correct]
        score = len(set(inter)) / len(correct)
        feedback = _apply_feedback(q, rb)
        if score == 1.0 and len(set(given)) == len(correct):
            return 1.0, "Correct. " + feedback
        return round(score, 4), feedback

    if q.kind in ("identify-rule", "next-rule"):
        correct_ref = q.answer_key[0]
        if answer == correct_ref:
            return 1.0, _rule_feedback(correct_ref, rb)
        return 0.0, _wrong_rule_feedback(answer, correct_ref, q, rb)

    if q.kind == "choose-final-form":
        if answer in q.answer_key:
            return 1.0, "Correct."
        return 0.0, f"Permissible: {', '.join(q.answer_key)}."

    if q.kind == "pratyahara-expansion":
        given = {_norm(a) for a in answer.replace(",", " ").split() if a.strip()}
        correct = set(q.answer_key)
        if given == correct:
            return 1.0, "Correct."
        score = len(given & correct) / len(correct | given)
        return round(score, 4), f"The set is: {' '.join(sorted(correct))}."

    if q.kind == "optional-or-mandatory":
        if answer.lower() == q.answer_key[0]:
            return 1.0, "Correct."
        return 0.0, f"The rule is {q.answer_key[0]}."

    raise MalformedAnswer(f"unknown question kind {q.kind}")


def _apply_feedback(q: Question, rb: RuleBase) -> str:
    p = q.payload
    results = _derive(p["left"], p["right"], frozenset(p.get("hints", [])),
                      frozenset(p.get("suppress", [])), rb)
    lines = [f"All permissible forms: {', '.join(r.final for r in results)}."]
    for r in results:
        if r.trace:
            lines.append(f"Derivation of {r.final}:")
            lines.extend(explain_trace(r, rb))
    return "\n".join(lines)


def _rule_feedback(ref: str, rb: RuleBase) -> str:
    rule = rb.by_ref[ref]
    return f"Correct: {rule.describe()} — {rule.gloss}"


def _wrong_rule_feedback(answer: str, correct_ref: str, q: Question, rb: RuleBase) -> str:
    correct = rb.by_ref[correct_ref]
    msg = [f"The step is {correct.describe()} — {correct.gloss}"]
    wrong = rb.by_ref.get(answer)
    if wrong is not None:
        if wrong.lam > correct.lam:
            msg.append(
                f"{wrong.ref} carries ordinal {wrong.lam} (M{wrong.module}) and has not "
                f"been reached at this point in the derivation.")
        else:
            msg.append(
                f"{wrong.ref} carries ordinal {wrong.lam} (M{wrong.module}); once the "
                f"derivation has passed ordinal {wrong.lam}, that rule is out of reach "
                f"— rules never apply after a later-ordered rule has acted.")
    return "\n".join(msg)


# ---------------------------------------------------------------------------
# progress
# ---------------------------------------------------------------------------
@dataclass
class ModuleScore:
    best: float = 0.0
    attempts: int = 0
    completed_at: float | None = None


class ProgressStore:
    """All users' progress in one schema-versioned JSON file."""

    SCHEMA = 1

    def __init__(self, path: str):
        self.path = path
        self._data = {"schema": self.SCHEMA, "users": {}}
        if os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    loaded = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise PersistenceFailure(f"cannot read progress store {path}: {exc}")
            if loaded.get("schema") != self.SCHEMA:
                raise PersistenceFailure(f"unsupported progress schema in {path}")
            self._data = loaded

    def _save(self) -> None:
        directory = os.path.dirname(os.path.abspath(self.path)) or "."
        try:
            fd, tmp = tempfile.mkstemp(dir=directory, prefix=".progress-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self._data, fh, ensure_ascii=False, indent=1)
            os.replace(tmp, self.path)
        except OSError as exc:
            raise PersistenceFailure(f"cannot write progress store: {exc}")

    def _user(self, user_id: str) -> dict:
        return self._data["users"].setdefault(user_id, {"modules": {}, "finalExam": None})

    def module_state(self, user_id: str, module_id: str) -> ModuleScore:
        rec = self._user(user_id)["modules"].get(module_id)
        if not rec:
            return ModuleScore()
        return ModuleScore(rec["best"], rec["attempts"], rec.get("completedAt"))

    def unlocked(self, user_id: str, module_id: str,
                 threshold: float = UNLOCK_THRESHOLD) -> bool:
        idx = MODULE_ORDER.index(module_id)
        if idx == 0:
            return True
        prev = MODULE_ORDER[idx - 1]
        return self.module_state(user_id, prev).best >= threshold

    def record_score(self, user_id: str, module_id: str, score: float,
                     threshold: float = UNLOCK_THRESHOLD) -> ModuleScore:
        if module_id not in MODULE_ORDER:
            raise CurriculumError(f"no module {module_id!r}")
        if not 0.0 <= score <= 1.0:
            raise MalformedAnswer("score must lie in [0, 1]")
        if not self.unlocked(user_id, module_id, threshold):
            raise ModuleLocked(f"{module_id} is locked for {user_id}")
        rec = self._user(user_id)["modules"].setdefault(
            module_id, {"best": 0.0, "attempts": 0, "completedAt": None})
        rec["attempts"] += 1
        rec["best"] = max(rec["best"], score)
        if rec["best"] >= threshold and rec["completedAt"] is None:
            rec["completedAt"] = time.time()
        self._save()
        return ModuleScore(rec["best"], rec["attempts"], rec["completedAt"])

    def record_final_exam(self, user_id: str, score: float) -> None:
        user = self._user(user_id)
        best = user.get("finalExam")
        user["finalExam"] = max(best, score) if best is not None else score
        self._save()

    def all_complete(self, user_id: str, threshold: float = UNLOCK_THRESHOLD) -> bool:
        return all(self.module_state(user_id, m).best >= threshold
                   for m in MODULE_ORDER)

    def summary(self, user_id: str, threshold: float = UNLOCK_THRESHOLD) -> dict:
        rows = []
        for mid in MODULE_ORDER:
            st = self.module_state(user_id, mid)
            rows.append({
                "module": mid,
                "title": _MODULE_TITLES[mid],
                "best": st.best,
                "attempts": st.attempts,
                "completedAt": st.completed_at,
                "state": ("completed" if st.best >= threshold
                          else "available" if self.unlocked(user_id, mid, threshold)
                          else "locked"),
            })
        return {
            "user": user_id,
            "modules": rows,
            "finalExam": self._user(user_id)["finalExam"],
            "threshold": threshold,
        }


# ---------------------------------------------------------------------------
# final exam
# ---------------------------------------------------------------------------
def final_exam(rb: RuleBase, seed: int,
               progress: ProgressStore | None = None,
               user_id: str | None = None) -> list[Question]:
    """Comprehensive test across every module; requires full completion when
    a progress store and user are supplied."""
    if progress is not None and user_id is not None:
        if not progress.all_complete(user_id):
            raise PrerequisitesUnmet(f"{user_id} has not completed all modules")
    rng = _rng("FINAL", seed)
    modules = list_modules(rb)
    questions: list[Question] = []
    for mod in modules:
        sub = generate_test(mod, rng.randrange(1 << 30), rb)
        take = 2 if mod.id.startswith("P") else 1
        questions.extend(sub[:take])
    # the flagship multi-step derivation, spanning two modules
    flagship = _derive("mṛt", "mayam", frozenset(), frozenset({"doubling"}), rb)
    finals = tuple(r.final for r in flagship)
    questions.append(Question(
        kind="apply-sandhi",
        prompt=("Join mṛt + mayam (suppressed: doubling). "
                "Give all permissible forms, separated by commas."),
        answer_key=finals,
        module_id="FINAL",
        rubric="Score = correctly given forms / all permissible forms.",
        payload={"left": "mṛt", "right": "mayam", "hints": [],
                 "suppress": ["doubling"], "expected_trace": [42, 86]}))
    rng.shuffle(questions)
    return questions
