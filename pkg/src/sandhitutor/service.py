"""HTTP service exposing the engine and the tutor to the web UI.

All payloads are JSON and carry both IAST and Devanagari renderings, so a
client can toggle scripts without re-requesting.  The rule base is loaded
once at startup and every structural invariant is checked then; a broken
rule file aborts startup.
"""
from __future__ import annotations

import os
import secrets
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .curriculum import (
    ModuleLocked,
    MODULE_ORDER,
    ProgressStore,
    Question,
    UNLOCK_THRESHOLD,
    final_exam,
    generate_test,
    get_module,
    grade_answer,
    list_modules,
)
from .engine import BranchExplosion, EngineError, UnknownHint, explain_trace, join, make_options
from .rules import NotFound, RuleBase, load_rule_base
from .tokenizer import TokenizerError
from .translit import iast_to_deva


@dataclass
class ServiceConfig:
    rule_file: str | None = None
    progress_path: str = "progress.json"
    listen: str = "127.0.0.1:8764"
    default_script: str = "both"
    static_dir: str | None = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            rule_file=os.environ.get("SANDHITUTOR_RULES") or None,
            progress_path=os.environ.get("SANDHITUTOR_PROGRESS", "progress.json"),
            listen=os.environ.get("SANDHITUTOR_LISTEN", "127.0.0.1:8764"),
            static_dir=os.environ.get("SANDHITUTOR_STATIC") or None,
        )


class JoinRequest(BaseModel):
    left: str
    right: str = ""
    hints: list[str] = []
    suppress: list[str] = []
    max_branches: int = 64


class QuizStartRequest(BaseModel):
    user: str
    seed: int | None = None


class QuizAnswerRequest(BaseModel):
    index: int
    answer: str


@dataclass
class QuizSession:
    session_id: str
    user: str
    module_id: str
    seed: int
    questions: list[Question]
    answered: dict[int, float] = field(default_factory=dict)
    done: bool = False


def _deva(text: str) -> str:
    try:
        return iast_to_deva(text)
    except Exception:
        return ""


def _both(text: str) -> dict:
    return {"iast": text, "deva": _deva(text)}


def _question_payload(q: Question, index: int) -> dict:
    return {
        "index": index,
        "kind": q.kind,
        "prompt": q.prompt,
        "choices": list(q.choices),
        "rubric": q.rubric,
        "module": q.module_id,
    }


def create_app(config: ServiceConfig | None = None,
               rb: RuleBase | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    rule_base = rb or load_rule_base(config.rule_file)  # fails closed on a bad file
    store = ProgressStore(config.progress_path)
    sessions: dict[str, QuizSession] = {}

    app = FastAPI(title="sandhitutor", version="1.0")
    app.state.rule_base = rule_base
    app.state.progress = store

    @app.get("/api/modules")
    def modules_index():
        mods = list_modules(rule_base)
        return {"modules": [
            {"id": m.id, "title": m.title,
             "lambda_range": list(m.lambda_range) if m.lambda_range else None,
             "rules": (m.lambda_range[1] - m.lambda_range[0] + 1) if m.lambda_range else 0,
             "unlock_threshold": m.unlock_threshold}
            for m in mods
        ]}

    @app.get("/api/modules/{module_id}")
    def module_detail(module_id: str):
        try:
            mod = get_module(rule_base, module_id)
        except Exception:
            raise HTTPException(404, f"no module {module_id}")
        return {
            "id": mod.id,
            "title": mod.title,
            "lambda_range": list(mod.lambda_range) if mod.lambda_range else None,
            "unlock_threshold": mod.unlock_threshold,
            "lesson_items": [
                item if isinstance(item, dict) else {"prose": item}
                for item in mod.lesson_items
            ],
            "examples": [
                {
                    "left": _both(ex.left),
                    "right": _both(ex.right),
                    "hints": list(ex.hints),
                    "suppress": list(ex.suppress),
                    "finals": [_both(f) for f in ex.finals],
                    "lambdas": [list(l) for l in ex.lambdas],
                    "carried_forward": ex.carried_forward,
                }
                for ex in mod.examples
            ],
        }

    @app.get("/api/rules/{selector}")
    def rule_detail(selector: str):
        try:
            rule = rule_base.lookup(selector)
        except NotFound:
            raise HTTPException(404, f"no rule {selector}")
        return {
            "lambda": rule.lam,
            "ref": rule.ref,
            "module": f"M{rule.module}",
            "category": rule.category,
            "text": {"iast": rule.text_iast, "deva": rule.text_deva},
            "gloss": rule.gloss,
            "optional": rule.optional,
            "scope": rule.scope,
            "semantic": sorted(rule.semantic),
            "tags": sorted(rule.tags),
            "examples": list(rule.examples),
        }

    @app.post("/api/join")
    def api_join(req: JoinRequest):
        try:
            opts = make_options(hints=req.hints, suppress=req.suppress,
                                max_branches=req.max_branches)
            results = join(req.left, req.right, opts, rule_base)
        except (UnknownHint, TokenizerError, EngineError, BranchExplosion, ValueError) as exc:
            raise HTTPException(400, str(exc))
        return {"results": [
            {
                "final": _both(r.final),
                "trace": [
                    {"lambda": s.lam, "ref": s.ref,
                     "rule": {"iast": rule_base.by_lambda[s.lam].text_iast,
                              "deva": rule_base.by_lambda[s.lam].text_deva},
                     "gloss": rule_base.by_lambda[s.lam].gloss,
                     "before": _both(s.before), "after": _both(s.after),
                     "optional": s.optional_branch}
                    for s in r.trace
                ],
                "explain": explain_trace(r, rule_base),
            }
            for r in results
        ]}

    @app.post("/api/quiz/{module_id}/start")
    def quiz_start(module_id: str, req: QuizStartRequest):
        if module_id != "FINAL" and module_id not in MODULE_ORDER:
            raise HTTPException(404, f"no module {module_id}")
        seed = req.seed if req.seed is not None else secrets.randbelow(1 << 30)
        if module_id == "FINAL":
            if not store.all_complete(req.user):
                raise HTTPException(409, "all sixteen modules must be completed first")
            questions = final_exam(rule_base, seed)
        else:
            if not store.unlocked(req.user, module_id):
                raise HTTPException(409, f"{module_id} is locked: finish the previous module first")
            mod = get_module(rule_base, module_id)
            questions = generate_test(mod, seed, rule_base)
        sid = secrets.token_urlsafe(16)
        sessions[sid] = QuizSession(sid, req.user, module_id, seed, questions)
        return {
            "session": sid,
            "module": module_id,
            "seed": seed,
            "questions": [_question_payload(q, i) for i, q in enumerate(questions)],
        }

    @app.post("/api/quiz/{session_id}/answer")
    def quiz_answer(session_id: str, req: QuizAnswerRequest):
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(404, "no such quiz session")
        if sess.done:
            raise HTTPException(409, "quiz already completed")
        if not 0 <= req.index < len(sess.questions):
            raise HTTPException(400, "question index out of range")
        q = sess.questions[req.index]
        try:
            score, feedback = grade_answer(q, req.answer, rule_base)
        except Exception as exc:
            raise HTTPException(400, str(exc))
        sess.answered[req.index] = score
        payload = {
            "index": req.index,
            "score": score,
            "feedback": feedback,
            "answer_key": list(q.answer_key),
            "answered": len(sess.answered),
            "total": len(sess.questions),
        }
        if len(sess.answered) == len(sess.questions):
            sess.done = True
            total = sum(sess.answered.values()) / len(sess.questions)
            if sess.module_id == "FINAL":
                store.record_final_exam(sess.user, total)
            else:
                try:
                    store.record_score(sess.user, sess.module_id, total)
                except ModuleLocked as exc:
                    raise HTTPException(409, str(exc))
            payload["quiz_score"] = round(total, 4)
            payload["progress"] = store.summary(sess.user)
        return payload

    @app.get("/api/progress/{user}")
    def progress(user: str):
        return store.summary(user)

    static = config.static_dir
    if static and os.path.isdir(static):
        # API routes above take precedence; everything else serves the UI
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")

    return app


def serve(config: ServiceConfig | None = None) -> None:
    import uvicorn

    config = config or ServiceConfig.from_env()
    host, _, port = config.listen.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8764))
