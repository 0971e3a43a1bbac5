"""Command-line interface.

Verbs: join, pratyahara, translit, rules, quiz, summary, serve.
Exit codes: 0 success, 2 invalid input, 3 rule-base load failure.
Configuration may come from flags or from SANDHITUTOR_RULES,
SANDHITUTOR_PROGRESS and SANDHITUTOR_LISTEN.
"""
from __future__ import annotations

import argparse
import os
import sys

from .curriculum import (
    MODULE_ORDER,
    ModuleLocked,
    ProgressStore,
    final_exam,
    generate_test,
    get_module,
    grade_answer,
)
from .engine import EngineError, UnknownHint, explain_trace, join_text, make_options
from .phonemes import UnknownPratyahara, expand_pratyahara, scan_order
from .rules import RuleBase, RuleBaseError, load_rule_base
from .tokenizer import TokenizerError
from .translit import UnsupportedSign, transliterate


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load(args) -> RuleBase:
    path = getattr(args, "rules", None) or os.environ.get("SANDHITUTOR_RULES") or None
    return load_rule_base(path)


def _progress_path(args) -> str:
    return (getattr(args, "progress", None)
            or os.environ.get("SANDHITUTOR_PROGRESS", "progress.json"))


def cmd_join(args) -> int:
    rb = _load(args)
    opts = make_options(hints=args.hints or [], suppress=args.suppress or [],
                        max_branches=args.max_branches)
    try:
        results = join_text(args.words, opts, rb)
    except (TokenizerError, UnknownHint, EngineError) as exc:
        return _fail(str(exc), 2)
    for res in results:
        if args.deva:
            from .translit import iast_to_deva
            print(f"{res.final} / {iast_to_deva(res.final)}")
        else:
            print(res.final)
        if args.trace:
            for line in explain_trace(res, rb):
                print("  " + line.replace("\n", "\n  "))
    return 0


def cmd_pratyahara(args) -> int:
    try:
        members = expand_pratyahara(args.name, savarna_closure=args.closure)
    except UnknownPratyahara as exc:
        return _fail(f"unknown pratyāhāra: {exc}", 2)
    print(" ".join(scan_order(members)))
    return 0


def cmd_translit(args) -> int:
    direction = "iast-deva" if args.to == "deva" else "deva-iast"
    try:
        print(transliterate(args.text, direction))
    except (UnsupportedSign, TokenizerError) as exc:
        return _fail(str(exc), 2)
    return 0


def cmd_rules(args) -> int:
    rb = _load(args)
    rules = rb.rules
    if args.module:
        mid = args.module.upper()
        if not mid.startswith("M") or not mid[1:].isdigit() or not 1 <= int(mid[1:]) <= 13:
            return _fail(f"unknown module {args.module}", 2)
        lo, hi = rb.module_ranges[int(mid[1:])]
        rules = [rb.by_lambda[n] for n in range(lo, hi + 1)]
    for r in rules:
        opt = "optional " if r.optional else "mandatory"
        print(f"λ={r.lam:>3}  {r.ref:<8} M{r.module:<2} {r.category:<9} {opt} "
              f"{r.scope:<8}  {r.text_iast}")
    return 0


def cmd_quiz(args) -> int:
    rb = _load(args)
    store = ProgressStore(_progress_path(args))
    user = args.user
    mid = args.module
    if mid != "FINAL" and mid not in MODULE_ORDER:
        return _fail(f"unknown module {mid}", 2)
    try:
        if mid == "FINAL":
            questions = final_exam(rb, args.seed, store, user)
        else:
            if not store.unlocked(user, mid):
                return _fail(f"{mid} is locked: finish the previous module first", 2)
            questions = generate_test(get_module(rb, mid), args.seed, rb)
    except Exception as exc:
        return _fail(str(exc), 2)

    scores = []
    for i, q in enumerate(questions, start=1):
        print(f"\n[{i}/{len(questions)}] ({q.kind}) {q.prompt}")
        for j, choice in enumerate(q.choices, start=1):
            print(f"    {j}. {choice}")
        answer = input("> ").strip()
        if q.choices and answer.isdigit() and 1 <= int(answer) <= len(q.choices):
            answer = q.choices[int(answer) - 1]
        try:
            score, feedback = grade_answer(q, answer, rb)
        except Exception as exc:
            print(f"  (unscored: {exc})")
            score, feedback = 0.0, ""
        scores.append(score)
        print(f"  score: {score:.2f}")
        if feedback:
            print("  " + feedback.replace("\n", "\n  "))
    total = sum(scores) / len(scores) if scores else 0.0
    print(f"\nquiz score: {total:.2f}")
    try:
        if mid == "FINAL":
            store.record_final_exam(user, total)
        else:
            rec = store.record_score(user, mid, total)
            print(f"best for {mid}: {rec.best:.2f} over {rec.attempts} attempt(s)")
    except ModuleLocked as exc:
        return _fail(str(exc), 2)
    return 0


def cmd_summary(args) -> int:
    store = ProgressStore(_progress_path(args))
    summary = store.summary(args.user)
    from .report import format_summary
    print(format_summary(summary))
    if args.report_dir:
        from .report import write_report
        tsv, png = write_report(summary, args.report_dir)
        print(f"\nwrote {tsv}\nwrote {png}")
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve
    config = ServiceConfig.from_env()
    if args.rules:
        config.rule_file = args.rules
    if args.progress:
        config.progress_path = args.progress
    if args.listen:
        config.listen = args.listen
    if args.static:
        config.static_dir = args.static
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sandhitutor",
                                description="Sanskrit euphonic-conjunction engine and tutor")
    p.add_argument("--rules", help="rule file path (default: bundled corpus)")
    sub = p.add_subparsers(dest="cmd", required=True)

    j = sub.add_parser("join", help="join words and show every permissible form")
    j.add_argument("words", nargs="+", help="two or more words in IAST")
    j.add_argument("--trace", action="store_true", help="print each applied rule")
    j.add_argument("--hints", action="append", default=[],
                   help="semantic hint (repeatable), e.g. dual-number")
    j.add_argument("--suppress", action="append", default=[],
                   help="suppress rules carrying this tag, e.g. doubling")
    j.add_argument("--deva", action="store_true", help="also print Devanāgarī")
    j.add_argument("--max-branches", type=int, default=64)
    j.set_defaults(fn=cmd_join)

    pr = sub.add_parser("pratyahara", help="expand a pratyāhāra")
    pr.add_argument("name")
    pr.add_argument("--closure", action="store_true",
                    help="include long savarṇa partners")
    pr.set_defaults(fn=cmd_pratyahara)

    t = sub.add_parser("translit", help="transliterate IAST <-> Devanāgarī")
    t.add_argument("text")
    t.add_argument("--to", choices=("deva", "iast"), required=True)
    t.set_defaults(fn=cmd_translit)

    r = sub.add_parser("rules", help="list the rule corpus")
    r.add_argument("--module", help="only one module, e.g. M5")
    r.set_defaults(fn=cmd_rules)

    q = sub.add_parser("quiz", help="take a module test in the terminal")
    q.add_argument("module", help="P1..P3, M1..M13 or FINAL")
    q.add_argument("--user", default="student")
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--progress", help="progress store path")
    q.set_defaults(fn=cmd_quiz)

    s = sub.add_parser("summary", help="per-module score summary")
    s.add_argument("user")
    s.add_argument("--progress", help="progress store path")
    s.add_argument("--report-dir", help="also write summary.tsv and summary.png here")
    s.set_defaults(fn=cmd_summary)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--listen", help="host:port (default 127.0.0.1:8764)")
    sv.add_argument("--progress", help="progress store path")
    sv.add_argument("--static", help="directory with built UI assets")
    sv.set_defaults(fn=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RuleBaseError as exc:
        return _fail(f"rule base failed to load: {exc}", 3)
    except FileNotFoundError as exc:
        return _fail(str(exc), 3)


if __name__ == "__main__":
    sys.exit(main())
