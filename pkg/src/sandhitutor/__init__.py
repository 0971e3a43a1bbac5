"""Staged tutor and engine for Sanskrit euphonic conjunctions."""

from .engine import (
    BranchExplosion,
    DerivationResult,
    DerivationStep,
    JoinOptions,
    UnknownHint,
    explain_trace,
    join,
    join_text,
    make_options,
    step,
)
from .phonemes import Phoneme, expand_pratyahara, is_savarna
from .rules import RuleBase, SutraRule, load_rule_base
from .runtime import default_rule_base
from .tokenizer import detokenize, tokenize
from .translit import deva_to_iast, iast_to_deva, transliterate

__version__ = "1.0.0"

__all__ = [
    "BranchExplosion",
    "DerivationResult",
    "DerivationStep",
    "JoinOptions",
    "Phoneme",
    "RuleBase",
    "SutraRule",
    "UnknownHint",
    "default_rule_base",
    "detokenize",
    "deva_to_iast",
    "expand_pratyahara",
    "explain_trace",
    "iast_to_deva",
    "is_savarna",
    "join",
    "join_text",
    "load_rule_base",
    "make_options",
    "step",
    "tokenize",
    "transliterate",
]
