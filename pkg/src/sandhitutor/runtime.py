"""Shared default rule base (loaded once, immutable thereafter)."""
from __future__ import annotations

from functools import lru_cache

from .rules import RuleBase, load_rule_base


@lru_cache(maxsize=None)
def default_rule_base() -> RuleBase:
    return load_rule_base()
