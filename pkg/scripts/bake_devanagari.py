#!/usr/bin/env python3
"""Fill the deva= field of the rule corpus from its IAST text.

Run after editing sutras.txt; deva=@auto fields (or all fields with
--force) are rewritten through the package transliterator so the shipped
file always carries both scripts.
"""
from __future__ import annotations

import argparse
import re
import sys

from sandhitutor.translit import iast_to_deva

FIELD_RE = re.compile(r"(?P<pre>.* \| text=(?P<text>[^|]+) \| deva=)(?P<deva>[^|]+)(?P<post> \| .*)")


def bake(path: str, force: bool = False) -> int:
    out, changed = [], 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            m = FIELD_RE.match(line)
            if m and (force or m.group("deva").strip() == "@auto"):
                deva = iast_to_deva(m.group("text").strip())
                line = f"{m.group('pre')}{deva}{m.group('post')}"
                changed += 1
            out.append(line)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return changed


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("path", nargs="?", default="src/sandhitutor/data/sutras.txt")
    ap.add_argument("--force", action="store_true")
    ns = ap.parse_args()
    n = bake(ns.path, ns.force)
    print(f"rewrote {n} deva fields")
    sys.exit(0)
