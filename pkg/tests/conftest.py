from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from mckayfix.catalog import CaseContext, get_case  # noqa: E402
from mckayfix.hilb import analyze_fixed_locus  # noqa: E402


@lru_cache(maxsize=None)
def context(name: str, m: int | None = None) -> CaseContext:
    return CaseContext(get_case(name, m))


@lru_cache(maxsize=None)
def locus(name: str, m: int | None = None):
    ctx = context(name, m)
    return analyze_fixed_locus(ctx.case, ctx)
