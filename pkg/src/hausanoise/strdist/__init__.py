"""Edit-distance kernels over Unicode scalar sequences and token sequences.

A compiled extension (``_speedups``) is used when available; otherwise the
pure-Python fallback (``_pure``) provides identical results.  Set the
environment variable ``HAUSANOISE_NO_EXT=1`` before import to force the
fallback (used by the benchmark and the backend-equivalence tests).

Symbols are Unicode scalar values, never bytes or grapheme clusters: the
Hausa hooked letters ɓ ɗ ƙ ƴ are single symbols, so distance("ƙasa",
"kasa") == 1.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _pure

if os.environ.get("HAUSANOISE_NO_EXT"):
    _impl = _pure
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND

# Token sequences are mapped onto placeholder codepoints so the string
# kernels serve both levels; anything beyond the codepoint space falls back
# to the generic pure DP (never reached by sentence-sized inputs).
_MAX_SYMBOLS = 0x10FFFF


@dataclass(frozen=True)
class EditCost:
    """An edit count together with its max-length normalization."""

    distance: int
    normalized: float


def _encode(a, b):
    """Map two symbol sequences onto strings over a shared alphabet."""
    codes = {}
    for seq in (a, b):
        for sym in seq:
            if sym not in codes:
                codes[sym] = len(codes)
    if len(codes) > _MAX_SYMBOLS:
        return None
    return "".join(chr(codes[s]) for s in a), "".join(chr(codes[s]) for s in b)


def levenshtein(a, b):
    """Minimum number of single-symbol insertions, deletions, and
    substitutions transforming ``a`` into ``b``."""
    if isinstance(a, str) and isinstance(b, str):
        return _impl.levenshtein(a, b)
    enc = _encode(a, b)
    if enc is None:
        return _pure.levenshtein(a, b)
    return _impl.levenshtein(*enc)


def normalized_levenshtein(a, b):
    """levenshtein(a, b) / max(len(a), len(b)), and 0.0 when both empty."""
    denom = max(len(a), len(b))
    if denom == 0:
        return 0.0
    return levenshtein(a, b) / denom


def edit_cost(a, b):
    d = levenshtein(a, b)
    denom = max(len(a), len(b))
    return EditCost(d, d / denom if denom else 0.0)


def token_edit_distance(ref, hyp):
    """Levenshtein over whole tokens as symbols."""
    return levenshtein(list(ref), list(hyp))


def align_substitutions(ref, hyp):
    """Pairs (i, j) of positions aligned as substitutions (ref[i] != hyp[j])
    in one optimal edit-distance alignment of the two token sequences.

    The alignment backtrace is deterministic (ties resolve match >
    substitution > deletion > insertion) and identical across backends.
    """
    if isinstance(ref, str) and isinstance(hyp, str):
        return _impl.align_substitutions(ref, hyp)
    enc = _encode(list(ref), list(hyp))
    if enc is None:
        return _pure.align_substitutions(list(ref), list(hyp))
    return _impl.align_substitutions(*enc)


def pairwise_normalized(words):
    """Symmetric matrix of normalized distances between all word pairs."""
    out = np.zeros((len(words), len(words)), dtype=np.float64)
    if len(words) > 1:
        _impl.pairwise_normalized(list(words), out)
    return out
