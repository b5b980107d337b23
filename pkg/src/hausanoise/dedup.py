"""MinHash-LSH contamination audit between two corpora.

Sentences are reduced to word 3-shingles, hashed into K-component
MinHash signatures, and indexed with LSH banding so candidate pairs at
the requested Jaccard threshold surface without quadratic comparison.
Candidates are then verified against the signature estimate (optionally
against exact shingle Jaccard).
"""

import functools
import hashlib
import random
from dataclasses import dataclass
from multiprocessing import get_context

from .corpus import tokenize_words
from .errors import ValidationError

DEFAULT_NUM_PERM = 128
DEFAULT_SHINGLE = 3
DEFAULT_THRESHOLD = 0.5

_PRIME = (1 << 61) - 1


@dataclass(frozen=True)
class MinHashSignature:
    hashes: tuple
    shingle_size: int
    seed: int

    def __post_init__(self):
        if not self.hashes:
            raise ValidationError("signature must have at least one component")


@dataclass(frozen=True)
class OverlapReport:
    pairs: tuple          # (id_a, id_b, estimated_jaccard), estimate-descending
    threshold: float
    num_perm: int
    bands: int
    rows: int
    seed: int

    def to_dict(self):
        return {
            "pairs": [list(p) for p in self.pairs],
            "threshold": self.threshold,
            "num_perm": self.num_perm,
            "bands": self.bands,
            "rows": self.rows,
            "seed": self.seed,
        }


def shingle(text, k=DEFAULT_SHINGLE):
    """Set of contiguous k-token windows; short texts give one tuple."""
    if k < 1:
        raise ValidationError("shingle size must be at least 1")
    tokens = tokenize_words(text)
    if not tokens:
        return set()
    if len(tokens) < k:
        return {tuple(tokens)}
    return {tuple(tokens[i:i + k]) for i in range(len(tokens) - k + 1)}


def _hash_shingle(parts):
    joined = "\x1f".join(parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(joined, digest_size=8).digest(), "big")


@functools.lru_cache(maxsize=8)
def _hash_params(num_perm, seed):
    rng = random.Random(seed)
    return tuple(
        (rng.randrange(1, _PRIME), rng.randrange(0, _PRIME))
        for _ in range(num_perm)
    )


def minhash(shingles, num_perm=DEFAULT_NUM_PERM, seed=0, shingle_size=DEFAULT_SHINGLE):
    """K-component MinHash signature over a shingle set."""
    if not shingles:
        raise ValidationError("cannot build a signature from an empty shingle set")
    if num_perm < 1:
        raise ValidationError("num_perm must be at least 1")
    base = [_hash_shingle(s) % _PRIME for s in shingles]
    mins = []
    for a, b in _hash_params(num_perm, seed):
        mins.append(min((a * h + b) % _PRIME for h in base))
    return MinHashSignature(tuple(mins), shingle_size, seed)


def estimate_jaccard(sig_a, sig_b):
    """Fraction of agreeing signature components."""
    if len(sig_a.hashes) != len(sig_b.hashes):
        raise ValidationError("signatures have different sizes")
    if sig_a.seed != sig_b.seed or sig_a.shingle_size != sig_b.shingle_size:
        raise ValidationError("signatures built with different parameters")
    agree = sum(1 for x, y in zip(sig_a.hashes, sig_b.hashes) if x == y)
    return agree / len(sig_a.hashes)


def exact_jaccard(shingles_a, shingles_b):
    if not shingles_a and not shingles_b:
        return 0.0
    return len(shingles_a & shingles_b) / len(shingles_a | shingles_b)


def pick_banding(num_perm, threshold):
    """bands*rows = num_perm with the S-curve midpoint nearest threshold."""
    best = None
    for bands in range(1, num_perm + 1):
        if num_perm % bands:
            continue
        rows = num_perm // bands
        midpoint = (1.0 / bands) ** (1.0 / rows)
        score = abs(midpoint - threshold)
        if best is None or score < best[0]:
            best = (score, bands, rows)
    return best[1], best[2]


def _signature_job(args):
    text, num_perm, seed, shingle_size = args
    shingles = shingle(text, shingle_size)
    if not shingles:
        return None, None
    return shingles, minhash(shingles, num_perm, seed, shingle_size)


def _signatures(corpus, num_perm, seed, shingle_size, pool):
    jobs = [(text, num_perm, seed, shingle_size) for text in corpus]
    if pool is None:
        results = [_signature_job(job) for job in jobs]
    else:
        results = pool.map(_signature_job, jobs, chunksize=max(1, len(jobs) // 32))
    sigs = {}
    shingle_sets = {}
    for idx, (shingles, sig) in enumerate(results):
        if sig is None:
            continue
        shingle_sets[idx] = shingles
        sigs[idx] = sig
    return sigs, shingle_sets


def audit_overlap(
    corpus_a,
    corpus_b,
    threshold=DEFAULT_THRESHOLD,
    num_perm=DEFAULT_NUM_PERM,
    shingle_size=DEFAULT_SHINGLE,
    seed=0,
    exact_check=False,
    workers=1,
):
    """LSH-bucketed overlap report between two sentence lists."""
    if not corpus_a or not corpus_b:
        raise ValidationError("both corpora must be non-empty")
    if not 0.0 < threshold <= 1.0:
        raise ValidationError("threshold must lie in (0, 1]")
    bands, rows = pick_banding(num_perm, threshold)

    if workers > 1:
        with get_context().Pool(workers) as pool:
            sigs_a, sets_a = _signatures(corpus_a, num_perm, seed, shingle_size, pool)
            sigs_b, sets_b = _signatures(corpus_b, num_perm, seed, shingle_size, pool)
    else:
        sigs_a, sets_a = _signatures(corpus_a, num_perm, seed, shingle_size, None)
        sigs_b, sets_b = _signatures(corpus_b, num_perm, seed, shingle_size, None)

    buckets = {}
    for idx, sig in sigs_a.items():
        for band in range(bands):
            key = (band, sig.hashes[band * rows:(band + 1) * rows])
            buckets.setdefault(key, []).append(idx)

    candidates = set()
    for idx, sig in sigs_b.items():
        for band in range(bands):
            key = (band, sig.hashes[band * rows:(band + 1) * rows])
            for other in buckets.get(key, ()):
                candidates.add((other, idx))

    pairs = []
    for id_a, id_b in candidates:
        estimate = estimate_jaccard(sigs_a[id_a], sigs_b[id_b])
        if estimate < threshold:
            continue
        if exact_check and exact_jaccard(sets_a[id_a], sets_b[id_b]) < threshold:
            continue
        pairs.append((id_a, id_b, estimate))
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    return OverlapReport(
        pairs=tuple(pairs),
        threshold=threshold,
        num_perm=num_perm,
        bands=bands,
        rows=rows,
        seed=seed,
    )
