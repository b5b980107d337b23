"""Error-distance profiling of naturally-noisy text.

Pipeline: flag out-of-vocabulary tokens, group them into overlapping
length buckets, compute normalized-Levenshtein distance matrices, cluster
each bucket with DBSCAN over the precomputed metric, and reduce all
intra-cluster pair distances into a histogram. The same histogram shape
is also extracted from synthetic parallel pairs so the two distributions
can be compared.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import strdist
from .corpus import tokenize_words
from .errors import (
    BucketTooLargeError,
    ConfigurationError,
    EmptyProfileError,
    ValidationError,
)

NOISE = -1

DEFAULT_EPS = 0.4
DEFAULT_MIN_SAMPLES = 2
DEFAULT_BINS = 20
DEFAULT_BUCKET_CAP = 20000


@dataclass(frozen=True)
class LengthBucket:
    """Distinct words whose lengths fall in [center-1, center+1]."""

    center: int
    members: tuple

    def __post_init__(self):
        seen = set()
        for word in self.members:
            if word in seen:
                raise ValidationError("bucket members must be distinct: %r" % word)
            seen.add(word)
            if abs(len(word) - self.center) > 1:
                raise ValidationError(
                    "word %r (length %d) outside bucket centered at %d"
                    % (word, len(word), self.center)
                )


@dataclass(frozen=True, eq=False)
class ClusterSet:
    """DBSCAN labels over one bucket, with the matrix they came from.

    Labels are canonical: clusters are numbered in ascending order of
    their first core point, noise points carry NOISE (-1). Border points,
    which can only exist for min_samples > 2, go to their nearest core
    neighbor.
    """

    labels: tuple
    eps: float
    min_samples: int
    matrix: np.ndarray = field(repr=False)

    @property
    def n_clusters(self):
        return len(set(label for label in self.labels if label != NOISE))

    def clusters(self):
        """Member indices per cluster id, noise excluded."""
        out = {}
        for i, label in enumerate(self.labels):
            if label != NOISE:
                out.setdefault(label, []).append(i)
        return [out[key] for key in sorted(out)]

    def cluster_sizes(self):
        return sorted(len(c) for c in self.clusters())


@dataclass(frozen=True)
class DistanceHistogram:
    bin_edges: tuple
    mass: tuple
    sample_count: int

    def __post_init__(self):
        edges = self.bin_edges
        if len(edges) < 2 or any(a >= b for a, b in zip(edges, edges[1:])):
            raise ValidationError("bin edges must be strictly increasing")
        if len(self.mass) != len(edges) - 1:
            raise ValidationError("mass length must match bin count")
        if any(m < 0 for m in self.mass):
            raise ValidationError("mass must be non-negative")
        if self.sample_count > 0 and abs(sum(self.mass) - 1.0) > 1e-9:
            raise ValidationError("mass must sum to 1")

    @classmethod
    def from_samples(cls, samples, bins=DEFAULT_BINS):
        samples = np.asarray(list(samples), dtype=float)
        if samples.size == 0:
            raise EmptyProfileError("no distance samples to bin")
        counts, edges = np.histogram(samples, bins=bins, range=(0.0, 1.0))
        mass = counts / samples.size
        return cls(tuple(edges.tolist()), tuple(mass.tolist()), int(samples.size))

    def to_dict(self):
        return {
            "bin_edges": list(self.bin_edges),
            "mass": list(self.mass),
            "sample_count": self.sample_count,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            tuple(data["bin_edges"]), tuple(data["mass"]), int(data["sample_count"])
        )


def flag_oov(tokens, lexicon):
    """Case-folded tokens absent from the lexicon, length > 2."""
    if len(lexicon) == 0:
        raise ConfigurationError("lexicon is empty")
    flagged = set()
    for token in tokens:
        folded = token.lower()
        if len(folded) > 2 and folded not in lexicon:
            flagged.add(folded)
    return flagged


def bucket_by_length(words):
    """One bucket per observed word length L, holding lengths L-1..L+1."""
    words = list(dict.fromkeys(words))
    by_length = {}
    for word in words:
        by_length.setdefault(len(word), []).append(word)
    buckets = []
    for center in sorted(by_length):
        members = []
        for length in (center - 1, center, center + 1):
            members.extend(by_length.get(length, ()))
        buckets.append(LengthBucket(center, tuple(members)))
    return buckets


def distance_matrix(bucket, cap=DEFAULT_BUCKET_CAP):
    """Pairwise normalized Levenshtein distances for one bucket."""
    words = list(bucket.members if isinstance(bucket, LengthBucket) else bucket)
    if len(words) > cap:
        raise BucketTooLargeError(
            "bucket has %d words (cap %d); shard the bucket or raise the cap"
            % (len(words), cap)
        )
    return strdist.pairwise_normalized(words)


def _validate_matrix(matrix):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError("distance matrix must be square")
    if matrix.size:
        if np.any(matrix < 0):
            raise ValidationError("distance matrix must be non-negative")
        if np.any(np.diag(matrix) != 0):
            raise ValidationError("distance matrix must have a zero diagonal")
        if not np.array_equal(matrix, matrix.T):
            raise ValidationError("distance matrix must be symmetric")
    return matrix


def dbscan(matrix, eps=DEFAULT_EPS, min_samples=DEFAULT_MIN_SAMPLES):
    """Standard DBSCAN over a precomputed distance matrix."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if min_samples < 1:
        raise ValidationError("min_samples must be at least 1")
    matrix = _validate_matrix(matrix)
    n = matrix.shape[0]
    within = matrix <= eps
    degree = within.sum(axis=1)
    core = degree >= min_samples

    labels = [NOISE] * n
    cluster_id = 0
    for start in range(n):
        if not core[start] or labels[start] != NOISE:
            continue
        labels[start] = cluster_id
        queue = deque([start])
        while queue:
            point = queue.popleft()
            for neighbor in np.flatnonzero(within[point]):
                if core[neighbor] and labels[neighbor] == NOISE:
                    labels[neighbor] = cluster_id
                    queue.append(neighbor)
        cluster_id += 1

    # border points: non-core but within eps of a core; nearest core wins
    for i in range(n):
        if core[i] or labels[i] != NOISE:
            continue
        candidates = np.flatnonzero(within[i] & core)
        if candidates.size:
            nearest = candidates[np.argmin(matrix[i, candidates])]
            labels[i] = labels[nearest]

    return ClusterSet(tuple(labels), float(eps), int(min_samples), matrix)


def empirical_histogram(cluster_sets, bins=DEFAULT_BINS):
    """Histogram of all intra-cluster pairwise distances, noise excluded."""
    samples = []
    for cset in cluster_sets:
        for members in cset.clusters():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    samples.append(cset.matrix[members[a], members[b]])
    if not samples:
        raise EmptyProfileError("no clusters found in any bucket")
    return DistanceHistogram.from_samples(samples, bins=bins)


def changed_word_distances(pairs):
    """Char-level distances of word substitutions between clean and noisy."""
    samples = []
    for pair in pairs:
        clean_tokens = tokenize_words(pair.clean)
        noisy_tokens = tokenize_words(pair.noisy)
        for i, j in strdist.align_substitutions(clean_tokens, noisy_tokens):
            samples.append(strdist.normalized_levenshtein(clean_tokens[i], noisy_tokens[j]))
    return samples


def synthetic_histogram(pairs, bins=DEFAULT_BINS):
    """Distance histogram of the changed words in synthetic parallel pairs."""
    samples = changed_word_distances(pairs)
    if not samples:
        raise EmptyProfileError("no changed words in any pair")
    return DistanceHistogram.from_samples(samples, bins=bins)


def nearest_vocab_distances(words, lexicon):
    """Distance from each word to its closest lexicon entry (optional report)."""
    entries = sorted(lexicon.entries)
    if not entries:
        raise ConfigurationError("lexicon is empty")
    return {
        word: min(strdist.normalized_levenshtein(word, entry) for entry in entries)
        for word in sorted(words)
    }


def profile_corpus(
    sentences,
    lexicon,
    eps=DEFAULT_EPS,
    min_samples=DEFAULT_MIN_SAMPLES,
    bins=DEFAULT_BINS,
    cap=DEFAULT_BUCKET_CAP,
):
    """Full profiling pipeline over noisy sentences; returns (histogram, info)."""
    tokens = []
    for sentence in sentences:
        tokens.extend(tokenize_words(sentence))
    oov = sorted(flag_oov(tokens, lexicon))
    cluster_sets = []
    for bucket in bucket_by_length(oov):
        cluster_sets.append(dbscan(distance_matrix(bucket, cap=cap), eps, min_samples))
    histogram = empirical_histogram(cluster_sets, bins=bins)
    size_counts = {}
    for cset in cluster_sets:
        for size in cset.cluster_sizes():
            size_counts[size] = size_counts.get(size, 0) + 1
    info = {
        "oov_types": len(oov),
        "buckets": len(cluster_sets),
        "clusters": sum(cset.n_clusters for cset in cluster_sets),
        "cluster_size_counts": {str(k): v for k, v in sorted(size_counts.items())},
        "eps": eps,
        "min_samples": min_samples,
    }
    return histogram, info
