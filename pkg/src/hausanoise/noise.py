"""Probabilistic noise model over clean Hausa sentences.

Nine independent per-site operations (Table-style configuration keys)
turn a clean sentence into a noisy one. Every fired operation lands in a
trace so generation is fully replayable, and each sentence draws from its
own generator seeded by (global seed, sentence id), which makes corpus
generation order- and worker-independent.
"""

import dataclasses
import json
import random
from dataclasses import dataclass
from multiprocessing import get_context
from typing import NamedTuple

from . import __version__
from .corpus import read_text
from .errors import ConfigurationError, TraceReplayError

HOOKED_TO_PLAIN = {
    "ɓ": "b", "ɗ": "d", "ƙ": "k", "ƴ": "y",
    "Ɓ": "B", "Ɗ": "D", "Ƙ": "K", "Ƴ": "Y",
}

# Working alphabet for random substitutions: basic Latin letters, the
# hooked letters, and the orthographic apostrophe.
ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "ɓɗƙƴƁƊƘƳ'"
)

PROBABILITY_FIELDS = (
    "random_spacing",
    "remove_spaces",
    "incorrect_characters",
    "delete_characters",
    "duplicate_characters",
    "substitute_characters",
    "transpose_characters",
    "delete_chunk",
    "insert_chunk",
)

DEFAULT_PROBABILITIES = {
    "random_spacing": 0.02,
    "remove_spaces": 0.15,
    "incorrect_characters": 0.02,
    "delete_characters": 0.005,
    "duplicate_characters": 0.01,
    "substitute_characters": 0.001,
    "transpose_characters": 0.01,
    "delete_chunk": 0.0015,
    "insert_chunk": 0.001,
}

_MASK64 = (1 << 64) - 1


def mix_seed(seed, sentence_id):
    """Derive a per-sentence seed (splitmix64 finalizer)."""
    x = (seed + (sentence_id + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class NoiseConfig:
    random_spacing: float = 0.0
    remove_spaces: float = 0.0
    incorrect_characters: float = 0.0
    delete_characters: float = 0.0
    duplicate_characters: float = 0.0
    substitute_characters: float = 0.0
    transpose_characters: float = 0.0
    delete_chunk: float = 0.0
    insert_chunk: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in PROBABILITY_FIELDS:
            p = getattr(self, name)
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
                raise ConfigurationError(
                    "probability %r must lie in [0, 1], got %r" % (name, p)
                )
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) \
                or not 0 <= self.seed < (1 << 64):
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    @classmethod
    def defaults(cls, seed=0):
        return cls(seed=seed, **DEFAULT_PROBABILITIES)

    @classmethod
    def from_dict(cls, data):
        expected = set(PROBABILITY_FIELDS) | {"seed"}
        for key in data:
            if key not in expected:
                raise ConfigurationError("unknown config key %r" % key)
        for key in expected:
            if key not in data:
                raise ConfigurationError("missing config key %r" % key)
        return cls(**data)

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigurationError("%s: %s" % (path, exc)) from None
        if not isinstance(data, dict):
            raise ConfigurationError("%s: config must be a JSON object" % path)
        return cls.from_dict(data)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def replace(self, **kwargs):
        return dataclasses.replace(self, **kwargs)


class TraceOp(NamedTuple):
    """One edit applied to the working string at replay time."""

    name: str
    pos: int
    before: str
    after: str


@dataclass(frozen=True)
class NoiseTrace:
    ops: tuple = ()

    def replay(self, clean):
        """Re-apply the recorded edits; must land exactly on the noisy text."""
        text = clean
        for op in self.ops:
            name, pos, before, after = op
            if text[pos:pos + len(before)] != before:
                raise TraceReplayError(
                    "trace op %s at %d expected %r, found %r"
                    % (name, pos, before, text[pos:pos + len(before)])
                )
            text = text[:pos] + after + text[pos + len(before):]
        return text

    def to_json(self):
        return json.dumps([list(op) for op in self.ops], ensure_ascii=False)

    @classmethod
    def from_json(cls, line):
        raw = json.loads(line)
        return cls(tuple(TraceOp(*entry) for entry in raw))


@dataclass(frozen=True)
class ParallelPair:
    id: int
    clean: str
    noisy: str
    trace: NoiseTrace

    def __post_init__(self):
        if self.trace.replay(self.clean) != self.noisy:
            raise TraceReplayError("trace does not reproduce noisy text for id %d" % self.id)


def substitute_hooked(text, p, rng, trace=None):
    """Replace hooked letters with plain Latin equivalents, each w.p. p."""
    out = []
    for ch in text:
        plain = HOOKED_TO_PLAIN.get(ch)
        if plain is not None and rng.random() < p:
            if trace is not None:
                trace.append(TraceOp("hooked_sub", len(out), ch, plain))
            out.append(plain)
        else:
            out.append(ch)
    return "".join(out)


def perturb_characters(text, config, rng, trace=None):
    """One left-to-right pass; at most one character op fires per position.

    Sampling order is delete, duplicate, substitute, transpose; the first
    draw that fires wins and later ops are not sampled at that position.
    A transposition consumes both swapped positions.
    """
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if rng.random() < config.delete_characters:
            if trace is not None:
                trace.append(TraceOp("char_delete", len(out), ch, ""))
            i += 1
        elif rng.random() < config.duplicate_characters:
            if trace is not None:
                trace.append(TraceOp("char_duplicate", len(out), ch, ch + ch))
            out.append(ch)
            out.append(ch)
            i += 1
        elif rng.random() < config.substitute_characters:
            sub = rng.choice(ALPHABET)
            if trace is not None:
                trace.append(TraceOp("char_substitute", len(out), ch, sub))
            out.append(sub)
            i += 1
        elif i + 1 < n and rng.random() < config.transpose_characters:
            nxt = text[i + 1]
            if trace is not None:
                trace.append(TraceOp("char_transpose", len(out), ch + nxt, nxt + ch))
            out.append(nxt)
            out.append(ch)
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def perturb_chunks(text, p_delete, p_insert, rng, trace=None):
    """Per word: maybe delete a 2-symbol chunk, then maybe duplicate one.

    Deletion removes a contiguous 2-symbol chunk at a random in-word
    offset (words shorter than 3 symbols are exempt). Insertion copies a
    2-symbol chunk from a random offset of the same word and places the
    copy right after its source.
    """
    words = text.split(" ")
    out = []
    offset = 0
    for word in words:
        if len(word) >= 3 and rng.random() < p_delete:
            k = rng.randrange(len(word) - 1)
            if trace is not None:
                trace.append(TraceOp("chunk_delete", offset + k, word[k:k + 2], ""))
            word = word[:k] + word[k + 2:]
        if len(word) >= 2 and rng.random() < p_insert:
            k = rng.randrange(len(word) - 1)
            chunk = word[k:k + 2]
            if trace is not None:
                trace.append(TraceOp("chunk_insert", offset + k + 2, "", chunk))
            word = word[:k + 2] + chunk + word[k + 2:]
        out.append(word)
        offset += len(word) + 1
    return " ".join(out)


def perturb_spacing(text, p_insert, p_remove, rng, trace=None):
    """Remove existing spaces w.p. p_remove; add spaces inside words w.p. p_insert.

    Both site sets (spaces, and boundaries between adjacent non-space
    symbols) are taken from the input text, so a removal never makes the
    resulting junction eligible for insertion in the same pass.
    """
    out = []
    for i, ch in enumerate(text):
        if ch == " ":
            if rng.random() < p_remove:
                if trace is not None:
                    trace.append(TraceOp("space_remove", len(out), " ", ""))
                continue
        elif i > 0 and text[i - 1] != " ":
            if rng.random() < p_insert:
                if trace is not None:
                    trace.append(TraceOp("space_insert", len(out), "", " "))
                out.append(" ")
        out.append(ch)
    return "".join(out)


def apply_noise(sentence, config):
    """Corrupt one SentenceRecord; returns a replayable ParallelPair."""
    rng = random.Random(mix_seed(config.seed, sentence.id))
    ops = []
    text = substitute_hooked(sentence.text, config.incorrect_characters, rng, ops)
    text = perturb_characters(text, config, rng, ops)
    text = perturb_chunks(text, config.delete_chunk, config.insert_chunk, rng, ops)
    text = perturb_spacing(text, config.random_spacing, config.remove_spaces, rng, ops)
    return ParallelPair(sentence.id, sentence.text, text, NoiseTrace(tuple(ops)))


def _apply_one(args):
    sentence, config = args
    return apply_noise(sentence, config)


def generate_parallel_corpus(sentences, config, workers=1):
    """Noise every sentence; returns (pairs, manifest).

    Output is a pure function of (text, id, config): worker count and
    scheduling order cannot change a single byte of it.
    """
    sentences = list(sentences)
    if not sentences:
        raise ConfigurationError("corpus is empty")
    if workers <= 1:
        pairs = [apply_noise(s, config) for s in sentences]
    else:
        ctx = get_context()
        with ctx.Pool(workers) as pool:
            pairs = pool.map(
                _apply_one,
                [(s, config) for s in sentences],
                chunksize=max(1, len(sentences) // (workers * 4)),
            )
    sources = {}
    for s in sentences:
        sources[s.source] = sources.get(s.source, 0) + 1
    manifest = {
        "tool": "hausanoise",
        "version": __version__,
        "config": config.to_dict(),
        "seed": config.seed,
        "sentences": len(sentences),
        "sources": sources,
    }
    return pairs, manifest


def write_traces(pairs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(pair.trace.to_json())
            fh.write("\n")


def read_traces(path):
    return [NoiseTrace.from_json(line) for line in read_text(path).splitlines() if line]
