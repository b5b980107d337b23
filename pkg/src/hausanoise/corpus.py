"""Text loading, cleaning, and sentence segmentation.

Raw source text is cleaned of digital artifacts, segmented into
``SentenceRecord`` objects, and tokenized for downstream profiling.
Also hosts the flat-file formats shared by the CLI: one-sentence-per-line
corpora, word lexicons, and tab-separated parallel pairs.
"""

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import ValidationError

_HASHTAG = re.compile(r"#\S+")
_CITATION = re.compile(r"\[\d+\]")
_WS_RUN = re.compile(r"\s+")
_SENT_PUNCT = re.compile(r"[.!?]+")

# U+0027 stays word-internal: it marks the glottal stop in boko
# orthography ('ya'ya, sana'a), so it is not stripped as punctuation.
_KEEP = {"'"}


def _is_punct(ch):
    return ch not in _KEEP and unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class SentenceRecord:
    """One cleaned sentence with a stable id and an origin tag."""

    id: int
    text: str
    source: str = ""

    def __post_init__(self):
        if self.text != self.text.strip() or "  " in self.text:
            raise ValidationError(
                "sentence text must be trimmed with single internal spaces: %r" % self.text
            )
        if any(unicodedata.category(ch) == "Cc" for ch in self.text):
            raise ValidationError("sentence text contains a control character")


@dataclass(frozen=True)
class Lexicon:
    """Set of known lowercase word forms; membership is case-insensitive."""

    entries: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_words(cls, words):
        lowered = set()
        for w in words:
            w = w.strip()
            if not w:
                continue
            if any(ch.isspace() for ch in w):
                raise ValidationError("lexicon entry contains whitespace: %r" % w)
            lowered.add(w.lower())
        return cls(frozenset(lowered))

    def __contains__(self, word):
        return word.lower() in self.entries

    def __len__(self):
        return len(self.entries)


def clean_text(raw):
    """Strip hashtags, NBSP markers, and [n] citations; normalize spaces."""
    text = raw.replace("NBSP", " ").replace(" ", " ")
    text = _HASHTAG.sub(" ", text)
    text = _CITATION.sub(" ", text)
    return _WS_RUN.sub(" ", text).strip()


def segment_sentences(text, source="", start_id=0):
    """Split cleaned text into SentenceRecords.

    A sentence ends at a run of . ! ? that is followed by whitespace and
    an uppercase letter, or by the end of the text. The punctuation stays
    with its sentence.
    """
    records = []
    start = 0
    for match in _SENT_PUNCT.finditer(text):
        end = match.end()
        if end >= len(text):
            break
        if not text[end].isspace():
            continue
        nxt = end
        while nxt < len(text) and text[nxt].isspace():
            nxt += 1
        if nxt < len(text) and not text[nxt].isupper():
            continue
        piece = text[start:end].strip()
        if piece:
            records.append(SentenceRecord(start_id + len(records), piece, source))
        start = nxt
    tail = text[start:].strip()
    if tail:
        records.append(SentenceRecord(start_id + len(records), tail, source))
    return records


def tokenize_words(sentence):
    """Whitespace split with leading/trailing punctuation as own tokens."""
    tokens = []
    for chunk in sentence.split():
        left = 0
        right = len(chunk)
        while left < right and _is_punct(chunk[left]):
            left += 1
        while right > left and _is_punct(chunk[right - 1]):
            right -= 1
        tokens.extend(chunk[:left])
        if right > left:
            tokens.append(chunk[left:right])
        tokens.extend(chunk[right:])
    return tokens


def _decode(data, origin):
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValidationError(
            "%s: invalid UTF-8 at byte offset %d" % (origin, exc.start)
        ) from None


def read_text(path):
    with open(path, "rb") as fh:
        return _decode(fh.read(), str(path))


def read_corpus(path):
    """Read a one-sentence-per-line corpus file."""
    return [line for line in read_text(path).splitlines() if line.strip()]


def write_corpus(sentences, path):
    with open(path, "w", encoding="utf-8") as fh:
        for sentence in sentences:
            fh.write(sentence if isinstance(sentence, str) else sentence.text)
            fh.write("\n")


def read_lexicon(path):
    words = []
    for line in read_text(path).splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.append(line)
    return Lexicon.from_words(words)


def write_lexicon(lexicon, path):
    with open(path, "w", encoding="utf-8") as fh:
        for word in sorted(lexicon.entries):
            fh.write(word + "\n")


def read_pairs(path):
    """Read tab-separated noisy<TAB>clean lines."""
    pairs = []
    for lineno, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ValidationError("%s:%d: expected noisy<TAB>clean" % (path, lineno))
        noisy, _, clean = line.partition("\t")
        pairs.append((noisy, clean))
    return pairs


def write_pairs(pairs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for noisy, clean in pairs:
            fh.write("%s\t%s\n" % (noisy, clean))
