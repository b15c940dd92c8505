"""Text cleaning pipeline and vocabulary/id encoding.

Cleaning runs: unicode normalization -> optional noise stripping -> tokenization
-> stopword removal -> lowercasing. The pipeline is deterministic and idempotent
on its own output.
"""

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ConfigurationError

TOKENIZER_MODES = ("whitespace", "external-pretokenized")
STRIP_NOISE_MODES = ("description_only", "both")

# punctuation split off the end of tokens, one token per character
_TERMINAL_PUNCT = ".,!?;:…"

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_EMAIL_RE = re.compile(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+")
_AT_TAG_RE = re.compile(r"@\w+")
_HASH_TAG_RE = re.compile(r"#\w+")

# approximate emoji inventory: pictographs, emoticons, transport, supplemental
# symbols, dingbats, misc symbols, flags, variation selectors, ZWJ
_EMOJI_RANGES = (
    (0x1F000, 0x1F0FF),
    (0x1F1E6, 0x1F1FF),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F700, 0x1F77F),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
    (0x2600, 0x26FF),
    (0x2700, 0x27BF),
    (0x2B00, 0x2BFF),
    (0xFE00, 0xFE0F),
    (0x200D, 0x200D),
)


def normalize_unicode(text):
    """Canonical NFC composition so visually equal strings compare equal."""
    return unicodedata.normalize("NFC", text)


def _is_emoji(ch):
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


def strip_noise(text):
    """Remove URLs, e-mail addresses, @/# tags, and emoji code points."""
    text = _URL_RE.sub("", text)
    text = _EMAIL_RE.sub("", text)
    text = _AT_TAG_RE.sub("", text)
    text = _HASH_TAG_RE.sub("", text)
    return "".join(ch for ch in text if not _is_emoji(ch))


def _split_terminal_punct(token):
    trailing = []
    while token and token[-1] in _TERMINAL_PUNCT:
        trailing.append(token[-1])
        token = token[:-1]
    out = [token] if token else []
    out.extend(reversed(trailing))
    return out


def tokenize(text, mode="whitespace"):
    """Split normalized text into tokens.

    whitespace mode treats underscores as separators; external-pretokenized
    mode keeps underscore-joined compounds (pre-segmented input) intact.
    Both split terminal punctuation into its own tokens.
    """
    if mode not in TOKENIZER_MODES:
        raise ConfigurationError(f"unknown tokenizer mode: {mode!r}")
    if mode == "whitespace":
        text = text.replace("_", " ")
    tokens = []
    for raw in text.split():
        tokens.extend(_split_terminal_punct(raw))
    return tokens


def remove_stopwords(tokens, stoplist):
    """Order-preserving filter; comparison is done on lowercased tokens."""
    return [tok for tok in tokens if tok.lower() not in stoplist]


def lowercase(text):
    return text.lower()


def load_stoplist(path):
    """One token per line, normalized and lowercased. Missing file is a configuration error."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read stopword file {path!r}: {exc}") from exc
    return frozenset(
        lowercase(normalize_unicode(line.strip())) for line in lines if line.strip()
    )


def clean_text(text, stoplist=frozenset(), tokenizer_mode="whitespace", noise=False):
    """Full cleaning pipeline for one string; returns the token list."""
    text = normalize_unicode(text)
    if noise:
        text = strip_noise(text)
    tokens = tokenize(text, mode=tokenizer_mode)
    tokens = remove_stopwords(tokens, stoplist)
    return [lowercase(tok) for tok in tokens]


@dataclass
class PreprocessConfig:
    """Cleaning/encoding settings shared by training and inference."""

    stopword_path: str | None = None
    tokenizer: str = "whitespace"
    strip_noise_on: str = "description_only"
    max_len: int = 100

    def __post_init__(self):
        if self.tokenizer not in TOKENIZER_MODES:
            raise ConfigurationError(f"unknown tokenizer mode: {self.tokenizer!r}")
        if self.strip_noise_on not in STRIP_NOISE_MODES:
            raise ConfigurationError(
                f"strip_noise_on must be one of {STRIP_NOISE_MODES}, got {self.strip_noise_on!r}"
            )
        if self.max_len < 1:
            raise ConfigurationError("max_len must be >= 1")

    def to_dict(self):
        return {
            "stopword_path": self.stopword_path,
            "tokenizer": self.tokenizer,
            "strip_noise_on": self.strip_noise_on,
            "max_len": self.max_len,
        }

    @classmethod
    def from_dict(cls, data):
        known = {k: data[k] for k in ("stopword_path", "tokenizer", "strip_noise_on", "max_len") if k in data}
        return cls(**known)


class Vocabulary:
    """Token<->id map with PAD=0 and UNK=1 reserved.

    Corpus tokens are kept when their frequency reaches min_freq; ids are
    assigned by descending frequency, ties broken lexicographically.
    """

    PAD_ID = 0
    UNK_ID = 1
    PAD = "<pad>"
    UNK = "<unk>"

    def __init__(self, tokens, min_freq=1):
        self.min_freq = min_freq
        self.id_to_token = [self.PAD, self.UNK] + list(tokens)
        self.token_to_id = {tok: i for i, tok in enumerate(self.id_to_token)}
        if len(self.token_to_id) != len(self.id_to_token):
            raise ValueError("vocabulary tokens must be unique")

    @classmethod
    def from_corpus(cls, corpus, min_freq=1):
        counts = Counter()
        empty = True
        for tokens in corpus:
            empty = False
            counts.update(tokens)
        if empty:
            raise ValueError("cannot build a vocabulary from an empty corpus")
        counts.pop(cls.PAD, None)
        counts.pop(cls.UNK, None)
        kept = sorted(
            (tok for tok, n in counts.items() if n >= min_freq),
            key=lambda tok: (-counts[tok], tok),
        )
        return cls(kept, min_freq=min_freq)

    def __len__(self):
        return len(self.id_to_token)

    def __contains__(self, token):
        return token in self.token_to_id

    def id_of(self, token):
        return self.token_to_id.get(token, self.UNK_ID)

    def token_of(self, token_id):
        return self.id_to_token[token_id]

    def tokens(self):
        """Non-reserved tokens in id order."""
        return self.id_to_token[2:]


@dataclass
class EncodedDocument:
    """Fixed-length id sequence; positions >= true_len are PAD."""

    ids: np.ndarray
    true_len: int

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)


def encode(tokens, vocab, max_len):
    """Map tokens to ids, truncate to max_len, pad with PAD.

    An empty token list encodes to a single UNK so downstream encoders always
    see at least one position.
    """
    if not tokens:
        tokens = [Vocabulary.UNK]
    ids = [vocab.id_of(tok) for tok in tokens[:max_len]]
    true_len = len(ids)
    ids.extend([Vocabulary.PAD_ID] * (max_len - true_len))
    return EncodedDocument(ids=np.array(ids, dtype=np.int64), true_len=true_len)


class TextCleaner(TransformerMixin, BaseEstimator):
    """sklearn-style wrapper around the cleaning pipeline.

    Parameters
    ----------
    stopword_path : str or None
        File with one stopword per line; None means no stopword removal.
    tokenizer_mode : str
        "whitespace" or "external-pretokenized".
    noise : bool
        Whether to strip URLs/e-mails/tags/emoji from the given texts.
    """

    def __init__(self, stopword_path=None, tokenizer_mode="whitespace", noise=False):
        self.stopword_path = stopword_path
        self.tokenizer_mode = tokenizer_mode
        self.noise = noise

    def fit(self, X=None, y=None):
        if self.tokenizer_mode not in TOKENIZER_MODES:
            raise ConfigurationError(f"unknown tokenizer mode: {self.tokenizer_mode!r}")
        self.stoplist_ = (
            load_stoplist(self.stopword_path) if self.stopword_path else frozenset()
        )
        return self

    def transform(self, X):
        """Clean a sequence of strings into token lists."""
        return [
            clean_text(
                text,
                stoplist=self.stoplist_,
                tokenizer_mode=self.tokenizer_mode,
                noise=self.noise,
            )
            for text in X
        ]
