"""LIWC-style dictionaries, tokenization and per-user category scores.

A dictionary file has two sections delimited by ``%`` lines::

    %
    1	anger
    31	social
    %
    hate*	1
    friend*	31

The first section declares ``<id><TAB><name>`` categories, the second maps
word patterns to one or more category ids.  A trailing ``*`` turns a pattern
into a prefix match.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .errors import InsufficientTextError, LexiconError

DEFAULT_MIN_TOKENS = 25

_URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_MENTION_TAG_RE = re.compile(r"[@#]\w+")
_TOKEN_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")


class _TrieNode:
    __slots__ = ("children", "exact", "prefix")

    def __init__(self):
        self.children = {}
        self.exact = frozenset()
        self.prefix = frozenset()


@dataclass(frozen=True)
class Lexicon:
    """Immutable category table plus word patterns.

    ``categories`` is an ordered tuple of ``(id, name)`` and ``entries`` an
    ordered tuple of ``(pattern, frozenset_of_ids)``.
    """

    categories: tuple
    entries: tuple
    _root: _TrieNode = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = [cid for cid, _ in self.categories]
        names = [name for _, name in self.categories]
        if len(set(ids)) != len(ids):
            raise LexiconError("duplicate category id")
        if len(set(names)) != len(names):
            raise LexiconError("duplicate category name")
        known = set(ids)
        seen = set()
        root = _TrieNode()
        for pattern, cat_ids in self.entries:
            _check_pattern(pattern)
            if pattern in seen:
                raise LexiconError(f"duplicate pattern {pattern!r}")
            seen.add(pattern)
            if not cat_ids:
                raise LexiconError(f"pattern {pattern!r} has no categories")
            unknown = set(cat_ids) - known
            if unknown:
                raise LexiconError(f"unknown category {min(unknown)} for pattern {pattern!r}")
            wildcard = pattern.endswith("*")
            node = root
            for ch in pattern.rstrip("*"):
                node = node.children.setdefault(ch, _TrieNode())
            if wildcard:
                node.prefix = node.prefix | frozenset(cat_ids)
            else:
                node.exact = node.exact | frozenset(cat_ids)
        object.__setattr__(self, "_root", root)
        object.__setattr__(self, "_cache", {})

    @property
    def category_ids(self):
        return [cid for cid, _ in self.categories]

    @property
    def category_names(self):
        return [name for _, name in self.categories]

    def name_of(self, category_id):
        return dict(self.categories)[category_id]

    def id_of(self, name):
        for cid, cname in self.categories:
            if cname == name:
                return cid
        raise KeyError(name)

    def match(self, token):
        """Category ids for an already case-folded token."""
        hit = self._cache.get(token)
        if hit is None:
            hit = self._walk(token)
            self._cache[token] = hit
        return hit

    def _walk(self, token):
        node = self._root
        found = set(node.prefix)
        for ch in token:
            node = node.children.get(ch)
            if node is None:
                return frozenset(found)
            found |= node.prefix
        found |= node.exact
        return frozenset(found)


def _check_pattern(pattern):
    if pattern != pattern.lower():
        raise LexiconError(f"pattern {pattern!r} is not lowercase")
    if "*" in pattern[:-1]:
        raise LexiconError(f"interior '*' in pattern {pattern!r}")
    body = pattern[:-1] if pattern.endswith("*") else pattern
    if not body or not all(ch.isalpha() or ch == "'" for ch in body):
        raise LexiconError(f"invalid pattern {pattern!r}")


def parse_lexicon(text):
    """Parse ``.dic`` text into a :class:`Lexicon`.

    Errors carry the 1-based line number of the offending line.
    """
    categories = []
    entries = []
    cat_ids = set()
    patterns = set()
    section = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "%":
            section += 1
            if section > 2:
                raise LexiconError("unexpected third '%' delimiter", lineno)
            continue
        if section == 0:
            raise LexiconError("content before the opening '%'", lineno)
        parts = line.split("\t") if "\t" in line else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if section == 1:
            if len(parts) != 2 or not parts[0].isdigit():
                raise LexiconError(f"malformed category line {raw!r}", lineno)
            cid = int(parts[0])
            if cid <= 0:
                raise LexiconError("category ids must be positive", lineno)
            if cid in cat_ids:
                raise LexiconError(f"duplicate category id {cid}", lineno)
            if parts[1] in {name for _, name in categories}:
                raise LexiconError(f"duplicate category name {parts[1]!r}", lineno)
            cat_ids.add(cid)
            categories.append((cid, parts[1]))
        else:
            if len(parts) < 2:
                raise LexiconError(f"entry without categories {raw!r}", lineno)
            pattern = parts[0]
            try:
                _check_pattern(pattern)
            except LexiconError as exc:
                raise LexiconError(str(exc), lineno) from None
            if pattern in patterns:
                raise LexiconError(f"duplicate pattern {pattern!r}", lineno)
            ids = []
            for p in parts[1:]:
                if not p.isdigit():
                    raise LexiconError(f"non-numeric category {p!r}", lineno)
                cid = int(p)
                if cid not in cat_ids:
                    raise LexiconError(f"unknown category {cid}", lineno)
                ids.append(cid)
            patterns.add(pattern)
            entries.append((pattern, frozenset(ids)))
    if section < 2:
        raise LexiconError("missing '%' delimiter")
    return Lexicon(tuple(categories), tuple(entries))


def serialize_lexicon(lexicon):
    lines = ["%"]
    lines += [f"{cid}\t{name}" for cid, name in lexicon.categories]
    lines.append("%")
    for pattern, ids in lexicon.entries:
        lines.append("\t".join([pattern] + [str(i) for i in sorted(ids)]))
    return "\n".join(lines) + "\n"


def load_lexicon(path):
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read())


def demo_lexicon_text():
    return resources.files("wordengage").joinpath("data/demo.dic").read_text(encoding="utf-8")


def load_demo_lexicon():
    """The bundled 12-category demonstration dictionary."""
    return parse_lexicon(demo_lexicon_text())


def strip_urls(text):
    return _URL_RE.sub(" ", text)


def tokenize(text):
    """Split text into lowercase word tokens.

    URLs, @-mentions and #-hashtags are removed before splitting; a token is a
    run of letters, optionally joined by interior apostrophes.
    """
    text = strip_urls(text.replace("’", "'"))
    text = _MENTION_TAG_RE.sub(" ", text)
    return _TOKEN_RE.findall(text.casefold())


def match_token(lexicon, token):
    return set(lexicon.match(token))


@dataclass
class ScoreVector:
    user_id: str
    scores: dict
    token_count: int


def count_categories(lexicon, texts):
    """Return ``(per-category counts, total tokens)`` over ``texts``."""
    tokens = Counter()
    for text in texts:
        tokens.update(tokenize(text))
    counts = dict.fromkeys(lexicon.category_ids, 0)
    for tok, n in tokens.items():
        for cid in lexicon.match(tok):
            counts[cid] += n
    return counts, sum(tokens.values())


def score_user(lexicon, texts, min_tokens=DEFAULT_MIN_TOKENS, user_id=""):
    """Fraction of the pooled tokens that fall in each category.

    Raises :class:`InsufficientTextError` when the texts hold fewer than
    ``min_tokens`` tokens (or none at all).
    """
    counts, total = count_categories(lexicon, texts)
    if total == 0 or total < min_tokens:
        raise InsufficientTextError(
            f"insufficient text: {total} tokens (minimum {min_tokens})"
        )
    return ScoreVector(user_id, {cid: c / total for cid, c in counts.items()}, total)
