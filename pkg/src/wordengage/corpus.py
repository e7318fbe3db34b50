"""JSONL tweet corpora, engagement rates and per-user profiles.

Each corpus line is one tweet::

    {"tweet_id": "t1", "user_id": "u1", "kind": "authored", "text": "...",
     "is_retweet": false, "in_reply_to": null}

``kind`` is ``authored`` for the user's own timeline and ``inbound`` for
tweets other accounts directed at the user.
"""

from __future__ import annotations

import io
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .errors import CorpusError, InputError, InsufficientTextError
from .lexicon import DEFAULT_MIN_TOKENS, ScoreVector, score_user, strip_urls

KINDS = ("authored", "inbound")


@dataclass(frozen=True)
class Tweet:
    tweet_id: str
    user_id: str
    kind: str
    text: str
    is_retweet: bool = False
    in_reply_to: Optional[str] = None


@dataclass
class UserRecord:
    user_id: str
    timeline: list = field(default_factory=list)
    inbound: list = field(default_factory=list)


@dataclass
class EngagementProfile:
    user_id: str
    response_rate: Optional[float]
    retweet_rate: float
    scores: ScoreVector

    @property
    def token_count(self):
        return self.scores.token_count


@dataclass
class Corpus:
    """Users of a loaded corpus plus the lines skipped in lenient mode."""

    users: list
    skipped: int = 0
    skipped_lines: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.users)

    def __len__(self):
        return len(self.users)

    def __getitem__(self, i):
        return self.users[i]


@dataclass
class Thresholds:
    min_tweets: int = 10
    min_tokens: int = DEFAULT_MIN_TOKENS
    min_questions: int = 1


def _parse_tweet(line):
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise CorpusError("expected a JSON object")
    try:
        tweet_id, user_id, kind, text = (obj[k] for k in ("tweet_id", "user_id", "kind", "text"))
    except KeyError as exc:
        raise CorpusError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(tweet_id, str) or not tweet_id:
        raise CorpusError("tweet_id must be a non-empty string")
    if not isinstance(user_id, str) or not user_id:
        raise CorpusError("user_id must be a non-empty string")
    if kind not in KINDS:
        raise CorpusError(f"unknown kind {kind!r}")
    if not isinstance(text, str):
        raise CorpusError("text must be a string")
    is_retweet = obj.get("is_retweet", False)
    if not isinstance(is_retweet, bool):
        raise CorpusError("is_retweet must be a boolean")
    in_reply_to = obj.get("in_reply_to")
    if in_reply_to is not None and not isinstance(in_reply_to, str):
        raise CorpusError("in_reply_to must be a string or null")
    return Tweet(tweet_id, user_id, kind, text, is_retweet, in_reply_to)


def load_corpus(stream, strict=True):
    """Group a JSONL stream into :class:`UserRecord` objects sorted by user id.

    ``stream`` may be a file object, a string, or any iterable of lines.  In
    strict mode the first bad line raises :class:`CorpusError`; otherwise bad
    lines (malformed JSON, invalid fields, duplicate ids) are skipped and
    counted.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    users = {}
    seen = set()
    skipped = []
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            tweet = _parse_tweet(line)
            if tweet.tweet_id in seen:
                raise CorpusError(f"duplicate tweet_id {tweet.tweet_id!r}")
        except CorpusError as exc:
            if strict:
                raise CorpusError(str(exc), lineno) from None
            skipped.append(lineno)
            continue
        seen.add(tweet.tweet_id)
        rec = users.get(tweet.user_id)
        if rec is None:
            rec = users[tweet.user_id] = UserRecord(tweet.user_id)
        (rec.timeline if tweet.kind == "authored" else rec.inbound).append(tweet)
    ordered = [users[uid] for uid in sorted(users)]
    return Corpus(ordered, len(skipped), skipped)


def has_url(text):
    return strip_urls(text) != text


def is_question(text):
    """A tweet is a question iff it contains ``?`` outside any URL."""
    return "?" in strip_urls(text)


def eligible_questions(record):
    return [
        t for t in record.inbound
        if not t.is_retweet and not has_url(t.text) and is_question(t.text)
    ]


def compute_response_rate(record):
    """Share of eligible inbound questions the user replied to, or None.

    Several replies to the same question count once.
    """
    questions = eligible_questions(record)
    if not questions:
        return None
    replied = {t.in_reply_to for t in record.timeline if t.in_reply_to is not None}
    answered = sum(1 for q in questions if q.tweet_id in replied)
    return answered / len(questions)


def compute_retweet_rate(record):
    if not record.timeline:
        raise InputError(f"no tweets for user {record.user_id!r}")
    return sum(t.is_retweet for t in record.timeline) / len(record.timeline)


def liwc_texts(record):
    """Authored texts eligible for scoring: everything except retweets."""
    return [t.text for t in record.timeline if not t.is_retweet]


def _profile_one(record, lexicon, thresholds):
    if len(record.timeline) < thresholds.min_tweets:
        return "too_few_tweets"
    try:
        scores = score_user(
            lexicon, liwc_texts(record), min_tokens=thresholds.min_tokens, user_id=record.user_id
        )
    except InsufficientTextError:
        return "too_few_tokens"
    response = None
    if len(eligible_questions(record)) >= max(thresholds.min_questions, 1):
        response = compute_response_rate(record)
    return EngagementProfile(record.user_id, response, compute_retweet_rate(record), scores)


def build_profiles(records, lexicon, thresholds=None, threads=1):
    """Score every user and attach both engagement rates.

    Returns ``(profiles, exclusions)`` where ``exclusions`` counts dropped
    users by reason.  Users with fewer than ``min_questions`` eligible
    questions keep a profile with ``response_rate=None``.
    """
    if not lexicon.categories:
        raise InputError("empty lexicon")
    thresholds = thresholds or Thresholds()
    records = sorted(records, key=lambda r: r.user_id)

    def work(rec):
        return _profile_one(rec, lexicon, thresholds)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, records))
    else:
        results = [work(rec) for rec in records]
    profiles = [r for r in results if isinstance(r, EngagementProfile)]
    exclusions = Counter(r for r in results if isinstance(r, str))
    exclusions.setdefault("too_few_tweets", 0)
    exclusions.setdefault("too_few_tokens", 0)
    return profiles, dict(sorted(exclusions.items()))


def _fmt(x):
    return "" if x is None else repr(float(x))


def profiles_to_tsv(profiles, lexicon):
    """Profile table: ids, both rates, token count and one column per category."""
    header = ["user_id", "response_rate", "retweet_rate", "token_count"] + lexicon.category_names
    lines = ["\t".join(header)]
    for p in profiles:
        row = [p.user_id, _fmt(p.response_rate), _fmt(p.retweet_rate), str(p.token_count)]
        row += [repr(float(p.scores.scores[cid])) for cid in lexicon.category_ids]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def profiles_from_tsv(text, lexicon):
    """Inverse of :func:`profiles_to_tsv`; lines starting with ``#`` are ignored."""
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise InputError("empty profile table")
    header = rows[0].split("\t")
    fixed = ["user_id", "response_rate", "retweet_rate", "token_count"]
    if header[:4] != fixed:
        raise InputError("profile table header must start with " + ", ".join(fixed))
    try:
        ids = [lexicon.id_of(name) for name in header[4:]]
    except KeyError as exc:
        raise InputError(f"category {exc.args[0]!r} not in lexicon") from None
    profiles = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = row.split("\t")
        if len(cells) != len(header):
            raise InputError(f"profile row {lineno}: expected {len(header)} cells")
        try:
            resp = float(cells[1]) if cells[1] else None
            scores = {cid: float(v) for cid, v in zip(ids, cells[4:])}
            sv = ScoreVector(cells[0], scores, int(cells[3]))
            profiles.append(EngagementProfile(cells[0], resp, float(cells[2]), sv))
        except ValueError:
            raise InputError(f"profile row {lineno}: non-numeric cell") from None
    return profiles
