import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordengage.errors import InsufficientTextError, LexiconError
from wordengage.lexicon import (
    Lexicon,
    demo_lexicon_text,
    load_demo_lexicon,
    match_token,
    parse_lexicon,
    score_user,
    serialize_lexicon,
    tokenize,
)

SMALL = "%\n1\tanger\n31\tsocial\n%\nhate*\t1\nangry\t1\nfriend*\t31\n"

letters = st.text(alphabet="abcdefgh'", min_size=1, max_size=6).filter(lambda s: s[0] != "'")


class TestParse:
    def test_small_file(self):
        lex = parse_lexicon(SMALL)
        assert lex.categories == ((1, "anger"), (31, "social"))
        assert len(lex.entries) == 3
        assert dict(lex.entries)["hate*"] == {1}

    def test_unknown_category(self):
        with pytest.raises(LexiconError, match="unknown category") as err:
            parse_lexicon("%\n1\tanger\n%\nhate*\t9\n")
        assert err.value.line == 4

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("%\n1\tanger\n1\tsocial\n%\n", "duplicate category id"),
            ("%\n1\tanger\n2\tanger\n%\n", "duplicate category name"),
            ("%\n1\tanger\n%\nhate\t1\nhate\t1\n", "duplicate pattern"),
            ("%\n1\tanger\n%\nha*te\t1\n", "interior"),
            ("%\n1\tanger\n%\nhate\n", "without categories"),
            ("%\nanger\n%\n", "malformed"),
            ("%\n1\tanger\n", "missing"),
            ("%\n1\tanger\n%\nha7e\t1\n", "invalid pattern"),
        ],
    )
    def test_malformed(self, text, fragment):
        with pytest.raises(LexiconError, match=fragment):
            parse_lexicon(text)

    def test_round_trip_demo(self):
        lex = load_demo_lexicon()
        again = parse_lexicon(serialize_lexicon(lex))
        assert again == lex
        assert parse_lexicon(serialize_lexicon(again)) == lex

    def test_demo_has_table_categories(self):
        names = set(load_demo_lexicon().category_names)
        assert {
            "anger", "cognition", "communication", "anxiety", "social_process",
            "positive_feelings", "perception", "physical_states", "tentative",
            "positive_emotions", "inclusive", "other_refs",
        } <= names
        assert 150 <= len(load_demo_lexicon().entries) <= 250
        assert demo_lexicon_text().startswith("%\n")


class TestTokenize:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("", []),
            ("I HATE Mondays, don't you?", ["i", "hate", "mondays", "don't", "you"]),
            ("see http://t.co/x?q=1 @bob #fun wow", ["see", "wow"]),
            ("www.example.com/a b", ["b"]),
            ("it's 'quoted' rock'n'roll", ["it's", "quoted", "rock'n'roll"]),
            ("abc123def", ["abc", "def"]),
        ],
    )
    def test_examples(self, text, expected):
        assert tokenize(text) == expected


class TestMatch:
    def test_prefix_and_literal(self):
        lex = parse_lexicon("%\n1\ta\n5\tb\n%\nhate*\t1\naccept\t5\nhated\t1\t5\n")
        assert match_token(lex, "hated") == {1, 5}
        assert match_token(lex, "hateful") == {1}
        assert match_token(lex, "acceptance") == set()
        assert match_token(lex, "accept") == {5}
        assert match_token(lex, "hat") == set()

    @given(stem=letters, token=letters)
    def test_prefix_property(self, stem, token):
        lex = Lexicon(((1, "c"),), ((stem + "*", frozenset({1})),))
        assert (match_token(lex, token) == {1}) == token.startswith(stem)

    @settings(max_examples=60, deadline=None)
    @given(
        entries=st.dictionaries(
            st.tuples(letters, st.booleans()),
            st.frozensets(st.integers(1, 5), min_size=1),
            max_size=1000,
        ),
        tokens=st.lists(letters, max_size=40),
    )
    def test_trie_equals_linear_scan(self, entries, tokens):
        rows = {}
        for (body, wild), ids in entries.items():
            rows[body + ("*" if wild else "")] = ids
        lex = Lexicon(tuple((i, f"c{i}") for i in range(1, 6)), tuple(rows.items()))
        for tok in tokens:
            expected = set()
            for pattern, ids in rows.items():
                if pattern.endswith("*") and tok.startswith(pattern[:-1]) or pattern == tok:
                    expected |= ids
            assert match_token(lex, tok) == expected


class TestScore:
    lex = parse_lexicon("%\n1\tanger\n31\tsocial\n%\nhate*\t1\nfriend*\t31\n")

    def test_hand_count(self):
        sv = score_user(self.lex, ["I hate hateful mornings my friend"], min_tokens=1)
        assert sv.token_count == 6
        assert sv.scores == {1: 2 / 6, 31: 1 / 6}

    def test_no_matches(self):
        sv = score_user(self.lex, ["lorem ipsum dolor sit amet " * 6])
        assert sv.token_count == 30
        assert all(v == 0.0 for v in sv.scores.values())

    def test_empty_is_insufficient(self):
        with pytest.raises(InsufficientTextError, match="insufficient text"):
            score_user(self.lex, [""])

    def test_below_minimum(self):
        with pytest.raises(InsufficientTextError):
            score_user(self.lex, ["a b c"], min_tokens=4)

    @given(st.lists(st.text(max_size=60), max_size=6))
    def test_scores_bounded(self, texts):
        lex = load_demo_lexicon()
        try:
            sv = score_user(lex, texts, min_tokens=1)
        except InsufficientTextError:
            return
        assert all(0.0 <= v <= 1.0 for v in sv.scores.values())
        assert set(sv.scores) == set(lex.category_ids)

    @given(
        st.lists(st.sampled_from(["hate", "friend", "hated", "friendly", "zz", "qq"]), min_size=1, max_size=30),
        st.lists(st.sampled_from(["hate", "friend", "hated", "friendly", "zz", "qq"]), min_size=1, max_size=30),
    )
    def test_additivity(self, a, b):
        sa = score_user(self.lex, [" ".join(a)], min_tokens=1)
        sb = score_user(self.lex, [" ".join(b)], min_tokens=1)
        pooled = score_user(self.lex, [" ".join(a), " ".join(b)], min_tokens=1)
        for cid in (1, 31):
            counts = sa.scores[cid] * sa.token_count + sb.scores[cid] * sb.token_count
            assert pooled.scores[cid] == pytest.approx(counts / (sa.token_count + sb.token_count), abs=1e-12)
