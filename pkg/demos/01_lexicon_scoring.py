# %% [markdown]
# # Scoring text with a word-category lexicon
#
# A lexicon maps words and trailing-wildcard stems to categories. A user's
# score for a category is the share of their tokens that land in it.

# %%
from wordengage import load_demo_lexicon, score_user, tokenize
from wordengage.lexicon import match_token, parse_lexicon

lex = load_demo_lexicon()
print(len(lex.categories), "categories,", len(lex.entries), "entries")
print([name for _, name in lex.categories])

# %% [markdown]
# Tokenizing drops URLs, @mentions and #hashtags and folds case.

# %%
text = "Can't WAIT to talk with friends @bob about http://t.co/x #fun!"
print(tokenize(text))

# %% [markdown]
# Stems such as `hope*` match every word that starts with them, and a word
# may belong to several categories.

# %%
for word in ["hope", "hopeful", "hopefully", "hurt", "hurting", "acceptance", "table"]:
    ids = match_token(lex, word)
    print(f"{word:>11}", sorted(lex.name_of(c) for c in ids))

# %% [markdown]
# A small hand-written lexicon works the same way.

# %%
tiny = parse_lexicon("%\n1\tjoy\n2\tgloom\n%\nhapp*\t1\nglad\t1\nsad*\t2\n")
vec = score_user(tiny, ["So happy and glad today", "a bit sad though"] * 3, min_tokens=5)
print({tiny.name_of(c): round(v, 3) for c, v in vec.scores.items()}, "tokens:", vec.token_count)
