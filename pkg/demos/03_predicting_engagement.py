# %% [markdown]
# # Predicting engagement from word categories
#
# Ten-fold cross-validation of a linear SVR (mean absolute error) and of a
# logistic classifier on a median split (AUC), with all categories or only
# the significant ones as features.

# %%
from wordengage import build_profiles, cross_validate, load_corpus, load_demo_lexicon
from wordengage.evaluation import reports_to_tsv
from wordengage.synth import SynthConfig, generate_corpus

lex = load_demo_lexicon()
cfg = SynthConfig(n_users=800, tweets_per_user=80, mean_response_rate=0.5, sd_response_rate=0.3,
                  mean_retweet_rate=0.3, sd_retweet_rate=0.25, seed=5)
profiles, _ = build_profiles(load_corpus(generate_corpus(cfg, lex).text()).users, lex)

# %%
reports = [cross_validate(profiles, lex, target, feature_mode=mode, seed=5)
           for mode in ("all", "significant") for target in ("response", "retweet")]
print(reports_to_tsv(reports))

# %% [markdown]
# Per-fold selection means the feature list can change from fold to fold.

# %%
sig = reports[2]
for f, names in enumerate(sig.selected_features[:3]):
    print(f"fold {f}: {names}")

# %%
reports = [cross_validate(profiles, lex, target, task="classification", model_kind=kind, seed=5)
           for kind in ("logistic", "gnb") for target in ("response", "retweet")]
for r in reports:
    print(f"{r.model_kind:<9} {r.target:<9} AUC {r.mean_metric:.3f}")
