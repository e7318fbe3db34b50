"""Psycholinguistic category scores and their relation to reply/retweet engagement."""

__version__ = "0.1.0"

from .corpus import (
    EngagementProfile,
    Thresholds,
    Tweet,
    UserRecord,
    build_profiles,
    compute_response_rate,
    compute_retweet_rate,
    is_question,
    load_corpus,
)
from .errors import (
    CorpusError,
    DegenerateDataError,
    InputError,
    InsufficientTextError,
    LexiconError,
    WordEngageError,
)
from .evaluation import EvalReport, auc, cross_validate, kfold_split, mae, median_split
from .lexicon import (
    Lexicon,
    ScoreVector,
    load_demo_lexicon,
    load_lexicon,
    match_token,
    parse_lexicon,
    score_user,
    serialize_lexicon,
    tokenize,
)
from .models import (
    FeatureMatrix,
    TrainedModel,
    fit_gnb,
    fit_logistic,
    fit_ols,
    fit_ridge,
    fit_svr,
    model_from_json,
    model_to_json,
    predict,
    standardize_fit,
)
from .stats import CorrelationResult, correlate_all, incomplete_beta, p_two_tailed, pearson
from .synth import SynthConfig, generate_corpus
