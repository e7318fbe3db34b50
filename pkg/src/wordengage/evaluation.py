"""Cross-validation harness, median-split labels, MAE and AUC."""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import models
from .errors import DegenerateDataError, InputError
from .stats import correlate_all, significant_categories, target_values

TASKS = ("regression", "classification")
FEATURE_MODES = ("all", "significant")
SELECTION_SCOPES = ("per_fold", "global")
DEFAULT_MODEL = {"regression": "svr", "classification": "logistic"}
FEATURE_MODE_LABELS = {"all": "all categories", "significant": "significant categories"}


def kfold_split(n, k=10, seed=0, stratify_labels=None):
    """Partition ``range(n)`` into ``k`` folds whose sizes differ by at most one.

    With ``stratify_labels`` each class is dealt round-robin across folds, so
    every fold's class counts are within one of the even share.
    """
    if k < 2:
        raise InputError("need at least 2 folds")
    if n < k:
        raise InputError(f"cannot split {n} items into {k} folds")
    rng = np.random.default_rng(seed)
    if stratify_labels is not None:
        labels = np.asarray(stratify_labels)
        if labels.shape != (n,):
            raise InputError("stratify_labels length must equal n")
        classes = sorted(set(labels.tolist()))
        counts = [int(np.sum(labels == c)) for c in classes]
        if min(counts) < k:
            warnings.warn(
                f"smallest class has {min(counts)} items < {k} folds; using unstratified folds",
                stacklevel=2,
            )
        else:
            dealt = np.concatenate([rng.permutation(np.flatnonzero(labels == c)) for c in classes])
            assign = np.arange(n) % k
            return [np.sort(dealt[assign == f]) for f in range(k)]
    perm = rng.permutation(n)
    return [np.sort(part) for part in np.array_split(perm, k)]


def median_split(y):
    """1 for values strictly above the median, else 0."""
    y = np.asarray(y, dtype=float)
    if y.size < 2:
        raise InputError("median split needs at least two values")
    labels = (y > np.median(y)).astype(int)
    if labels.min() == labels.max():
        raise DegenerateDataError("degenerate split: all values on one side of the median")
    return labels


def mae(pred, actual):
    pred = np.asarray(pred, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if pred.shape != actual.shape:
        raise InputError("length mismatch")
    if pred.size == 0:
        raise InputError("empty input")
    return float(np.mean(np.abs(pred - actual)))


def _average_ranks(x):
    order = np.argsort(x, kind="mergesort")
    sx = x[order]
    ranks = np.empty(x.size)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def auc(scores, labels):
    """Area under the ROC curve via the Mann-Whitney rank sum (ties count half)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise InputError("length mismatch")
    pos = labels == 1
    n1 = int(pos.sum())
    n0 = labels.size - n1
    if n1 == 0 or n0 == 0:
        raise DegenerateDataError("AUC needs both classes")
    ranks = _average_ranks(scores)
    u = ranks[pos].sum() - n1 * (n1 + 1) / 2.0
    return float(u / (n1 * n0))


@dataclass
class EvalReport:
    target: str
    task: str
    model_kind: str
    feature_mode: str
    selection_scope: str
    metric: str
    per_fold_metric: list
    mean_metric: float
    selected_features: list
    fallback_folds: list
    n: int
    k: int
    seed: int
    hyperparameters: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _fit(kind, fm, y, hyper):
    if kind == "ols":
        return models.fit_ols(fm, y, lam=hyper.get("lambda", 1e-6))
    if kind == "ridge":
        return models.fit_ridge(fm, y, lam=hyper.get("lambda", 1.0))
    if kind == "svr":
        return models.fit_svr(fm, y, **{**models.SVR_DEFAULTS, **hyper})
    if kind == "logistic":
        return models.fit_logistic(fm, y, **{**models.LOGISTIC_DEFAULTS, **hyper})
    if kind == "gnb":
        return models.fit_gnb(fm, y)
    raise InputError(f"unknown model kind {kind!r}")


def _matrix(profiles, ids):
    return np.array([[p.scores.scores[c] for c in ids] for p in profiles], dtype=float)


def cross_validate(profiles, lexicon, target, task="regression", model_kind=None,
                   feature_mode="all", selection_scope="per_fold", seed=0,
                   hyperparameters=None, k=10, stratify=True, threads=1):
    """k-fold estimate of MAE (regression) or AUC (classification).

    In ``significant`` mode the features are the categories whose correlation
    with the target has p < 0.05, chosen on each training portion
    (``per_fold``) or once on all usable profiles (``global``).  A fold whose
    selection comes out empty uses every category and is listed in
    ``fallback_folds``.
    """
    if task not in TASKS:
        raise InputError(f"unknown task {task!r}")
    if feature_mode not in FEATURE_MODES:
        raise InputError(f"unknown feature mode {feature_mode!r}")
    if selection_scope not in SELECTION_SCOPES:
        raise InputError(f"unknown selection scope {selection_scope!r}")
    model_kind = model_kind or DEFAULT_MODEL[task]
    allowed = models.REGRESSION_KINDS if task == "regression" else models.CLASSIFICATION_KINDS
    if model_kind not in allowed:
        raise InputError(f"model {model_kind!r} does not fit task {task!r}")
    hyper = dict(hyperparameters or {})
    if model_kind == "svr":
        hyper.setdefault("seed", seed)

    usable, y = target_values(profiles, target)
    n = len(usable)
    if n < 5 * k:
        raise DegenerateDataError(f"{n} usable profiles; need at least {5 * k} for {k} folds")
    labels = median_split(y) if task == "classification" else None
    folds = kfold_split(n, k, seed, labels if (labels is not None and stratify) else None)
    all_ids = lexicon.category_ids
    global_ids = None
    if feature_mode == "significant" and selection_scope == "global":
        global_ids = significant_categories(correlate_all(usable, target, lexicon))

    def run_fold(f):
        test = folds[f]
        train = np.setdiff1d(np.arange(n), test)
        train_profiles = [usable[i] for i in train]
        fallback = False
        ids = all_ids
        if feature_mode == "significant":
            chosen = global_ids
            if chosen is None:
                chosen = significant_categories(correlate_all(train_profiles, target, lexicon))
            if chosen:
                ids = [c for c in all_ids if c in set(chosen)]
            else:
                fallback = True
        names = [lexicon.name_of(c) for c in ids]
        fm = models.standardize_fit(_matrix(train_profiles, ids), names)
        x_test = _matrix([usable[i] for i in test], ids)
        if task == "regression":
            model = _fit(model_kind, fm, y[train], hyper)
            score = mae(models.predict(model, x_test), y[test])
        else:
            model = _fit(model_kind, fm, labels[train], hyper)
            score = auc(models.predict(model, x_test), labels[test])
        return score, names, fallback

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_fold, range(k)))
    else:
        results = [run_fold(f) for f in range(k)]
    per_fold = [float(r[0]) for r in results]
    return EvalReport(
        target=target,
        task=task,
        model_kind=model_kind,
        feature_mode=feature_mode,
        selection_scope=selection_scope,
        metric="mae" if task == "regression" else "auc",
        per_fold_metric=per_fold,
        mean_metric=float(np.mean(per_fold)),
        selected_features=[r[1] for r in results],
        fallback_folds=[f for f, r in enumerate(results) if r[2]],
        n=n,
        k=k,
        seed=seed,
        hyperparameters=hyper,
    )


def reports_to_json(reports, meta=None):
    obj = {"meta": meta or {}, "reports": [r.to_dict() for r in reports]}
    return json.dumps(obj, indent=2) + "\n"


def reports_to_tsv(reports):
    """Feature mode x target table of mean metrics; missing cells stay empty."""
    targets = [t for t in ("response", "retweet") if any(r.target == t for r in reports)]
    modes = [m for m in FEATURE_MODES if any(r.feature_mode == m for r in reports)]
    cell = {(r.feature_mode, r.target): r.mean_metric for r in reports}
    metric = reports[0].metric if reports else "metric"
    lines = ["\t".join(["features"] + [f"{t}_{metric}" for t in targets])]
    for m in modes:
        row = [FEATURE_MODE_LABELS[m]]
        row += [f"{cell[(m, t)]:.6f}" if (m, t) in cell else "" for t in targets]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"
