"""Standardization and the predictive models.

Regression: ordinary/ridge least squares (``ols``, ``ridge``) and a linear
epsilon-insensitive support vector regressor (``svr``).  Classification:
logistic regression (``logistic``) and Gaussian naive Bayes (``gnb``).

Every model stores the training-set column statistics and applies them in
:func:`predict`, so callers always pass raw (unstandardized) feature rows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DegenerateDataError, InputError

FORMAT_VERSION = 1
REGRESSION_KINDS = ("ols", "ridge", "svr")
CLASSIFICATION_KINDS = ("logistic", "gnb")
MODEL_KINDS = REGRESSION_KINDS + CLASSIFICATION_KINDS

SVR_DEFAULTS = {"C": 1.0, "epsilon": 0.01, "epochs": 200, "learning_rate": 0.5, "batch_size": 64, "seed": 0}
LOGISTIC_DEFAULTS = {"iterations": 300, "learning_rate": 1.0, "l2": 1e-4}
GNB_VAR_FLOOR = 1e-9


@dataclass
class FeatureMatrix:
    values: np.ndarray
    columns: list
    column_stats: list  # (mean, sd) per column, sd == 1 for constant columns


@dataclass
class TrainedModel:
    kind: str
    columns: list
    column_stats: list
    parameters: dict
    hyperparameters: dict = field(default_factory=dict)
    training_history: list = field(default_factory=list, repr=False, compare=False)


def _as_matrix(raw):
    x = np.asarray(raw, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise InputError("feature matrix must be 2-D")
    return x


def standardize_fit(raw, columns=None):
    """z-score each column with its sample mean and standard deviation."""
    x = _as_matrix(raw)
    if x.shape[0] < 2:
        raise InputError("standardization needs at least two rows")
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    sd = np.where(sd > 0, sd, 1.0)
    stats = [(float(m), float(s)) for m, s in zip(mean, sd)]
    if columns is None:
        columns = [f"x{i}" for i in range(x.shape[1])]
    if len(columns) != x.shape[1]:
        raise InputError("column names do not match matrix width")
    return FeatureMatrix(standardize_apply(stats, x), list(columns), stats)


def standardize_apply(column_stats, raw):
    x = _as_matrix(raw)
    if x.shape[1] != len(column_stats):
        raise InputError(f"expected {len(column_stats)} feature columns, got {x.shape[1]}")
    mean = np.array([m for m, _ in column_stats])
    sd = np.array([s for _, s in column_stats])
    return (x - mean) / sd


# -- least squares ----------------------------------------------------------

def fit_ols(features, y, lam=1e-6, kind="ols"):
    """Minimize ||Xw + b - y||^2 + lam ||w||^2 via the normal equations.

    The intercept is not penalized.
    """
    if lam < 0:
        raise InputError("lambda must be non-negative")
    x = features.values
    y = np.asarray(y, dtype=float)
    n, d = x.shape
    if y.shape != (n,):
        raise InputError("target length does not match feature rows")
    a = np.hstack([np.ones((n, 1)), x])
    gram = a.T @ a
    gram[1:, 1:] += lam * np.eye(d)
    if lam == 0 and np.linalg.matrix_rank(a) < d + 1:
        raise DegenerateDataError("singular normal equations (set lambda > 0)")
    try:
        coef = linalg.cho_solve(linalg.cho_factor(gram), a.T @ y)
    except linalg.LinAlgError:
        raise DegenerateDataError("singular normal equations (set lambda > 0)") from None
    params = {"weights": [float(v) for v in coef[1:]], "intercept": float(coef[0])}
    return TrainedModel(kind, list(features.columns), list(features.column_stats), params, {"lambda": lam})


def fit_ridge(features, y, lam=1.0):
    return fit_ols(features, y, lam=lam, kind="ridge")


# -- support vector regression ---------------------------------------------

def svr_loss_grad(params, x, y, C, epsilon):
    """Primal objective 0.5||w||^2 + C * sum(max(0, |xw + b - y| - eps)) and a subgradient.

    ``params`` is the weight vector with the intercept appended.
    """
    w, b = params[:-1], params[-1]
    resid = x @ w + b - y
    excess = np.abs(resid) - epsilon
    loss = 0.5 * (w @ w) + C * np.sum(np.maximum(0.0, excess))
    s = np.where(excess > 0, np.sign(resid), 0.0)
    grad = np.append(w + C * (x.T @ s), C * s.sum())
    return float(loss), grad


def fit_svr(features, y, C=1.0, epsilon=0.01, epochs=200, seed=0, learning_rate=0.5, batch_size=64):
    """Linear SVR trained by shuffled mini-batch subgradient descent.

    Steps decay as ``learning_rate / sqrt(t)`` on the objective divided by
    ``C * n``.  After each epoch the better of the last iterate and the
    epoch-average iterate is kept if it does not raise the objective;
    otherwise the previous best is restored and the base step is halved, so
    ``training_history`` never increases.
    """
    if C <= 0:
        raise InputError("C must be positive")
    if epsilon < 0:
        raise InputError("epsilon must be non-negative")
    x = features.values
    y = np.asarray(y, dtype=float)
    n, d = x.shape
    if y.shape != (n,):
        raise InputError("target length does not match feature rows")
    rng = np.random.default_rng(seed)
    params = np.zeros(d + 1)
    params[-1] = float(np.median(y))
    best, _ = svr_loss_grad(params, x, y, C, epsilon)
    best_params = params.copy()
    history = [best]
    xa = np.hstack([x, np.ones((n, 1))])
    reg = np.append(np.full(d, 1.0 / (C * n)), 0.0)
    eta0 = learning_rate
    t = 0
    for _ in range(epochs):
        order = rng.permutation(n)
        running = np.zeros(d + 1)
        steps = 0
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            xb = xa[idx]
            resid = xb @ params - y[idx]
            s = np.where(np.abs(resid) > epsilon, np.sign(resid), 0.0)
            grad = reg * params + xb.T @ s / len(idx)
            t += 1
            params = params - (eta0 / math.sqrt(t)) * grad
            running += params
            steps += 1
        averaged = running / steps
        obj_last, _ = svr_loss_grad(params, x, y, C, epsilon)
        obj_avg, _ = svr_loss_grad(averaged, x, y, C, epsilon)
        if obj_avg < obj_last:
            obj_last, params = obj_avg, averaged
        if obj_last <= best:
            best, best_params = obj_last, params.copy()
        else:
            params = best_params.copy()
            eta0 *= 0.5
        history.append(best)
    out = {"weights": [float(v) for v in best_params[:-1]], "intercept": float(best_params[-1])}
    hyper = {"C": C, "epsilon": epsilon, "epochs": epochs, "learning_rate": learning_rate,
             "batch_size": batch_size, "seed": seed}
    return TrainedModel("svr", list(features.columns), list(features.column_stats), out, hyper, history)


# -- classifiers ------------------------------------------------------------

def _check_binary(labels, n):
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise InputError("label length does not match feature rows")
    if not np.all((labels == 0) | (labels == 1)):
        raise InputError("labels must be 0/1")
    if labels.min() == labels.max():
        raise DegenerateDataError("labels contain a single class")
    return labels.astype(float)


def logistic_loss_grad(params, x, y, l2=0.0):
    """Mean negative log-likelihood plus 0.5 * l2 * ||w||^2, and its gradient."""
    w, b = params[:-1], params[-1]
    z = x @ w + b
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w)
    err = _sigmoid(z) - y
    grad = np.append(x.T @ err / len(y) + l2 * w, err.mean())
    return float(loss), grad


def _sigmoid(z):
    return np.exp(-np.logaddexp(0.0, -z))


def fit_logistic(features, labels, iterations=300, learning_rate=1.0, l2=1e-4):
    """Full-batch gradient descent with step halving on any loss increase."""
    x = features.values
    n, d = x.shape
    y = _check_binary(labels, n)
    params = np.zeros(d + 1)
    loss, grad = logistic_loss_grad(params, x, y, l2)
    history = [loss]
    step = learning_rate
    for _ in range(iterations):
        while True:
            cand = params - step * grad
            cand_loss, cand_grad = logistic_loss_grad(cand, x, y, l2)
            if cand_loss <= loss or step < 1e-12:
                break
            step *= 0.5
        if cand_loss > loss:
            break
        params, loss, grad = cand, cand_loss, cand_grad
        history.append(loss)
    out = {"weights": [float(v) for v in params[:-1]], "intercept": float(params[-1])}
    hyper = {"iterations": iterations, "learning_rate": learning_rate, "l2": l2}
    return TrainedModel("logistic", list(features.columns), list(features.column_stats), out, hyper, history)


def fit_gnb(features, labels):
    x = features.values
    n, _ = x.shape
    y = _check_binary(labels, n)
    means, variances, priors = [], [], []
    for c in (0.0, 1.0):
        xc = x[y == c]
        means.append([float(v) for v in xc.mean(axis=0)])
        variances.append([float(v) for v in np.maximum(xc.var(axis=0), GNB_VAR_FLOOR)])
        priors.append(float(len(xc) / n))
    params = {"priors": priors, "means": means, "variances": variances}
    return TrainedModel("gnb", list(features.columns), list(features.column_stats), params,
                        {"var_floor": GNB_VAR_FLOOR})


def _gnb_posterior(params, x):
    logp = []
    for prior, mu, var in zip(params["priors"], params["means"], params["variances"]):
        mu = np.asarray(mu)
        var = np.asarray(var)
        ll = -0.5 * np.sum(np.log(2 * np.pi * var) + (x - mu) ** 2 / var, axis=1)
        logp.append(ll + math.log(prior))
    return np.exp(logp[1] - np.logaddexp(logp[0], logp[1]))


# -- prediction and persistence --------------------------------------------

def predict(model, raw, clip=True):
    """Scores for raw feature rows.

    Regression kinds return rates, clipped to [0, 1] unless ``clip`` is
    false; classifier kinds return the probability of the positive class.
    """
    x = standardize_apply(model.column_stats, raw)
    if model.kind == "gnb":
        return _gnb_posterior(model.parameters, x)
    w = np.asarray(model.parameters["weights"], dtype=float)
    z = x @ w + model.parameters["intercept"]
    if model.kind == "logistic":
        return _sigmoid(z)
    return np.clip(z, 0.0, 1.0) if clip else z


def raw_coefficients(model):
    """Weights and intercept of a linear model expressed in raw feature units."""
    if model.kind == "gnb":
        raise InputError("naive Bayes has no linear coefficients")
    w = np.asarray(model.parameters["weights"], dtype=float)
    mean = np.array([m for m, _ in model.column_stats])
    sd = np.array([s for _, s in model.column_stats])
    w_raw = w / sd
    return w_raw, float(model.parameters["intercept"] - w_raw @ mean)


def model_to_json(model):
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "columns": model.columns,
        "column_stats": [list(s) for s in model.column_stats],
        "parameters": model.parameters,
        "hyperparameters": model.hyperparameters,
    }
    return json.dumps(obj, indent=2) + "\n"


def model_from_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"model file is not valid JSON: {exc.msg}") from None
    if obj.get("format_version") != FORMAT_VERSION:
        raise InputError(f"unsupported model format_version {obj.get('format_version')!r}")
    if obj.get("kind") not in MODEL_KINDS:
        raise InputError(f"unknown model kind {obj.get('kind')!r}")
    stats = [tuple(s) for s in obj["column_stats"]]
    return TrainedModel(obj["kind"], obj["columns"], stats, obj["parameters"], obj["hyperparameters"])
