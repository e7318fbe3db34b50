"""Pearson correlation with two-tailed t-test significance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InputError

TARGETS = ("response", "retweet")

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 100_000


@dataclass(frozen=True)
class CorrelationResult:
    category_id: int
    category_name: str
    r: float
    p: float
    n: int
    tier: str  # "ns", "star" or "double_star"
    zero_variance: bool = False

    @property
    def stars(self):
        return {"ns": "", "star": "*", "double_star": "**"}[self.tier]


def describe(values):
    """Mean and sample standard deviation of a sequence."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise InputError("need at least two values")
    return {"n": int(x.size), "mean": float(x.mean()), "sd": float(x.std(ddof=1))}


def pearson(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("pearson needs two 1-D vectors of equal length")
    n = x.size
    if n < 3:
        raise InputError("pearson needs n >= 3")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = dx @ dx / (n - 1)
    syy = dy @ dy / (n - 1)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateDataError("zero variance")
    r = (dx @ dy / (n - 1)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, float(r)))


def _beta_cf(x, a, b):
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def incomplete_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b)."""
    if not (a > 0 and b > 0):
        raise InputError("incomplete_beta needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise InputError("incomplete_beta needs 0 <= x <= 1")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        a * math.log(x) + b * math.log1p(-x)
        + math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        val = math.exp(log_front) * _beta_cf(x, a, b) / a
    else:
        val = 1.0 - math.exp(log_front) * _beta_cf(1.0 - x, b, a) / b
    return min(1.0, max(0.0, val))


def p_two_tailed(r, n):
    """Two-tailed p-value of a Pearson r from ``n`` pairs (t-test, n-2 dof)."""
    if n < 3:
        raise InputError("p_two_tailed needs n >= 3")
    if abs(r) > 1.0:
        raise InputError("|r| must be <= 1")
    if abs(r) == 1.0:
        return 0.0
    dof = n - 2
    # With t^2 = r^2 dof / (1 - r^2), dof / (dof + t^2) collapses to 1 - r^2.
    p = incomplete_beta(1.0 - r * r, dof / 2.0, 0.5)
    return min(1.0, max(0.0, p))


def significance_tier(p):
    if p < 0.01:
        return "double_star"
    if p < 0.05:
        return "star"
    return "ns"


def target_values(profiles, target):
    if target not in TARGETS:
        raise InputError(f"unknown target {target!r}")
    if target == "response":
        keep = [p for p in profiles if p.response_rate is not None]
        return keep, np.array([p.response_rate for p in keep], dtype=float)
    return list(profiles), np.array([p.retweet_rate for p in profiles], dtype=float)


def correlate_all(profiles, target, lexicon):
    """Correlate every lexicon category with a target rate.

    Results are sorted by |r| descending (ties by category id); categories
    whose scores never vary are kept with ``tier="ns"`` and flagged.
    """
    usable, y = target_values(profiles, target)
    n = len(usable)
    if n < 3:
        raise DegenerateDataError(f"too few usable profiles for {target}: {n}")
    if np.all(y == y[0]):
        raise DegenerateDataError(f"{target} rate has zero variance")
    results = []
    for cid, name in lexicon.categories:
        x = np.array([p.scores.scores[cid] for p in usable], dtype=float)
        if np.all(x == x[0]):
            results.append(CorrelationResult(cid, name, 0.0, 1.0, n, "ns", zero_variance=True))
            continue
        r = pearson(x, y)
        p = p_two_tailed(r, n)
        results.append(CorrelationResult(cid, name, r, p, n, significance_tier(p)))
    results.sort(key=lambda c: (-abs(c.r), c.category_id))
    return results


def significant_categories(results, alpha=0.05):
    return [c.category_id for c in results if not c.zero_variance and c.p < alpha]


def correlations_to_tsv(results):
    lines = ["category\tr\tp\tn\ttier"]
    for c in results:
        lines.append(f"{c.category_name}\t{c.r:.6f}\t{c.p:.6f}\t{c.n}\t{c.stars}")
    return "\n".join(lines) + "\n"
