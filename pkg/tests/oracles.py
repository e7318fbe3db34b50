"""Independent reference computations used to freeze expected values."""

import math

import mpmath

mpmath.mp.dps = 30


def beta_quadrature(x, a, b):
    """I_x(a, b) by tanh-sinh quadrature of the Beta density."""
    if x == 0:
        return 0.0
    dens = lambda t: t ** (a - 1) * (1 - t) ** (b - 1)
    num = mpmath.quad(dens, [0, x])
    return float(num / mpmath.beta(a, b))


def t_two_tailed_quadrature(r, n):
    """2 * integral of the Student-t density beyond |t| for the Pearson t statistic."""
    dof = n - 2
    t = abs(r) * math.sqrt(dof / (1 - r * r))
    c = mpmath.gamma((dof + 1) / mpmath.mpf(2)) / (mpmath.sqrt(dof * mpmath.pi) * mpmath.gamma(dof / mpmath.mpf(2)))
    dens = lambda s: c * (1 + s * s / dof) ** (-(dof + 1) / mpmath.mpf(2))
    return float(2 * mpmath.quad(dens, [t, mpmath.inf]))


def pearson_two_pass(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def auc_pairs(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = 0.0
    for p in pos:
        for q in neg:
            wins += 1.0 if p > q else 0.5 if p == q else 0.0
    return wins / (len(pos) * len(neg))


def central_difference(f, params, h=1e-6):
    grad = []
    for i in range(len(params)):
        up = params.copy()
        dn = params.copy()
        up[i] += h
        dn[i] -= h
        grad.append((f(up) - f(dn)) / (2 * h))
    return grad
