"""Brute-force reference implementations used only by the tests.

Nothing here calls into the library's order or integral routines; step
functions are handled as raw ``(widths, values, tail)`` arrays.
"""

import numpy as np


def raw(f):
    return np.array([w for w, _ in f.pieces], float), np.array([v for _, v in f.pieces], float), f.tail


def distribution(widths, values, s):
    """m{f > s} for a simple function given by unordered pieces (tail ignored)."""
    widths, values = np.asarray(widths, float), np.asarray(values, float)
    return float(widths[values > s].sum())


def mu_from_distribution(widths, values, t, tail=0.0):
    """mu(t) = inf{s >= tail : d(s) <= t}, scanning the value grid."""
    grid = np.unique(np.concatenate(([tail], np.asarray(values, float))))
    grid = grid[grid >= tail]
    for s in grid:
        if distribution(widths, values, s) <= t:
            return float(s)
    return float(grid[-1])


def value_at(f, t):
    w, v, tail = raw(f)
    ends = np.cumsum(w)
    for e, val in zip(ends, v):
        if t < e:
            return float(val)
    return float(tail)


def integral_curve(f, ts):
    """int_0^t f for each t, piece by piece."""
    w, v, tail = raw(f)
    starts = np.concatenate(([0.0], np.cumsum(w)[:-1])) if len(w) else np.zeros(0)
    ts = np.asarray(ts, float)
    covered = np.clip(ts[:, None] - starts[None, :], 0.0, w[None, :]) if len(w) else np.zeros((len(ts), 0))
    out = covered @ v if len(w) else np.zeros(len(ts))
    past = np.maximum(ts - (w.sum() if len(w) else 0.0), 0.0)
    return out + past * tail


def log_integral_curve(f, ts):
    """int_0^t log f with -inf once a zero region of positive length is entered."""
    w, v, tail = raw(f)
    ts = np.asarray(ts, float)
    out = np.zeros(len(ts))
    start = 0.0
    for wi, vi in list(zip(w, v)) + [(np.inf, tail)]:
        cover = np.clip(ts - start, 0.0, wi)
        with np.errstate(divide="ignore", invalid="ignore"):
            contrib = np.where(cover > 0, cover * np.log(vi) if vi > 0 else -np.inf, 0.0)
        out = out + contrib
        start += wi
    return out


def slack(lhs, rhs):
    lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
    return (rhs - lhs) / (1.0 + np.abs(lhs) + np.abs(rhs))


def uniform_grid_min(f, g, lam, grid):
    """min over grid pairs a <= b / lam of int_a^b g - int_{lam a}^b f (normalized)."""
    grid = np.asarray(grid, float)
    Fb, Gb = integral_curve(f, grid), integral_curve(g, grid)
    Fla = integral_curve(f, lam * grid)
    lhs = Fb[None, :] - Fla[:, None]  # rows a, cols b
    rhs = Gb[None, :] - Gb[:, None]
    ok = lam * grid[:, None] <= grid[None, :]
    s = slack(lhs, rhs)
    return float(np.min(np.where(ok, s, np.inf)))


def det_blockwise(x):
    """log prod_k |det x_k|^{c_k} from LU-based determinants."""
    total = 0.0
    for c, m in zip(x.weights, x.mats):
        sign, logdet = np.linalg.slogdet(m)
        if sign == 0:
            return -np.inf
        total += c * logdet
    return total


def singular_values_eig(x):
    """Per-block singular values from the eigenvalues of x* x."""
    out = []
    for m in x.mats:
        w = np.linalg.eigvalsh(m.conj().T @ m)
        out.append(np.sqrt(np.clip(w, 0.0, None))[::-1])
    return out
