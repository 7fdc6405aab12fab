"""Shared numeric helpers: probability clamping and log-domain reductions."""

import numpy as np

# Posterior entries are kept inside [EPS, 1-EPS] so log-domain fusion stays finite.
EPS = 1e-9

# Gaussian variances are floored to avoid singular densities on degenerate data.
VAR_FLOOR = 1e-6

LOG_2PI = float(np.log(2.0 * np.pi))


def clamp_posterior(p: np.ndarray) -> np.ndarray:
    """Normalize rows to sum 1 and clamp entries into [EPS, 1-EPS].

    Works on a single posterior vector or a matrix of row posteriors.
    The double clip keeps every entry strictly inside the band while the
    row sums stay within ~1e-15 of 1.
    """
    p = np.asarray(p, dtype=float)
    axis = p.ndim - 1
    total = p.sum(axis=axis, keepdims=True)
    # All-zero rows (no member carried any mass) become uniform.
    n = p.shape[axis]
    safe = np.where(total > 0, total, 1.0)
    p = np.where(total > 0, p / safe, 1.0 / n)
    p = np.clip(p, EPS, 1.0 - EPS)
    p = p / p.sum(axis=axis, keepdims=True)
    return np.clip(p, EPS, 1.0 - EPS)


def logsumexp(a: np.ndarray, axis=None) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    amax = np.max(a, axis=axis, keepdims=True)
    amax = np.where(np.isfinite(amax), amax, 0.0)
    out = np.log(np.sum(np.exp(a - amax), axis=axis, keepdims=True)) + amax
    if axis is None:
        return float(out)
    return np.squeeze(out, axis=axis)


def softmax_rows(log_scores: np.ndarray) -> np.ndarray:
    """Stable softmax over the last axis."""
    log_scores = np.asarray(log_scores, dtype=float)
    m = log_scores.max(axis=-1, keepdims=True)
    e = np.exp(log_scores - m)
    return e / e.sum(axis=-1, keepdims=True)


def diag_gaussian_logpdf(x: np.ndarray, mean: np.ndarray, var: np.ndarray) -> np.ndarray:
    """Row-wise log density of independent-per-dimension Gaussians.

    x: (n, d); mean, var: (d,) -> (n,)
    """
    x = np.atleast_2d(x)
    d = x.shape[1]
    z2 = ((x - mean) ** 2 / var).sum(axis=1)
    return -0.5 * (z2 + np.log(var).sum() + d * LOG_2PI)
