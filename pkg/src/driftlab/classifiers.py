"""Per-time-slot trainable classifiers emitting per-frame posteriors.

Four kinds are available: diagonal Gaussian naive Bayes and per-class
Gaussian mixtures (generative), multinomial logistic regression
(discriminative), and a one-class density model for time slots whose
batches carry a single label.

Every trained member exposes `known_labels` (registry ids, ascending) and
`predict_proba(X)` returning one clamped posterior row per frame over
those labels. One-class members return the probability of their single
target label; the remaining mass is an implicit "anything else" outcome.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numeric import EPS, VAR_FLOOR, clamp_posterior, diag_gaussian_logpdf, logsumexp, softmax_rows


@dataclass
class LabeledFrameSet:
    """Training data for one time slot: stacked features plus registry label ids."""

    features: np.ndarray    # (n, d)
    label_ids: np.ndarray   # (n,) int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.label_ids = np.asarray(self.label_ids, dtype=int)

    @property
    def label_count(self) -> int:
        return int(np.unique(self.label_ids).size)

    def merged_with(self, other: "LabeledFrameSet") -> "LabeledFrameSet":
        return LabeledFrameSet(
            np.vstack([self.features, other.features]),
            np.concatenate([self.label_ids, other.label_ids]),
        )


class Member:
    """Base for trained ensemble members."""

    kind: str = "base"

    def __init__(self, known_labels, trained_slot: int = -1):
        self.known_labels = tuple(int(k) for k in known_labels)
        self.trained_slot = trained_slot
        self.flags: list = []

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def score_frame(member: Member, x: np.ndarray) -> np.ndarray:
    """Posterior of a single frame over member.known_labels."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite feature vector")
    return member.predict_proba(x.reshape(1, -1))[0]


class GaussianNBMember(Member):
    """Per-class diagonal Gaussian with frequency priors."""

    kind = "gaussian_nb"

    def __init__(self, known_labels, means, variances, log_priors, trained_slot=-1):
        super().__init__(known_labels, trained_slot)
        self.means = means            # (L, d)
        self.variances = variances    # (L, d)
        self.log_priors = log_priors  # (L,)

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        scores = np.stack(
            [diag_gaussian_logpdf(X, self.means[i], self.variances[i]) + self.log_priors[i]
             for i in range(len(self.known_labels))],
            axis=1,
        )
        return clamp_posterior(softmax_rows(scores))


def train_gaussian_nb(data: LabeledFrameSet, trained_slot: int = -1) -> GaussianNBMember:
    labels = np.unique(data.label_ids)
    means, variances, priors = [], [], []
    flags = []
    for lab in labels:
        Xc = data.features[data.label_ids == lab]
        means.append(Xc.mean(axis=0))
        var = Xc.var(axis=0)
        if Xc.shape[0] < 2:
            flags.append(f"label {int(lab)} trained on a single frame; variance floored")
        variances.append(np.maximum(var, VAR_FLOOR))
        priors.append(Xc.shape[0] / data.features.shape[0])
    member = GaussianNBMember(
        labels, np.stack(means), np.stack(variances), np.log(np.array(priors)), trained_slot)
    member.flags = flags
    return member


# ---------------------------------------------------------------------------
# Gaussian mixture (EM, diagonal covariances)


def _farthest_point_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """First center random, the rest greedily farthest from chosen ones."""
    centers = [X[rng.integers(X.shape[0])]]
    for _ in range(1, k):
        d2 = np.min(
            np.stack([((X - c) ** 2).sum(axis=1) for c in centers]), axis=0)
        centers.append(X[int(np.argmax(d2))])
    return np.stack(centers)


def _fit_gmm_density(X, components, max_iter, tol, rng):
    """EM fit of a diagonal-covariance mixture; returns params + loglik trace."""
    n, d = X.shape
    means = _farthest_point_init(X, components, rng)
    variances = np.tile(np.maximum(X.var(axis=0), VAR_FLOOR), (components, 1))
    weights = np.full(components, 1.0 / components)

    history = []
    for _ in range(max_iter):
        # E-step
        log_comp = np.stack(
            [np.log(weights[c]) + diag_gaussian_logpdf(X, means[c], variances[c])
             for c in range(components)],
            axis=1,
        )
        log_norm = logsumexp(log_comp, axis=1)
        loglik = float(np.sum(log_norm))
        resp = np.exp(log_comp - log_norm[:, None])

        if history and loglik - history[-1] < tol:
            history.append(loglik)
            break
        history.append(loglik)

        # M-step
        mass = resp.sum(axis=0)
        for c in range(components):
            if mass[c] < 1e-10:
                # Dead component: re-seed at a random data point.
                means[c] = X[rng.integers(n)]
                variances[c] = np.maximum(X.var(axis=0), VAR_FLOOR)
                weights[c] = 1.0 / components
                continue
            means[c] = resp[:, c] @ X / mass[c]
            var = resp[:, c] @ (X - means[c]) ** 2 / mass[c]
            variances[c] = np.maximum(var, VAR_FLOOR)
            weights[c] = mass[c] / n
        weights = weights / weights.sum()

    return means, variances, weights, history


class GMMMember(Member):
    """Per-class mixture densities combined with uniform class priors."""

    kind = "gmm"

    def __init__(self, known_labels, class_params, trained_slot=-1):
        super().__init__(known_labels, trained_slot)
        self.class_params = class_params   # label -> (means, variances, weights)
        self.loglik_history: dict = {}

    def class_log_density(self, X, label) -> np.ndarray:
        means, variances, weights = self.class_params[label]
        log_comp = np.stack(
            [np.log(weights[c]) + diag_gaussian_logpdf(X, means[c], variances[c])
             for c in range(len(weights))],
            axis=1,
        )
        return logsumexp(log_comp, axis=1)

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        scores = np.stack(
            [self.class_log_density(X, lab) for lab in self.known_labels], axis=1)
        return clamp_posterior(softmax_rows(scores))


def train_gmm(data: LabeledFrameSet, components: int = 2, max_iter: int = 100,
              tol: float = 1e-6, seed: int = 0, trained_slot: int = -1) -> GMMMember:
    labels = np.unique(data.label_ids)
    rng = np.random.default_rng(seed)
    params = {}
    histories = {}
    flags = []
    for lab in labels:
        Xc = data.features[data.label_ids == lab]
        k = min(components, Xc.shape[0])
        if k < components:
            flags.append(f"label {int(lab)}: only {Xc.shape[0]} frames, components reduced to {k}")
        means, variances, weights, hist = _fit_gmm_density(Xc, k, max_iter, tol, rng)
        params[int(lab)] = (means, variances, weights)
        histories[int(lab)] = hist
    member = GMMMember(labels, params, trained_slot)
    member.loglik_history = histories
    member.flags = flags
    return member


# ---------------------------------------------------------------------------
# Multinomial logistic regression (softmax, full-batch gradient descent)


class LogisticMember(Member):
    kind = "logistic"

    def __init__(self, known_labels, weights, bias, mean, scale, trained_slot=-1,
                 converged=True):
        super().__init__(known_labels, trained_slot)
        self.weights = weights   # (d, L)
        self.bias = bias         # (L,)
        self.mean = mean         # (d,) input standardization
        self.scale = scale       # (d,)
        self.converged = converged

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Z = (X - self.mean) / self.scale
        return clamp_posterior(softmax_rows(Z @ self.weights + self.bias))


def logistic_loss_grad(weights, bias, Z, Y, l2):
    """Mean negative log-likelihood with L2 on weights (bias excluded)."""
    n = Z.shape[0]
    P = softmax_rows(Z @ weights + bias)
    # log-likelihood of the observed one-hot rows
    ll = np.log(np.clip((P * Y).sum(axis=1), 1e-300, None)).sum()
    loss = -ll / n + 0.5 * l2 * float((weights ** 2).sum())
    G = (P - Y) / n
    grad_w = Z.T @ G + l2 * weights
    grad_b = G.sum(axis=0)
    return loss, grad_w, grad_b


def train_logistic(data: LabeledFrameSet, l2: float = 1e-3, epochs: int = 200,
                   step: float = 0.1, trained_slot: int = -1) -> LogisticMember:
    labels = np.unique(data.label_ids)
    if labels.size < 2:
        raise ValueError("logistic training needs at least two labels")
    X = data.features
    mean = X.mean(axis=0)
    scale = np.maximum(X.std(axis=0), 1e-6)
    Z = (X - mean) / scale
    index = {int(lab): i for i, lab in enumerate(labels)}
    Y = np.zeros((X.shape[0], labels.size))
    Y[np.arange(X.shape[0]), [index[int(l)] for l in data.label_ids]] = 1.0

    W = np.zeros((X.shape[1], labels.size))
    b = np.zeros(labels.size)
    converged = False
    for _ in range(epochs):
        _, gw, gb = logistic_loss_grad(W, b, Z, Y, l2)
        W -= step * gw
        b -= step * gb
        if max(np.abs(gw).max(), np.abs(gb).max()) < 1e-6:
            converged = True
            break
    member = LogisticMember(labels, W, b, mean, scale, trained_slot, converged)
    if not converged:
        member.flags.append("gradient descent stopped at epoch limit")
    return member


# ---------------------------------------------------------------------------
# One-class density model for unary time slots


class OneClassMember(Member):
    """Single diagonal Gaussian density with a quantile acceptance threshold.

    The target-class probability is a logistic squashing of the log-density
    margin over the threshold, scaled by the training log-density spread.
    """

    kind = "one_class"

    def __init__(self, target_label, mean, variance, log_density_threshold,
                 scale, trained_slot=-1):
        super().__init__((target_label,), trained_slot)
        self.mean = mean
        self.variance = variance
        self.log_density_threshold = log_density_threshold
        self.scale = scale

    def target_probability(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        margin = (diag_gaussian_logpdf(X, self.mean, self.variance)
                  - self.log_density_threshold) / self.scale
        return np.clip(1.0 / (1.0 + np.exp(-margin)), EPS, 1.0 - EPS)

    def predict_proba(self, X):
        return self.target_probability(X)[:, None]

    def two_outcome(self, X) -> np.ndarray:
        """(target, anything-else) posterior rows."""
        p = self.target_probability(X)
        return np.stack([p, 1.0 - p], axis=1)


def train_one_class(data: LabeledFrameSet, quantile: float = 0.05,
                    trained_slot: int = -1) -> OneClassMember:
    labels = np.unique(data.label_ids)
    if labels.size != 1:
        raise ValueError("one-class training expects exactly one label")
    if not 0.0 < quantile < 1.0:
        raise ValueError("quantile must lie in (0, 1)")
    X = data.features
    mean = X.mean(axis=0)
    var = np.maximum(X.var(axis=0), VAR_FLOOR)
    member_flags = []
    if X.shape[0] < 2:
        member_flags.append("one-class model trained on a single frame; variance floored")
    log_dens = diag_gaussian_logpdf(X, mean, var)
    threshold = float(np.quantile(log_dens, quantile))
    scale = max(float(np.std(log_dens)), 1e-6)
    member = OneClassMember(int(labels[0]), mean, var, threshold, scale, trained_slot)
    member.flags = member_flags
    return member


def train_member(kind: str, data: LabeledFrameSet, params: Optional[dict] = None,
                 seed: int = 0, trained_slot: int = -1) -> Member:
    """Train the configured multiclass member kind on slot data."""
    params = params or {}
    if kind == "gaussian_nb":
        return train_gaussian_nb(data, trained_slot)
    if kind == "gmm":
        return train_gmm(
            data,
            components=params.get("components", 2),
            max_iter=params.get("max_iter", 100),
            tol=params.get("tol", 1e-6),
            seed=seed,
            trained_slot=trained_slot,
        )
    if kind == "logistic":
        return train_logistic(
            data,
            l2=params.get("l2", 1e-3),
            epochs=params.get("epochs", 200),
            step=params.get("step", 0.1),
            trained_slot=trained_slot,
        )
    raise ValueError(f"unknown classifier kind {kind!r}")
