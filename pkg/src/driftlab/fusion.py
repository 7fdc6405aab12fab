"""Batch-level fusion of per-frame posteriors and the accept/query decision.

Two combination rules (log-domain product, arithmetic mean) and four
confidence measures. The binarized log-domain test compares

    sum_j log p_{k*,j}   vs   S + sum_j log(1 - p_{k*,j}),

with S = log T - log(1-T); it is the numerically stable equivalent of the
direct probability-ratio test and reduces to `max p > T` for single-frame
batches.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numeric import EPS, clamp_posterior, softmax_rows

RULES = ("product", "sum")
MEASURES = ("most_confident", "margin", "ratio", "modified_mc")


class ConfigError(ValueError):
    """Invalid fusion rule, measure, or threshold."""


@dataclass
class FusionConfig:
    rule: str = "product"
    measure: str = "modified_mc"
    threshold: float = 0.9
    epsilon: float = EPS

    def __post_init__(self):
        if self.rule not in RULES:
            raise ConfigError(f"unknown rule {self.rule!r}")
        if self.measure not in MEASURES:
            raise ConfigError(f"unknown measure {self.measure!r}")
        T = self.threshold
        if self.measure in ("most_confident", "margin", "modified_mc"):
            # T == 1 is the closed boundary: reject everything.
            if not 0.0 < T <= 1.0:
                raise ConfigError(
                    f"threshold for {self.measure} must lie in (0, 1], got {T}")
        elif self.measure == "ratio":
            lo = 1.0 if self.rule == "sum" else 0.0
            if not (T >= lo):
                raise ConfigError(
                    f"ratio threshold under {self.rule} rule must be >= {lo}, got {T}")


@dataclass
class BatchDecision:
    stream_id: str
    slot_index: int
    predicted_label: Optional[int]      # registry id; None at cold start
    confidence: float
    accepted: bool
    rule: str
    measure: str
    fused_posterior: Optional[np.ndarray] = None
    n_frames: int = 0
    final_label: Optional[int] = None   # filled by the run loop
    queried: bool = False
    true_label_name: Optional[str] = None


def combine_product_log(frame_posteriors: np.ndarray) -> np.ndarray:
    """Unnormalized log-domain product-rule scores, one per class."""
    P = np.asarray(frame_posteriors, dtype=float)
    if P.size == 0:
        raise ValueError("empty batch")
    return np.log(P).sum(axis=0)


def normalize_log_scores(log_scores: np.ndarray) -> np.ndarray:
    """Exact posterior from unnormalized log scores (log-sum-exp).

    No clamping here: the entry band applies to per-frame posteriors, and
    confidence measures need the exact fused distribution.
    """
    return softmax_rows(np.asarray(log_scores, dtype=float))


def combine_sum(frame_posteriors: np.ndarray) -> np.ndarray:
    P = np.asarray(frame_posteriors, dtype=float)
    if P.size == 0:
        raise ValueError("empty batch")
    return clamp_posterior(P.mean(axis=0))


def bcl_most_confident(posterior: np.ndarray) -> float:
    return float(np.max(posterior))


def bcl_margin(posterior: np.ndarray) -> float:
    posterior = np.asarray(posterior, dtype=float)
    if posterior.size == 1:
        # No competitor: treat as maximal confidence.
        return 1.0
    top2 = np.sort(posterior)[-2:]
    return float(top2[1] - top2[0])


def bcl_ratio(fused_scores: np.ndarray, rule: str) -> float:
    """p1/p2 under the sum rule; log-score difference under the product rule."""
    scores = np.asarray(fused_scores, dtype=float)
    if scores.size == 1:
        return float("inf")
    top2 = np.sort(scores)[-2:]
    if rule == "sum":
        return float(top2[1] / top2[0])
    return float(top2[1] - top2[0])


def threshold_shift(threshold: float) -> float:
    """S = log T - log(1-T); +inf at the closed T=1 boundary."""
    if threshold >= 1.0:
        return float("inf")
    return float(np.log(threshold) - np.log(1.0 - threshold))


def bcl_modified_mc(frame_posteriors: np.ndarray, threshold: float,
                    k_star: int) -> tuple:
    """Binarized log-domain confidence test for class k_star.

    Returns (accepted, margin) where margin is the difference between the
    evidence for k_star and the shifted evidence against it.
    """
    P = np.asarray(frame_posteriors, dtype=float)
    if P.size == 0:
        raise ValueError("empty batch")
    p = P[:, k_star]
    S = threshold_shift(threshold)
    lhs = float(np.log(p).sum())
    rhs = float(np.log1p(-p).sum())
    margin = lhs - S - rhs
    return margin > 0, margin


def decide_batch(model, batch, config: FusionConfig,
                 n_classes: Optional[int] = None) -> BatchDecision:
    """Score, fuse, and threshold one batch against the composite model.

    An empty ensemble forces a query (cold start). `n_classes` limits the
    registry to a slot-entry snapshot.
    """
    base = dict(stream_id=batch.stream_id, slot_index=batch.slot_index,
                rule=config.rule, measure=config.measure,
                n_frames=len(batch))
    K = len(model.registry) if n_classes is None else n_classes
    if len(model) == 0 or K == 0:
        return BatchDecision(predicted_label=None, confidence=0.0,
                             accepted=False, **base)

    P = model.score_frames(batch.features, n_classes=K)

    if config.rule == "product":
        log_scores = combine_product_log(P)
        fused = normalize_log_scores(log_scores)
        k_star = int(np.argmax(log_scores))
    else:
        fused = combine_sum(P)
        k_star = int(np.argmax(fused))

    if config.measure == "most_confident":
        confidence = bcl_most_confident(fused)
        accepted = confidence > config.threshold
    elif config.measure == "margin":
        confidence = bcl_margin(fused)
        accepted = confidence > config.threshold
    elif config.measure == "ratio":
        scores = fused if config.rule == "sum" else log_scores
        confidence = bcl_ratio(scores, config.rule)
        accepted = confidence > config.threshold
    else:  # modified_mc
        accepted, confidence = bcl_modified_mc(P, config.threshold, k_star)

    return BatchDecision(predicted_label=k_star, confidence=float(confidence),
                         accepted=bool(accepted), fused_posterior=fused, **base)
