"""Composite model: ordered member list with geometric recency weights.

Member ell of t (1-based, oldest first) carries weight

    W_ell = (1/p^(t-ell+1)) / sum_{j=1..t} 1/p^j

so consecutive members differ by the exact factor p and the vector sums
to one. Frame scoring zero-extends each member's posterior onto the full
class registry before the weighted sum.
"""

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .classifiers import (GaussianNBMember, GMMMember, LogisticMember, Member,
                          OneClassMember)
from .numeric import clamp_posterior

SNAPSHOT_VERSION = 1


class ColdStartError(RuntimeError):
    """Empty ensemble and empty registry: no basis for any prediction."""


class ClassRegistry:
    """Dense label ids in order of first appearance; grows monotonically."""

    def __init__(self, names: Sequence[str] = ()):
        self._names: list = []
        self._ids: dict = {}
        for name in names:
            self.get_or_add(name)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    @property
    def names(self) -> tuple:
        return tuple(self._names)

    def get_or_add(self, name: str) -> int:
        if name not in self._ids:
            self._ids[name] = len(self._names)
            self._names.append(name)
        return self._ids[name]

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def name_of(self, label_id: int) -> str:
        return self._names[label_id]

    def truncate(self, size: int) -> None:
        """Roll back labels registered after a snapshot (slot abort path)."""
        for name in self._names[size:]:
            del self._ids[name]
        del self._names[size:]


def compute_weights(t: int, decay_base: float) -> np.ndarray:
    """Recency weights for t members; strictly increasing for p > 1."""
    if t < 1:
        raise ValueError("need at least one member")
    if decay_base <= 1:
        raise ValueError(f"decay base must exceed 1, got {decay_base}")
    x = 1.0 / decay_base
    # terms[ell-1] = x^(t-ell+1): oldest member gets x^t, newest x^1
    terms = np.power(x, np.arange(t, 0, -1, dtype=float))
    return terms / terms.sum()


@dataclass
class CompositeModel:
    """Ensemble state shared across time slots. Append returns a new value."""

    decay_base: float = 2.0
    members: tuple = ()
    registry: ClassRegistry = field(default_factory=ClassRegistry)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def weights(self) -> np.ndarray:
        return compute_weights(len(self.members), self.decay_base)

    def append_member(self, member: Member, new_labels: Sequence[str] = ()) -> "CompositeModel":
        for name in new_labels:
            self.registry.get_or_add(name)
        return CompositeModel(self.decay_base, self.members + (member,), self.registry)

    def score_frames(self, X: np.ndarray, n_classes: Optional[int] = None) -> np.ndarray:
        """Clamped posterior rows over the first `n_classes` registry labels.

        `n_classes` defaults to the full registry; the run loop passes the
        slot-entry snapshot so in-slot oracle answers cannot influence
        sibling batch decisions.
        """
        K = len(self.registry) if n_classes is None else n_classes
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if not self.members:
            if K == 0:
                raise ColdStartError("no members and no known classes")
            return clamp_posterior(np.full((X.shape[0], K), 1.0 / K))
        fused = np.zeros((X.shape[0], K))
        weights = self.weights
        for w, member in zip(weights, self.members):
            if w < 1e-12:
                # Below the posterior clamp floor: numerically invisible.
                continue
            proba = member.predict_proba(X)
            cols = [k for k in member.known_labels if k < K]
            if len(cols) < len(member.known_labels):
                keep = [i for i, k in enumerate(member.known_labels) if k < K]
                proba = proba[:, keep]
            fused[:, cols] += w * proba
        return clamp_posterior(fused)

    def score_frame(self, x: np.ndarray) -> np.ndarray:
        return self.score_frames(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def top_candidates(self, X: np.ndarray, n: int = 3) -> list:
        """(name, mean probability) pairs for the highest-mass classes."""
        if not self.members or len(self.registry) == 0:
            return []
        mean_post = self.score_frames(X).mean(axis=0)
        order = np.argsort(mean_post)[::-1][:n]
        return [(self.registry.name_of(int(k)), float(mean_post[k])) for k in order]


def ensemble_score(model: CompositeModel, x: np.ndarray) -> np.ndarray:
    return model.score_frame(x)


def append_member(model: CompositeModel, member: Member,
                  new_labels: Sequence[str] = ()) -> CompositeModel:
    return model.append_member(member, new_labels)


# ---------------------------------------------------------------------------
# Snapshot serialization (JSON) for run resumption


def _member_state(member: Member) -> dict:
    state = {"kind": member.kind, "known_labels": list(member.known_labels),
             "trained_slot": member.trained_slot}
    if isinstance(member, GaussianNBMember):
        state.update(means=member.means.tolist(), variances=member.variances.tolist(),
                     log_priors=member.log_priors.tolist())
    elif isinstance(member, GMMMember):
        state["classes"] = {
            str(lab): {"means": m.tolist(), "variances": v.tolist(), "weights": w.tolist()}
            for lab, (m, v, w) in member.class_params.items()}
    elif isinstance(member, LogisticMember):
        state.update(weights=member.weights.tolist(), bias=member.bias.tolist(),
                     mean=member.mean.tolist(), scale=member.scale.tolist(),
                     converged=member.converged)
    elif isinstance(member, OneClassMember):
        state.update(mean=member.mean.tolist(), variance=member.variance.tolist(),
                     log_density_threshold=member.log_density_threshold,
                     scale=member.scale)
    else:
        raise TypeError(f"cannot serialize member kind {member.kind!r}")
    return state


def _member_from_state(state: dict) -> Member:
    kind = state["kind"]
    labels = state["known_labels"]
    slot = state["trained_slot"]
    if kind == "gaussian_nb":
        return GaussianNBMember(labels, np.array(state["means"]),
                                np.array(state["variances"]),
                                np.array(state["log_priors"]), slot)
    if kind == "gmm":
        params = {int(lab): (np.array(p["means"]), np.array(p["variances"]),
                             np.array(p["weights"]))
                  for lab, p in state["classes"].items()}
        return GMMMember(labels, params, slot)
    if kind == "logistic":
        return LogisticMember(labels, np.array(state["weights"]), np.array(state["bias"]),
                              np.array(state["mean"]), np.array(state["scale"]),
                              slot, state.get("converged", True))
    if kind == "one_class":
        return OneClassMember(labels[0], np.array(state["mean"]), np.array(state["variance"]),
                              state["log_density_threshold"], state["scale"], slot)
    raise ValueError(f"unknown member kind {kind!r}")


def save_snapshot(model: CompositeModel, path) -> None:
    doc = {
        "version": SNAPSHOT_VERSION,
        "decay_base": model.decay_base,
        "registry": list(model.registry.names),
        "members": [_member_state(m) for m in model.members],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_snapshot(path) -> CompositeModel:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {doc.get('version')!r}")
    model = CompositeModel(decay_base=doc["decay_base"],
                           registry=ClassRegistry(doc["registry"]))
    members = tuple(_member_from_state(s) for s in doc["members"])
    return CompositeModel(model.decay_base, members, model.registry)
