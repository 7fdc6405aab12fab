"""The per-time-slot orchestration: predict, threshold, query, retrain.

Each slot runs against the ensemble frozen at slot entry, so batch order
inside a slot cannot influence sibling decisions. All labeled batches of
the slot (automatic or manual) train one new member, which joins the
composite model before the next slot.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classifiers import LabeledFrameSet, train_member, train_one_class
from .config import RunConfig
from .ensemble import CompositeModel
from .evaluation import RunReport, SlotCounters
from .fusion import decide_batch
from .streams import StreamDataset, TimeSlotView


class OracleError(RuntimeError):
    """The labeling authority failed to answer; the slot aborts cleanly."""


class SlotAbortedError(RuntimeError):
    def __init__(self, slot_index: int, cause: Exception):
        super().__init__(f"slot {slot_index} aborted: {cause}")
        self.slot_index = slot_index
        self.cause = cause


class Oracle:
    """Labeling authority contract: answer with a class name, possibly new."""

    def label(self, batch, context: dict) -> str:
        raise NotImplementedError


class ScriptedOracle(Oracle):
    """Simulated human answering with the batch's majority ground-truth label."""

    def __init__(self, name_rank: Optional[dict] = None):
        self.name_rank = name_rank or {}

    def label(self, batch, context):
        answer = batch.majority_true_label(self.name_rank)
        if answer is None:
            raise OracleError(
                f"batch {batch.stream_id}@{batch.slot_index} carries no ground truth")
        return answer


@dataclass
class LoopState:
    """Mutable run state threaded through the slots."""

    model: CompositeModel
    last_multiclass: Optional[LabeledFrameSet] = None   # logistic unary fallback buffer


def _train_slot_member(state: LoopState, slot_data: LabeledFrameSet,
                       config: RunConfig, slot_index: int):
    """Multiclass member when two labels are present; one-class otherwise.

    Logistic regression cannot fit a single class, so unary slots reuse the
    buffered previous multiclass slot when it adds a second label.
    """
    params = config.classifier_params
    seed = _derived_seed(config.seed, slot_index)
    if slot_data.label_count >= 2:
        member = train_member(config.classifier, slot_data, params, seed, slot_index)
        state.last_multiclass = slot_data
        return member
    if config.classifier == "logistic" and state.last_multiclass is not None:
        combined = slot_data.merged_with(state.last_multiclass)
        if combined.label_count >= 2:
            return train_member(config.classifier, combined, params, seed, slot_index)
    return train_one_class(slot_data, params["quantile"], slot_index)


def _derived_seed(seed: int, slot_index: int) -> int:
    return int(np.random.default_rng([seed, slot_index]).integers(2 ** 31))


def run_time_slot(state: LoopState, slot: TimeSlotView, oracle: Oracle,
                  config: RunConfig, name_rank: Optional[dict] = None):
    """Process one slot: decide every batch, then train and append a member.

    Returns (decisions, counters). On oracle failure the registry is rolled
    back and the composite model is left untouched.
    """
    counters = SlotCounters(slot.slot_index)
    if not slot.batches:
        return [], counters

    model = state.model
    registry = model.registry
    fusion = config.fusion()
    n_classes_at_entry = len(registry)

    decisions = []
    feature_parts = []
    label_parts = []
    try:
        for batch in slot.batches:   # already in stream-id order
            decision = decide_batch(model, batch, fusion, n_classes_at_entry)
            truth = batch.majority_true_label(name_rank)
            decision.true_label_name = truth
            counters.total += 1
            if decision.accepted:
                final_id = decision.predicted_label
                final_name = registry.name_of(final_id)
                if truth is not None and final_name != truth:
                    counters.misclassified += 1
            else:
                context = {
                    "slot_index": slot.slot_index,
                    "stream_id": batch.stream_id,
                    "candidates": model.top_candidates(batch.features),
                    "confidence": decision.confidence,
                }
                answer = oracle.label(batch, context)
                final_id = registry.get_or_add(answer)
                final_name = answer
                decision.queried = True
                counters.manual += 1
            decision.final_label = final_id
            decisions.append(decision)
            feature_parts.append(batch.features)
            label_parts.append(np.full(len(batch), final_id, dtype=int))
    except Exception as exc:
        registry.truncate(n_classes_at_entry)
        raise SlotAbortedError(slot.slot_index, exc) from exc

    slot_data = LabeledFrameSet(np.vstack(feature_parts), np.concatenate(label_parts))
    member = _train_slot_member(state, slot_data, config, slot.slot_index)
    state.model = model.append_member(member)
    return decisions, counters


def decision_record(decision, registry) -> dict:
    def name(label_id):
        return None if label_id is None else registry.name_of(label_id)

    return {
        "slot": decision.slot_index,
        "stream": decision.stream_id,
        "predicted": name(decision.predicted_label),
        "confidence": round(decision.confidence, 12),
        "accepted": decision.accepted,
        "queried": decision.queried,
        "final_label": name(decision.final_label),
        "true_label": decision.true_label_name,
        "n_frames": decision.n_frames,
    }


def run(dataset: StreamDataset, oracle: Oracle, config: RunConfig,
        observer=None) -> RunReport:
    """Run the full loop over every slot of the dataset.

    `observer`, when given, is called as observer(event, payload) around
    each slot; the HTTP service uses it to publish progress.
    """
    state = LoopState(model=CompositeModel(decay_base=config.decay_base))
    name_rank = {name: i for i, name in enumerate(dataset.class_names())}
    if isinstance(oracle, ScriptedOracle) and not oracle.name_rank:
        oracle.name_rank = name_rank

    report = RunReport(config=config.snapshot(), seed=config.seed)
    horizon = dataset.horizon if config.horizon is None else min(
        dataset.horizon, config.horizon)
    for t in range(horizon):
        slot = dataset.slot(t)
        decisions, counters = run_time_slot(state, slot, oracle, config, name_rank)
        report.slots.append(counters)
        for decision in decisions:
            report.decisions.append(decision_record(decision, state.model.registry))
        if observer is not None:
            observer("slot_done", {"slot": t, "report": report,
                                   "registry": state.model.registry.names})
    report.class_names = list(state.model.registry.names)
    report.final_model = state.model
    return report
