"""Comparison strategies: passive, even/odd, and unwise active learning.

Passive trains once on the oracle-labeled first half and classifies the
rest. Even/odd numbers each stream's batches alternately, buffers the odd
ones with true labels, and classifies the even ones with a model retrained
on the buffer every slot. Unwise active annotates everything before an
initiation slot, trains a single model there, and thereafter queries only
when that frozen model's batch confidence falls below the threshold.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classifiers import LabeledFrameSet, train_member, train_one_class
from .config import RunConfig
from .ensemble import ClassRegistry, CompositeModel
from .evaluation import RunReport, SlotCounters
from .fusion import decide_batch
from .loop import ScriptedOracle
from .streams import StreamDataset


@dataclass
class UnwiseConfig:
    initiation_slot: int

    def __post_init__(self):
        if self.initiation_slot < 1:
            raise ValueError("initiation slot must be >= 1")


def _ordered_batches(dataset: StreamDataset) -> list:
    """Batches in global slot order, ties by stream id."""
    out = []
    for view in dataset.slots:
        out.extend(view.batches)
    return out


def _single_member_model(data: LabeledFrameSet, config: RunConfig,
                         registry: ClassRegistry, slot: int) -> CompositeModel:
    """One trained member wrapped as a composite (one-class if unary)."""
    if data.label_count >= 2:
        member = train_member(config.classifier, data, config.classifier_params,
                              seed=config.seed, trained_slot=slot)
    else:
        member = train_one_class(data, config.classifier_params["quantile"],
                                 trained_slot=slot)
    return CompositeModel(config.decay_base, (member,), registry)


def _labeled_set(batches, registry: ClassRegistry, name_rank) -> LabeledFrameSet:
    feats, ids = [], []
    for batch in batches:
        truth = batch.majority_true_label(name_rank)
        label = registry.get_or_add(truth)
        feats.append(batch.features)
        ids.append(np.full(len(batch), label, dtype=int))
    return LabeledFrameSet(np.vstack(feats), np.concatenate(ids))


def _score_batch(model: CompositeModel, batch, registry: ClassRegistry,
                 name_rank) -> dict:
    """Classify one batch by product-rule fused posterior (prediction only)."""
    P = model.score_frames(batch.features)
    fused = np.log(P).sum(axis=0)
    predicted = registry.name_of(int(np.argmax(fused)))
    truth = batch.majority_true_label(name_rank)
    return {"slot": batch.slot_index, "stream": batch.stream_id,
            "predicted": predicted, "true_label": truth,
            "correct": predicted == truth, "queried": False}


def _finish_report(records, config, manual_slots=()) -> RunReport:
    """Per-slot counters from classification records plus manual-batch tallies."""
    report = RunReport(config=config.snapshot(), seed=config.seed)
    slot_map = {}
    for rec in records:
        c = slot_map.setdefault(rec["slot"], SlotCounters(rec["slot"]))
        c.total += 1
        if rec.get("queried"):
            c.manual += 1
        elif not rec["correct"]:
            c.misclassified += 1
        report.decisions.append(rec)
    for slot, n in manual_slots:
        c = slot_map.setdefault(slot, SlotCounters(slot))
        c.total += n
        c.manual += n
    report.slots = [slot_map[t] for t in sorted(slot_map)]
    return report


def passive_learning(dataset: StreamDataset, config: RunConfig) -> RunReport:
    """Train once on the oracle-labeled first half, classify the second half."""
    batches = _ordered_batches(dataset)
    if not batches:
        return RunReport(config=config.snapshot(), seed=config.seed)
    name_rank = {n: i for i, n in enumerate(dataset.class_names())}
    split = len(batches) // 2
    registry = ClassRegistry()
    train = _labeled_set(batches[:split], registry, name_rank)
    model = _single_member_model(train, config, registry,
                                 batches[split - 1].slot_index)
    records = [_score_batch(model, b, registry, name_rank) for b in batches[split:]]
    manual: dict = {}
    for b in batches[:split]:
        manual[b.slot_index] = manual.get(b.slot_index, 0) + 1
    return _finish_report(records, config, manual_slots=sorted(manual.items()))


def even_odd_learning(dataset: StreamDataset, config: RunConfig) -> RunReport:
    """Buffer per-stream odd batches with true labels; classify even ones
    with a model retrained on the whole buffer at each slot."""
    name_rank = {n: i for i, n in enumerate(dataset.class_names())}
    registry = ClassRegistry()
    buffer: list = []
    records, manual, buffer_sizes = [], [], []
    seen_per_stream: dict = {}
    for view in dataset.slots:
        odd, even = [], []
        for batch in view.batches:
            n = seen_per_stream.get(batch.stream_id, 0) + 1
            seen_per_stream[batch.stream_id] = n
            (odd if n % 2 == 1 else even).append(batch)
        buffer.extend(odd)
        if odd:
            manual.append((view.slot_index, len(odd)))
        if even:
            if buffer:
                data = _labeled_set(buffer, registry, name_rank)
                model = _single_member_model(data, config, registry, view.slot_index)
                records.extend(_score_batch(model, b, registry, name_rank)
                               for b in even)
            else:
                manual.append((view.slot_index, len(even)))
        buffer_sizes.append(len(buffer))
    report = _finish_report(records, config, manual_slots=manual)
    report.extras["buffer_sizes"] = buffer_sizes
    return report


def unwise_active(dataset: StreamDataset, config: RunConfig,
                  initiation_slot: Optional[int] = None) -> RunReport:
    """Annotate everything before the initiation slot, train once, then
    accept or query against the never-updated model."""
    horizon = dataset.horizon
    if initiation_slot is None:
        initiation_slot = max(1, int(round(0.2 * horizon)))
    UnwiseConfig(initiation_slot)

    name_rank = {n: i for i, n in enumerate(dataset.class_names())}
    registry = ClassRegistry()
    fusion = config.fusion()
    oracle = ScriptedOracle(name_rank)

    warmup, manual, records = [], [], []
    model = None
    for view in dataset.slots:
        if view.slot_index < initiation_slot:
            warmup.extend(view.batches)
            if view.batches:
                manual.append((view.slot_index, len(view.batches)))
            continue
        if model is None:
            if not warmup:
                raise ValueError("no batches before the initiation slot")
            data = _labeled_set(warmup, registry, name_rank)
            model = _single_member_model(data, config, registry, initiation_slot - 1)
        for batch in view.batches:
            decision = decide_batch(model, batch, fusion)
            truth = batch.majority_true_label(name_rank)
            rec = {"slot": batch.slot_index, "stream": batch.stream_id,
                   "true_label": truth}
            if decision.accepted:
                predicted = registry.name_of(decision.predicted_label)
                rec.update(predicted=predicted, correct=predicted == truth,
                           queried=False)
            else:
                oracle.label(batch, {})
                rec.update(predicted=None, correct=True, queried=True)
            records.append(rec)
    report = _finish_report(records, config, manual_slots=manual)
    report.extras["ensemble_size"] = 1 if model is not None else 0
    return report
