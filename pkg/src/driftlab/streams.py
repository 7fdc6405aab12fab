"""Frame/batch/time-slot data model for parallel, unevenly timed streams.

Frames arrive on a shared integer clock. A batch is a run of consecutive
frames of one stream inside one time slot; slot t covers global frames
[t*B, (t+1)*B). All structures are immutable after assembly.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class DimensionMismatchError(ValueError):
    """Frames with differing feature dimensions in one dataset."""


@dataclass(slots=True)
class Frame:
    """One observation: feature vector plus its position in the stream grid."""

    stream_id: str
    global_index: int
    features: np.ndarray
    true_label: Optional[str] = None
    slot_index: int = -1
    intra_index: int = -1


@dataclass
class Batch:
    """Consecutive frames of one stream within one time slot.

    Features are stored stacked for vectorized scoring; `frames` offers the
    per-frame view when needed.
    """

    stream_id: str
    slot_index: int
    features: np.ndarray            # (n, d)
    global_indices: np.ndarray      # (n,)
    true_labels: tuple              # tuple of Optional[str], length n

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def frames(self) -> list:
        return [
            Frame(self.stream_id, int(g), self.features[i], self.true_labels[i],
                  self.slot_index, i)
            for i, g in enumerate(self.global_indices)
        ]

    def majority_true_label(self, name_rank: Optional[dict] = None) -> Optional[str]:
        """Most frequent ground-truth label. Ties break on the lowest rank in
        `name_rank` (dataset first-appearance order), then lexicographically."""
        counts: dict = {}
        for lab in self.true_labels:
            if lab is None:
                continue
            counts[lab] = counts.get(lab, 0) + 1
        if not counts:
            return None
        rank = name_rank or {}

        def key(item):
            lab, n = item
            return (-n, rank.get(lab, float("inf")), lab)

        return min(counts.items(), key=key)[0]


@dataclass
class TimeSlotView:
    """All batches present in one time slot (at most one per stream)."""

    slot_index: int
    batches: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.batches)


@dataclass
class StreamDataset:
    """Batched view of a frame collection, aligned on the global clock."""

    batch_size: int
    feature_dim: int
    slots: list = field(default_factory=list)   # list[TimeSlotView]
    n_frames: int = 0
    stream_ids: tuple = ()
    has_ground_truth: bool = False

    @property
    def horizon(self) -> int:
        return len(self.slots)

    def slot(self, t: int) -> TimeSlotView:
        """Slot view at t; out-of-range t yields an empty view."""
        if 0 <= t < len(self.slots):
            return self.slots[t]
        return TimeSlotView(slot_index=t)

    def batches(self) -> Iterable[Batch]:
        for view in self.slots:
            yield from view.batches

    def n_batches(self) -> int:
        return sum(len(v) for v in self.slots)

    def class_names(self) -> list:
        """Ground-truth class names in order of first appearance."""
        seen: list = []
        for view in self.slots:
            for batch in view.batches:
                for lab in batch.true_labels:
                    if lab is not None and lab not in seen:
                        seen.append(lab)
        return seen


def time_slot_view(dataset: StreamDataset, t: int) -> TimeSlotView:
    return dataset.slot(t)


def _cut_stream(frames: list, batch_size: int) -> list:
    """Cut one stream's frames (sorted by global index) into batch runs.

    Runs shorter than ceil(B/2) merge into the preceding batch of the
    stream when one exists, otherwise they are held and prepended to the
    following run. A lone short run stands alone.
    """
    min_len = (batch_size + 1) // 2
    runs: list = []          # list[(slot, list[Frame])]
    for fr in frames:
        slot = fr.global_index // batch_size
        if runs and runs[-1][0] == slot:
            runs[-1][1].append(fr)
        else:
            runs.append((slot, [fr]))

    merged: list = []
    pending: Optional[list] = None   # short head run awaiting the next run
    for slot, run in runs:
        if pending is not None:
            run = pending + run
            pending = None
        if len(run) >= min_len:
            merged.append((slot, run))
        elif merged:
            merged[-1] = (merged[-1][0], merged[-1][1] + run)
        else:
            pending = run
    if pending is not None:
        # Stream consists of a single short run; emit it rather than drop frames.
        merged.append((pending[0].global_index // batch_size, pending))
    return merged


def assemble_batches(frames: Sequence[Frame], batch_size: int) -> StreamDataset:
    """Group frames into aligned batches of nominally `batch_size` frames.

    Every stream is cut against the shared clock so that batches of
    different streams in the same slot line up. Raises
    DimensionMismatchError when feature dimensions disagree.
    """
    if batch_size < 1:
        raise ValueError(f"batch size must be >= 1, got {batch_size}")
    frames = list(frames)
    if not frames:
        return StreamDataset(batch_size=batch_size, feature_dim=0)

    dim = int(np.asarray(frames[0].features).shape[-1])
    per_stream: dict = {}
    has_truth = False
    for fr in frames:
        d = int(np.asarray(fr.features).shape[-1])
        if d != dim:
            raise DimensionMismatchError(
                f"frame at global index {fr.global_index} has dimension {d}, expected {dim}")
        if fr.true_label is not None:
            has_truth = True
        per_stream.setdefault(fr.stream_id, []).append(fr)

    slot_map: dict = {}
    max_slot = 0
    for stream_id in sorted(per_stream):
        stream_frames = sorted(per_stream[stream_id], key=lambda f: f.global_index)
        for slot, run in _cut_stream(stream_frames, batch_size):
            feats = np.stack([np.asarray(f.features, dtype=float) for f in run])
            batch = Batch(
                stream_id=stream_id,
                slot_index=slot,
                features=feats,
                global_indices=np.array([f.global_index for f in run], dtype=int),
                true_labels=tuple(f.true_label for f in run),
            )
            slot_map.setdefault(slot, []).append(batch)
            max_slot = max(max_slot, slot)

    slots = []
    for t in range(max_slot + 1):
        batches = sorted(slot_map.get(t, []), key=lambda b: b.stream_id)
        slots.append(TimeSlotView(slot_index=t, batches=batches))

    return StreamDataset(
        batch_size=batch_size,
        feature_dim=dim,
        slots=slots,
        n_frames=len(frames),
        stream_ids=tuple(sorted(per_stream)),
        has_ground_truth=has_truth,
    )
