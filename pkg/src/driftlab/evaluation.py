"""Run reports, the accuracy / annotation-effort metrics, and sweeps.

Accuracy is the unweighted mean of per-slot accuracies; manually labeled
batches count toward the totals but never as misclassifications.
Annotation effort is the fraction of batches sent to the oracle.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class SlotCounters:
    slot_index: int
    total: int = 0           # N: batches decided this slot (== TB)
    misclassified: int = 0   # MC: auto-accepted with a wrong label
    manual: int = 0          # MLB: oracle-labeled batches

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            return 1.0
        return (self.total - self.misclassified) / self.total


@dataclass
class RunReport:
    config: dict = field(default_factory=dict)
    seed: Optional[int] = None
    slots: list = field(default_factory=list)       # list[SlotCounters]
    decisions: list = field(default_factory=list)   # list[dict], one per batch
    class_names: list = field(default_factory=list)
    final_model: object = None                      # CompositeModel, not serialized
    extras: dict = field(default_factory=dict)      # strategy-specific diagnostics

    def counters(self) -> dict:
        return {
            "N": sum(s.total for s in self.slots),
            "MC": sum(s.misclassified for s in self.slots),
            "MLB": sum(s.manual for s in self.slots),
            "TB": sum(s.total for s in self.slots),
        }

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "seed": self.seed,
            "class_names": self.class_names,
            "slots": [
                {"slot": s.slot_index, "N": s.total, "MC": s.misclassified,
                 "MLB": s.manual, "TB": s.total}
                for s in self.slots
            ],
            "metrics": {
                "accuracy": accuracy(self),
                "annotation_effort": annotation_effort(self),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def accuracy(report: RunReport, window: Optional[tuple] = None) -> float:
    """Mean of per-slot accuracies over slots holding at least one batch."""
    slots = report.slots
    if window is not None:
        lo, hi = window
        slots = [s for s in slots if lo <= s.slot_index < hi]
    populated = [s for s in slots if s.total > 0]
    if not populated:
        return 1.0
    return float(np.mean([s.accuracy for s in populated]))


def annotation_effort(report: RunReport, window: Optional[tuple] = None) -> float:
    slots = report.slots
    if window is not None:
        lo, hi = window
        slots = [s for s in slots if lo <= s.slot_index < hi]
    total = sum(s.total for s in slots)
    if total == 0:
        return 0.0
    return sum(s.manual for s in slots) / total


def report_from_decisions(decisions: list) -> RunReport:
    """Recompute a report purely from decision-log records."""
    slot_map: dict = {}
    for rec in decisions:
        c = slot_map.setdefault(rec["slot"], SlotCounters(rec["slot"]))
        c.total += 1
        if rec["queried"]:
            c.manual += 1
        elif rec.get("true_label") is not None and rec["final_label"] != rec["true_label"]:
            c.misclassified += 1
    report = RunReport(decisions=list(decisions))
    report.slots = [slot_map[t] for t in sorted(slot_map)]
    return report


def decision_log_lines(report: RunReport) -> str:
    """Line-delimited JSON, one record per batch in decision order."""
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in report.decisions)


# ---------------------------------------------------------------------------
# Sweeps


def sweep_threshold(dataset, base_config, thresholds, seeds) -> list:
    """One (threshold, seed, effort, accuracy) record per grid point, plus
    per-threshold medians across seeds."""
    from .loop import run, ScriptedOracle

    points = []
    for threshold in thresholds:
        for seed in seeds:
            config = base_config.replaced(threshold=threshold, seed=seed)
            report = run(dataset, ScriptedOracle(), config)
            points.append({
                "threshold": threshold,
                "seed": seed,
                "effort": annotation_effort(report),
                "accuracy": accuracy(report),
                "queries": report.counters()["MLB"],
            })
    return points


def median_curve(points: list) -> list:
    """Per-threshold median (effort, accuracy) sorted by effort."""
    by_threshold: dict = {}
    for p in points:
        by_threshold.setdefault(p["threshold"], []).append(p)
    curve = []
    for threshold, group in by_threshold.items():
        curve.append({
            "threshold": threshold,
            "effort": float(np.median([g["effort"] for g in group])),
            "accuracy": float(np.median([g["accuracy"] for g in group])),
        })
    curve.sort(key=lambda c: (c["effort"], c["threshold"]))
    return curve


def batch_size_grid(longest_stream: int, n_points: int = 50) -> list:
    """Equally spaced batch sizes over [1%, 50%] of the longest stream."""
    lo = max(1.0, 0.01 * longest_stream)
    hi = max(lo, 0.5 * longest_stream)
    grid = sorted({max(1, int(round(b))) for b in np.linspace(lo, hi, n_points)})
    return grid


def sweep_batch_size(frames, longest_stream, base_config, seeds,
                     n_points: int = 50) -> dict:
    """Re-batch the frame stream for each grid value and score a full run.

    The preferred batch size maximizes accuracy minus effort: the gain of
    a correct automatic label over the cost of asking.
    """
    from .loop import run, ScriptedOracle
    from .streams import assemble_batches

    rows = []
    for B in batch_size_grid(longest_stream, n_points):
        dataset = assemble_batches(frames, B)
        efforts, accuracies = [], []
        for seed in seeds:
            config = base_config.replaced(batch_size=B, seed=seed)
            report = run(dataset, ScriptedOracle(), config)
            efforts.append(annotation_effort(report))
            accuracies.append(accuracy(report))
        rows.append({
            "batch_size": B,
            "accuracy": float(np.median(accuracies)),
            "effort": float(np.median(efforts)),
            "score": float(np.median(accuracies) - np.median(efforts)),
        })
    best = max(rows, key=lambda r: r["score"])
    return {"rows": rows, "best_batch_size": best["batch_size"]}
