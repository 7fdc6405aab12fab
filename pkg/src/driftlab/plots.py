"""Figure rendering for run reports and sweeps.

Every CLI report path drops a PNG next to its delimited output so results
can be eyeballed without loading the tables.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_run_timeline(report, path) -> None:
    """Per-slot accuracy and cumulative annotation effort over the run."""
    slots = [s.slot_index for s in report.slots if s.total > 0]
    acc = [s.accuracy for s in report.slots if s.total > 0]
    manual = np.cumsum([s.manual for s in report.slots if s.total > 0])
    total = np.cumsum([s.total for s in report.slots if s.total > 0])
    effort = manual / np.maximum(total, 1)

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(slots, acc, "o-", label="slot accuracy", color="tab:blue")
    ax.plot(slots, effort, "s--", label="cumulative effort", color="tab:orange")
    ax.set_xlabel("time slot")
    ax.set_ylabel("fraction")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(loc="lower left")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_effort_accuracy_curve(curves, path, title="") -> None:
    """Accuracy against annotation effort, one line per configuration.

    `curves` maps a series label to a list of {effort, accuracy} points.
    """
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for label, points in curves.items():
        pts = sorted(points, key=lambda p: p["effort"])
        ax.plot([p["effort"] for p in pts], [p["accuracy"] for p in pts],
                "o-", label=label)
    ax.set_xlabel("annotation effort")
    ax.set_ylabel("accuracy")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0, 1.05)
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_batch_size_curve(rows, path) -> None:
    """Accuracy, effort, and their difference across batch sizes."""
    sizes = [r["batch_size"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(sizes, [r["accuracy"] for r in rows], "o-", label="accuracy")
    ax.plot(sizes, [r["effort"] for r in rows], "s--", label="effort")
    ax.plot(sizes, [r["score"] for r in rows], "^-", label="accuracy - effort")
    ax.set_xlabel("batch size")
    ax.set_ylabel("fraction")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_scatter_snapshot(dataset, path, max_points=4000) -> None:
    """2-D scatter of the dataset colored by ground-truth class (first two
    feature dimensions for higher-dimensional data)."""
    xs, ys, labels = [], [], []
    for batch in dataset.batches():
        for i in range(len(batch)):
            xs.append(batch.features[i, 0])
            ys.append(batch.features[i, 1] if batch.features.shape[1] > 1 else 0.0)
            labels.append(batch.true_labels[i] or "?")
    idx = np.linspace(0, len(xs) - 1, min(max_points, len(xs))).astype(int)
    xs, ys = np.array(xs)[idx], np.array(ys)[idx]
    labels = np.array(labels)[idx]

    fig, ax = plt.subplots(figsize=(6, 6))
    for name in sorted(set(labels)):
        mask = labels == name
        ax.scatter(xs[mask], ys[mask], s=4, alpha=0.5, label=name)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(markerscale=3, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
