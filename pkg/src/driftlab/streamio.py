"""Stream file format and offline PCA preprocessing.

A stream file is line-delimited text: one header line, then one frame per
line as tab-separated fields

    stream_id <TAB> global_index <TAB> label-or-"-" <TAB> f1 <TAB> ... <TAB> fd

The header carries the format version, feature dimension, frame count,
stream roster, and a ground-truth flag, e.g.

    #driftlab-stream v1 dim=2 frames=6000 ground_truth=1 streams=s0,s1

Floats are written with repr round-trip precision so write->read is the
identity.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .streams import Frame

FORMAT_NAME = "#driftlab-stream"
FORMAT_VERSION = 1


class StreamFileError(ValueError):
    """Malformed stream file; carries the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)


@dataclass
class StreamFileHeader:
    version: int
    dim: int
    frames: int
    ground_truth: bool
    streams: tuple


def _parse_header(line: str) -> StreamFileHeader:
    parts = line.strip().split()
    if not parts or parts[0] != FORMAT_NAME:
        raise StreamFileError(f"not a stream file (expected {FORMAT_NAME} header)", 1)
    fields = {}
    version = None
    for tok in parts[1:]:
        if tok.startswith("v") and "=" not in tok:
            version = int(tok[1:])
        elif "=" in tok:
            key, val = tok.split("=", 1)
            fields[key] = val
    if version != FORMAT_VERSION:
        raise StreamFileError(f"unsupported format version {version!r}", 1)
    try:
        return StreamFileHeader(
            version=version,
            dim=int(fields["dim"]),
            frames=int(fields["frames"]),
            ground_truth=fields.get("ground_truth", "0") == "1",
            streams=tuple(fields["streams"].split(",")) if fields.get("streams") else (),
        )
    except (KeyError, ValueError) as exc:
        raise StreamFileError(f"bad header field: {exc}", 1) from exc


def save_stream_file(path, frames) -> None:
    frames = list(frames)
    dim = int(np.asarray(frames[0].features).shape[-1]) if frames else 0
    streams = sorted({f.stream_id for f in frames})
    has_truth = any(f.true_label is not None for f in frames)
    with open(path, "w") as fh:
        fh.write(f"{FORMAT_NAME} v{FORMAT_VERSION} dim={dim} frames={len(frames)} "
                 f"ground_truth={int(has_truth)} streams={','.join(streams)}\n")
        for fr in frames:
            label = fr.true_label if fr.true_label is not None else "-"
            feats = "\t".join(repr(float(v)) for v in np.asarray(fr.features))
            fh.write(f"{fr.stream_id}\t{fr.global_index}\t{label}\t{feats}\n")


def load_stream_file(path) -> tuple:
    """Returns (header, frames)."""
    with open(path) as fh:
        header_line = fh.readline()
        if not header_line:
            raise StreamFileError("empty file", 1)
        header = _parse_header(header_line)
        frames = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 + header.dim:
                raise StreamFileError(
                    f"expected {3 + header.dim} fields, found {len(parts)}", lineno)
            stream_id, idx_s, label = parts[0], parts[1], parts[2]
            try:
                global_index = int(idx_s)
                feats = np.array([float(v) for v in parts[3:]])
            except ValueError as exc:
                raise StreamFileError(f"malformed record: {exc}", lineno) from exc
            frames.append(Frame(
                stream_id=stream_id,
                global_index=global_index,
                features=feats,
                true_label=None if label == "-" else label,
            ))
    if len(frames) != header.frames:
        raise StreamFileError(
            f"header promises {header.frames} frames, file holds {len(frames)}")
    return header, frames


# ---------------------------------------------------------------------------
# PCA (offline, whole-file preprocessing)


@dataclass
class PcaProjection:
    mean: np.ndarray                  # (d,)
    components: np.ndarray            # (d, q), orthonormal columns
    explained_variance_ratio: np.ndarray


def pca_fit(X: np.ndarray, q: int) -> PcaProjection:
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    if q > d:
        raise ValueError(f"q={q} exceeds feature dimension {d}")
    if q > n:
        raise ValueError(f"q={q} exceeds sample count {n}")
    mean = X.mean(axis=0)
    _, s, vt = np.linalg.svd(X - mean, full_matrices=False)
    var = s ** 2 / max(n - 1, 1)
    total = var.sum()
    ratio = var[:q] / total if total > 0 else np.zeros(q)
    return PcaProjection(mean=mean, components=vt[:q].T,
                         explained_variance_ratio=ratio)


def pca_apply(projection: PcaProjection, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return (X - projection.mean) @ projection.components


def pca_fit_frames(frames, q: int) -> PcaProjection:
    return pca_fit(np.stack([f.features for f in frames]), q)


def pca_apply_frames(projection: PcaProjection, frames) -> list:
    X = pca_apply(projection, np.stack([f.features for f in frames]))
    return [Frame(f.stream_id, f.global_index, X[i], f.true_label)
            for i, f in enumerate(frames)]


def save_projection(path, projection: PcaProjection) -> None:
    with open(path, "w") as fh:
        json.dump({
            "mean": projection.mean.tolist(),
            "components": projection.components.tolist(),
            "explained_variance_ratio": projection.explained_variance_ratio.tolist(),
        }, fh)


def load_projection(path) -> PcaProjection:
    with open(path) as fh:
        doc = json.load(fh)
    return PcaProjection(np.array(doc["mean"]), np.array(doc["components"]),
                         np.array(doc["explained_variance_ratio"]))
