"""Synthetic benchmark: seven drifting 2-D Gaussian classes and the four
stock scenarios built from them.

Each class is a piecewise table of drift-rate intervals mapping r to
(mu_x, mu_y, delta_x, delta_y), all linear in r. Deltas are standard
deviations. Classes C5 and C6 drift gradually; C1, C4 and C7 jump once;
C2 and C3 jump three times. Intervals absent from a class's table are
undefined: the generator refuses to schedule the class there, and a
stream whose window spans a gap jumps across it (that is the abrupt
drift).
"""

import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .streams import Frame

DELTA_FLOOR = 1e-6


class UndefinedSegmentError(ValueError):
    """Requested a class at a drift rate outside its defined intervals."""


@dataclass(frozen=True)
class TableRow:
    r_lo: float
    r_hi: float
    mu_x: tuple      # (intercept, slope) of a + b*r
    mu_y: tuple
    delta_x: tuple
    delta_y: tuple

    def contains(self, r: float) -> bool:
        return self.r_lo <= r < self.r_hi

    def params(self, r: float) -> tuple:
        ev = lambda c: c[0] + c[1] * r
        return (ev(self.mu_x), ev(self.mu_y),
                max(ev(self.delta_x), DELTA_FLOOR), max(ev(self.delta_y), DELTA_FLOOR))


def _row(lo, hi, mx, my, dx, dy):
    return TableRow(lo, hi, mx, my, dx, dy)


# Piecewise parametric table of the seven classes. Coefficients are
# (intercept, slope) pairs of linear functions of the drift rate r.
CLASS_TABLE = {
    "C1": (
        _row(0.00, 0.25, (2, 0), (5, 0), (0, 0.5), (0.5, 2)),
        _row(0.50, 0.75, (10, 0), (-10, 5), (1, 0), (2, -1)),
    ),
    "C2": (
        _row(0.00, 0.25, (5, -5), (8, 0), (3, -10), (1, 0)),
        _row(0.25, 0.50, (15, 0), (-1, 5), (1, 0), (2, 3)),
        _row(0.50, 0.75, (17, 0), (2, 5), (0.25, 0), (0.15, 0)),
        _row(0.75, 1.00, (20, 0), (0, 4), (1, 0), (2, 0)),
    ),
    "C3": (
        _row(0.00, 0.25, (5, -5), (2, 0), (0.5, 10), (0.5, 0)),
        _row(0.25, 0.50, (1, -4), (2, 0), (0.5, 0), (3, -4)),
        _row(0.50, 0.75, (-1, 0), (-2, -4), (0.25, 0), (0.15, 0)),
        _row(0.75, 1.00, (-7, 0), (-5, -1), (7, 4), (1, 4)),
    ),
    "C4": (
        _row(0.00, 0.25, (8, 0), (8, 15), (0.5, 0), (0.5, 0)),
        _row(0.25, 0.50, (5, -5), (13, 0), (0.25, 4), (0.5, 4)),
    ),
    "C5": (
        _row(0.00, 0.25, (12, 0), (15, 0), (2, 0), (2, 2)),
    ),
    "C6": (
        _row(0.00, 0.25, (-15, 0), (-5, 15), (1, 0), (2, 3)),
    ),
    # The final C7 row is printed garbled in the source table; this is the
    # literal reading (see README notes on the benchmark).
    "C7": (
        _row(0.00, 0.25, (10, 0), (0, 5), (0.5, 0), (2, 3)),
        _row(0.75, 1.00, (-10, 0), (-1, 5), (0, 1), (2, 3)),
    ),
}

CLASS_IDS = tuple(CLASS_TABLE)


def defined_segments(class_id: str) -> list:
    """(r_lo, r_hi) intervals where the class is defined, in order."""
    return [(row.r_lo, row.r_hi) for row in CLASS_TABLE[class_id]]


def class_params(class_id: str, r: float) -> tuple:
    """(mu_x, mu_y, delta_x, delta_y) at drift rate r."""
    if class_id not in CLASS_TABLE:
        raise KeyError(f"unknown class {class_id!r}")
    if not 0.0 <= r < 1.0:
        raise UndefinedSegmentError(f"drift rate must lie in [0, 1), got {r}")
    for row in CLASS_TABLE[class_id]:
        if row.contains(r):
            return row.params(r)
    raise UndefinedSegmentError(f"class {class_id} is undefined at r={r}")


def sample_frame(class_id: str, r: float, rng: np.random.Generator) -> np.ndarray:
    mu_x, mu_y, d_x, d_y = class_params(class_id, r)
    return np.array([rng.normal(mu_x, d_x), rng.normal(mu_y, d_y)])


@dataclass(frozen=True)
class StreamSpec:
    """One scheduled stream: a class traversing part of its r-domain.

    `r_segments` lists the (lo, hi) intervals visited in order; progress is
    proportional to arc length, so a two-segment schedule jumps across the
    gap between them partway through the stream.
    """

    stream_id: str
    class_id: str
    start_frame: int
    length: int
    r_segments: tuple = ()

    def segments(self) -> list:
        segs = self.r_segments or tuple(defined_segments(self.class_id))
        out = []
        for lo, hi in segs:
            if not any(row.r_lo <= lo and hi <= row.r_hi for row in CLASS_TABLE[self.class_id]):
                raise UndefinedSegmentError(
                    f"stream {self.stream_id}: ({self.class_id}, [{lo}, {hi})) "
                    "is not inside a defined interval")
            out.append((float(lo), float(hi)))
        return out

    def rate_at(self, i: int) -> float:
        """Drift rate of frame i (0-based) within this stream."""
        segs = self.segments()
        total = sum(hi - lo for lo, hi in segs)
        s = (i / self.length) * total
        for lo, hi in segs:
            span = hi - lo
            if s < span or (lo, hi) == segs[-1]:
                return min(lo + s, hi - 1e-12)
            s -= span
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class ScenarioSpec:
    scenario_id: str
    streams: tuple
    description: str = ""


def _spec(sid, cid, start, length, segments=()):
    return StreamSpec(sid, cid, start, length, tuple(segments))


def _scenario_one(length: int) -> ScenarioSpec:
    """Five classes drifting gradually: every stream stays inside one row."""
    first = {c: defined_segments(c)[0] for c in ("C1", "C2", "C3", "C5", "C6")}
    streams = tuple(
        _spec(f"s{i}-{cid}", cid, 0, length, (first[cid],))
        for i, cid in enumerate(("C1", "C2", "C3", "C5", "C6"))
    )
    return ScenarioSpec("I", streams, "gradual drift, 5 classes")


def _scenario_two(length: int) -> ScenarioSpec:
    """Abrupt drifts: each stream traverses its class's full defined domain,
    jumping across every row boundary and gap."""
    streams = tuple(
        _spec(f"s{i}-{cid}", cid, 0, length)
        for i, cid in enumerate(("C1", "C2", "C3", "C4", "C7"))
    )
    return ScenarioSpec("II", streams, "abrupt drift, 5 classes")


def _scenario_three(length: int) -> ScenarioSpec:
    """Objects leave and re-appear. Three classes vanish together and return
    after an absence during which only the anchor class C5 stays on air, then
    their later streams continue the same drift trajectories."""
    first_leg = int(round(length * 0.4375))       # ends mid-run
    re_entry = int(round(length * 0.625))         # returns after the gap
    second_leg = length - re_entry
    streams = (
        _spec("s0-C5", "C5", 0, length, ((0.0, 0.25),)),
        _spec("s1-C1", "C1", 0, first_leg, ((0.0, 0.125),)),
        _spec("s2-C1", "C1", re_entry, second_leg, ((0.125, 0.25),)),
        _spec("s3-C2", "C2", 0, first_leg, ((0.25, 0.375),)),
        _spec("s4-C2", "C2", re_entry, second_leg, ((0.375, 0.5),)),
        _spec("s5-C6", "C6", 0, first_leg, ((0.0, 0.125),)),
        _spec("s6-C6", "C6", re_entry, second_leg, ((0.125, 0.25),)),
    )
    return ScenarioSpec("III", streams, "re-appearing objects")


def _scenario_four(length: int) -> ScenarioSpec:
    """Class evolution on top of drift: three jumping classes run from the
    start, and C7 enters mid-run between the drifted positions of C1 (below)
    and C2 (to the right), where the ensemble cannot call it confidently.

    C2's slowed drift window keeps its mid trajectory alive long enough to
    overlap C1's late segment at the entry time.
    """
    entry = int(round(length * 0.58))
    streams = (
        _spec("s0-C1", "C1", 0, length),
        _spec("s1-C2", "C2", 0, length, ((0.0, 0.25), (0.25, 0.5), (0.5, 0.6))),
        _spec("s2-C3", "C3", 0, length),
        _spec("s3-C5", "C5", 0, length, ((0.0, 0.25),)),
        _spec("s4-C7", "C7", entry, length - entry, ((0.0, 0.25),)),
    )
    return ScenarioSpec("IV", streams, "class evolution plus concept drift")


# Stream length defaults: scenarios II and IV use longer horizons so their
# drift events stay a small fraction of the batch budget, and off-multiple
# lengths keep row boundaries away from the default batch boundaries.
DEFAULT_LENGTHS = {"I": 3000, "II": 5800, "III": 4000, "IV": 5800}

_BUILDERS = {"I": _scenario_one, "II": _scenario_two, "III": _scenario_three,
             "IV": _scenario_four}


def scenario_spec(scenario_id: str, length: Optional[int] = None) -> ScenarioSpec:
    sid = scenario_id.upper()
    if sid not in _BUILDERS:
        raise KeyError(f"unknown scenario {scenario_id!r}; expected one of I, II, III, IV")
    return _BUILDERS[sid](length or DEFAULT_LENGTHS[sid])


def generate_stream(spec: StreamSpec, seed: int) -> list:
    """Frames of one stream, seeded independently of its siblings."""
    rng = np.random.default_rng([seed, zlib.crc32(spec.stream_id.encode())])
    frames = []
    for i in range(spec.length):
        r = spec.rate_at(i)
        frames.append(Frame(
            stream_id=spec.stream_id,
            global_index=spec.start_frame + i,
            features=sample_frame(spec.class_id, r, rng),
            true_label=spec.class_id,
        ))
    return frames


def build_scenario(scenario_id: str, seed: int, length: Optional[int] = None,
                   spec: Optional[ScenarioSpec] = None) -> list:
    """All frames of a scenario, ordered by global clock then stream id."""
    spec = spec or scenario_spec(scenario_id, length)
    frames = []
    for stream in spec.streams:
        frames.extend(generate_stream(stream, seed))
    frames.sort(key=lambda f: (f.global_index, f.stream_id))
    return frames
