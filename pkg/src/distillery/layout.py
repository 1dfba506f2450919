"""2D space-time placement substrate.

Placements are axis-aligned integer rectangles: time on one axis (exclusive
end), wires on the other. The occupancy tracker answers two queries, both
deterministic: the lexicographically earliest free anchor for a rectangle
(first fit over time, then wires), and the earliest free start time at a
fixed wire band. Schedules are validated structurally, never trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .icm import CostModel, IcmCircuit, OpKind


class CapacityError(RuntimeError):
    """A placement cannot fit under the configured hard wire limit."""


class Tag(Enum):
    CIRCUIT_OP = "op"
    TRIAL_SUCCESS = "success"
    TRIAL_FAIL = "fail"
    POOLED_HOLD = "hold"


@dataclass(frozen=True, slots=True)
class Placement:
    id: int
    op_id: int | None  # circuit op for CIRCUIT_OP, None for trials/holds
    tag: Tag
    itype: str | None  # "A" / "Y" for distillation trials, else None
    t0: int
    t1: int
    w0: int
    w1: int

    @property
    def duration(self) -> int:
        return self.t1 - self.t0

    @property
    def width(self) -> int:
        return self.w1 - self.w0


@dataclass
class Schedule:
    """Set of placed rectangles plus the consumer links of injected inits.

    ``links`` maps each injected-init op id to the id of the successful
    distillation trial whose state it consumed.
    """

    name: str
    placements: list[Placement]
    links: dict[int, int]

    def by_id(self) -> dict[int, Placement]:
        return {p.id: p for p in self.placements}


@dataclass(frozen=True)
class Metrics:
    T: int
    S: int
    BB: int


def metrics(s: Schedule) -> Metrics:
    """Bounding box of the schedule: T = makespan, S = wire extent, BB = T*S."""
    if not s.placements:
        return Metrics(0, 0, 0)
    T = max(p.t1 for p in s.placements)
    S = max(p.w1 for p in s.placements)
    return Metrics(T, S, T * S)


class Occupancy:
    """Mutable rectangle set confined to a single scheduler run."""

    def __init__(self, wire_limit: int | None = None):
        if wire_limit is not None and wire_limit < 1:
            raise CapacityError(f"wire limit must be >= 1, got {wire_limit}")
        self.wire_limit = wire_limit
        self._rects: list[tuple[int, int, int, int]] = []  # (t0, t1, w0, w1)

    def add(self, t0: int, t1: int, w0: int, w1: int) -> None:
        if self.wire_limit is not None and w1 > self.wire_limit:
            raise CapacityError(
                f"placement reaches wire {w1}, above the limit {self.wire_limit}"
            )
        self._rects.append((t0, t1, w0, w1))

    def _busy_rows(self, t: int, duration: int, w_lo: int, w_hi: int | None):
        """Merged occupied wire intervals over the time window [t, t+duration)."""
        spans = []
        for r0, r1, rw0, rw1 in self._rects:
            if r0 < t + duration and r1 > t and (w_hi is None or rw0 < w_hi) and rw1 > w_lo:
                spans.append((rw0, rw1))
        spans.sort()
        merged = []
        for a, b in spans:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        return merged

    def first_fit(
        self,
        width: int,
        duration: int,
        earliest: int = 0,
        w_lo: int = 0,
        w_hi: int | None = None,
    ) -> tuple[int, int]:
        """Lexicographically minimal (t_start, w_lo) anchor for a free rectangle.

        Minimal start time >= earliest first, then the lowest wire at that
        time. ``w_hi`` bounds the search band; the hard wire limit applies on
        top of it.
        """
        if width < 1 or duration < 1:
            raise ValueError("width and duration must be >= 1")
        band_hi = w_hi
        if self.wire_limit is not None:
            band_hi = self.wire_limit if band_hi is None else min(band_hi, self.wire_limit)
        if band_hi is not None and w_lo + width > band_hi:
            raise CapacityError(
                f"width {width} cannot fit between wires {w_lo} and {band_hi}"
            )
        candidates = {earliest}
        candidates.update(r[1] for r in self._rects if r[1] > earliest)
        for t in sorted(candidates):
            merged = self._busy_rows(t, duration, w_lo, band_hi)
            anchor = w_lo
            for a, b in merged:
                if a - anchor >= width:
                    break
                if b > anchor:
                    anchor = b
            if band_hi is None or anchor + width <= band_hi:
                return t, anchor
        raise AssertionError("unreachable: unbounded band always fits")

    def free_row(self, t0: int, t1: int, w_lo: int) -> int:
        """Lowest single row at or above w_lo that is free over [t0, t1)."""
        merged = self._busy_rows(t0, t1 - t0, w_lo, None)
        row = w_lo
        for a, b in merged:
            if a > row:
                break
            row = max(row, b)
        if self.wire_limit is not None and row + 1 > self.wire_limit:
            raise CapacityError("no free wire available under the limit")
        return row

    def earliest_at(self, w_lo: int, width: int, duration: int, earliest: int = 0) -> int:
        """Earliest start >= earliest with rows [w_lo, w_lo+width) free."""
        if self.wire_limit is not None and w_lo + width > self.wire_limit:
            raise CapacityError(
                f"rows up to {w_lo + width} exceed the wire limit {self.wire_limit}"
            )
        busy = []
        for r0, r1, rw0, rw1 in self._rects:
            if rw0 < w_lo + width and rw1 > w_lo and r1 > earliest:
                busy.append((r0, r1))
        busy.sort()
        t = earliest
        for a, b in busy:
            if b <= t:
                continue
            if a >= t + duration:
                break
            t = b
        return t


def validate_schedule(s: Schedule, c: IcmCircuit, cm: CostModel) -> list[str]:
    """Structural check; returns an empty list iff the schedule is sound.

    Checks: pairwise disjointness, one matching placement per circuit op
    (the linked successful trial stands in for an injected init), precedence
    along every wire, distinct producers, and per-tag box shapes.
    """
    violations: list[str] = []
    by_id = s.by_id()
    if len(by_id) != len(s.placements):
        violations.append("duplicate placement ids")

    # sweep over time for pairwise overlap
    ordered = sorted(s.placements, key=lambda p: (p.t0, p.w0, p.id))
    active: list[Placement] = []
    for p in ordered:
        active = [q for q in active if q.t1 > p.t0]
        for q in active:
            if p.w0 < q.w1 and q.w0 < p.w1:
                violations.append(f"placements {q.id} and {p.id} overlap")
        active.append(p)

    # realization interval per op: own placement, or linked success trial
    op_placements: dict[int, list[Placement]] = {}
    for p in s.placements:
        if p.tag is Tag.CIRCUIT_OP and p.op_id is not None:
            op_placements.setdefault(p.op_id, []).append(p)
    span: dict[int, tuple[int, int]] = {}
    for op in c.ops:
        box = cm.effective(op.kind)
        if op.kind.is_injected:
            if op.id in op_placements:
                violations.append(f"injected op {op.id} must not carry its own box")
            if op.id not in s.links:
                violations.append(f"injected op {op.id} has no producer link")
                continue
            producer = by_id.get(s.links[op.id])
            if producer is None:
                violations.append(f"injected op {op.id} links to unknown placement")
                continue
            if producer.tag is not Tag.TRIAL_SUCCESS:
                violations.append(
                    f"injected op {op.id} links to a {producer.tag.value} placement"
                )
            if (producer.duration, producer.width) != (box.time, box.space):
                violations.append(
                    f"producer of op {op.id} is {producer.duration}x{producer.width},"
                    f" expected {box.time}x{box.space}"
                )
            span[op.id] = (producer.t0, producer.t1)
        else:
            placed = op_placements.get(op.id, [])
            if len(placed) != 1:
                violations.append(
                    f"op {op.id} has {len(placed)} placements, expected exactly 1"
                )
                continue
            p = placed[0]
            if (p.duration, p.width) != (box.time, box.space):
                violations.append(
                    f"op {op.id} box is {p.duration}x{p.width},"
                    f" expected {box.time}x{box.space}"
                )
            span[op.id] = (p.t0, p.t1)

    stray = set(op_placements) - {op.id for op in c.ops}
    for op_id in sorted(stray):
        violations.append(f"placement references unknown op {op_id}")

    # wire-derived precedence
    preds = c.predecessors()
    for op in c.ops:
        if op.id not in span:
            continue
        for u in preds[op.id]:
            if u in span and span[op.id][0] < span[u][1]:
                violations.append(
                    f"op {op.id} starts at {span[op.id][0]} before op {u} ends at {span[u][1]}"
                )

    # producers are consumed at most once; trial/hold shapes
    seen_producers: dict[int, int] = {}
    for consumer, producer_id in s.links.items():
        if producer_id in seen_producers:
            violations.append(
                f"trial {producer_id} feeds both ops {seen_producers[producer_id]}"
                f" and {consumer}"
            )
        seen_producers[producer_id] = consumer
    trial_box = {
        "A": cm.effective(OpKind.INJECT_A),
        "Y": cm.effective(OpKind.INJECT_Y),
    }
    for p in s.placements:
        if p.tag in (Tag.TRIAL_SUCCESS, Tag.TRIAL_FAIL):
            if p.itype not in trial_box:
                violations.append(f"trial {p.id} has no distillation type")
                continue
            box = trial_box[p.itype]
            if (p.duration, p.width) != (box.time, box.space):
                violations.append(
                    f"trial {p.id} is {p.duration}x{p.width},"
                    f" expected {box.time}x{box.space}"
                )
        elif p.tag is Tag.POOLED_HOLD and p.width != 1:
            violations.append(f"pooled hold {p.id} is {p.width} wires wide")
    return violations


def export_schedule(s: Schedule) -> bytes:
    """Deterministic JSON export; identical schedules serialize identically."""
    doc = {
        "name": s.name,
        "placements": [
            {
                "id": p.id,
                "op": p.op_id,
                "tag": p.tag.value,
                "type": p.itype,
                "t0": p.t0,
                "t1": p.t1,
                "w0": p.w0,
                "w1": p.w1,
            }
            for p in sorted(s.placements, key=lambda p: p.id)
        ],
        "links": {str(k): v for k, v in sorted(s.links.items())},
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def parse_schedule(data: bytes | str) -> Schedule:
    doc = json.loads(data)
    placements = [
        Placement(
            id=e["id"],
            op_id=e["op"],
            tag=Tag(e["tag"]),
            itype=e["type"],
            t0=e["t0"],
            t1=e["t1"],
            w0=e["w0"],
            w1=e["w1"],
        )
        for e in doc["placements"]
    ]
    links = {int(k): v for k, v in doc["links"].items()}
    return Schedule(name=doc["name"], placements=placements, links=links)
