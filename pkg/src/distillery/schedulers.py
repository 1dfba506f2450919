"""Scheduling policies driven by a heralded-distillation oracle.

Three policies over the same placement substrate:

* ``schedule_asap`` (offline): every distillation trial, including the solved
  redundancy, runs up front; circuit operations follow strictly after. The
  trial block is laid out as one column of parallel footprints or folded into
  a fixed number of parallel lanes (matrix layout).
* ``schedule_alapt`` (online, time-constrained): a batch of parallel trials
  starts right before each consumer needs a state; surplus successes are
  pooled and later consumers check the pool first.
* ``schedule_alaps`` (online, space-constrained): trials run strictly
  sequentially on a single reserved footprint, either until one succeeds or
  as a fixed pre-reserved sequence.

Circuit operations are pinned to their wire rows; distillation happens in a
reserved band above the circuit, so concurrent trials pay for their own
space. Worst-case oracle runs are fully deterministic, which is what makes
bounding-box reporting reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .icm import CostModel, IcmCircuit, OpKind
from .layout import CapacityError, Metrics, Occupancy, Placement, Schedule, Tag, metrics
from .reliability import ExtraCount, ReliabilityParams, extra_offline, extra_online

_M64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_TYPE_SALT = {"A": 0xA5A5A5A5DEADBEEF, "Y": 0x5A5A5A5AFEEDC0DE}


def _splitmix64(x: int) -> int:
    x = (x + _GAMMA) & _M64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _M64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def derive_seed(base_seed: int, stream: int) -> int:
    """Independent per-stream seed; pure function of (base_seed, stream)."""
    return _splitmix64(_splitmix64(base_seed & _M64) ^ (stream & _M64))


class OracleError(RuntimeError):
    """Scripted oracle ran out of verdicts."""


class HeraldOracle:
    """Source of per-trial success/failure verdicts, replayable by design."""

    spec: dict

    def sample(self, itype: str, index: int) -> bool:
        raise NotImplementedError


class WorstCaseOracle(HeraldOracle):
    """Exactly one success per run of ``n_t`` trials, positioned last."""

    def __init__(self, n_t: int):
        if n_t < 1:
            raise ValueError("n_t must be >= 1")
        self.n_t = n_t
        self.spec = {"mode": "worst", "n_t": n_t}

    def sample(self, itype: str, index: int) -> bool:
        return index % self.n_t == self.n_t - 1


class StochasticOracle(HeraldOracle):
    """Verdict is a pure hash of (seed, type, trial index): replayable."""

    def __init__(self, seed: int, p_f: float | dict[str, float]):
        self.seed = seed & _M64
        if isinstance(p_f, dict):
            rates = {t: float(p_f[t]) for t in ("A", "Y")}
        else:
            rates = {"A": float(p_f), "Y": float(p_f)}
        self._threshold = {t: int(r * (1 << 53)) for t, r in rates.items()}
        self.spec = {"mode": "stochastic", "seed": self.seed, "p_f": rates}

    def sample(self, itype: str, index: int) -> bool:
        u = _splitmix64(_splitmix64(self.seed ^ _TYPE_SALT[itype]) + index) >> 11
        return not u < self._threshold[itype]


class ScriptedOracle(HeraldOracle):
    """Fixed verdict lists per type; True means success."""

    def __init__(self, verdicts: dict[str, list[bool]]):
        self._verdicts = {t: list(verdicts.get(t, [])) for t in ("A", "Y")}
        self.spec = {
            "mode": "scripted",
            "lengths": {t: len(v) for t, v in self._verdicts.items()},
        }

    def sample(self, itype: str, index: int) -> bool:
        try:
            return bool(self._verdicts[itype][index])
        except IndexError:
            raise OracleError(
                f"scripted oracle exhausted for type {itype} at trial {index}"
            ) from None


def sample_verdict(oracle: HeraldOracle, itype: str, index: int) -> bool:
    """True iff trial ``index`` of type ``itype`` succeeds under this oracle."""
    return oracle.sample(itype, index)


@dataclass(frozen=True)
class SchedulerLimits:
    """Hard machine bound: no placement may reach wire m or above."""

    m: int | None = None


@dataclass
class TraceCounts:
    batches: int = 0
    trials: int = 0
    failures: int = 0
    pool_hits: int = 0
    pool_stored: int = 0
    exhausted_batches: int = 0
    ops_placed: int = 0


@dataclass
class ScheduleTrace:
    """Ordered event log plus summary counters.

    Events (present when ``collect_events``): ("batch", type, size, t),
    ("verdict", placement_id, success), ("pool_hit", op_id, placement_id),
    ("pool_stored", placement_id), ("op", op_id, t).
    """

    events: list[tuple] = field(default_factory=list)
    counts: TraceCounts = field(default_factory=TraceCounts)


_TYPE_OF_KIND = {OpKind.INJECT_A: "A", OpKind.INJECT_Y: "Y"}


class _Run:
    """Working state of one scheduler invocation."""

    def __init__(self, c: IcmCircuit, cm: CostModel, limits: SchedulerLimits | None,
                 collect_events: bool):
        self.circuit = c
        self.cm = cm
        self.occ = Occupancy(wire_limit=limits.m if limits else None)
        self.placements: list[Placement] = []
        self.links: dict[int, int] = {}
        self.trace = ScheduleTrace()
        self.collect_events = collect_events
        self.wire_ready = [0] * c.width
        self.op_start: dict[int, int] = {}
        self.pending_holds: list[tuple[int, int, int]] = []  # (op_id, wire, ready)
        self._next_id = 0

    def event(self, *ev) -> None:
        if self.collect_events:
            self.trace.events.append(ev)

    def place(self, op_id: int | None, tag: Tag, itype: str | None,
              t0: int, duration: int, w0: int, width: int) -> Placement:
        p = Placement(self._next_id, op_id, tag, itype, t0, t0 + duration, w0, w0 + width)
        self._next_id += 1
        self.occ.add(p.t0, p.t1, p.w0, p.w1)
        self.placements.append(p)
        return p

    def emit_holds(self, hold_band: int) -> None:
        """Materialise pooled holds once consumer successor times are known.

        A pooled state is parked on one wire from the end of its trial until
        the consumer's first successor picks it up.
        """
        if not self.pending_holds:
            return
        following: dict[int, int] = {}
        for seq in self.circuit.wire_sequences():
            for prev, nxt in zip(seq, seq[1:]):
                following.setdefault(prev.id, nxt.id)
        for op_id, _wire, ready in self.pending_holds:
            successor = following.get(op_id)
            if successor is None or successor not in self.op_start:
                continue
            consumed_at = self.op_start[successor]
            if consumed_at > ready:
                row = _hold_row(self, ready, consumed_at, hold_band)
                self.place(None, Tag.POOLED_HOLD, None, ready, consumed_at - ready, row, 1)

    def finish(self) -> tuple[Schedule, Metrics, ScheduleTrace]:
        s = Schedule(self.circuit.name, self.placements, self.links)
        return s, metrics(s), self.trace


def _circuit_band_top(c: IcmCircuit, cm: CostModel) -> int:
    """First wire row above everything the pinned circuit ops can touch."""
    top = c.width
    for op in c.ops:
        if not op.kind.is_injected:
            top = max(top, min(op.wires) + cm.effective(op.kind).space)
    return top


def _place_circuit_op(run: _Run, op, earliest: int) -> None:
    box = run.cm.effective(op.kind)
    ready = max(earliest, max(run.wire_ready[w] for w in op.wires))
    anchor = min(op.wires)
    t = run.occ.earliest_at(anchor, box.space, box.time, ready)
    run.place(op.id, Tag.CIRCUIT_OP, None, t, box.time, anchor, box.space)
    run.op_start[op.id] = t
    run.trace.counts.ops_placed += 1
    run.event("op", op.id, t)
    for w in op.wires:
        run.wire_ready[w] = t + box.time


def schedule_asap(
    c: IcmCircuit,
    cm: CostModel,
    rel: ReliabilityParams,
    layout: str = "column",
    matrix_rows: int | None = None,
    limits: SchedulerLimits | None = None,
    collect_events: bool = True,
) -> tuple[Schedule, Metrics, ScheduleTrace]:
    """Offline policy: all trials first, then the circuit.

    Redundancy is solved per type for the full initialisation count; verdicts
    are the guaranteed worst case (exactly the needed successes, last). With
    ``layout="matrix"`` the trials of each type are folded into
    ``matrix_rows`` parallel lanes, time-sequenced within a lane.
    """
    if layout not in ("column", "matrix"):
        raise ValueError(f"unknown layout {layout!r}")
    if layout == "matrix":
        if matrix_rows is None or matrix_rows < 1:
            raise ValueError("matrix layout needs matrix_rows >= 1")
    run = _Run(c, cm, limits, collect_events)

    offset = 0
    phase1_end = 0
    consumers = {
        "A": [op for op in c.ops if op.kind is OpKind.INJECT_A],
        "Y": [op for op in c.ops if op.kind is OpKind.INJECT_Y],
    }
    width_needed = 0
    plans = []
    for itype, kind in (("A", OpKind.INJECT_A), ("Y", OpKind.INJECT_Y)):
        n_i = len(consumers[itype])
        if n_i == 0:
            continue
        extra: ExtraCount = extra_offline(n_i, rel)
        box = cm.effective(kind)
        lanes = extra.n_t if layout == "column" else min(matrix_rows, extra.n_t)
        plans.append((itype, box, extra, lanes, offset))
        offset += lanes * box.space
        width_needed = offset
    if limits and limits.m is not None and width_needed > limits.m:
        raise CapacityError(
            f"distillation block needs {width_needed} wires, limit is {limits.m}"
        )

    for itype, box, extra, lanes, base in plans:
        run.event("batch", itype, extra.n_t, 0)
        run.trace.counts.batches += 1
        success_rank = 0
        for j in range(extra.n_t):
            lane, slot = j % lanes, j // lanes
            t0 = slot * box.time
            w0 = base + lane * box.space
            success = j >= extra.s  # worst case: the final n_i trials succeed
            tag = Tag.TRIAL_SUCCESS if success else Tag.TRIAL_FAIL
            p = run.place(None, tag, itype, t0, box.time, w0, box.space)
            run.trace.counts.trials += 1
            if success:
                op = consumers[itype][success_rank]
                run.links[op.id] = p.id
                success_rank += 1
            else:
                run.trace.counts.failures += 1
            run.event("verdict", p.id, success)
            phase1_end = max(phase1_end, p.t1)

    for op in c.ops:
        if op.kind.is_injected:
            run.wire_ready[op.wires[0]] = phase1_end
        else:
            _place_circuit_op(run, op, phase1_end)
    return run.finish()


class _Pool:
    """Per-type FIFO of surplus successful states."""

    def __init__(self):
        self._states: dict[str, deque] = {"A": deque(), "Y": deque()}

    def push(self, itype: str, ready: int, placement_id: int) -> None:
        self._states[itype].append((ready, placement_id))

    def pop(self, itype: str):
        states = self._states[itype]
        return states.popleft() if states else None


def _hold_row(run: _Run, t0: int, t1: int, band_lo: int) -> int:
    """Lowest free row at or above band_lo over the window [t0, t1)."""
    merged = run.occ._busy_rows(t0, t1 - t0, band_lo, None)
    row = band_lo
    for a, b in merged:
        if a > row:
            break
        row = max(row, b)
    if run.occ.wire_limit is not None and row + 1 > run.occ.wire_limit:
        raise CapacityError("no free wire for a pooled state under the limit")
    return row


def _consume_pooled(run: _Run, op, pooled) -> None:
    ready, producer_id = pooled
    w = op.wires[0]
    run.links[op.id] = producer_id
    run.wire_ready[w] = max(ready, run.wire_ready[w])
    run.pending_holds.append((op.id, w, ready))
    run.trace.counts.pool_hits += 1
    run.event("pool_hit", op.id, producer_id)


def schedule_alapt(
    c: IcmCircuit,
    cm: CostModel,
    rel: ReliabilityParams,
    oracle: HeraldOracle,
    limits: SchedulerLimits | None = None,
    use_pool: bool = True,
    collect_events: bool = True,
) -> tuple[Schedule, Metrics, ScheduleTrace]:
    """Online, time-constrained: parallel batch per needed initialisation.

    Each consumer first checks the pool; otherwise a batch of ``n_t`` parallel
    trials starts at the earliest feasible time in the distillation band. A
    fully failed batch triggers another one. Surplus successes are pooled and
    held one wire each above the band until consumed.
    """
    online = extra_online(rel)
    run = _Run(c, cm, limits, collect_events)
    band = _circuit_band_top(c, cm)
    boxes = {"A": cm.effective(OpKind.INJECT_A), "Y": cm.effective(OpKind.INJECT_Y)}
    present = {_TYPE_OF_KIND[op.kind] for op in c.ops if op.kind.is_injected}
    strip_w = max((online.n_t * boxes[t].space for t in present), default=0)
    if limits and limits.m is not None and strip_w and band + strip_w > limits.m:
        raise CapacityError(
            f"batches need wires up to {band + strip_w}, limit is {limits.m}"
        )
    pool = _Pool()
    counters = {"A": 0, "Y": 0}

    for op in c.ops:
        if not op.kind.is_injected:
            _place_circuit_op(run, op, 0)
            continue
        itype = _TYPE_OF_KIND[op.kind]
        pooled = pool.pop(itype) if use_pool else None
        if pooled is not None:
            _consume_pooled(run, op, pooled)
            continue
        box = boxes[itype]
        batch_w = online.n_t * box.space
        earliest = run.wire_ready[op.wires[0]]
        while True:
            t0, w0 = run.occ.first_fit(batch_w, box.time, earliest, band, band + strip_w)
            run.event("batch", itype, online.n_t, t0)
            run.trace.counts.batches += 1
            first_success = None
            for i in range(online.n_t):
                success = oracle.sample(itype, counters[itype])
                counters[itype] += 1
                tag = Tag.TRIAL_SUCCESS if success else Tag.TRIAL_FAIL
                p = run.place(None, tag, itype, t0, box.time, w0 + i * box.space, box.space)
                run.trace.counts.trials += 1
                run.event("verdict", p.id, success)
                if success:
                    if first_success is None:
                        first_success = p
                    else:
                        pool.push(itype, p.t1, p.id)
                        run.trace.counts.pool_stored += 1
                        run.event("pool_stored", p.id)
                else:
                    run.trace.counts.failures += 1
            if first_success is not None:
                run.links[op.id] = first_success.id
                run.wire_ready[op.wires[0]] = first_success.t1
                break
            run.trace.counts.exhausted_batches += 1
            earliest = t0 + box.time
    run.emit_holds(band + strip_w)
    return run.finish()


def schedule_alaps(
    c: IcmCircuit,
    cm: CostModel,
    rel: ReliabilityParams,
    oracle: HeraldOracle,
    limits: SchedulerLimits | None = None,
    strategy: str = "rus",
    use_pool: bool = True,
    collect_events: bool = True,
) -> tuple[Schedule, Metrics, ScheduleTrace]:
    """Online, space-constrained: sequential trials on one footprint.

    ``strategy="rus"`` repeats until a trial succeeds (uncapped under a
    stochastic oracle; the worst-case oracle succeeds on the final budgeted
    trial). ``strategy="fixed"`` reserves exactly ``n_t`` sequential trials,
    uses the first success and pools the rest; a fully failed sequence is
    followed by another reservation.
    """
    if strategy not in ("rus", "fixed"):
        raise ValueError(f"unknown strategy {strategy!r}")
    online = extra_online(rel)
    run = _Run(c, cm, limits, collect_events)
    band = _circuit_band_top(c, cm)
    boxes = {"A": cm.effective(OpKind.INJECT_A), "Y": cm.effective(OpKind.INJECT_Y)}
    present = {_TYPE_OF_KIND[op.kind] for op in c.ops if op.kind.is_injected}
    strip_w = max((boxes[t].space for t in present), default=0)
    if limits and limits.m is not None and strip_w and band + strip_w > limits.m:
        raise CapacityError(
            f"need wires up to {band + strip_w} for one footprint, limit is {limits.m}"
        )
    pool = _Pool()
    counters = {"A": 0, "Y": 0}

    def run_trial(itype: str, earliest: int) -> tuple[Placement, bool]:
        box = boxes[itype]
        t = run.occ.earliest_at(band, box.space, box.time, earliest)
        success = oracle.sample(itype, counters[itype])
        counters[itype] += 1
        tag = Tag.TRIAL_SUCCESS if success else Tag.TRIAL_FAIL
        p = run.place(None, tag, itype, t, box.time, band, box.space)
        run.trace.counts.trials += 1
        if not success:
            run.trace.counts.failures += 1
        run.event("verdict", p.id, success)
        return p, success

    for op in c.ops:
        if not op.kind.is_injected:
            _place_circuit_op(run, op, 0)
            continue
        itype = _TYPE_OF_KIND[op.kind]
        pooled = pool.pop(itype) if use_pool else None
        if pooled is not None:
            _consume_pooled(run, op, pooled)
            continue
        earliest = run.wire_ready[op.wires[0]]
        if strategy == "rus":
            while True:
                p, success = run_trial(itype, earliest)
                earliest = p.t1
                if success:
                    run.links[op.id] = p.id
                    run.wire_ready[op.wires[0]] = p.t1
                    break
        else:
            served = False
            while not served:
                run.event("batch", itype, online.n_t, earliest)
                run.trace.counts.batches += 1
                for _ in range(online.n_t):
                    p, success = run_trial(itype, earliest)
                    earliest = p.t1
                    if success:
                        if not served:
                            run.links[op.id] = p.id
                            run.wire_ready[op.wires[0]] = p.t1
                            served = True
                        else:
                            pool.push(itype, p.t1, p.id)
                            run.trace.counts.pool_stored += 1
                            run.event("pool_stored", p.id)
                if not served:
                    run.trace.counts.exhausted_batches += 1
    run.emit_holds(band + strip_w)
    return run.finish()
