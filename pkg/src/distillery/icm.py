"""ICM circuit model: operations, wire-derived precedence, and box costs.

An ICM circuit contains only initialisations, CNOTs and measurements. Two of
the initialisation kinds (the injected A and Y states) are probabilistic and
heralded; everything else is deterministic. Precedence is implicit: two
operations are ordered iff they share a wire, in list order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum


class CircuitError(ValueError):
    """Semantic error in a circuit document; message names the violated rule."""


class CircuitSyntaxError(CircuitError):
    """Malformed circuit document (bad JSON or wrong field shapes)."""


class OpKind(Enum):
    BASIS_INIT = "basis_init"
    INJECT_A = "inject_a"
    INJECT_Y = "inject_y"
    CNOT = "cnot"
    MEASURE = "measure"

    @property
    def is_init(self) -> bool:
        return self in (OpKind.BASIS_INIT, OpKind.INJECT_A, OpKind.INJECT_Y)

    @property
    def is_injected(self) -> bool:
        return self in (OpKind.INJECT_A, OpKind.INJECT_Y)

    @property
    def arity(self) -> int:
        return 2 if self is OpKind.CNOT else 1


INJECTED_KINDS = (OpKind.INJECT_A, OpKind.INJECT_Y)


@dataclass(frozen=True)
class Operation:
    id: int
    kind: OpKind
    wires: tuple[int, ...]  # control first for CNOT

    def __post_init__(self):
        if len(self.wires) != self.kind.arity:
            raise CircuitError(
                f"op {self.id}: {self.kind.value} takes {self.kind.arity} "
                f"wire(s), got {len(self.wires)}"
            )
        if self.kind is OpKind.CNOT and self.wires[0] == self.wires[1]:
            raise CircuitError(f"op {self.id}: cnot operands must be distinct")


@dataclass(frozen=True)
class IcmCircuit:
    """Validated ICM circuit; immutable, safe to share across scheduler runs."""

    name: str
    width: int
    ops: tuple[Operation, ...]

    def __post_init__(self):
        _validate(self)

    def wire_sequences(self) -> list[list[Operation]]:
        """Per-wire operation lists, in precedence order."""
        seqs: list[list[Operation]] = [[] for _ in range(self.width)]
        for op in self.ops:
            for w in op.wires:
                seqs[w].append(op)
        return seqs

    def predecessors(self) -> dict[int, list[int]]:
        """op id -> ids of its immediate wire predecessors."""
        preds: dict[int, list[int]] = {op.id: [] for op in self.ops}
        last: dict[int, int] = {}
        for op in self.ops:
            for w in op.wires:
                if w in last:
                    preds[op.id].append(last[w])
                last[w] = op.id
        return preds

    def count(self, kind: OpKind) -> int:
        return sum(1 for op in self.ops if op.kind is kind)


def _validate(c: IcmCircuit) -> None:
    if c.width < 1:
        raise CircuitError(f"width must be >= 1, got {c.width}")
    seen_measure = [False] * c.width
    started = [False] * c.width
    for op in c.ops:
        for w in op.wires:
            if not 0 <= w < c.width:
                raise CircuitError(
                    f"op {op.id}: wire {w} out of range for width {c.width}"
                )
            if seen_measure[w]:
                raise CircuitError(f"op {op.id}: wire {w} already measured")
            if not started[w]:
                if not op.kind.is_init:
                    raise CircuitError(
                        f"op {op.id}: wire {w} must start with an initialisation,"
                        f" got {op.kind.value}"
                    )
                started[w] = True
            elif op.kind.is_init:
                raise CircuitError(f"op {op.id}: wire {w} initialised twice")
        if op.kind is OpKind.MEASURE:
            seen_measure[op.wires[0]] = True
    for w in range(c.width):
        if not started[w]:
            raise CircuitError(f"wire {w} has no operations")
        if not seen_measure[w]:
            raise CircuitError(f"wire {w} is never measured")


@dataclass(frozen=True)
class CostBox:
    """Axis-aligned space-time footprint of one operation."""

    time: int
    space: int

    def __post_init__(self):
        if self.time < 0 or self.space < 0:
            raise CircuitError(f"cost box must be non-negative, got {self}")


DEFAULT_BASE_COSTS = {
    OpKind.INJECT_A: CostBox(time=7, space=15),
    OpKind.INJECT_Y: CostBox(time=6, space=7),
    OpKind.CNOT: CostBox(time=1, space=2),
    OpKind.BASIS_INIT: CostBox(time=1, space=1),
    OpKind.MEASURE: CostBox(time=1, space=1),
}


@dataclass(frozen=True)
class CostModel:
    """Per-kind base boxes plus movement padding for the injected kinds.

    The pad widens both axes of the padded kinds; by default only the
    injected initialisations carry it (it pays for connecting successfully
    distilled states to their consumers).
    """

    base: dict[OpKind, CostBox] = field(default_factory=lambda: dict(DEFAULT_BASE_COSTS))
    movement_pad: int = 2
    padded_kinds: frozenset[OpKind] = frozenset(INJECTED_KINDS)

    def effective(self, kind: OpKind) -> CostBox:
        if kind not in self.base:
            raise CircuitError(f"cost model has no entry for {kind.value}")
        box = self.base[kind]
        if kind in self.padded_kinds:
            return CostBox(box.time + self.movement_pad, box.space + self.movement_pad)
        if box.time == 0:
            raise CircuitError(f"{kind.value} has zero duration; not schedulable")
        return box

    def to_json_dict(self) -> dict:
        return {
            "base": {k.value: {"time": b.time, "space": b.space} for k, b in sorted(self.base.items(), key=lambda kv: kv[0].value)},
            "movement_pad": self.movement_pad,
            "padded_kinds": sorted(k.value for k in self.padded_kinds),
        }


def effective_cost(model: CostModel, kind: OpKind) -> CostBox:
    """Base cost plus movement pad on both axes iff the kind is padded."""
    return model.effective(kind)


def parse_cost_model(data: bytes | str) -> CostModel:
    """Cost-model JSON: {"base": {kind: {"time", "space"}}, "movement_pad", "padded_kinds"}."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise CircuitSyntaxError(f"cost model is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise CircuitSyntaxError("cost model document must be a JSON object")
    base = dict(DEFAULT_BASE_COSTS)
    for key, val in doc.get("base", {}).items():
        base[_kind_from_code(key)] = CostBox(int(val["time"]), int(val["space"]))
    padded = doc.get("padded_kinds")
    padded_kinds = (
        frozenset(_kind_from_code(k) for k in padded)
        if padded is not None
        else frozenset(INJECTED_KINDS)
    )
    return CostModel(
        base=base,
        movement_pad=int(doc.get("movement_pad", 2)),
        padded_kinds=padded_kinds,
    )


def _kind_from_code(code: str) -> OpKind:
    try:
        return OpKind(code)
    except ValueError:
        raise CircuitSyntaxError(f"unknown operation kind {code!r}") from None


def parse_circuit(data: bytes | str) -> IcmCircuit:
    """Parse and validate a circuit JSON document.

    Schema: {"name": str, "width": int,
             "ops": [{"kind": <kind code>, "wires": [int, ...]}, ...]}
    Raises CircuitSyntaxError with a position for malformed JSON and
    CircuitError naming the violated invariant for semantic problems.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise CircuitSyntaxError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(doc, dict):
        raise CircuitSyntaxError("circuit document must be a JSON object")
    for field_name in ("name", "width", "ops"):
        if field_name not in doc:
            raise CircuitSyntaxError(f"missing required field {field_name!r}")
    if not isinstance(doc["ops"], list):
        raise CircuitSyntaxError("'ops' must be a list")
    ops = []
    for i, entry in enumerate(doc["ops"]):
        if not isinstance(entry, dict) or "kind" not in entry or "wires" not in entry:
            raise CircuitSyntaxError(f"op {i}: each op needs 'kind' and 'wires'")
        kind = _kind_from_code(entry["kind"])
        wires = entry["wires"]
        if not isinstance(wires, list) or not all(isinstance(w, int) for w in wires):
            raise CircuitSyntaxError(f"op {i}: 'wires' must be a list of integers")
        ops.append(Operation(id=i, kind=kind, wires=tuple(wires)))
    return IcmCircuit(name=str(doc["name"]), width=int(doc["width"]), ops=tuple(ops))


def serialize_circuit(c: IcmCircuit) -> bytes:
    """Inverse of parse_circuit on valid circuits (round-trip identity)."""
    doc = {
        "name": c.name,
        "width": c.width,
        "ops": [{"kind": op.kind.value, "wires": list(op.wires)} for op in c.ops],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


@dataclass(frozen=True)
class CircuitStats:
    width: int
    n_ops: int
    n_inject_a: int
    n_inject_y: int


def circuit_stats(c: IcmCircuit) -> CircuitStats:
    return CircuitStats(
        width=c.width,
        n_ops=len(c.ops),
        n_inject_a=c.count(OpKind.INJECT_A),
        n_inject_y=c.count(OpKind.INJECT_Y),
    )
