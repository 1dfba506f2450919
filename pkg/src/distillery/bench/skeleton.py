"""ICM skeleton generation.

``expand_to_icm_skeleton`` turns a two-control MCT circuit into an ICM
circuit with the observed injected-state pattern: 7 A-type and 14 Y-type
initialisations per Toffoli, each wired to the gate through one CNOT. The
CNOT scaffolding is a simple teleportation-like stand-in, not a faithful
gadget synthesis, so injected counts are exact while CNOT counts are
parameterised.

``random_circuit`` produces the seeded validation corpus: small widths,
every wire starts with an initialisation, and every plain wire is coupled to
an injected wire before anything else happens.
"""

from __future__ import annotations

import random

from ..icm import IcmCircuit, OpKind, Operation
from .revlib import MctCircuit, MctGate


def expand_to_icm_skeleton(
    c: MctCircuit,
    a_per_toffoli: int = 7,
    internal_cnots_per_toffoli: int = 6,
    name: str | None = None,
) -> IcmCircuit:
    """ICM circuit with a_per_toffoli A and 2*a_per_toffoli Y inits per Toffoli."""
    if c.max_controls() > 2:
        raise ValueError("skeleton expansion needs a decomposed circuit (<= 2 controls)")
    ops: list[tuple[OpKind, tuple[int, ...]]] = []
    data_wires = c.width
    needs_ref = any(len(g.controls) == 0 for g in c.gates)
    ref_wire = data_wires if needs_ref else None
    next_wire = data_wires + (1 if needs_ref else 0)

    for w in range(data_wires):
        ops.append((OpKind.BASIS_INIT, (w,)))
    if ref_wire is not None:
        ops.append((OpKind.BASIS_INIT, (ref_wire,)))

    for g in c.gates:
        if len(g.controls) == 0:
            ops.append((OpKind.CNOT, (ref_wire, g.target)))
        elif len(g.controls) == 1:
            ops.append((OpKind.CNOT, (g.controls[0], g.target)))
        else:
            gate_wires = (*g.controls, g.target)
            injected: list[tuple[OpKind, int]] = []
            for _ in range(a_per_toffoli):
                injected.append((OpKind.INJECT_A, next_wire))
                next_wire += 1
            for _ in range(2 * a_per_toffoli):
                injected.append((OpKind.INJECT_Y, next_wire))
                next_wire += 1
            for kind, w in injected:
                ops.append((kind, (w,)))
            pairs = [
                (g.controls[0], g.target),
                (g.controls[1], g.target),
                (g.controls[0], g.controls[1]),
            ]
            for i in range(internal_cnots_per_toffoli):
                ops.append((OpKind.CNOT, pairs[i % len(pairs)]))
            for i, (_, w) in enumerate(injected):
                ops.append((OpKind.CNOT, (w, gate_wires[i % len(gate_wires)])))
                ops.append((OpKind.MEASURE, (w,)))

    for w in range(data_wires):
        ops.append((OpKind.MEASURE, (w,)))
    if ref_wire is not None:
        ops.append((OpKind.MEASURE, (ref_wire,)))

    return IcmCircuit(
        name=name or f"{c.name}-icm",
        width=next_wire,
        ops=tuple(
            Operation(id=i, kind=kind, wires=wires) for i, (kind, wires) in enumerate(ops)
        ),
    )


def synthetic_mct(n_toffoli: int, width: int, seed: int = 0, name: str | None = None) -> MctCircuit:
    """Deterministic MCT circuit with the requested number of 2-control gates."""
    if width < 3:
        raise ValueError("need width >= 3 for two-control gates")
    rng = random.Random(seed)
    gates = []
    for _ in range(n_toffoli):
        c1, c2, t = rng.sample(range(width), 3)
        gates.append(MctGate(controls=(c1, c2), target=t))
    return MctCircuit(name=name or f"synthetic-{n_toffoli}t", width=width, gates=tuple(gates))


def random_circuit(
    seed: int,
    width: int | None = None,
    max_ops: int = 200,
    injected: int | None = None,
) -> IcmCircuit:
    """Seeded random ICM circuit for scheduler validation.

    Injected inits come 0-or-at-least-2 per circuit: a single lone
    initialisation is the degenerate regime where one online batch already
    outweighs the whole offline column, which is not the workload the
    dominance claims are about. Each plain wire's first gate couples it to an
    injected wire so no part of the circuit runs ahead of distillation.
    """
    rng = random.Random(seed)
    w = width if width is not None else rng.randint(2, 12)
    if injected is None:
        k = rng.randint(2, min(w, 6)) if (w >= 2 and rng.random() < 0.85) else 0
    else:
        k = injected
    k = min(k, w)
    wires = list(range(w))
    rng.shuffle(wires)
    inj_wires = sorted(wires[:k])
    basis_wires = sorted(wires[k:])

    ops: list[tuple[OpKind, tuple[int, ...]]] = []
    for wire in range(w):
        if wire in inj_wires:
            kind = OpKind.INJECT_A if rng.random() < 0.5 else OpKind.INJECT_Y
        else:
            kind = OpKind.BASIS_INIT
        ops.append((kind, (wire,)))
    if k > 0 and k < w:
        # no circuit activity without at least one distilled state upstream of it
        for b in basis_wires:
            partner = rng.choice(inj_wires)
            ops.append((OpKind.CNOT, (partner, b) if rng.random() < 0.5 else (b, partner)))
    budget = max_ops - len(ops) - w
    n_cnots = rng.randint(0, max(0, budget)) if w >= 2 else 0
    for _ in range(n_cnots):
        a, b = rng.sample(range(w), 2)
        ops.append((OpKind.CNOT, (a, b)))
    for wire in range(w):
        ops.append((OpKind.MEASURE, (wire,)))
    return IcmCircuit(
        name=f"random-{seed}",
        width=w,
        ops=tuple(
            Operation(id=i, kind=kind, wires=wires_) for i, (kind, wires_) in enumerate(ops)
        ),
    )
