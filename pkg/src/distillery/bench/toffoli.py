"""V-chain reduction of multi-controlled Toffolis to two-control gates.

A gate with n >= 3 controls becomes 2n-3 two-control Toffolis on n-2 clean
ancilla wires: an AND chain is computed, applied to the target, then
uncomputed so the ancillae come back to zero. Ancilla wires are shared
across gates (each gate leaves them clean). Correctness is pinned by the
permutation simulator, not by gate counting.
"""

from __future__ import annotations

from .revlib import MctCircuit, MctGate


def decompose_mct(c: MctCircuit) -> MctCircuit:
    """Equivalent circuit with at most 2 controls per gate."""
    extra = max(0, c.max_controls() - 2)
    if extra == 0:
        return c
    width = c.width + extra
    ancilla = list(range(c.width, width))
    out: list[MctGate] = []
    for g in c.gates:
        n = len(g.controls)
        if n <= 2:
            out.append(g)
            continue
        chain: list[MctGate] = [
            MctGate(controls=(g.controls[0], g.controls[1]), target=ancilla[0])
        ]
        for i in range(n - 3):
            chain.append(
                MctGate(controls=(g.controls[i + 2], ancilla[i]), target=ancilla[i + 1])
            )
        out.extend(chain)
        out.append(MctGate(controls=(g.controls[n - 1], ancilla[n - 3]), target=g.target))
        out.extend(reversed(chain))
    return MctCircuit(
        name=c.name,
        width=width,
        gates=tuple(out),
        ancilla_count=c.ancilla_count + extra,
        metadata=dict(c.metadata),
    )
