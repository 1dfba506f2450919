"""RevLib ``.real`` subset: multi-controlled Toffoli circuits only.

Supported: ``.numvars``, ``.variables``, the bookkeeping directives
(``.constants``/``.inputs``/``.outputs``/``.garbage``/``.version`` are kept
as metadata), ``.begin`` .. ``.end`` and gate lines ``t<k> v1 ... vk`` where
the last variable is the target. Everything else is rejected loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class RealFormatError(ValueError):
    """Malformed .real document."""


class UnsupportedGateError(RealFormatError):
    """Gate mnemonic outside the MCT subset."""


@dataclass(frozen=True)
class MctGate:
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        if self.target in self.controls:
            raise RealFormatError(
                f"gate target {self.target} repeated among controls"
            )
        if len(set(self.controls)) != len(self.controls):
            raise RealFormatError(f"duplicate controls in {self.controls}")


@dataclass(frozen=True)
class MctCircuit:
    name: str
    width: int
    gates: tuple[MctGate, ...]
    ancilla_count: int = 0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for g in self.gates:
            for w in (*g.controls, g.target):
                if not 0 <= w < self.width:
                    raise RealFormatError(
                        f"gate wire {w} out of range for width {self.width}"
                    )

    def max_controls(self) -> int:
        return max((len(g.controls) for g in self.gates), default=0)


_META_DIRECTIVES = {
    ".version", ".constants", ".inputs", ".outputs", ".garbage", ".inputbus",
    ".outputbus",
}


def parse_real(data: bytes | str, name: str = "") -> MctCircuit:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    numvars: int | None = None
    variables: list[str] = []
    metadata: dict = {}
    gates: list[MctGate] = []
    in_body = False
    ended = False
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise RealFormatError(f"line {lineno}: content after .end")
        if line.startswith("."):
            parts = line.split()
            directive = parts[0].lower()
            if directive == ".numvars":
                if len(parts) != 2 or not parts[1].isdigit():
                    raise RealFormatError(f"line {lineno}: bad .numvars")
                numvars = int(parts[1])
            elif directive == ".variables":
                variables = parts[1:]
            elif directive == ".begin":
                if numvars is None:
                    raise RealFormatError(f"line {lineno}: .begin before .numvars")
                in_body = True
            elif directive == ".end":
                in_body = False
                ended = True
            elif directive in _META_DIRECTIVES:
                metadata[directive[1:]] = parts[1:]
            else:
                raise RealFormatError(f"line {lineno}: unknown directive {directive}")
            continue
        if not in_body:
            raise RealFormatError(f"line {lineno}: gate outside .begin/.end")
        gates.append(_parse_gate(line, lineno, variables, numvars))
    if numvars is None:
        raise RealFormatError("missing .numvars header")
    if variables and len(variables) != numvars:
        raise RealFormatError(
            f".variables lists {len(variables)} names for .numvars {numvars}"
        )
    if not ended:
        raise RealFormatError("missing .end")
    return MctCircuit(
        name=name or "-".join(metadata.get("version", [])) or "real",
        width=numvars,
        gates=tuple(gates),
        metadata=metadata,
    )


def _parse_gate(line: str, lineno: int, variables: list[str], numvars: int) -> MctGate:
    parts = line.split()
    mnemonic = parts[0].lower()
    if not mnemonic.startswith("t") or not mnemonic[1:].isdigit():
        raise UnsupportedGateError(
            f"line {lineno}: unsupported gate {parts[0]!r} (MCT subset only)"
        )
    arity = int(mnemonic[1:])
    if len(parts) - 1 != arity:
        raise RealFormatError(
            f"line {lineno}: {mnemonic} expects {arity} wires, got {len(parts) - 1}"
        )
    idx = []
    for token in parts[1:]:
        if variables:
            if token in variables:
                idx.append(variables.index(token))
                continue
        if token.isdigit():
            idx.append(int(token))
            continue
        raise RealFormatError(f"line {lineno}: unknown variable {token!r}")
    for w in idx:
        if not 0 <= w < numvars:
            raise RealFormatError(
                f"line {lineno}: wire {w} out of range for .numvars {numvars}"
            )
    return MctGate(controls=tuple(idx[:-1]), target=idx[-1])


def simulate_permutation(c: MctCircuit, bits) -> tuple[int, ...]:
    """Apply the circuit classically: flip target iff all controls are 1."""
    state = list(bits)
    if len(state) != c.width:
        raise ValueError(f"input has {len(state)} bits, circuit width {c.width}")
    for g in c.gates:
        if all(state[w] for w in g.controls):
            state[g.target] ^= 1
    return tuple(state)
