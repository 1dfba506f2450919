"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
pass. Every tolerance is pinned here; nothing is deferred to calibration.
"""

import math
import time

import pytest

from distillery.bench.montecarlo import monte_carlo
from distillery.bench.revlib import MctCircuit, MctGate, simulate_permutation
from distillery.bench.skeleton import random_circuit
from distillery.bench.reference import load_reference_results
from distillery.bench.toffoli import decompose_mct
from distillery.icm import CostModel, IcmCircuit, OpKind, Operation
from distillery.layout import export_schedule, validate_schedule
from distillery.reliability import (
    ReliabilityParams,
    extra_offline,
    min_extra_offline,
    min_extra_online,
)
from distillery.render import render_svg
from distillery.schedulers import (
    StochasticOracle,
    WorstCaseOracle,
    schedule_alaps,
    schedule_alapt,
    schedule_asap,
)

REL = ReliabilityParams(0.2, 0.001)
CM = CostModel()


def report(criterion: int, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_reliability_exactness():
    started = time.perf_counter()
    ok = (
        min_extra_offline(14, REL).s == 12
        and min_extra_offline(28, REL).s == 18
        and min_extra_online(REL).s == 4
    )
    elapsed = time.perf_counter() - started
    report(1, ok and elapsed < 1.0,
           f"solver gives s=12/18 offline and s=4 online in {elapsed:.3f}s")


def test_criterion_2_fixture_identities():
    started = time.perf_counter()
    rows = load_reference_results()
    ok = len(rows) == 36
    for row in rows:
        for (t, s, bb) in row.cells.values():
            ok = ok and t * s == bb
        ok = ok and row.y == 2 * row.a
        ok = ok and row.tsb("opt", "asap")[1] == row.tsb("unopt", "asap")[1]
    elapsed = time.perf_counter() - started
    report(2, ok and elapsed < 1.0,
           f"36 rows x 6 cells: BB=T*S, Y=2A, ASAP S equal across variants "
           f"({elapsed:.3f}s)")


def test_criterion_3_asap_space_reproduction():
    started = time.perf_counter()
    rows = load_reference_results()
    deviations = []
    for row in rows:
        predicted = 17 * (row.a + extra_offline(row.a, REL).s) \
            + 9 * (row.y + extra_offline(row.y, REL).s)
        if predicted != row.tsb("opt", "asap")[1]:
            deviations.append((row.circuit, predicted, row.tsb("opt", "asap")[1]))
    elapsed = time.perf_counter() - started
    detail = f"17*(A+s_A) + 9*(Y+s_Y) matches the ASAP S column on all 36 rows ({elapsed:.3f}s)"
    if deviations:
        detail = f"deviations (surfaced, not suppressed): {deviations}"
    report(3, not deviations and elapsed < 5.0, detail)


def _a_dominant_circuit(width: int, n_a: int, n_y: int) -> IcmCircuit:
    ops = []
    for w in range(width):
        if w < n_a:
            ops.append(Operation(len(ops), OpKind.INJECT_A, (w,)))
        elif w < n_a + n_y:
            ops.append(Operation(len(ops), OpKind.INJECT_Y, (w,)))
        else:
            ops.append(Operation(len(ops), OpKind.BASIS_INIT, (w,)))
    for w in range(width - 1):
        ops.append(Operation(len(ops), OpKind.CNOT, (w, w + 1)))
    for w in range(width):
        ops.append(Operation(len(ops), OpKind.MEASURE, (w,)))
    return IcmCircuit(f"adom-{width}-{n_a}-{n_y}", width, tuple(ops))


def test_criterion_4_online_space_invariant():
    started = time.perf_counter()
    gap = min_extra_online(REL).s * 17
    ok = gap == 68
    for row in load_reference_results():
        for variant in ("opt", "unopt"):
            ok = ok and row.tsb(variant, "alapt")[1] - row.tsb(variant, "alaps")[1] == 68
    cases = [(1, 1, 0), (2, 1, 1), (5, 2, 2), (9, 3, 4), (12, 4, 6)]
    for width, n_a, n_y in cases:
        c = _a_dominant_circuit(width, n_a, n_y)
        oracle = WorstCaseOracle(5)
        _, alaps_m, _ = schedule_alaps(c, CM, REL, oracle)
        _, alapt_m, _ = schedule_alapt(c, CM, REL, oracle)
        ok = ok and alaps_m.S == width + 17
        ok = ok and alapt_m.S == width + 85
    elapsed = time.perf_counter() - started
    report(4, ok and elapsed < 5.0,
           f"ALAPT-ALAPS gap is 68 on all rows; schedulers give S=W+17 and "
           f"S=W+85 on A-dominant circuits, widths {[c[0] for c in cases]} "
           f"({elapsed:.2f}s)")


def test_criterion_5_corpus_validation_and_orderings():
    started = time.perf_counter()
    oracle = WorstCaseOracle(5)
    n_checked = 0
    n_with_injected = 0
    failures = []
    for seed in range(210):
        c = random_circuit(seed)
        schedules = {
            "asap": schedule_asap(c, CM, REL),
            "alapt": schedule_alapt(c, CM, REL, oracle),
            "alaps": schedule_alaps(c, CM, REL, oracle),
        }
        for name, (s, _, _) in schedules.items():
            problems = validate_schedule(s, c, CM)
            if problems:
                failures.append((seed, name, problems[0]))
        n_checked += 1
        if any(op.kind.is_injected for op in c.ops):
            n_with_injected += 1
            ma = schedules["asap"][1]
            mt = schedules["alapt"][1]
            ms = schedules["alaps"][1]
            if not (ma.T <= mt.T <= ms.T):
                failures.append((seed, "T-order", (ma.T, mt.T, ms.T)))
            if not (ms.S <= mt.S <= ma.S):
                failures.append((seed, "S-order", (ms.S, mt.S, ma.S)))
    elapsed = time.perf_counter() - started
    ok = not failures and n_checked >= 200 and elapsed < 60.0
    report(5, ok,
           f"{n_checked} corpus circuits ({n_with_injected} with injections): "
           f"all validate, T(ASAP)<=T(ALAPT)<=T(ALAPS), "
           f"S(ALAPS)<=S(ALAPT)<=S(ASAP) ({elapsed:.1f}s)"
           + (f"; failures: {failures[:3]}" if failures else ""))


def _permutation_equal(original: MctCircuit) -> bool:
    decomposed = decompose_mct(original)
    pad = decomposed.width - original.width
    for x in range(1 << original.width):
        bits = tuple((x >> i) & 1 for i in range(original.width))
        out = simulate_permutation(decomposed, bits + (0,) * pad)
        if out[:original.width] != simulate_permutation(original, bits):
            return False
        if any(out[original.width:]):
            return False
    return True


def test_criterion_6_decomposition_oracle():
    import random as _random

    started = time.perf_counter()
    ok = True
    for n_controls in range(3, 7):
        gate = MctGate(tuple(range(n_controls)), n_controls)
        ok = ok and _permutation_equal(MctCircuit("g", n_controls + 1, (gate,)))
    rng = _random.Random(23)
    for _ in range(10):
        width = rng.randint(5, 12)
        gates = []
        for _ in range(rng.randint(1, 6)):
            n_controls = rng.randint(0, min(width - 1, 6))
            wires = rng.sample(range(width), n_controls + 1)
            gates.append(MctGate(tuple(wires[:-1]), wires[-1]))
        ok = ok and _permutation_equal(MctCircuit("r", width, tuple(gates)))
    elapsed = time.perf_counter() - started
    report(6, ok and elapsed < 60.0,
           f"3-6 control gates and random width<=12 circuits keep their "
           f"permutation exhaustively ({elapsed:.1f}s)")


def test_criterion_7_monte_carlo_statistics():
    started = time.perf_counter()
    runs = 1_000_000
    tiny = IcmCircuit("tiny", 1, (
        Operation(0, OpKind.INJECT_A, (0,)),
        Operation(1, OpKind.MEASURE, (0,)),
    ))
    rus = monte_carlo(tiny, CM, REL, algo="alaps", strategy="rus",
                      runs=runs, base_seed=2024, workers=2)
    mean_trials = rus.mean_trials_per_init
    rus_ok = abs(mean_trials - 1.25) <= 0.0125 and rus.mean_bb_le_worst

    fixed = monte_carlo(tiny, CM, REL, algo="alaps", strategy="fixed",
                        runs=runs, base_seed=2025, workers=2)
    n_seq = fixed.totals["batches"]
    p_all_fail = 0.2**5
    sigma = math.sqrt(p_all_fail * (1 - p_all_fail) / n_seq)
    fixed_ok = (
        abs(fixed.exhaustion_frequency - p_all_fail) <= 3 * sigma
        and fixed.mean_bb_le_worst
    )
    elapsed = time.perf_counter() - started
    report(7, rus_ok and fixed_ok and elapsed < 120.0,
           f"N=1e6: RUS mean trials/init {mean_trials:.4f} (1.25 +/- 1%), "
           f"all-fail frequency {fixed.exhaustion_frequency:.2e} "
           f"(3.2e-4 +/- 3 sigma = {3 * sigma:.1e}), mean BB <= worst "
           f"({elapsed:.0f}s)")


def test_criterion_8_determinism():
    c = random_circuit(4242, width=8, injected=4)
    pairs = []
    for _ in range(2):
        runs = {
            "asap": schedule_asap(c, CM, REL)[0],
            "alapt": schedule_alapt(c, CM, REL, StochasticOracle(7, REL.p_f))[0],
            "alaps": schedule_alaps(c, CM, REL, StochasticOracle(7, REL.p_f),
                                    strategy="fixed")[0],
        }
        pairs.append({
            name: (export_schedule(s), render_svg(s)) for name, s in runs.items()
        })
    ok = pairs[0] == pairs[1]
    report(8, ok, "repeated invocations are byte-identical (export and SVG), "
                  "all three policies")


if __name__ == "__main__":
    pytest.main([__file__, "-s", "-v"])
