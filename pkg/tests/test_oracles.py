import pytest

from distillery.schedulers import (
    OracleError,
    ScriptedOracle,
    StochasticOracle,
    WorstCaseOracle,
    derive_seed,
    sample_verdict,
)


def test_stochastic_replayable():
    a = StochasticOracle(42, 0.2)
    b = StochasticOracle(42, 0.2)
    for k in range(200):
        for itype in ("A", "Y"):
            assert a.sample(itype, k) == b.sample(itype, k)


def test_stochastic_types_independent():
    o = StochasticOracle(42, 0.5)
    a = [o.sample("A", k) for k in range(64)]
    y = [o.sample("Y", k) for k in range(64)]
    assert a != y


def test_stochastic_extremes():
    never = StochasticOracle(1, 0.0)
    always = StochasticOracle(1, 1.0)
    assert all(never.sample("A", k) for k in range(100))
    assert not any(always.sample("Y", k) for k in range(100))


def test_stochastic_rate_roughly_matches():
    o = StochasticOracle(7, 0.2)
    n = 20000
    failures = sum(0 if o.sample("A", k) else 1 for k in range(n))
    assert abs(failures / n - 0.2) < 0.01


def test_stochastic_per_type_rates():
    o = StochasticOracle(7, {"A": 0.0, "Y": 1.0})
    assert o.sample("A", 3) and not o.sample("Y", 3)


def test_worst_case_pattern():
    o = WorstCaseOracle(5)
    verdicts = [sample_verdict(o, "A", k) for k in range(5)]
    assert verdicts == [False, False, False, False, True]
    assert [o.sample("Y", k) for k in range(10)] == [False] * 4 + [True] + [False] * 4 + [True]


def test_scripted_reads_in_order():
    o = ScriptedOracle({"A": [False, True], "Y": [True]})
    assert not o.sample("A", 0)
    assert o.sample("A", 1)
    assert o.sample("Y", 0)


def test_scripted_exhaustion():
    o = ScriptedOracle({"A": [True]})
    with pytest.raises(OracleError, match="exhausted"):
        o.sample("A", 1)


def test_derive_seed_independent_streams():
    seeds = {derive_seed(99, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(99, 5) == derive_seed(99, 5)
