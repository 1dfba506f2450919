"""Redundancy solvers for heralded distillation.

A distillation trial fails independently with probability ``p_f``. To end up
with at least ``n_i`` good states out of ``n_t = n_i + s`` scheduled trials,
the extra count ``s`` is chosen as the smallest value for which the chance of
more than ``s`` failures stays below the computation failure budget ``p_c``.

The acceptance condition is evaluated against the binomial CDF
``F(s, n_t, p_f) = sum_{k=0}^{s} C(n_t, k) p_f^k (1-p_f)^(n_t-k)``, the
probability that at most ``s`` of the ``n_t`` trials fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class ReliabilityError(ValueError):
    """Raised for parameters outside the model's domain."""


@dataclass(frozen=True)
class ReliabilityParams:
    """Failure model: per-trial failure probability and computation budget."""

    p_f: float
    p_c: float

    def __post_init__(self):
        if not (0.0 <= self.p_f < 1.0):
            raise ReliabilityError(f"p_f must be in [0, 1), got {self.p_f}")
        if not (0.0 < self.p_c < 1.0):
            raise ReliabilityError(f"p_c must be in (0, 1), got {self.p_c}")

    def split_budget(self, guarantees: int) -> "ReliabilityParams":
        """Optional global-budget mode: divide p_c across independent guarantees.

        The default behaviour everywhere else spends the full p_c per
        initialisation type and per online batch; this helper is for callers
        who want a union-bound-style global guarantee instead.
        """
        if guarantees < 1:
            raise ReliabilityError("guarantees must be >= 1")
        return ReliabilityParams(self.p_f, self.p_c / guarantees)


@dataclass(frozen=True)
class ExtraCount:
    """Solved redundancy: ``s`` extra trials, ``n_t`` trials in total."""

    s: int
    n_t: int


def failure_cdf(s: int, n_t: int, p_f: float) -> float:
    """Probability that at most ``s`` of ``n_t`` independent trials fail.

    Evaluated with the incremental term recurrence
    ``term(k+1) = term(k) * (n_t - k) / (k + 1) * p_f / (1 - p_f)``,
    which is numerically stable for the trial counts seen here.
    """
    if s < 0 or n_t < 0 or s > n_t:
        raise ReliabilityError(f"need 0 <= s <= n_t, got s={s}, n_t={n_t}")
    if not (0.0 <= p_f <= 1.0):
        raise ReliabilityError(f"p_f must be in [0, 1], got {p_f}")
    if p_f == 0.0:
        return 1.0
    if p_f == 1.0:
        return 1.0 if s == n_t else 0.0
    ratio = p_f / (1.0 - p_f)
    term = (1.0 - p_f) ** n_t
    total = term
    for k in range(s):
        term *= (n_t - k) / (k + 1) * ratio
        total += term
    return min(total, 1.0)


def min_extra_offline(n_i: int, params: ReliabilityParams) -> ExtraCount:
    """Smallest ``s`` with ``1 - F(s, n_i + s, p_f) < p_c``.

    Monotone search from s = 0; always terminates for p_f < 1 because the
    excess-failure probability of ``n_i + s`` trials vanishes as s grows.
    """
    if n_i < 1:
        raise ReliabilityError(f"n_i must be >= 1, got {n_i}")
    s = 0
    while not 1.0 - failure_cdf(s, n_i + s, params.p_f) < params.p_c:
        s += 1
    return ExtraCount(s=s, n_t=n_i + s)


def min_extra_online(params: ReliabilityParams) -> ExtraCount:
    """Per-request redundancy: smallest ``s`` with ``p_f**(s+1) < p_c``.

    Equivalent to ``min_extra_offline`` with ``n_i = 1``: a batch of
    ``s + 1`` trials fails outright only if every trial fails.
    """
    if params.p_f == 0.0:
        return ExtraCount(s=0, n_t=1)
    s = 0
    while not params.p_f ** (s + 1) < params.p_c:
        s += 1
    return ExtraCount(s=s, n_t=s + 1)


@lru_cache(maxsize=None)
def _cached_offline(n_i: int, p_f: float, p_c: float) -> ExtraCount:
    return min_extra_offline(n_i, ReliabilityParams(p_f, p_c))


@lru_cache(maxsize=None)
def _cached_online(p_f: float, p_c: float) -> ExtraCount:
    return min_extra_online(ReliabilityParams(p_f, p_c))


def extra_offline(n_i: int, params: ReliabilityParams) -> ExtraCount:
    """Memoised ``min_extra_offline`` (schedulers call this per type)."""
    return _cached_offline(n_i, params.p_f, params.p_c)


def extra_online(params: ReliabilityParams) -> ExtraCount:
    """Memoised ``min_extra_online``."""
    return _cached_online(params.p_f, params.p_c)
