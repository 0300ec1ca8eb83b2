"""Closed-form rate bounds for the random and adversarial edit models.

All logarithms are base 2; every bound returns a per-term breakdown so the
benchmark CSV can show where the bits go.  Asymptotic O(.) residuals carry no
invented constants: `value` sums exactly the explicit terms and nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class RateBound:
    """Bits per source symbol with the terms that built it."""

    value: float
    terms: dict = field(default_factory=dict)
    tau: float | None = None
    truncation_error: float = 0.0

    @property
    def negative(self) -> bool:
        """True when the asymptotic expression dips below zero (large rates);
        reported, never clamped."""
        return self.value < 0.0


def binary_entropy(p: float) -> float:
    """H(p) = -p log p - (1-p) log(1-p), in bits."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"entropy argument {p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def c_constant(a: int, tol: float = 1e-10) -> tuple[float, float]:
    """Alphabet constant sum_{l>=1} (1/a)^(l-1) (1-1/a)^2 l log2 l.

    Returns (partial sum, certified tail bound <= tol).  Term ratios are
    eventually below q * (1 + 1/l) * log(l+1)/log(l) < 1, giving a geometric
    tail bound.
    """
    if a < 2:
        raise DomainError("alphabet size must be at least 2")
    if tol <= 0.0:
        raise DomainError("tolerance must be positive")
    q = 1.0 / a
    coeff = (1.0 - q) ** 2
    total = 0.0
    l = 1
    power = 1.0  # q^(l-1)
    while True:
        total += power * coeff * l * math.log2(l) if l > 1 else 0.0
        nxt = power * q * coeff * (l + 1) * math.log2(l + 1)
        ratio = q * (1.0 + 1.0 / (l + 1)) * (
            math.log2(l + 2) / math.log2(l + 1) if l + 1 > 1 else 2.0
        )
        if ratio < 1.0:
            tail = nxt / (1.0 - ratio)
            if tail <= tol:
                return total, tail
        l += 1
        power *= q
        if l > 100000:
            raise DomainError("series did not reach the requested tolerance")


def _base_terms(eps: float, delta: float, a: int) -> dict:
    return {
        "H_del": binary_entropy(delta),
        "H_ins": binary_entropy(eps),
        "ins_log_a": eps * math.log2(a),
    }


def _check_rates(eps: float, delta: float) -> None:
    if eps < 0.0 or delta < 0.0:
        raise DomainError("edit rates must be nonnegative")
    if eps + delta >= 1.0:
        raise DomainError("need eps + delta < 1")


def rpes_lower_bound(eps: float, delta: float, a: int, tau: float = 0.1) -> RateBound:
    """Converse for the random one-pass model:
    H(delta) + H(eps) + eps log a - (delta+eps) C_a - 56 max(eps,delta)^(2-tau).
    """
    _check_rates(eps, delta)
    if tau <= 0.0:
        raise DomainError("tau must be positive")
    if a < 2:
        raise DomainError("alphabet size must be at least 2")
    c_a, c_tail = c_constant(a)
    terms = _base_terms(eps, delta, a)
    terms["c_term"] = -(delta + eps) * c_a
    worst = max(eps, delta)
    terms["correction"] = -56.0 * worst ** (2.0 - tau) if worst > 0.0 else 0.0
    return RateBound(sum(terms.values()), terms, tau, (delta + eps) * c_tail)


def apes_lower_bound(eps: float, delta: float, a: int) -> RateBound:
    """Counting converse for the adversarial model (alphabet size >= 3):
    (1-d)H(d/(1-d)) + (1-d+e)H(e/(1-d+e)) + e log(a-2).
    """
    _check_rates(eps, delta)
    if a < 3:
        raise DomainError("adversarial bound needs alphabet size >= 3")
    if 2.0 * delta >= 1.0:
        raise DomainError("need delta < 1/2 for the non-adjacent deletion count")
    del_part = (1.0 - delta) * binary_entropy(delta / (1.0 - delta)) if delta else 0.0
    denom = 1.0 - delta + eps
    ins_part = denom * binary_entropy(eps / denom) if eps else 0.0
    ins_log = eps * math.log2(a - 2) if a > 2 and eps else 0.0
    terms = {"del_part": del_part, "ins_part": ins_part, "ins_log": ins_log}
    return RateBound(sum(terms.values()), terms, None, 0.0)


def apes_lower_bound_expanded(eps: float, delta: float, a: int) -> float:
    """Second-order expansion of the same count, kept as a cross-check:
    H(d) + H(e) + e log a + log2(e) * (e^2 - d^2 - e d - 2 e / a).
    """
    _check_rates(eps, delta)
    if a < 3:
        raise DomainError("adversarial bound needs alphabet size >= 3")
    base = _base_terms(eps, delta, a)
    corr = LOG2E * (eps * eps - delta * delta - eps * delta - 2.0 * eps / a)
    return sum(base.values()) + corr


def insertion_only_count_rate(eps: float, a: int) -> float:
    """(1+e) H(e/(1+e)) + e log(a-1): insertion-ball growth rate."""
    if eps < 0.0:
        raise DomainError("insertion rate must be nonnegative")
    if a < 2:
        raise DomainError("alphabet size must be at least 2")
    if eps == 0.0:
        return 0.0
    return (1.0 + eps) * binary_entropy(eps / (1.0 + eps)) + eps * math.log2(a - 1)


def deletion_only_count_rate(delta: float) -> float:
    """(1-d) H(d/(1-d)): non-adjacent deletion pattern growth rate."""
    if not 0.0 <= delta < 0.5:
        raise DomainError("deletion rate must lie in [0, 1/2)")
    if delta == 0.0:
        return 0.0
    return (1.0 - delta) * binary_entropy(delta / (1.0 - delta))


def achievable_upper(
    eps: float, delta: float, a: int, model: str = "apes", tau: float = 0.1
) -> RateBound:
    """Rate the DP + entropy-coding scheme attains.

    apes: H(d) + H(e) + e log a + log2(e) e^2.
    rpes: H(d) + H(e) + e log a + (log a + log2(e) - 2) max(e,d)^(2-tau).
    """
    _check_rates(eps, delta)
    if a < 2:
        raise DomainError("alphabet size must be at least 2")
    terms = _base_terms(eps, delta, a)
    if model == "apes":
        terms["coder_excess"] = LOG2E * eps * eps
        used_tau = None
    elif model == "rpes":
        worst = max(eps, delta)
        if tau <= 0.0:
            raise DomainError("tau must be positive")
        terms["coder_excess"] = (
            (math.log2(a) + LOG2E - 2.0) * worst ** (2.0 - tau) if worst else 0.0
        )
        used_tau = tau
    else:
        raise DomainError(f"unknown model {model!r}")
    return RateBound(sum(terms.values()), terms, used_tau, 0.0)
