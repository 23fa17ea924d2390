"""Exact checks of the Hertling variance inequality and its Tjurina analogue."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

HERTLING = "hertling"
GHCTS = "ghcts"


@dataclass(frozen=True)
class InequalityVerdict:
    """lhs = variance about the center, rhs = range/12, slack = rhs - lhs."""

    mode: str
    count: int
    center: Fraction
    sum_sq_dev: Fraction
    range: Fraction
    lhs: Fraction
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= 0

    @property
    def residual(self) -> Fraction:
        """Sum of squared deviations minus count*range/12; holds iff <= 0."""
        return self.sum_sq_dev - self.count * self.range / 12


def _verdict(values: list[Fraction], center: Fraction, mode: str) -> InequalityVerdict:
    if not values:
        raise ValueError("empty multiset")
    sq = sum(((v - center) ** 2 for v in values), Fraction(0))
    rng = max(values) - min(values)
    return InequalityVerdict(
        mode=mode,
        count=len(values),
        center=center,
        sum_sq_dev=sq,
        range=rng,
        lhs=sq / len(values),
        rhs=rng / 12,
    )


def hertling_check(s) -> InequalityVerdict:
    """Variance of the spectrum about (n+1)/2 against range/12."""
    values = [Fraction(v) for v in s]
    return _verdict(values, Fraction(s.nvars, 2), HERTLING)


def ghcts_check(beta: Iterable) -> InequalityVerdict:
    """Variance about the mean of the multiset against range/12."""
    values = [Fraction(v) for v in beta]
    if not values:
        raise ValueError("empty multiset")
    return _verdict(values, sum(values, Fraction(0)) / len(values), GHCTS)


def ghcts_reduced_check(s, tau_max: int) -> InequalityVerdict:
    """GHCTS on the spectrum with its mu - tau_max largest exponents removed."""
    values = sorted(Fraction(v) for v in s)
    drop = len(values) - tau_max
    if drop not in (0, 1, 2):
        raise ValueError(f"tau_max must be mu, mu-1 or mu-2 (mu={len(values)}, got {tau_max})")
    v = ghcts_check(values[: len(values) - drop])
    return InequalityVerdict(**{**v.__dict__, "mode": f"{GHCTS}-reduced({tau_max})"})


class HypothesisError(ValueError):
    """Inputs fall outside the region where the comparison is claimed."""


def lemma510_values(xs, k: int) -> tuple[Fraction, Fraction]:
    """V1 drops x_{m-1}, x_m; V2 drops x_k, x_m. Indices are 1-based."""
    xs = [Fraction(x) for x in xs]
    m = len(xs)

    def part(skip):
        kept = [x for i, x in enumerate(xs, start=1) if i not in skip]
        return (
            sum(x * x for x in kept) / (m - 2)
            - sum(kept, Fraction(0)) ** 2 / (m - 2) ** 2
        )

    v1 = part({m - 1, m}) - (xs[m - 3] - xs[0]) / 12
    v2 = part({k, m}) - (xs[m - 2] - xs[0]) / 12
    return v1, v2


def lemma510_hypotheses(xs, k: int, b) -> list[str]:
    """Violated hypotheses, empty when all hold."""
    xs = [Fraction(x) for x in xs]
    b = Fraction(b)
    m = len(xs)
    problems = []
    if m < 3:
        problems.append("need m >= 3")
        return problems
    if not 1 <= k <= m - 2:
        problems.append("need 1 <= k <= m-2")
    if any(x <= 0 for x in xs) or xs != sorted(xs):
        problems.append("xs must be positive and sorted")
    if sum(xs) != b * m:
        problems.append("need sum(xs) = b*m")
    factor = 1 - Fraction(4, m)
    if factor == 0:
        problems.append("(1 - 4/m) is not invertible for m = 4")
    elif b < (xs[-1] + xs[-2]) / (2 * factor):
        problems.append("need b >= (1/2)(1-4/m)^(-1)(x_m + x_(m-1))")
    return problems


def lemma510_compare(xs, k: int, b) -> tuple[Fraction, Fraction, bool]:
    problems = lemma510_hypotheses(xs, k, b)
    if problems:
        raise HypothesisError("; ".join(problems))
    v1, v2 = lemma510_values(xs, k)
    return v1, v2, v1 >= v2
