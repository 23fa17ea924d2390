"""Tjurina spectrum, the excluded exponents R(f) and their lower bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .localstd import milnor_number, tjurina_number
from .newton import make_convenient
from .poly import Polynomial
from .spectrum import JACOBIAN, TJURINA, Spectrum, maximal_basis


@dataclass(frozen=True)
class ExclusionReport:
    mu: int
    tau: int
    sp: Spectrum
    sp_tau: Spectrum
    rset: Spectrum
    bounds: tuple[Fraction, ...]


def tjurina_spectrum(f: Polynomial, *, assume_nondegenerate: bool = False, rng=None) -> Spectrum:
    g = make_convenient(f)
    mb = maximal_basis(g, TJURINA, assume_nondegenerate=assume_nondegenerate, rng=rng)
    return Spectrum(mb.valuations, f.nvars)


def theoremB_bounds(s, d: int) -> list[Fraction]:
    """Lower bounds for the k-th smallest excluded exponent, k = 1..d.

    r_k is the largest index r with #{j : a_j <= a_r} <= k, and the bound is
    the r_k-th smallest distinct value plus one.
    """
    vals = sorted(Fraction(v) for v in s)
    if d < 0 or d > len(vals):
        raise ValueError(f"d={d} must lie between 0 and {len(vals)}")
    jumps = sorted(set(vals))
    at_most = {v: sum(1 for a in vals if a <= v) for v in jumps}
    bounds = []
    for k in range(1, d + 1):
        valid = [r for r in range(1, len(vals) + 1) if at_most[vals[r - 1]] <= k]
        if not valid:
            raise ValueError(f"no index satisfies the prefix condition for k={k}")
        r = max(valid)
        if r > len(jumps):
            raise ValueError(f"r_{k}={r} exceeds the number of distinct values")
        bounds.append(jumps[r - 1] + 1)
    return bounds


def exclusion_report(f: Polynomial, *, assume_nondegenerate: bool = False) -> ExclusionReport:
    """Spectrum, Tjurina spectrum, their difference and the bounds, cross-checked."""
    g = make_convenient(f)
    sp = Spectrum(maximal_basis(g, JACOBIAN, assume_nondegenerate=assume_nondegenerate).valuations, f.nvars)
    sp_tau = Spectrum(maximal_basis(g, TJURINA, assume_nondegenerate=assume_nondegenerate).valuations, f.nvars)
    mu, tau = milnor_number(f), tjurina_number(f)
    if len(sp) != mu or len(sp_tau) != tau:
        raise RuntimeError(f"spectrum sizes {len(sp)}, {len(sp_tau)} disagree with mu={mu}, tau={tau}")
    if not sp_tau.issubset(sp):
        raise RuntimeError("Tjurina spectrum is not contained in the spectrum")
    rset = sp - sp_tau
    return ExclusionReport(mu, tau, sp, sp_tau, rset, tuple(theoremB_bounds(sp, mu - tau)))


def check_max_excluded(rep: ExclusionReport) -> bool:
    if rep.mu == rep.tau:
        return True
    return rep.rset.counts()[rep.sp.max] == 1


def bounds_respected(rep: ExclusionReport) -> bool:
    """Each k-th smallest excluded exponent is at least bound_k."""
    return all(a >= b for a, b in zip(rep.rset.values, rep.bounds))
