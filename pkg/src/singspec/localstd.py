"""Local standard bases via Mora's tangent cone algorithm.

Internally every polynomial is kept primitive with integer coefficients and
reductions are fraction-free. The public surface works with
:class:`~singspec.poly.Polynomial`.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count

from .errors import BudgetExceededError, NonIsolatedError
from .poly import (
    MultiIndex,
    Polynomial,
    divides,
    jacobian_generators,
    local_key,
    mono_div,
    mono_lcm,
    mono_mul,
)

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    """Reduction-step budget, overridable through ``SINGSPEC_BUDGET``."""
    raw = os.environ.get("SINGSPEC_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class _Elem:
    """Primitive integer polynomial with cached leading data."""

    __slots__ = ("terms", "lm", "lc", "ecart")

    def __init__(self, terms: dict[MultiIndex, int]):
        g = 0
        for c in terms.values():
            g = math.gcd(g, c)
            if g == 1:
                break
        lm = max(terms, key=local_key)
        if terms[lm] < 0:
            g = -g
        if g != 1:
            terms = {m: c // g for m, c in terms.items()}
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.ecart = max(sum(m) for m in terms) - sum(lm)


def _to_int_terms(p: Polynomial) -> dict[MultiIndex, int]:
    terms = p.terms
    den = 1
    for c in terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {m: int(c * den) for m, c in terms.items()}


def _combine(a: int, f: dict, b: int, shift: MultiIndex, g: dict) -> dict:
    """Return a*f - b*x^shift*g."""
    out = {m: a * c for m, c in f.items()} if a != 1 else dict(f)
    for m, c in g.items():
        u = mono_mul(m, shift)
        v = out.get(u, 0) - b * c
        if v:
            out[u] = v
        else:
            out.pop(u, None)
    return out


class _Budget:
    __slots__ = ("left",)

    def __init__(self, steps: int):
        self.left = steps

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError("reduction budget exhausted; the ideal may not be m-primary")


def _reduce_step(h: _Elem, g: _Elem) -> dict:
    k = math.gcd(h.lc, g.lc)
    return _combine(g.lc // k, h.terms, h.lc // k, mono_div(h.lm, g.lm), g.terms)


def _mora_nf(h: _Elem, reducers: list[_Elem], budget: _Budget, cap: int | None = None) -> _Elem | None:
    """Weak normal form with smallest-ecart selection (ties: first in list)."""
    todo = list(reducers)
    while True:
        best = None
        for g in todo:
            if divides(g.lm, h.lm) and (best is None or g.ecart < best.ecart):
                best = g
                if g.ecart == 0:
                    break
        if best is None:
            return h
        budget.tick()
        if best.ecart > h.ecart:
            todo.append(h)
        terms = _truncate(_reduce_step(h, best), cap)
        if not terms:
            return None
        h = _Elem(terms)


def _spoly(f: _Elem, g: _Elem) -> dict:
    lcm = mono_lcm(f.lm, g.lm)
    k = math.gcd(f.lc, g.lc)
    a = {m: (g.lc // k) * c for m, c in f.terms.items()}
    a = {mono_mul(m, mono_div(lcm, f.lm)): c for m, c in a.items()}
    return _combine(1, a, f.lc // k, mono_div(lcm, g.lm), g.terms)


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple[Polynomial, ...]
    nvars: int

    def __init__(self, generators, nvars: int | None = None):
        gens = [g for g in generators]
        if nvars is None:
            if not gens:
                raise ValueError("need at least one generator or an explicit nvars")
            nvars = gens[0].nvars
        if any(g.nvars != nvars for g in gens):
            raise ValueError("all generators must share nvars")
        gens = tuple(g for g in gens if not g.is_zero())
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "nvars", nvars)


@dataclass(frozen=True)
class StandardBasis:
    elements: tuple[Polynomial, ...]
    leading_ideal: frozenset[MultiIndex]
    nvars: int
    _reducers: tuple = field(repr=False, compare=False, default=())

    @property
    def is_m_primary(self) -> bool:
        pure = set()
        for m in self.leading_ideal:
            nz = [i for i, e in enumerate(m) if e]
            if len(nz) == 1:
                pure.add(nz[0])
            elif not nz:
                return True
        return len(pure) == self.nvars

    def in_leading_ideal(self, m: MultiIndex) -> bool:
        return any(divides(a, m) for a in self.leading_ideal)

    def standard_monomials(self) -> list[MultiIndex]:
        """Monomials outside the leading ideal, sorted by decreasing local order."""
        if not self.is_m_primary:
            raise NonIsolatedError("the quotient is infinite dimensional")
        zero = (0,) * self.nvars
        if self.in_leading_ideal(zero):
            return []
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(self.nvars):
                    u = m[:i] + (m[i] + 1,) + m[i + 1:]
                    if u not in seen and not self.in_leading_ideal(u):
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return sorted(seen, key=local_key, reverse=True)

    @property
    def colength(self) -> int | float:
        if not self.is_m_primary:
            return math.inf
        return len(self.standard_monomials())

    @property
    def socle_degree(self) -> int:
        """Largest degree of a standard monomial; every monomial above it lies in the ideal."""
        return max((sum(m) for m in self.standard_monomials()), default=-1)


def _minimal(elems: list[_Elem]) -> list[_Elem]:
    keep = []
    for i, e in enumerate(elems):
        dominated = False
        for j, o in enumerate(elems):
            if j != i and divides(o.lm, e.lm) and (o.lm != e.lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(e)
    return keep


def _truncate(terms: dict, cap: int | None) -> dict:
    if cap is None:
        return terms
    return {m: c for m, c in terms.items() if sum(m) < cap}


def _mora(gens: tuple[Polynomial, ...], budget: _Budget, cap: int | None) -> list[_Elem]:
    """Mora's standard basis algorithm, optionally modulo m^cap.

    Working modulo m^cap amounts to adding every monomial of degree cap to the
    ideal; those implicit generators need no s-pairs because their s-polynomials
    with any element vanish after truncation.
    """
    basis: list[_Elem] = []
    pairs: list = []
    tie = count()

    def add(e: _Elem):
        for g in basis:
            if all(a == 0 or b == 0 for a, b in zip(g.lm, e.lm)):
                continue  # coprime leading monomials: product criterion
            lcm = mono_lcm(g.lm, e.lm)
            if cap is not None and sum(lcm) >= cap:
                continue
            heapq.heappush(pairs, (sum(lcm), next(tie), g, e))
        basis.append(e)

    def reduce(terms: dict) -> _Elem | None:
        terms = _truncate(terms, cap)
        if not terms:
            return None
        return _mora_nf(_Elem(terms), basis, budget, cap)

    for g in gens:
        e = reduce(_to_int_terms(g))
        if e is not None:
            add(e)
    while pairs:
        _, _, f, g = heapq.heappop(pairs)
        h = reduce(_spoly(f, g))
        if h is not None:
            add(h)
    return _minimal(basis)


def _package(minimal: list[_Elem], nvars: int) -> StandardBasis:
    return StandardBasis(
        elements=tuple(Polynomial(nvars, dict(e.terms)) for e in minimal),
        leading_ideal=frozenset(e.lm for e in minimal),
        nvars=nvars,
        _reducers=tuple(minimal),
    )


# A fine ladder matters: intermediate coefficients can grow sharply with the
# truncation degree, so we stop at the first degree that certifies the result.
TRUNCATION_DEGREES = tuple(range(8, 65, 4)) + (80, 96, 128)


@lru_cache(maxsize=256)
def _standard_basis_cached(gens: tuple[Polynomial, ...], nvars: int, budget_steps: int) -> StandardBasis:
    budget = _Budget(budget_steps)
    # First try modulo m^N. If every standard monomial of I + m^N has degree
    # below N-1 then m^(N-1) lies in I + m^N, hence in I by Nakayama, and the
    # truncated basis is a standard basis of I itself.
    for cap in TRUNCATION_DEGREES:
        sb = _package(_mora(gens, budget, cap), nvars)
        if sb.is_m_primary and sb.socle_degree < cap - 1:
            return sb
    return _package(_mora(gens, budget, None), nvars)


def standard_basis(ideal: IdealBasis, budget: int | None = None) -> StandardBasis:
    """Standard basis of the ideal in the local ring w.r.t. the negative-degree-lex order."""
    if not ideal.generators:
        raise ValueError("the zero ideal has no standard basis here")
    return _standard_basis_cached(ideal.generators, ideal.nvars, budget or default_budget())


def colength(ideal: IdealBasis, budget: int | None = None) -> int | float:
    """Vector-space dimension of the local quotient; ``math.inf`` if not m-primary."""
    return standard_basis(ideal, budget).colength


def normal_form(g: Polynomial, basis: StandardBasis) -> Polynomial:
    """Reduced normal form: g modulo the ideal, written in standard monomials.

    For an m-primary ideal every monomial above the socle degree lies in the
    ideal, so terms there are dropped and the reduction is finite. Otherwise
    a weak normal form is returned.
    """
    if g.nvars != basis.nvars:
        raise ValueError("nvars mismatch")
    if g.is_zero():
        return g
    if not basis.is_m_primary:
        h = _mora_nf(_Elem(_to_int_terms(g)), list(basis._reducers), _Budget(default_budget()))
        return Polynomial(g.nvars, h.terms if h else {})
    top = basis.socle_degree
    work = {m: c for m, c in g.terms.items() if sum(m) <= top}
    out = {}
    reducers = basis._reducers
    while work:
        m = max(work, key=local_key)
        c = work.pop(m)
        red = next((r for r in reducers if divides(r.lm, m)), None)
        if red is None:
            out[m] = c
            continue
        factor = c / red.lc
        shift = mono_div(m, red.lm)
        for t, d in red.terms.items():
            if t == red.lm:
                continue
            u = mono_mul(t, shift)
            if sum(u) > top:
                continue
            v = work.get(u, 0) - factor * d
            if v:
                work[u] = v
            else:
                work.pop(u, None)
    return Polynomial(g.nvars, out)


def jacobian_ideal(f: Polynomial) -> IdealBasis:
    return IdealBasis(jacobian_generators(f), f.nvars)


def tjurina_ideal(f: Polynomial) -> IdealBasis:
    return IdealBasis([f, *jacobian_generators(f)], f.nvars)


def _require_in_maximal_ideal(f: Polynomial) -> None:
    if f.coefficient((0,) * f.nvars):
        raise ValueError("f must vanish at the origin")


def milnor_number(f: Polynomial) -> int:
    _require_in_maximal_ideal(f)
    mu = colength(jacobian_ideal(f))
    if mu == math.inf:
        raise NonIsolatedError(f"{f} is not an isolated singularity")
    return mu


def tjurina_number(f: Polynomial) -> int:
    _require_in_maximal_ideal(f)
    tau = colength(tjurina_ideal(f))
    if tau == math.inf:
        raise NonIsolatedError(f"{f} is not an isolated singularity")
    return tau


def is_quasihomogeneous(f: Polynomial) -> bool:
    """True iff f lies in its own Jacobian ideal."""
    basis = standard_basis(jacobian_ideal(f))
    if not basis.is_m_primary:
        raise NonIsolatedError(f"{f} is not an isolated singularity")
    return normal_form(f, basis).is_zero()


def determinacy_bound(f: Polynomial) -> int:
    return milnor_number(f) + 2
