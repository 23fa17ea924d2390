"""Spectra from maximal bases of the shifted Newton filtration.

A maximal basis is found greedily: walk the monomials with nonzero normal
form in order of decreasing shifted valuation and keep each one whose normal
form is independent of those already kept. The kept valuations are the
spectrum (or the Tjurina spectrum when the quotient is by (f, J(f))).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DegeneracyError, NonIsolatedError, NotConvenientError
from .localstd import (
    jacobian_ideal,
    normal_form,
    standard_basis,
    tjurina_ideal,
)
from .newton import (
    NONDEGENERATE,
    make_convenient,
    newton_diagram,
    nondegeneracy_check,
    shifted_valuation,
)
from .poly import MultiIndex, Polynomial, local_key

JACOBIAN = "jacobian"
TJURINA = "tjurina"


@dataclass(frozen=True)
class Spectrum:
    """Sorted multiset of rationals attached to a germ in ``nvars`` variables."""

    values: tuple[Fraction, ...]
    nvars: int

    def __init__(self, values: Iterable, nvars: int):
        object.__setattr__(self, "values", tuple(sorted(Fraction(v) for v in values)))
        object.__setattr__(self, "nvars", nvars)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def counts(self) -> Counter:
        return Counter(self.values)

    @property
    def min(self) -> Fraction:
        return self.values[0]

    @property
    def max(self) -> Fraction:
        return self.values[-1]

    def __sub__(self, other: "Spectrum") -> "Spectrum":
        diff = self.counts() - other.counts()
        return Spectrum(diff.elements(), self.nvars)

    def issubset(self, other: "Spectrum") -> bool:
        return not (self.counts() - other.counts())

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.values) + "}"


@dataclass(frozen=True)
class MaximalBasis:
    entries: tuple[tuple[MultiIndex, Fraction], ...]

    @property
    def valuations(self) -> list[Fraction]:
        return [v for _, v in self.entries]

    @property
    def monomials(self) -> list[MultiIndex]:
        return [m for m, _ in self.entries]


def _monomial_normal_forms(basis, std: list[MultiIndex]) -> dict[MultiIndex, dict[int, Fraction]]:
    """Normal-form coordinates of every monomial up to the socle degree.

    Uses multiplication maps: NF(x_i * m) = sum_j c_j NF(x_i * b_j) where
    NF(m) = sum_j c_j b_j, so only x_i * b_j need explicit reduction.
    """
    n = basis.nvars
    index = {b: j for j, b in enumerate(std)}
    top = basis.socle_degree

    def coords(p: Polynomial) -> dict[int, Fraction]:
        return {index[m]: c for m, c in p.terms.items()}

    mult: list[list[dict[int, Fraction]]] = []
    for i in range(n):
        row = []
        for b in std:
            u = b[:i] + (b[i] + 1,) + b[i + 1:]
            if u in index:
                row.append({index[u]: Fraction(1)})
            else:
                row.append(coords(normal_form(Polynomial.monomial(u), basis)))
        mult.append(row)

    zero = (0,) * n
    nf = {zero: coords(normal_form(Polynomial.constant(n, 1), basis))}
    layer = [zero]
    for _ in range(top):
        nxt = {}
        for m in layer:
            vec = nf[m]
            for i in range(n):
                u = m[:i] + (m[i] + 1,) + m[i + 1:]
                if u in nxt or u in nf:
                    continue
                out: dict[int, Fraction] = {}
                for j, c in vec.items():
                    for k, d in mult[i][j].items():
                        v = out.get(k, 0) + c * d
                        if v:
                            out[k] = v
                        else:
                            out.pop(k, None)
                nxt[u] = out
        nf.update(nxt)
        layer = list(nxt)
    return nf


class _Echelon:
    """Incremental reduced row echelon form over Q on sparse dict rows."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        v = dict(vec)
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if not c:
                continue
            for k, d in self.rows[p].items():
                w = v.get(k, 0) - c * d
                if w:
                    v[k] = w
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: dict[int, Fraction]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        c = v[p]
        v = {k: d / c for k, d in v.items()}
        for q, row in self.rows.items():
            e = row.get(p)
            if e:
                for k, d in v.items():
                    w = row.get(k, 0) - e * d
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        self.rows[p] = v
        return True


def _check_newton(f: Polynomial, assume_nondegenerate: bool):
    d = newton_diagram(f)
    if not d.convenient:
        raise NotConvenientError(f"{f} is not convenient")
    if not assume_nondegenerate:
        verdicts = nondegeneracy_check(f, d)
        bad = [fc for fc, v in zip(d.facets, verdicts) if v != NONDEGENERATE]
        if bad:
            raise DegeneracyError(
                "non-degeneracy not established on facets with functionals "
                + ", ".join(str(tuple(str(a) for a in fc.functional)) for fc in bad)
            )
    return d


def maximal_basis(
    f: Polynomial,
    ideal_kind: str = JACOBIAN,
    *,
    assume_nondegenerate: bool = False,
    rng: random.Random | None = None,
) -> MaximalBasis:
    """Greedy maximal basis of O/J(f) (or O/(f, J(f))) for the shifted Newton filtration.

    ``rng`` shuffles candidates before the stable sort by valuation, which
    only changes the order among equal valuations.
    """
    d = _check_newton(f, assume_nondegenerate)
    if ideal_kind == JACOBIAN:
        ideal = jacobian_ideal(f)
    elif ideal_kind == TJURINA:
        ideal = tjurina_ideal(f)
    else:
        raise ValueError(f"unknown ideal kind {ideal_kind!r}")
    basis = standard_basis(ideal)
    if not basis.is_m_primary:
        raise NonIsolatedError(f"{f} is not an isolated singularity")
    std = basis.standard_monomials()
    nf = _monomial_normal_forms(basis, std)
    candidates = [(m, shifted_valuation(d, m)) for m, vec in nf.items() if vec]
    if rng is None:
        candidates.sort(key=lambda mv: (mv[1], local_key(mv[0])), reverse=True)
    else:
        rng.shuffle(candidates)
        candidates.sort(key=lambda mv: mv[1], reverse=True)
    echelon = _Echelon()
    chosen = []
    for m, v in candidates:
        if echelon.add(nf[m]):
            chosen.append((m, v))
            if len(chosen) == len(std):
                break
    chosen.sort(key=lambda mv: mv[1])
    return MaximalBasis(tuple(chosen))


def spectrum_newton(f: Polynomial, *, assume_nondegenerate: bool = False, rng=None) -> Spectrum:
    g = make_convenient(f)
    mb = maximal_basis(g, JACOBIAN, assume_nondegenerate=assume_nondegenerate, rng=rng)
    return Spectrum(mb.valuations, f.nvars)


def spectrum_quasihomogeneous(f: Polynomial, w) -> Spectrum:
    """Spectrum {(alpha + e).w} over a monomial basis of the Milnor algebra."""
    w = [Fraction(x) for x in w]
    if len(w) != f.nvars or any(x <= 0 for x in w):
        raise ValueError("weights must be positive and one per variable")
    for m in f.support:
        if sum(a * e for a, e in zip(w, m)) != 1:
            raise ValueError(f"f is not weighted homogeneous of degree 1 for weights {w}")
    basis = standard_basis(jacobian_ideal(f))
    if not basis.is_m_primary:
        raise NonIsolatedError(f"{f} is not an isolated singularity")
    return Spectrum(
        (sum(a * (e + 1) for a, e in zip(w, m)) for m in basis.standard_monomials()),
        f.nvars,
    )


def check_symmetry(s: Spectrum) -> bool:
    vals = s.values
    return all(vals[i] + vals[-1 - i] == s.nvars for i in range(len(vals)))


def stats(s, center) -> tuple[Fraction, Fraction, Fraction]:
    """(sum of squared deviations from center, range, mean)."""
    vals = list(s)
    if not vals:
        raise ValueError("empty spectrum")
    center = Fraction(center)
    sq = sum(((v - center) ** 2 for v in vals), Fraction(0))
    return sq, max(vals) - min(vals), sum(vals, Fraction(0)) / len(vals)
