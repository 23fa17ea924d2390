"""Newton diagrams, the Newton valuation and convenientization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import NonIsolatedError, NotConvenientError
from .localstd import milnor_number
from .poly import MultiIndex, Polynomial

NONDEGENERATE = "nondegenerate"
DEGENERATE = "degenerate"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Facet:
    vertices: tuple[MultiIndex, ...]
    functional: tuple[Fraction, ...]

    def value(self, v) -> Fraction:
        return sum((a * x for a, x in zip(self.functional, v)), Fraction(0))


@dataclass(frozen=True)
class NewtonDiagram:
    nvars: int
    support: frozenset[MultiIndex]
    facets: tuple[Facet, ...]
    convenient: bool


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system by Gauss-Jordan, or None if singular."""
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def _undominated(points) -> list[MultiIndex]:
    pts = sorted(set(points))
    return [p for p in pts if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)]


def newton_diagram(f: Polynomial) -> NewtonDiagram:
    """Compact facets of the Newton polyhedron of f.

    Every set of n+1 undominated support points spans a candidate hyperplane
    a.v = 1; it is a compact facet when a > 0 and no support point lies below it.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton diagram")
    n = f.nvars
    if f.coefficient((0,) * n):
        raise ValueError("f must vanish at the origin")
    support = f.support
    pts = _undominated(support)
    found: dict[tuple[Fraction, ...], Facet] = {}
    for subset in combinations(pts, n):
        rows = [[Fraction(e) for e in p] for p in subset]
        a = _solve(rows, [Fraction(1)] * n)
        if a is None or any(x <= 0 for x in a):
            continue
        key = tuple(a)
        if key in found:
            continue
        values = [sum(x * e for x, e in zip(a, p)) for p in pts]
        if any(v < 1 for v in values):
            continue
        on = tuple(p for p, v in zip(pts, values) if v == 1)
        found[key] = Facet(vertices=on, functional=key)
    facets = tuple(sorted(found.values(), key=lambda fc: fc.functional))
    convenient = all(
        any(m[i] > 0 and sum(m) == m[i] for m in support) for i in range(n)
    )
    return NewtonDiagram(nvars=n, support=frozenset(support), facets=facets, convenient=convenient)


def _require_convenient(d: NewtonDiagram) -> None:
    if not d.convenient:
        raise NotConvenientError("the Newton valuation needs a convenient diagram")


def valuation(d: NewtonDiagram, v) -> Fraction:
    """phi(v): the minimum of the facet functionals at v."""
    _require_convenient(d)
    return min(fc.value(v) for fc in d.facets)


def valuation_by_cone(d: NewtonDiagram, v) -> Fraction:
    """phi(v) evaluated on the facet whose cone contains v.

    v lies in Cone(0, sigma) iff v = t*p for a point p of the facet, which we
    test by writing v in the basis of n+1 facet vertices with non-negative
    coefficients. Used to cross-check :func:`valuation`.
    """
    _require_convenient(d)
    v = [Fraction(x) for x in v]
    if not any(v):
        return Fraction(0)
    n = d.nvars
    for fc in d.facets:
        for subset in combinations(fc.vertices, n):
            cols = [[Fraction(p[i]) for p in subset] for i in range(n)]
            lam = _solve(cols, v)
            if lam is not None and all(x >= 0 for x in lam):
                return sum(lam, Fraction(0))
    raise ValueError(f"no facet cone contains {tuple(v)}")


def shifted_valuation(d: NewtonDiagram, m: MultiIndex) -> Fraction:
    return valuation(d, [e + 1 for e in m])


def face_polynomial(f: Polynomial, fc: Facet) -> Polynomial:
    return Polynomial(f.nvars, {m: c for m, c in f.terms.items() if fc.value(m) == 1})


def _squarefree_univariate(coeffs: list[Fraction]) -> bool:
    """coeffs[i] is the coefficient of t^i."""

    def trim(p):
        while p and p[-1] == 0:
            p = p[:-1]
        return p

    def rem(a, b):
        a = list(a)
        while len(a) >= len(b) and a:
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] -= q * c
            a = trim(a)
        return a

    p = trim(coeffs)
    dp = trim([i * c for i, c in enumerate(p)][1:])
    a, b = p, dp
    while b:
        a, b = b, rem(a, b)
    return len(a) == 1


def _edge_verdict(f: Polynomial, pts: list[MultiIndex], i: int, j: int) -> str:
    """Square-freeness of a face polynomial supported on a segment in variables i, j."""
    pts = sorted(pts, key=lambda m: (m[i], m[j]))
    start = pts[0]
    dx, dy = pts[-1][i] - start[i], pts[-1][j] - start[j]
    g = gcd(abs(dx), abs(dy))
    step = (dx // g, dy // g)
    coeffs = [Fraction(0)] * (g + 1)
    for m in pts:
        k = (m[i] - start[i]) // step[0] if step[0] else (m[j] - start[j]) // step[1]
        coeffs[k] = f.coefficient(m)
    return NONDEGENERATE if _squarefree_univariate(coeffs) else DEGENERATE


def _blocks(pts: list[MultiIndex]) -> list[tuple[list[int], list[MultiIndex]]]:
    """Split points into groups whose variable sets are disjoint."""
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            a = parent[a]
        return a

    for m in pts:
        used = [k for k, e in enumerate(m) if e]
        for k in used[1:]:
            parent[find(k)] = find(used[0])
        find(used[0])
    groups: dict[int, tuple[set, list]] = {}
    for m in pts:
        root = find(next(k for k, e in enumerate(m) if e))
        vs, ps = groups.setdefault(root, (set(), []))
        vs.update(k for k, e in enumerate(m) if e)
        ps.append(m)
    return [(sorted(vs), ps) for vs, ps in groups.values()]


def _facet_verdict(f: Polynomial, pts: list[MultiIndex]) -> str:
    verdicts = []
    for vs, ps in _blocks(pts):
        if len(ps) == len(vs):
            verdicts.append(NONDEGENERATE)
        elif len(vs) == 2:
            verdicts.append(_edge_verdict(f, ps, *vs))
        else:
            verdicts.append(UNKNOWN)
    if DEGENERATE in verdicts:
        return DEGENERATE
    return UNKNOWN if UNKNOWN in verdicts else NONDEGENERATE


def nondegeneracy_check(f: Polynomial, d: NewtonDiagram) -> list[str]:
    """Per-facet verdict from sufficient criteria.

    The face polynomial is first split into summands in disjoint variables;
    it is non-degenerate iff every summand is. A summand with as many support
    points as variables is a simplex and non-degenerate. A summand in two
    variables is non-degenerate iff it is square-free along its segment.
    Anything else is reported as unknown.
    """
    return [_facet_verdict(f, [m for m in f.support if fc.value(m) == 1]) for fc in d.facets]


def missing_pure_powers(f: Polynomial) -> list[int]:
    return [
        i for i in range(f.nvars)
        if not any(m[i] > 0 and sum(m) == m[i] for m in f.support)
    ]


def make_convenient(f: Polynomial) -> Polynomial:
    """Add x_i^(mu+2) for every variable without a pure power; mu is re-checked."""
    missing = missing_pure_powers(f)
    if not missing:
        return f
    mu = milnor_number(f)
    e = mu + 2
    g = f
    for i in missing:
        g = g + Polynomial.monomial(tuple(e if j == i else 0 for j in range(f.nvars)))
    if milnor_number(g) != mu:
        raise NonIsolatedError("adding pure powers changed the Milnor number")
    return g
