"""Parametric normal-form families with closed-form expected data.

The catalog file is JSON with a ``format``/``version`` header. Each family
record stores its polynomial template and closed forms as strings in a small
expression language:

* rationals, parameters, ``+ - * / ^``, parentheses, ``max(..)``/``min(..)``;
* a list entry ``EXPR | l=A..B`` expands to EXPR for l = A, ..., B.

See ``docs/catalog_format.md`` for the full schema.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Mapping

from .errors import DomainError, SingspecError
from .hertling import ghcts_reduced_check, hertling_check
from .localstd import milnor_number
from .poly import Polynomial, parse
from .spectrum import Spectrum
from .tjurina import exclusion_report

FORMAT = "singspec-catalog"
VERSION = 1
DEFAULT_MODULI = {"a": 1, "b": 1, "d": 0}

_EXPR_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\.\.|[-+*/^(),|=]))")


class ExpressionError(ValueError):
    pass


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        mt = _EXPR_TOKEN.match(text, pos)
        if not mt:
            raise ExpressionError(f"bad character in {text!r} at {pos}")
        out.append(mt.group(mt.lastindex))
        pos = mt.end()
    return out


class _Expr:
    def __init__(self, text: str, env: Mapping[str, Fraction]):
        self.toks = _tokens(text)
        self.i = 0
        self.env = env
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def done(self) -> Fraction:
        value = self.sum()
        if self.peek() is not None:
            raise ExpressionError(f"trailing {self.peek()!r} in {self.text!r}")
        return value

    def sum(self) -> Fraction:
        value = self.prod()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.prod()
            value = value + rhs if op == "+" else value - rhs
        return value

    def prod(self) -> Fraction:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "/" and rhs == 0:
                raise ExpressionError(f"division by zero in {self.text!r}")
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self) -> Fraction:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Fraction:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.unary()
            if e.denominator != 1:
                raise ExpressionError(f"non-integer exponent in {self.text!r}")
            return base ** int(e)
        return base

    def atom(self) -> Fraction:
        tok = self.take()
        if tok is None:
            raise ExpressionError(f"unexpected end of {self.text!r}")
        if tok.isdigit():
            return Fraction(int(tok))
        if tok == "(":
            value = self.sum()
            if self.take() != ")":
                raise ExpressionError(f"missing ')' in {self.text!r}")
            return value
        if tok in ("max", "min"):
            if self.take() != "(":
                raise ExpressionError(f"expected '(' after {tok}")
            args = [self.sum()]
            while self.peek() == ",":
                self.take()
                args.append(self.sum())
            if self.take() != ")":
                raise ExpressionError(f"missing ')' in {self.text!r}")
            return max(args) if tok == "max" else min(args)
        if re.fullmatch(r"[A-Za-z_]\w*", tok):
            if tok not in self.env:
                raise ExpressionError(f"unbound symbol {tok!r} in {self.text!r}")
            return self.env[tok]
        raise ExpressionError(f"unexpected {tok!r} in {self.text!r}")


def evaluate(text: str, env: Mapping[str, object] | None = None) -> Fraction:
    """Evaluate a closed-form expression exactly."""
    env = {k: Fraction(v) for k, v in (env or {}).items()}
    return _Expr(text, env).done()


def expand_entry(text: str, env: Mapping[str, object]) -> list[Fraction]:
    """Expand ``EXPR`` or ``EXPR | i=A..B`` into a list of values."""
    if "|" not in text:
        return [evaluate(text, env)]
    body, _, rng = text.partition("|")
    mt = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*", rng)
    if not mt:
        raise ExpressionError(f"bad range in {text!r}")
    name = mt.group(1)
    lo, hi = evaluate(mt.group(2), env), evaluate(mt.group(3), env)
    if lo.denominator != 1 or hi.denominator != 1:
        raise ExpressionError(f"non-integer range bounds in {text!r}")
    inner = dict(env)
    out = []
    for i in range(int(lo), int(hi) + 1):
        inner[name] = Fraction(i)
        out.append(evaluate(body, inner))
    return out


def expand_list(entries, env: Mapping[str, object]) -> list[Fraction]:
    out: list[Fraction] = []
    for e in entries:
        out.extend(expand_entry(e, env))
    return out


@dataclass(frozen=True)
class FamilySpec:
    """One normal-form family with its closed-form expectations."""

    name: str
    nvars: int
    params: tuple[tuple[str, int], ...]
    template: str
    mu: str
    spectrum: tuple[str, ...] | None
    rset: tuple[str, ...] | None
    tau_max: tuple[str, ...]
    moduli: tuple[tuple[str, int], ...] = ()
    note: str = ""
    constraints: tuple[str, ...] = ()
    assume_nondegenerate: bool = False

    @property
    def param_names(self) -> list[str]:
        return [p for p, _ in self.params]

    def check_params(self, params: Mapping[str, int]) -> dict[str, int]:
        missing = set(self.param_names) - set(params)
        extra = set(params) - set(self.param_names)
        if missing or extra:
            raise DomainError(f"{self.name} takes parameters {self.param_names}, got {sorted(params)}")
        for p, lo in self.params:
            if int(params[p]) != params[p] or params[p] < lo:
                raise DomainError(f"{self.name}: parameter {p} must be an integer >= {lo}")
        values = {p: int(params[p]) for p in self.param_names}
        for c in self.constraints:
            if evaluate(c, values) <= 0:
                raise DomainError(f"{self.name}: constraint {c} > 0 fails at {values}")
        return values

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "nvars": self.nvars,
            "params": {p: lo for p, lo in self.params},
            "template": self.template,
            "mu": self.mu,
            "tau_max": list(self.tau_max),
        }
        if self.spectrum is not None:
            out["spectrum"] = list(self.spectrum)
        if self.rset is not None:
            out["rset"] = list(self.rset)
        if self.constraints:
            out["constraints"] = list(self.constraints)
        if self.assume_nondegenerate:
            out["assume_nondegenerate"] = True
        if self.moduli:
            out["moduli"] = {m: v for m, v in self.moduli}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilySpec":
        return cls(
            name=data["name"],
            nvars=int(data["nvars"]),
            params=tuple((p, int(lo)) for p, lo in data.get("params", {}).items()),
            template=data["template"],
            mu=str(data["mu"]),
            spectrum=_optional_list(data, "spectrum"),
            rset=_optional_list(data, "rset"),
            tau_max=tuple(data.get("tau_max", ("mu",))),
            moduli=tuple((m, int(v)) for m, v in data.get("moduli", {}).items()),
            note=data.get("note", ""),
            constraints=tuple(data.get("constraints", ())),
            assume_nondegenerate=bool(data.get("assume_nondegenerate", False)),
        )


def _optional_list(data: Mapping, key: str) -> tuple[str, ...] | None:
    return tuple(data[key]) if key in data else None


@dataclass(frozen=True)
class Catalog:
    families: tuple[FamilySpec, ...]

    def names(self) -> list[str]:
        return [f.name for f in self.families]

    def get(self, name: str) -> FamilySpec:
        for fam in self.families:
            if fam.name == name:
                return fam
        raise KeyError(name)

    def __iter__(self):
        return iter(self.families)

    def __len__(self) -> int:
        return len(self.families)

    def to_json(self) -> dict:
        return {"format": FORMAT, "version": VERSION, "families": [f.to_json() for f in self.families]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Catalog":
        if data.get("format") != FORMAT:
            raise ValueError(f"not a {FORMAT} file")
        if data.get("version") != VERSION:
            raise ValueError(f"unsupported catalog version {data.get('version')!r}")
        return cls(tuple(FamilySpec.from_json(f) for f in data["families"]))


def loads(text: str) -> Catalog:
    return Catalog.from_json(json.loads(text))


def dumps(cat: Catalog) -> str:
    return json.dumps(cat.to_json(), indent=2, ensure_ascii=False) + "\n"


BUILTIN = {"modality3": "data/modality3.json", "low_modality": "data/low_modality.json"}


def load(path: str | Path | None = None) -> Catalog:
    """Load a catalog file or a built-in catalog by name (``modality3`` by default)."""
    if path is None:
        path = "modality3"
    if str(path) in BUILTIN:
        text = resources.files("singspec").joinpath(BUILTIN[str(path)]).read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return loads(text)


def save(cat: Catalog, path: str | Path) -> None:
    Path(path).write_text(dumps(cat), encoding="utf-8")


def _env(fam: FamilySpec, params: Mapping[str, int], moduli: Mapping[str, object] | None):
    env: dict[str, object] = dict(DEFAULT_MODULI)
    env.update(dict(fam.moduli))
    env.update(moduli or {})
    env.update(fam.check_params(params))
    return env


def instantiate(fam: FamilySpec, params: Mapping[str, int], moduli: Mapping[str, object] | None = None,
                *, check_mu: bool = True) -> Polynomial:
    """Concrete representative; mu is checked against the family formula."""
    env = _env(fam, params, moduli)
    f = parse(fam.template, fam.nvars, env)
    if check_mu:
        expected = expected_mu(fam, params)
        mu = milnor_number(f)
        if mu != expected:
            raise DomainError(f"{fam.name} at {dict(params)}: mu={mu}, formula gives {expected}")
    return f


def expected_mu(fam: FamilySpec, params: Mapping[str, int]) -> int:
    value = evaluate(fam.mu, fam.check_params(params))
    return int(value)


def expected_spectrum_at(fam: FamilySpec, params: Mapping[str, int]) -> Spectrum | None:
    if fam.spectrum is None:
        return None
    return Spectrum(expand_list(fam.spectrum, fam.check_params(params)), fam.nvars)


def expected_rset_at(fam: FamilySpec, params: Mapping[str, int]) -> Spectrum | None:
    if fam.rset is None:
        return None
    return Spectrum(expand_list(fam.rset, fam.check_params(params)), fam.nvars)


def tau_max_values(fam: FamilySpec, params: Mapping[str, int]) -> list[int]:
    mu = expected_mu(fam, params)
    return [int(evaluate(t, {"mu": mu})) for t in fam.tau_max]


@dataclass
class VerificationRecord:
    """Outcome of one family member. ``None`` marks a check with no tabulated value."""

    family: str
    params: dict
    mu_ok: bool = False
    spectrum_ok: bool | None = False
    rset_ok: bool | None = False
    hertling_ok: bool = False
    ghcts_ok: bool = False
    mismatches: list[str] = field(default_factory=list)
    mu: int | None = None
    tau: int | None = None
    spectrum: tuple[Fraction, ...] = ()
    rset: tuple[Fraction, ...] = ()

    @property
    def ok(self) -> bool:
        flags = (self.mu_ok, self.spectrum_ok, self.rset_ok, self.hertling_ok, self.ghcts_ok)
        return not self.mismatches and all(f is not False for f in flags)


def verify(fam: FamilySpec, params: Mapping[str, int], moduli=None) -> VerificationRecord:
    """Compute everything for one family member and compare with the closed forms."""
    rec = VerificationRecord(fam.name, dict(params))
    try:
        f = instantiate(fam, params, moduli, check_mu=False)
        rec.mu = milnor_number(f)
        want_mu = expected_mu(fam, params)
        rec.mu_ok = rec.mu == want_mu
        if not rec.mu_ok:
            rec.mismatches.append(f"mu: computed {rec.mu}, expected {want_mu}")
        rep = exclusion_report(f, assume_nondegenerate=fam.assume_nondegenerate)
        rec.tau = rep.tau
        rec.spectrum = rep.sp.values
        rec.rset = rep.rset.values
        want_sp = expected_spectrum_at(fam, params)
        rec.spectrum_ok = None if want_sp is None else rep.sp == want_sp
        if rec.spectrum_ok is False:
            extra = rep.sp - want_sp
            missing = want_sp - rep.sp
            rec.mismatches.append(f"spectrum: computed-only {extra}, expected-only {missing}")
        want_r = expected_rset_at(fam, params)
        rec.rset_ok = None if want_r is None else rep.rset == want_r
        if rec.rset_ok is False:
            rec.mismatches.append(f"rset: computed {rep.rset}, expected {want_r}")
        h = hertling_check(rep.sp)
        rec.hertling_ok = h.holds
        if not h.holds:
            rec.mismatches.append(f"hertling: slack {h.slack}")
        rec.ghcts_ok = True
        for t in tau_max_values(fam, params):
            g = ghcts_reduced_check(rep.sp, t)
            if not g.holds:
                rec.ghcts_ok = False
                rec.mismatches.append(f"ghcts at tau_max={t}: slack {g.slack}")
    except (SingspecError, ValueError) as exc:
        rec.mismatches.append(f"{type(exc).__name__}: {exc}")
    return rec


def parameter_grid(fam: FamilySpec, rmax: int, smax: int, kmax: int) -> list[dict[str, int]]:
    """In-domain parameter tuples with r <= rmax, s <= smax, k <= kmax.

    Other parameter names are capped by ``rmax``; every range starts at 1 or
    the family minimum, whichever is larger.
    """
    caps = {"r": rmax, "s": smax, "k": kmax}
    ranges = []
    for p, lo in fam.params:
        ranges.append(range(max(lo, 1), caps.get(p, rmax) + 1))
    out = []
    for combo in product(*ranges):
        params = dict(zip(fam.param_names, combo))
        try:
            fam.check_params(params)
        except DomainError:
            continue
        out.append(params)
    return out
