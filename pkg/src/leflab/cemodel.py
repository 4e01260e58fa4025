"""Exterior algebra on degree-one generators and the Chevalley-Eilenberg differential.

Generators are numbered from 1.  A monomial is a strictly increasing tuple of
generator indices, so ``(1, 3)`` is e1^e3.  Structure strings such as
``"(0,0,12)"`` give ``d e_i`` for each generator in turn.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Optional, Tuple

from .errors import DSquaredError, StructureParseError, UsageError
from .exactla import Matrix

Monomial = Tuple[int, ...]

_ZERO = Fraction(0)


def normalize_monomial(indices) -> Tuple[int, Optional[Monomial]]:
    """Sort ``indices`` and return ``(sign, monomial)``; ``(0, None)`` if an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    inversions = sum(1 for a, b in combinations(range(len(idx)), 2) if idx[a] > idx[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


def monomial_label(m: Monomial, dotted: bool = False) -> str:
    if not m:
        return "1"
    if dotted or any(i > 9 for i in m):
        return "e" + ".".join(map(str, m))
    return "e" + "".join(map(str, m))


@dataclass(frozen=True)
class Cochain:
    """Homogeneous element of the exterior algebra with rational coefficients."""

    n: int
    degree: int
    terms: Tuple[Tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, n, degree, terms: Dict[Monomial, Fraction]) -> "Cochain":
        items = []
        for m, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            if len(m) != degree:
                raise UsageError(f"monomial {m} in a degree-{degree} cochain")
            if m and (m[0] < 1 or m[-1] > n):
                raise UsageError(f"monomial {m} out of range for {n} generators")
            items.append((tuple(m), c))
        items.sort()
        return cls(n, degree, tuple(items))

    @classmethod
    def zero(cls, n, degree):
        return cls(n, degree, ())

    @classmethod
    def one(cls, n):
        return cls(n, 0, (((), Fraction(1)),))

    @classmethod
    def generator(cls, n, i):
        return cls.monomial(n, (i,))

    @classmethod
    def monomial(cls, n, indices, coeff=1):
        sign, m = normalize_monomial(indices)
        if m is None:
            return cls.zero(n, len(indices))
        return cls.from_dict(n, len(m), {m: sign * Fraction(coeff)})

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.as_dict().get(tuple(m), Fraction(0))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if self.n != other.n:
            raise UsageError(f"cochains on {self.n} and {other.n} generators")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree and self.terms and other.terms:
            raise UsageError("adding cochains of different degree")
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return Cochain.from_dict(self.n, self.degree, acc)

    def __neg__(self):
        return Cochain(self.n, self.degree, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Cochain.zero(self.n, self.degree)
        return Cochain(self.n, self.degree, tuple((m, c * x) for m, x in self.terms))

    def __mul__(self, other):
        if isinstance(other, Cochain):
            return wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def bar(self):
        """``(-1)^degree`` times the cochain."""
        return -self if self.degree % 2 else self

    def vector(self, basis) -> tuple:
        out = [_ZERO] * len(basis)
        if self.terms:
            index = _basis_index(basis) if isinstance(basis, tuple) else \
                {m: i for i, m in enumerate(basis)}
            for m, c in self.terms:
                i = index.get(m)
                if i is None:
                    raise UsageError(f"monomial {m} not in the given basis")
                out[i] = c
        return tuple(out)

    @classmethod
    def from_vector(cls, n, degree, basis, vec):
        return cls.from_dict(n, degree, {m: c for m, c in zip(basis, vec) if c})

    def label(self) -> str:
        if not self.terms:
            return "0"
        dotted = self.n > 9
        parts = []
        for m, c in self.terms:
            name = monomial_label(m, dotted)
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            elif c > 0:
                parts.append(f"+{c}*{name}")
            else:
                parts.append(f"-{-c}*{name}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __str__(self):
        return self.label()


def _wedge_monomials(a: Monomial, b: Monomial):
    if set(a) & set(b):
        return 0, None
    # sign = (-1)^(number of pairs i in a, j in b with i > j)
    crossings = 0
    for i in a:
        for j in b:
            if i > j:
                crossings += 1
    return (-1 if crossings % 2 else 1), tuple(sorted(a + b))


def wedge(x: Cochain, y: Cochain) -> Cochain:
    x._check(y)
    acc: Dict[Monomial, Fraction] = {}
    for ma, ca in x.terms:
        for mb, cb in y.terms:
            s, m = _wedge_monomials(ma, mb)
            if s:
                acc[m] = acc.get(m, 0) + s * ca * cb
    return Cochain.from_dict(x.n, x.degree + y.degree, acc)


def wedge_all(*xs: Cochain) -> Cochain:
    out = xs[0]
    for x in xs[1:]:
        out = wedge(out, x)
    return out


# ---------------------------------------------------------------------------
# structure specs

@dataclass(frozen=True)
class StructureSpec:
    """``differentials[i-1]`` lists ``(coeff, j, k)`` with d e_i = sum coeff * e_j^e_k."""

    n: int
    differentials: Tuple[Tuple[Tuple[Fraction, int, int], ...], ...] = field(default=())

    def __post_init__(self):
        if len(self.differentials) != self.n:
            raise UsageError("one differential per generator required")
        for terms in self.differentials:
            for _, j, k in terms:
                if not (1 <= j < k <= self.n):
                    raise UsageError(f"bad pair ({j},{k}) for {self.n} generators")

    def d_generator(self, i: int) -> Cochain:
        acc: Dict[Monomial, Fraction] = {}
        for c, j, k in self.differentials[i - 1]:
            acc[(j, k)] = acc.get((j, k), 0) + c
        return Cochain.from_dict(self.n, 2, acc)

    def is_abelian(self):
        return not any(self.d_generator(i) for i in range(1, self.n + 1))

    def __str__(self):
        return format_structure(self)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>[(),+\-*.]))")


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise StructureParseError(f"unexpected character {text[pos]!r}", text, pos)
            start = mt.start("num") if mt.group("num") else mt.start("sym")
            self.tokens.append((mt.group("num") or mt.group("sym"), start))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "token"
            raise StructureParseError(f"expected {want!r}, found {tok!r}", self.text, self.pos())
        self.i += 1
        return tok

    def error(self, message):
        return StructureParseError(message, self.text, self.pos())


def _parse_indices(lex: _Lexer, allow_rational_coeff: bool):
    """Parse ``[coeff "*"] indices``; returns (coeff, index tuple)."""
    start = lex.pos()
    tok = lex.take()
    if not tok[0].isdigit():
        raise StructureParseError(f"expected a number, found {tok!r}", lex.text, start)
    coeff = Fraction(1)
    if lex.peek() == "*":
        if "/" in tok and not allow_rational_coeff:
            raise StructureParseError("rational coefficient not allowed here", lex.text, start)
        coeff = Fraction(tok)
        lex.take("*")
        start = lex.pos()
        tok = lex.take()
        if not tok[0].isdigit():
            raise StructureParseError(f"expected indices, found {tok!r}", lex.text, start)
    if "/" in tok:
        raise StructureParseError("indices must be integers", lex.text, start)
    if lex.peek() == ".":
        idx = [int(tok)]
        while lex.peek() == ".":
            lex.take(".")
            p = lex.pos()
            t = lex.take()
            if not t.isdigit():
                raise StructureParseError("expected an index after '.'", lex.text, p)
            idx.append(int(t))
    else:
        idx = [int(ch) for ch in tok]
    return coeff, tuple(idx), start


def parse_structure(text: str) -> StructureSpec:
    """Parse structure notation such as ``"(0,0,12)"`` or ``"(0,0,1.2,0,0,4.5)"``."""
    lex = _Lexer(text)
    lex.take("(")
    entries = []
    while True:
        entries.append(_parse_entry(lex))
        tok = lex.take()
        if tok == ")":
            break
        if tok != ",":
            raise StructureParseError(f"expected ',' or ')', found {tok!r}", text, lex.tokens[lex.i - 1][1])
    if lex.peek() is not None:
        raise lex.error("trailing input")
    n = len(entries)
    diffs = []
    for terms in entries:
        for _, j, k, p in terms:
            if not (1 <= j <= n and 1 <= k <= n):
                raise StructureParseError(f"index out of range 1..{n}", text, p)
            if j >= k:
                raise StructureParseError(f"pair {j}{k} must have j < k", text, p)
        diffs.append(tuple((c, j, k) for c, j, k, _ in terms))
    return StructureSpec(n, tuple(diffs))


def _parse_entry(lex):
    if lex.peek() == "0" and lex.i + 1 < len(lex.tokens) and lex.tokens[lex.i + 1][0] in ",)":
        lex.take()
        return []
    terms = []
    sign = 1
    if lex.peek() in ("+", "-"):
        sign = -1 if lex.take() == "-" else 1
    while True:
        coeff, idx, p = _parse_indices(lex, allow_rational_coeff=False)
        if len(idx) != 2:
            raise StructureParseError("a structure term must name exactly two generators", lex.text, p)
        terms.append((sign * coeff, idx[0], idx[1], p))
        if lex.peek() in ("+", "-"):
            sign = -1 if lex.take() == "-" else 1
        else:
            return terms


def format_structure(spec: StructureSpec) -> str:
    dotted = spec.n > 9
    out = []
    for terms in spec.differentials:
        if not terms:
            out.append("0")
            continue
        s = ""
        for c, j, k in terms:
            pair = f"{j}.{k}" if dotted else f"{j}{k}"
            mag = abs(c)
            body = pair if mag == 1 else f"{mag}*{pair}"
            if c < 0:
                s += "-" + body
            else:
                s += ("+" if s else "") + body
        out.append(s)
    return "(" + ",".join(out) + ")"


def parse_cochain(text: str, n: int) -> Cochain:
    """Parse a homogeneous cochain such as ``"14+23+56"`` or ``"2*1.2-1/3*3.4"``.

    Each term names a monomial by its generator indices; ``"1"`` is e1.
    """
    lex = _Lexer(text)
    acc: Dict[Monomial, Fraction] = {}
    degree = None
    sign = 1
    if lex.peek() in ("+", "-"):
        sign = -1 if lex.take() == "-" else 1
    while True:
        coeff, idx, p = _parse_indices(lex, allow_rational_coeff=True)
        if any(i < 1 or i > n for i in idx):
            raise StructureParseError(f"index out of range 1..{n}", text, p)
        if degree is None:
            degree = len(idx)
        elif degree != len(idx):
            raise StructureParseError("terms of different degree", text, p)
        s, m = normalize_monomial(idx)
        if s:
            acc[m] = acc.get(m, 0) + s * sign * coeff
        tok = lex.peek()
        if tok is None:
            break
        if tok not in ("+", "-"):
            raise lex.error(f"unexpected {tok!r}")
        sign = -1 if lex.take() == "-" else 1
    return Cochain.from_dict(n, degree, acc)


# ---------------------------------------------------------------------------
# differential

@lru_cache(maxsize=None)
def _d_monomial(spec: StructureSpec, m: Monomial) -> Cochain:
    acc: Dict[Monomial, Fraction] = {}
    for pos, i in enumerate(m):
        de = spec.d_generator(i)
        if not de:
            continue
        sign = -1 if pos % 2 else 1
        left = Cochain.monomial(spec.n, m[:pos])
        right = Cochain.monomial(spec.n, m[pos + 1:])
        for mm, c in wedge_all(left, de, right).terms:
            acc[mm] = acc.get(mm, 0) + sign * c
    return Cochain.from_dict(spec.n, len(m) + 1, acc)


def differential(spec: StructureSpec, x: Cochain) -> Cochain:
    if x.n != spec.n:
        raise UsageError(f"cochain on {x.n} generators, structure has {spec.n}")
    acc: Dict[Monomial, Fraction] = {}
    for m, c in x.terms:
        for mm, cc in _d_monomial(spec, m).terms:
            acc[mm] = acc.get(mm, 0) + c * cc
    return Cochain.from_dict(spec.n, x.degree + 1, acc)


@dataclass(frozen=True)
class DSquaredViolation:
    generator: int
    witness: Cochain

    def __str__(self):
        return f"d(d e{self.generator}) = {self.witness.label()}"


def check_d_squared(spec: StructureSpec) -> Optional[DSquaredViolation]:
    """``None`` if d^2 = 0 on every generator, else the first offending generator."""
    for i in range(1, spec.n + 1):
        dd = differential(spec, spec.d_generator(i))
        if dd:
            return DSquaredViolation(i, dd)
    return None


def require_d_squared(spec: StructureSpec):
    bad = check_d_squared(spec)
    if bad is not None:
        raise DSquaredError(f"d^2 != 0 for {format_structure(spec)}: {bad}",
                            generator=bad.generator, witness=bad.witness.label())


def cochain_basis(spec, degree: int) -> tuple:
    n = spec if isinstance(spec, int) else spec.n
    if not 0 <= degree <= n:
        raise UsageError(f"degree {degree} outside 0..{n}")
    return _lex_basis(n, degree)


@lru_cache(maxsize=None)
def _lex_basis(n, degree):
    return tuple(combinations(range(1, n + 1), degree))


@lru_cache(maxsize=64)
def _basis_index(basis: tuple) -> dict:
    return {m: i for i, m in enumerate(basis)}


@lru_cache(maxsize=None)
def differential_matrix(spec: StructureSpec, degree: int) -> Matrix:
    """Matrix of d: C^degree -> C^(degree+1) in lexicographic monomial bases."""
    src = cochain_basis(spec, degree)
    rows = comb(spec.n, degree + 1) if degree < spec.n else 0
    if degree >= spec.n:
        return Matrix.zeros(0, len(src))
    dst = cochain_basis(spec, degree + 1)
    cols = [_d_monomial(spec, m).vector(dst) for m in src]
    return Matrix.from_columns(cols, rows)
