"""Exact linear algebra over Q and over the rational function field Q(eps).

Rationals are :class:`fractions.Fraction`.  :class:`EpsScalar` is a reduced
quotient of polynomials in one formal variable.  Matrices are dense and
immutable; every routine works over either field as long as a single matrix
does not mix them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PoleError, UsageError

Rational = Fraction
_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# dense univariate polynomials over Q, coefficient tuples low -> high

def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _pneg(p):
    return tuple(-c for c in p)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pscale(p, c):
    if not c:
        return ()
    return tuple(a * c for a in p)


def _pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    lead = q[-1]
    quot = [_ZERO] * max(len(p) - len(q) + 1, 0)
    for shift in range(len(p) - len(q), -1, -1):
        c = rem[shift + len(q) - 1] / lead
        if c:
            quot[shift] = c
            for i, b in enumerate(q):
                rem[shift + i] -= c * b
    return _trim(quot), _trim(rem[:len(q) - 1])


def _pmonic(p):
    return _pscale(p, 1 / p[-1]) if p else p


def _pgcd(p, q):
    while q:
        p, q = q, _pdivmod(p, q)[1]
    return _pmonic(p)


def _peval(p, x):
    acc = _ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pformat(p, var="eps"):
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            parts.append(mono)
        elif mono and c == -1:
            parts.append("-" + mono)
        elif mono:
            parts.append(f"{c}*{mono}")
        else:
            parts.append(str(c))
    return " + ".join(parts).replace("+ -", "- ") or "0"


class EpsScalar:
    """Element of Q(eps), kept as ``num/den`` with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=(_ONE,), _normalized=False):
        if _normalized:
            self.num, self.den = num, den
            return
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("EpsScalar with zero denominator")
        if not num:
            self.num, self.den = (), (_ONE,)
            return
        if len(den) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num, den = _pscale(num, 1 / lead), _pscale(den, 1 / lead)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls((c,) if c else (), (_ONE,), _normalized=True)

    @classmethod
    def poly(cls, coeffs):
        return cls(coeffs, (_ONE,))

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, EpsScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return EpsScalar.const(other)
        return NotImplemented

    def _is_poly(self):
        return len(self.den) == 1

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._is_poly() and other._is_poly():
            return EpsScalar(_padd(self.num, other.num), (_ONE,), _normalized=True)
        if self.den == other.den:
            return EpsScalar(_padd(self.num, other.num), self.den)
        return EpsScalar(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                         _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return EpsScalar(_pneg(self.num), self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._is_poly() and other._is_poly():
            return EpsScalar(_pmul(self.num, other.num), (_ONE,), _normalized=True)
        return EpsScalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(eps)")
        return EpsScalar(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = EpsScalar.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # comparison -------------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._is_poly() and len(self.num) <= 1:
            return hash(self.num[0] if self.num else _ZERO)
        return hash((self.num, self.den))

    # evaluation -------------------------------------------------------------
    def at(self, value) -> Fraction:
        """Substitute a rational for eps; raises :class:`PoleError` at a pole."""
        value = Fraction(value)
        d = _peval(self.den, value)
        if not d:
            raise PoleError(f"eps = {value} is a pole of {self}", value=value)
        return _peval(self.num, value) / d

    def is_constant(self):
        return self._is_poly() and len(self.num) <= 1

    def __repr__(self):
        if self._is_poly():
            return f"EpsScalar({_pformat(self.num)})"
        return f"EpsScalar(({_pformat(self.num)})/({_pformat(self.den)}))"

    def __str__(self):
        if self._is_poly():
            return _pformat(self.num)
        return f"({_pformat(self.num)})/({_pformat(self.den)})"


EPS = EpsScalar((_ZERO, _ONE), (_ONE,), _normalized=True)


def as_scalar(x):
    if isinstance(x, (Fraction, EpsScalar)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def substitute(x, value):
    return x.at(value) if isinstance(x, EpsScalar) else x


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix; ``data`` is a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        data = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise UsageError("ragged matrix rows")
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        if any(len(c) != rows for c in columns):
            raise UsageError("column length mismatch")
        data = tuple(tuple(as_scalar(columns[j][i]) for j in range(cols)) for i in range(rows))
        return cls(rows, cols, data)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, tuple((_ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(tuple(_ONE if i == j else _ZERO for j in range(n))
                               for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    @property
    def T(self):
        return Matrix(self.cols, self.rows,
                      tuple(tuple(self.data[i][j] for i in range(self.rows))
                            for j in range(self.cols)))

    def apply(self, vec):
        if len(vec) != self.cols:
            raise UsageError(f"vector of length {len(vec)} for {self.rows}x{self.cols} matrix")
        out = []
        for r in self.data:
            acc = _ZERO
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise UsageError("matrix dimension mismatch")
            cols = [other.column(j) for j in range(other.cols)]
            return Matrix.from_columns([self.apply(c) for c in cols], self.rows)
        return self.apply(tuple(other))

    def hstack(self, other):
        if self.rows != other.rows:
            raise UsageError("hstack row mismatch")
        return Matrix(self.rows, self.cols + other.cols,
                      tuple(a + b for a, b in zip(self.data, other.data)))

    def subs(self, value) -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(tuple(substitute(x, value) for x in r) for r in self.data))

    def is_zero(self):
        return not any(x for r in self.data for x in r)


# ---------------------------------------------------------------------------
# row reduction

@dataclass(frozen=True)
class RREF:
    rank: int
    pivots: tuple
    kernel_basis: tuple
    image_basis: tuple
    reduced: Matrix


def _row_reduce(rows, ncols, track=None):
    """In-place Gauss-Jordan; leftmost nonzero pivot, first eligible row wins.

    ``track`` receives the same row operations (used to build the transform).
    Returns the pivot columns.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        src = next((i for i in range(r, nrows) if rows[i][c]), None)
        if src is None:
            continue
        if src != r:
            rows[r], rows[src] = rows[src], rows[r]
            if track is not None:
                track[r], track[src] = track[src], track[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [x * inv if x else x for x in rows[r]]
            if track is not None:
                track[r] = [x * inv if x else x for x in track[r]]
        prow = rows[r]
        trow = track[r] if track is not None else None
        for i in range(nrows):
            f = rows[i][c] if i != r else 0
            if not f:
                continue
            row = rows[i]
            for j in range(c, ncols):
                if prow[j]:
                    row[j] = row[j] - f * prow[j]
            if trow is not None:
                t = track[i]
                for j, x in enumerate(trow):
                    if x:
                        t[j] = t[j] - f * x
        pivots.append(c)
        r += 1
    return pivots


def _zero_like(m: Matrix):
    for r in m.data:
        for x in r:
            if isinstance(x, EpsScalar):
                return EpsScalar.const(0)
    return _ZERO


def rref(m: Matrix) -> RREF:
    """Reduced row echelon form with rank, pivots, kernel and row-space bases."""
    rows = [list(r) for r in m.data]
    pivots = _row_reduce(rows, m.cols)
    rank = len(pivots)
    zero = _zero_like(m)
    one = zero + 1
    pivot_set = set(pivots)
    kernel = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [zero] * m.cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        kernel.append(tuple(v))
    image = tuple(tuple(rows[i]) for i in range(rank))
    return RREF(rank, tuple(pivots), tuple(kernel), image,
                Matrix(m.rows, m.cols, tuple(tuple(r) for r in rows)))


def rank(m: Matrix) -> int:
    rows = [list(r) for r in m.data]
    return len(_row_reduce(rows, m.cols))


class Factorization:
    """Reusable reduction ``T @ A = R`` for repeated solves against one matrix."""

    def __init__(self, a: Matrix):
        self.matrix = a
        rows = [list(r) for r in a.data]
        zero = _zero_like(a)
        track = [[zero + 1 if i == j else zero for j in range(a.rows)] for i in range(a.rows)]
        self.pivots = tuple(_row_reduce(rows, a.cols, track))
        self.rank = len(self.pivots)
        self._zero = zero
        # sparse columns of T, so a solve only touches nonzero entries of b
        self._tcols = [[(i, track[i][j]) for i in range(a.rows) if track[i][j]]
                       for j in range(a.rows)]

    def solve(self, b):
        if len(b) != self.matrix.rows:
            raise UsageError(f"right-hand side of length {len(b)} for "
                             f"{self.matrix.rows}x{self.matrix.cols} system")
        c = [self._zero] * self.matrix.rows
        for j, x in enumerate(b):
            if x:
                for i, t in self._tcols[j]:
                    c[i] = c[i] + t * x
        if any(c[self.rank:]):
            return None
        x = [self._zero] * self.matrix.cols
        for i, p in enumerate(self.pivots):
            x[p] = c[i]
        return tuple(x)

    def contains(self, b) -> bool:
        return self.solve(b) is not None


def solve(a: Matrix, b) -> Optional[tuple]:
    """Particular solution of ``a x = b`` with free variables 0, or ``None``."""
    return Factorization(a).solve(tuple(as_scalar(x) for x in b))


def rank_at(m: Matrix, value) -> int:
    """Rank after substituting ``eps = value``."""
    return rank(m.subs(Fraction(value)))


def det(m: Matrix):
    if m.rows != m.cols:
        raise UsageError("determinant of a non-square matrix")
    rows = [list(r) for r in m.data]
    n = m.rows
    acc = _zero_like(m) + 1
    for c in range(n):
        src = next((i for i in range(c, n) if rows[i][c]), None)
        if src is None:
            return acc * 0
        if src != c:
            rows[c], rows[src] = rows[src], rows[c]
            acc = -acc
        p = rows[c][c]
        acc = acc * p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return acc


class IncrementalSpan:
    """Echelon rows kept in insertion order; ``add`` reports whether v was new.

    Each stored row is reduced against all earlier rows, so a single pass in
    insertion order clears every earlier pivot.
    """

    def __init__(self, vectors=()):
        self._rows = []
        for v in vectors:
            self.add(v)

    def _reduce(self, v):
        v = list(v)
        for c, row in self._rows:
            f = v[c]
            if f:
                for j, x in enumerate(row):
                    if x:
                        v[j] = v[j] - f * x
        return v

    def add(self, v) -> bool:
        v = self._reduce(v)
        c = next((j for j, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = 1 / v[c]
        self._rows.append((c, [x * inv if x else x for x in v]))
        return True

    def contains(self, v) -> bool:
        return not any(self._reduce(v))

    def __len__(self):
        return len(self._rows)


def canonical_basis(vectors, length) -> tuple:
    """RREF-canonical basis of the span of ``vectors``."""
    if not vectors:
        return ()
    return rref(Matrix.from_rows(vectors, length)).image_basis


def span_contains(vectors, v, length) -> bool:
    if not vectors:
        return not any(v)
    return Factorization(Matrix.from_columns(list(vectors), length)).contains(tuple(v))


def halving_schedule(steps=20):
    return [Fraction(1, 2 ** m) for m in range(1, steps + 1)]
