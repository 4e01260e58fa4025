"""Cohomology ring of a symplectic blow-up and its Lefschetz analysis.

An element of H(X~) is ``f*x + a u_1 + ... + a^(k-1) u_(k-1)`` with x in H(X)
and u_j in H(M).  Products follow

    f*v f*w = f*(vw),   f*v . a^j u = a^j (i*v) u,   a^i u . a^j w = a^(i+j) uw,
    a^k u = -f*(i_! u) - sum_j a^j c_(k-j) u.

The symplectic class of the blow-up is f*omega + eps a with eps a formal
parameter, so ranks are generic ranks over Q(eps).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence

from .cohomring import (CohomologyRing, GradedAlgebra, Pushforward, RingElement, RingMap,
                        pushforward)
from .errors import HypothesisError, InternalCheckError, NotSymplecticError, UsageError
from .exactla import EPS, EpsScalar, Matrix, det, halving_schedule, rank_at, span_contains
from .lefschetz import (LefschetzReport, SymplecticClass, full_report, level_report,
                        symplectic_class)


@dataclass
class BlowupInput:
    ambient: CohomologyRing
    sub: CohomologyRing
    imap: RingMap
    k: int
    chern: List[RingElement]
    push: Pushforward
    thom: RingElement
    euler: RingElement


def make_blowup_input(ambient: CohomologyRing, sub: CohomologyRing, imap: RingMap,
                      chern: Optional[Sequence[RingElement]] = None) -> BlowupInput:
    """Derive k, the Thom class and the Euler class; ``chern`` defaults to zero."""
    if imap.source is not ambient or imap.target is not sub:
        raise UsageError("restriction map must go from the ambient ring to the sub ring")
    codim = ambient.dimension - sub.dimension
    if codim < 0 or codim % 2:
        raise UsageError(f"real codimension {codim} is not a nonnegative even number")
    k = codim // 2
    if k < 2:
        raise HypothesisError("codimension below 4: the blow-up does not change X",
                              hypothesis="k>=2", k=k)
    if chern is None:
        chern = [sub.zero(2 * j) for j in range(1, k)]
    chern = list(chern)
    if len(chern) != k - 1:
        raise UsageError(f"expected {k - 1} Chern classes c_1..c_{k - 1}, got {len(chern)}")
    for j, c in enumerate(chern, start=1):
        if c.ring is not sub or (c.degree != 2 * j and not c.is_zero()):
            raise UsageError(f"c_{j} must be a degree-{2 * j} class of the submanifold")
    chern = [c if c.degree == 2 * j else sub.zero(2 * j) for j, c in enumerate(chern, start=1)]
    push, thom = pushforward(imap, codim)
    return BlowupInput(ambient, sub, imap, k, chern, push, thom, imap(thom))


@dataclass(frozen=True)
class BlowupElement:
    """``f*x + sum_j a^j u[j-1]``; ``u`` has k-1 entries."""

    degree: int
    x: RingElement
    u: tuple

    def label(self):
        parts = []
        if not self.x.is_zero():
            parts.append(f"f*({self.x.label()})")
        for j, uj in enumerate(self.u, start=1):
            if not uj.is_zero():
                power = "a" if j == 1 else f"a^{j}"
                parts.append(f"{power}({uj.label()})")
        return " + ".join(parts) or "0"


class BlowupRing(GradedAlgebra):
    def __init__(self, data: BlowupInput):
        self.input = data
        X, M, k = data.ambient, data.sub, data.k
        self.k = k
        self.X, self.M = X, M
        top = X.dimension
        betti, labels, self._offsets = [], [], []
        for m in range(top + 1):
            offs = {0: 0}
            size = X.betti_at(m)
            names = [f"f*{s}" for s in X.labels[m]] if m < len(X.labels) else []
            for j in range(1, k):
                offs[j] = size
                b = M.betti_at(m - 2 * j)
                size += b
                power = "a" if j == 1 else f"a^{j}"
                names += [power if s == "1" else f"{power}.{s}" for s in
                          (M.labels[m - 2 * j] if 0 <= m - 2 * j < len(M.labels) else ())][:b]
            betti.append(size)
            labels.append(names)
            self._offsets.append(offs)
        super().__init__(top, betti, labels)

    # conversions ------------------------------------------------------------
    def components(self, el: RingElement) -> BlowupElement:
        m = el.degree
        offs = self._offsets[m] if 0 <= m < len(self._offsets) else {0: 0}
        bx = self.X.betti_at(m)
        x = RingElement(self.X, m, tuple(el.coeffs[:bx]))
        us = []
        for j in range(1, self.k):
            b = self.M.betti_at(m - 2 * j)
            start = offs.get(j, 0)
            us.append(RingElement(self.M, m - 2 * j, tuple(el.coeffs[start:start + b])))
        return BlowupElement(m, x, tuple(us))

    def flatten(self, be: BlowupElement) -> RingElement:
        coeffs = list(be.x.coeffs)
        for uj in be.u:
            coeffs.extend(uj.coeffs)
        return RingElement(self, be.degree, tuple(coeffs))

    def blowup_element(self, x: Optional[RingElement], us: Dict[int, RingElement], degree: int):
        xx = x if x is not None else self.X.zero(degree)
        u = tuple(us.get(j, self.M.zero(degree - 2 * j)) for j in range(1, self.k))
        for j, uj in enumerate(u, start=1):
            if not uj.is_zero() and uj.degree != degree - 2 * j:
                raise UsageError(f"a^{j} coefficient has degree {uj.degree}")
        if not xx.is_zero() and xx.degree != degree:
            raise UsageError("ambient component has the wrong degree")
        return BlowupElement(degree, xx, u)

    def pullback(self, x: RingElement) -> RingElement:
        """f*x."""
        return self.flatten(self.blowup_element(x, {}, x.degree))

    def a_power_times(self, m: int, u: RingElement) -> RingElement:
        """a^m u, reduced."""
        return self.flatten(self._reduce(m, u))

    def a(self) -> RingElement:
        return self.a_power_times(1, self.M.one())

    # multiplication ---------------------------------------------------------
    def _reduce(self, m: int, u: RingElement) -> BlowupElement:
        deg = u.degree + 2 * m
        if m == 0:
            raise UsageError("a^0 u is not an element of the blow-up ring")
        if u.is_zero():
            return self.blowup_element(None, {}, deg)
        if m < self.k:
            return self.blowup_element(None, {m: u}, deg)
        k, data = self.k, self.input
        s = m - k
        pushed = data.push(u)
        if s == 0:
            out = self.blowup_element(-pushed, {}, deg)
        else:
            out = self._reduce(s, -data.imap(pushed))
        for j in range(1, k):
            c = data.chern[k - j - 1]
            if c.is_zero():
                continue
            out = self._add(out, self._reduce(j + s, -(c * u)))
        return out

    def _add(self, p: BlowupElement, q: BlowupElement) -> BlowupElement:
        return BlowupElement(p.degree, p.x + q.x, tuple(a + b for a, b in zip(p.u, q.u)))

    def multiply_components(self, p: BlowupElement, q: BlowupElement) -> BlowupElement:
        deg = p.degree + q.degree
        i = self.input.imap
        out = self.blowup_element(p.x * q.x, {}, deg)
        ix, iy = i(p.x), i(q.x)
        for j, w in enumerate(q.u, start=1):
            if not w.is_zero():
                out = self._add(out, self._reduce(j, ix * w))
        for j, u in enumerate(p.u, start=1):
            if not u.is_zero():
                out = self._add(out, self._reduce(j, u * iy))
        for j1, u in enumerate(p.u, start=1):
            if u.is_zero():
                continue
            for j2, w in enumerate(q.u, start=1):
                if not w.is_zero():
                    out = self._add(out, self._reduce(j1 + j2, u * w))
        return out

    def _basis_product(self, p, i, q, j):
        if p + q > self.dimension:
            return ()
        bp = self.components(self.basis_element(p, i))
        bq = self.components(self.basis_element(q, j))
        return self.flatten(self.multiply_components(bp, bq)).coeffs


def build_blowup(data: BlowupInput) -> BlowupRing:
    ring = BlowupRing(data)
    for m in ring.degrees():
        expected = data.ambient.betti_at(m) + sum(data.sub.betti_at(m - 2 * j)
                                                  for j in range(1, data.k))
        if ring.betti[m] != expected:
            raise InternalCheckError(f"Betti additivity fails in degree {m}")
    return ring


def multiply(r: BlowupRing, p: BlowupElement, q: BlowupElement) -> BlowupElement:
    return r.multiply_components(p, q)


# ---------------------------------------------------------------------------
# Lefschetz over Q(eps)

@dataclass
class Stabilization:
    level: int
    generic_rank: int
    samples: List[int]
    stable_from: int

    @property
    def eps(self) -> Fraction:
        return Fraction(1, 2 ** self.stable_from)

    def to_json(self):
        return {"k": self.level, "generic_rank": self.generic_rank,
                "sampled_ranks": self.samples, "stable_from_exponent": self.stable_from,
                "eps": str(self.eps)}


@dataclass
class GenericLefschetzReport:
    report: LefschetzReport
    stabilization: List[Stabilization]
    omega_tilde: RingElement
    admissible_eps: Fraction

    @property
    def lefschetz(self):
        return self.report.lefschetz

    def kernel_dims(self):
        return self.report.kernel_dims()

    def to_json(self):
        out = self.report.to_json()
        out["stabilization"] = [s.to_json() for s in self.stabilization]
        out["admissible_eps"] = str(self.admissible_eps)
        return out


def omega_tilde(r: BlowupRing, omega: RingElement) -> RingElement:
    """f*omega + eps a, with coefficients in Q(eps)."""
    base = r.pullback(omega)
    a = r.a()
    coeffs = tuple(EpsScalar.const(x) + EPS * y for x, y in zip(base.coeffs, a.coeffs))
    return RingElement(r, 2, coeffs)


def _stabilize(m: Matrix, generic: int, level: int, steps=20) -> Stabilization:
    samples = [rank_at(m, e) for e in halving_schedule(steps)]
    if samples[-1] != generic or max(samples) != generic:
        raise InternalCheckError(f"sampled ranks {samples} never settle on the generic "
                                 f"rank {generic} at level {level}")
    stable = steps
    while stable > 1 and samples[stable - 2] == generic:
        stable -= 1
    return Stabilization(level, generic, samples, stable)


def lefschetz_report_generic(r: BlowupRing, omega) -> GenericLefschetzReport:
    if isinstance(omega, SymplecticClass):
        omega = omega.omega
    symplectic_class(r.X, omega)
    wt = omega_tilde(r, omega)
    n = r.dimension // 2
    top = wt ** n
    if top.is_zero():
        raise NotSymplecticError("(f*omega + eps a)^n vanishes identically")
    sc = SymplecticClass(r, wt, n)
    levels, stab = [], []
    for k in range(n, -1, -1):
        lv = level_report(r, sc, k)
        levels.append(lv)
        m = r.multiplication_matrix(wt ** (n - k), k)
        stab.append(_stabilize(m, lv.rank, k))
    worst = max(s.stable_from for s in stab)
    exponent = worst
    while not any(c.at(Fraction(1, 2 ** exponent)) for c in top.coeffs):
        exponent += 1
    return GenericLefschetzReport(LefschetzReport(n, levels), stab, wt, Fraction(1, 2 ** exponent))


# ---------------------------------------------------------------------------
# predictors

@dataclass(frozen=True)
class Prediction:
    """Predicted blow-up kernel dimension at one level.

    ``relation`` is ``"equal"`` (dim == bound), ``"drop_exact"`` (dim == bound,
    one less than the ambient) or ``"at_most"`` (dim <= bound).
    """

    level: int
    relation: str
    ambient_kernel_dim: int
    bound: int
    rule: str

    def holds(self, observed: int) -> bool:
        if self.relation == "at_most":
            return observed <= self.bound
        return observed == self.bound

    def to_json(self):
        return {"k": self.level, "relation": self.relation,
                "ambient_kernel_dim": self.ambient_kernel_dim, "bound": self.bound,
                "rule": self.rule}


def check_predictions(predictions: Sequence[Prediction], report) -> List[tuple]:
    dims = report.kernel_dims()
    return [(p, dims[p.level], p.holds(dims[p.level])) for p in predictions]


def _kernel(ring, omega, n, level):
    sc = SymplecticClass(ring, omega, n)
    lv = level_report(ring, sc, level)
    return [RingElement(ring, level, v) for v in lv.kernel_basis]


def _in_image(ring, power: RingElement, source_degree: int, x: RingElement) -> bool:
    m = ring.multiplication_matrix(power, source_degree)
    return span_contains([m.column(j) for j in range(m.cols)], x.coeffs, m.rows)


def predict_surface_blowup(ambient: CohomologyRing, omega: RingElement, sub: CohomologyRing,
                           imap: RingMap, thom: RingElement) -> List[Prediction]:
    """Kernel predictions for blowing up along a surface."""
    if sub.dimension != 2:
        raise HypothesisError(f"submanifold has dimension {sub.dimension}, not 2",
                              hypothesis="surface")
    sc = symplectic_class(ambient, omega)
    n = sc.n
    preds = []
    for level in range(n, 2, -1):
        kd = len(_kernel(ambient, omega, n, level))
        preds.append(Prediction(level, "equal", kd, kd, "levels above 2 keep their kernel"))
    if n >= 2:
        ker2 = _kernel(ambient, omega, n, 2)
        restricts = any(not imap(v).is_zero() for v in ker2)
        thom_outside = not _in_image(ambient, omega ** (n - 2), 2, thom)
        if restricts != thom_outside:
            raise InternalCheckError("level-2 conditions disagree (restriction vs Thom class)")
        if restricts:
            preds.append(Prediction(2, "drop_exact", len(ker2), len(ker2) - 1,
                                    "kernel class restricting nontrivially to M"))
        else:
            preds.append(Prediction(2, "equal", len(ker2), len(ker2),
                                    "no kernel class restricts nontrivially"))
    ker1 = _kernel(ambient, omega, n, 1)
    pairs = any(not sub.integrate(imap(v1 * v2)) == 0 for v1 in ker1 for v2 in ker1)
    thom_pairs = any(not _in_image(ambient, omega ** (n - 1), 1, thom * v) for v in ker1)
    if pairs != thom_pairs:
        raise InternalCheckError("level-1 conditions disagree (pairing vs Thom class)")
    if pairs:
        preds.append(Prediction(1, "at_most", len(ker1), len(ker1) - 2,
                                "kernel pair with nonzero restricted product"))
    else:
        preds.append(Prediction(1, "at_most", len(ker1), len(ker1),
                                "no kernel pair restricts nontrivially"))
    preds.append(Prediction(0, "equal", 0, 0, "top power nonzero"))
    return preds


def predict_general(ambient: CohomologyRing, omega: RingElement, sub: CohomologyRing,
                    sigma: Optional[RingElement], imap: RingMap) -> List[Prediction]:
    """Kernel predictions for i > 2d, i = 2d and i < 2d."""
    sc = symplectic_class(ambient, omega)
    n = sc.n
    d = sub.dimension // 2
    if 2 * d >= n:
        raise HypothesisError(f"needs 2d < n, got d = {d}, n = {n}", hypothesis="2d<n")
    if sigma is None:
        sigma = imap(omega)
    if imap(omega) != sigma:
        raise HypothesisError("sigma is not the restriction of omega", hypothesis="symplectic embedding")
    preds = []
    for level in range(n, 2 * d, -1):
        kd = len(_kernel(ambient, omega, n, level))
        preds.append(Prediction(level, "equal", kd, kd, "i > 2d"))
    ker = _kernel(ambient, omega, n, 2 * d)
    if any(not imap(v).is_zero() for v in ker):
        preds.append(Prediction(2 * d, "drop_exact", len(ker), len(ker) - 1, "i = 2d, restricting class"))
    else:
        preds.append(Prediction(2 * d, "equal", len(ker), len(ker), "i = 2d"))
    if d > 0:
        if sub.dimension and not full_report(sub, symplectic_class(sub, sigma)).lefschetz:
            raise HypothesisError("submanifold fails the Lefschetz property",
                                  hypothesis="submanifold lefschetz")
        for level in range(2 * d - 1, -1, -1):
            kd = len(_kernel(ambient, omega, n, level))
            preds.append(Prediction(level, "at_most", kd, kd, "i < 2d"))
    return preds


# ---------------------------------------------------------------------------
# binomial Toeplitz determinants

def _b(n, j):
    return comb(n, j) if 0 <= j <= n else 0


def toeplitz_matrix(n: int, p: int, k: int) -> Matrix:
    return Matrix.from_rows([[_b(n, k + p - r - c) for c in range(p + 1)] for r in range(p + 1)])


def toeplitz_det(n: int, p: int, k: int) -> int:
    """Determinant of the (p+1)x(p+1) matrix with entries binomial(n, k+p-r-c)."""
    if min(n, p, k) < 0:
        raise UsageError("n, p, k must be nonnegative")
    value = det(toeplitz_matrix(n, p, k))
    if value.denominator != 1:
        raise InternalCheckError("integer determinant came out fractional")
    return int(value)


def toeplitz_recurrence_factor(n: int, p: int, k: int) -> Fraction:
    """Ratio between the (n+1) and n determinants of size p+1."""
    return Fraction(factorial(n + p + 1) * factorial(n - k),
                    factorial(n) * factorial(n + p - k + 1))
