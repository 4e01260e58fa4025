"""Finite graded-commutative rings: CE cohomology, CP^n, restriction maps, pushforwards."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from .cemodel import (Cochain, StructureSpec, cochain_basis, differential_matrix,
                      parse_structure, require_d_squared)
from .errors import (DegeneratePairingError, InternalCheckError, NotSubtorusError,
                     UsageError)
from .exactla import Factorization, IncrementalSpan, Matrix, as_scalar, det, rank, rref

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_MAX_DIM = 16


def max_generators() -> int:
    return int(os.environ.get("LEFLAB_MAX_DIM", DEFAULT_MAX_DIM))


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True, eq=False)
class RingElement:
    ring: "GradedAlgebra"
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.ring.betti_at(self.degree):
            raise UsageError(f"{len(self.coeffs)} coefficients for H^{self.degree} "
                             f"of dimension {self.ring.betti_at(self.degree)}")

    def _same(self, other):
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            raise UsageError("elements of different rings")

    def __add__(self, other):
        self._same(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise UsageError("adding elements of different degree")
        return RingElement(self.ring, self.degree,
                           tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return RingElement(self.ring, self.degree, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return RingElement(self.ring, self.degree, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return self.ring.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and tuple(self.coeffs) == tuple(other.coeffs)

    def __hash__(self):
        return hash((id(self.ring), self.degree, self.coeffs))

    def label(self):
        return self.ring.element_label(self)

    def __repr__(self):
        return f"<H^{self.degree}: {self.label()}>"


# ---------------------------------------------------------------------------
# algebras

class GradedAlgebra:
    """Finite graded-commutative algebra given by basis structure constants over Q.

    Subclasses provide ``_basis_product(p, i, q, j)``; results are cached.
    Coefficients of elements may be Fractions or EpsScalars.
    """

    def __init__(self, dimension: int, betti: Sequence[int], labels: Sequence[Sequence[str]]):
        self.dimension = dimension
        self.betti = tuple(betti)
        self.labels = tuple(tuple(x) for x in labels)
        self._cache: Dict[tuple, tuple] = {}

    def betti_at(self, k):
        return self.betti[k] if 0 <= k < len(self.betti) else 0

    def degrees(self):
        return range(len(self.betti))

    def zero(self, degree):
        return RingElement(self, degree, (_ZERO,) * self.betti_at(degree))

    def one(self):
        return self.basis_element(0, 0)

    def basis_element(self, degree, i):
        v = [_ZERO] * self.betti_at(degree)
        v[i] = _ONE
        return RingElement(self, degree, tuple(v))

    def basis(self, degree):
        return [self.basis_element(degree, i) for i in range(self.betti_at(degree))]

    def element(self, degree, coeffs):
        return RingElement(self, degree, tuple(as_scalar(c) for c in coeffs))

    def basis_product(self, p, i, q, j) -> tuple:
        key = (p, i, q, j)
        out = self._cache.get(key)
        if out is None:
            out = tuple(self._basis_product(p, i, q, j))
            self._cache[key] = out
        return out

    def _basis_product(self, p, i, q, j):
        raise NotImplementedError

    def multiply(self, x: RingElement, y: RingElement) -> RingElement:
        x._same(y)
        deg = x.degree + y.degree
        size = self.betti_at(deg)
        acc = [_ZERO] * size
        if size == 0 or x.is_zero() or y.is_zero():
            return RingElement(self, deg, tuple(acc))
        for i, a in enumerate(x.coeffs):
            if not a:
                continue
            for j, b in enumerate(y.coeffs):
                if not b:
                    continue
                ab = a * b
                for l, c in enumerate(self.basis_product(x.degree, i, y.degree, j)):
                    if c:
                        acc[l] = acc[l] + ab * c
        return RingElement(self, deg, tuple(acc))

    def multiplication_matrix(self, x: RingElement, degree: int) -> Matrix:
        """Matrix of ``y -> x*y`` from degree ``degree`` to ``degree + x.degree``."""
        rows = self.betti_at(degree + x.degree)
        cols = [(x * b).coeffs for b in self.basis(degree)]
        return Matrix.from_columns(cols, rows)

    def element_label(self, x: RingElement) -> str:
        parts = []
        for c, name in zip(x.coeffs, self.labels[x.degree] if x.degree < len(self.labels) else ()):
            if not c:
                continue
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            elif not isinstance(c, (Fraction, int)):
                parts.append(f"+({c})*{name}")
            elif c > 0:
                parts.append(f"+{c}*{name}")
            else:
                parts.append(f"-{-c}*{name}")
        out = "".join(parts)
        return (out[1:] if out.startswith("+") else out) or "0"

    def products_table(self):
        """Sparse list of nonzero structure constants ``(p, i, q, j, l, coeff)`` with p <= q."""
        out = []
        for p in self.degrees():
            for q in range(p, len(self.betti)):
                if p + q >= len(self.betti):
                    continue
                for i in range(self.betti[p]):
                    for j in range(self.betti[q]):
                        for l, c in enumerate(self.basis_product(p, i, q, j)):
                            if c:
                                out.append((p, i, q, j, l, c))
        return out


class CohomologyRing(GradedAlgebra):
    """Graded ring with an integration functional on its top degree.

    ``integration[i]`` is the integral of the i-th top-degree basis class.
    """

    def __init__(self, dimension, betti, labels, integration):
        super().__init__(dimension, betti, labels)
        self.integration = tuple(Fraction(c) for c in integration)

    @property
    def ce_backed(self):
        return False

    def integrate(self, x: RingElement):
        if x.degree != self.dimension:
            return _ZERO
        acc = _ZERO
        for a, b in zip(x.coeffs, self.integration):
            if a and b:
                acc = acc + a * b
        return acc

    def pairing(self, x: RingElement, y: RingElement):
        if x.degree + y.degree != self.dimension:
            raise UsageError(f"pairing degrees {x.degree} and {y.degree} are not "
                             f"complementary in dimension {self.dimension}")
        return self.integrate(x * y)

    def pairing_matrix(self, p: int) -> Matrix:
        q = self.dimension - p
        return Matrix.from_rows([[self.pairing(x, y) for y in self.basis(q)]
                                 for x in self.basis(p)], self.betti_at(q))

    def check_poincare_duality(self):
        for p in range(self.dimension + 1):
            m = self.pairing_matrix(p)
            if m.rows != m.cols or rank(m) != m.rows:
                raise DegeneratePairingError(f"pairing H^{p} x H^{self.dimension - p} is degenerate",
                                             degree=p)

    def to_json(self):
        return {
            "dimension": self.dimension,
            "betti": list(self.betti),
            "basis": [list(ls) for ls in self.labels],
            "products": [
                {"left": [p, i], "right": [q, j], "result": [p + q, l], "coeff": str(c)}
                for p, i, q, j, l, c in self.products_table()
            ],
            "integration": [str(c) for c in self.integration],
        }


class CERing(CohomologyRing):
    """Cohomology of a Chevalley-Eilenberg complex with cochain representatives."""

    def __init__(self, spec: StructureSpec, scale=1):
        require_d_squared(spec)
        if spec.n > max_generators():
            raise UsageError(f"{spec.n} generators exceeds LEFLAB_MAX_DIM={max_generators()}",
                             generators=spec.n)
        self.spec = spec
        n = spec.n
        self.scale = Fraction(scale)
        self._mono = [cochain_basis(spec, k) for k in range(n + 1)]
        self.reps: List[List[Cochain]] = []
        self._coord: List[Factorization] = []
        self._exact_basis: List[tuple] = []
        for k in range(n + 1):
            reps, exact = self._cohomology_degree(k)
            self.reps.append(reps)
            self._exact_basis.append(exact)
            cols = [r.vector(self._mono[k]) for r in reps] + list(exact)
            self._coord.append(Factorization(Matrix.from_columns(cols, len(self._mono[k]))))
        betti = [len(r) for r in self.reps]
        labels = [[r.label() for r in reps] for reps in self.reps]
        top = [self.scale * r.coefficient(tuple(range(1, n + 1))) for r in self.reps[n]]
        super().__init__(n, betti, labels, top)

    @property
    def ce_backed(self):
        return True

    def _cohomology_degree(self, k):
        mono = self._mono[k]
        size = len(mono)
        cycles = rref(differential_matrix(self.spec, k)).kernel_basis if k < self.spec.n \
            else tuple(tuple(_ONE if i == j else _ZERO for j in range(size)) for i in range(size))
        if k > 0:
            exact = rref(differential_matrix(self.spec, k - 1).T).image_basis
        else:
            exact = ()
        cycles = rref(Matrix.from_rows(cycles, size)).image_basis if cycles else ()
        # extend the exact subspace to the cycles, scanning cycles in RREF order
        span = IncrementalSpan(exact)
        reps = [Cochain.from_vector(self.spec.n, k, mono, z) for z in cycles if span.add(z)]
        return reps, tuple(exact)

    def coboundary_basis(self, k):
        return [Cochain.from_vector(self.spec.n, k, self._mono[k], v) for v in self._exact_basis[k]]

    def monomials(self, k):
        return self._mono[k]

    def cycle_basis(self, k) -> List[Cochain]:
        """Basis of closed k-cochains."""
        size = len(self._mono[k])
        if k == self.spec.n:
            vecs = [tuple(_ONE if i == j else _ZERO for j in range(size)) for i in range(size)]
        else:
            vecs = rref(differential_matrix(self.spec, k)).kernel_basis
        return [Cochain.from_vector(self.spec.n, k, self._mono[k], v) for v in vecs]

    def class_of(self, x: Cochain) -> RingElement:
        """Cohomology class of a closed cochain."""
        k = x.degree
        if x.n != self.spec.n:
            raise UsageError("cochain on the wrong number of generators")
        sol = self._coord[k].solve(x.vector(self._mono[k]))
        if sol is None:
            raise UsageError(f"{x.label()} is not closed")
        return RingElement(self, k, tuple(sol[:self.betti[k]]))

    def rep(self, x: RingElement) -> Cochain:
        acc = Cochain.zero(self.spec.n, x.degree)
        for c, r in zip(x.coeffs, self.reps[x.degree]):
            if c:
                acc = acc + r.scale(c)
        return acc

    def is_exact(self, x: Cochain) -> bool:
        return self.class_of(x).is_zero()

    def _basis_product(self, p, i, q, j):
        if p + q > self.spec.n:
            return ()
        w = self.reps[p][i] * self.reps[q][j]
        return self.class_of(w).coeffs

    def spot_check_representatives(self):
        """Perturb each representative by a coboundary and compare products."""
        n = self.spec.n
        for p in range(n + 1):
            exact = self.coboundary_basis(p)
            if not exact or not self.reps[p]:
                continue
            for q in range(n + 1 - p):
                for i, r in enumerate(self.reps[p]):
                    shifted = r + exact[i % len(exact)]
                    for j, s in enumerate(self.reps[q]):
                        if self.class_of(shifted * s).coeffs != self.basis_product(p, i, q, j):
                            raise InternalCheckError(
                                f"product H^{p} x H^{q} depends on the representative")
        return True


def compute_cohomology(spec, normalization=1, spot_check=True) -> CERing:
    """Cohomology ring of the CE complex; ``normalization`` is the integral of e1...en."""
    if isinstance(spec, str):
        spec = parse_structure(spec)
    ring = CERing(spec, normalization)
    if spot_check and spec.n <= 6:
        ring.spot_check_representatives()
    return ring


def torus_ring(r: int) -> CERing:
    return compute_cohomology(StructureSpec(r, ((),) * r), spot_check=False)


class PresentedRing(CohomologyRing):
    """Ring given directly by structure constants (no cochain level)."""

    def __init__(self, dimension, betti, labels, integration, product):
        super().__init__(dimension, betti, labels, integration)
        self._product = product

    def _basis_product(self, p, i, q, j):
        return self._product(p, i, q, j)


def projective_space_ring(n: int) -> PresentedRing:
    """H*(CP^n) = Q[h]/h^(n+1) with h in degree 2 and integral of h^n equal to 1."""
    if n < 1:
        raise UsageError("CP^n needs n >= 1")
    return _truncated_polynomial(n)


def point_ring() -> PresentedRing:
    return _truncated_polynomial(0)


def _truncated_polynomial(n):
    betti = [1 if k % 2 == 0 else 0 for k in range(2 * n + 1)]
    labels = [[("1" if k == 0 else ("h" if k == 2 else f"h^{k // 2}"))] if k % 2 == 0 else []
              for k in range(2 * n + 1)]

    def product(p, i, q, j):
        return (_ONE,) if p + q <= 2 * n else ()

    return PresentedRing(2 * n, betti, labels, [1], product)


# ---------------------------------------------------------------------------
# maps

class RingMap:
    """Degree-preserving linear map; ``matrices[k]`` maps source H^k coords to target H^k."""

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra, matrices: Dict[int, Matrix]):
        self.source = source
        self.target = target
        self.matrices = {}
        for k in source.degrees():
            m = matrices.get(k)
            if m is None:
                m = Matrix.zeros(target.betti_at(k), source.betti_at(k))
            if (m.rows, m.cols) != (target.betti_at(k), source.betti_at(k)):
                raise UsageError(f"degree-{k} matrix has the wrong shape")
            self.matrices[k] = m

    def __call__(self, x: RingElement) -> RingElement:
        if x.ring is not self.source:
            raise UsageError("element not in the source ring")
        if x.degree not in self.matrices:
            return self.target.zero(x.degree)
        return RingElement(self.target, x.degree, self.matrices[x.degree].apply(x.coeffs))

    def check_multiplicative(self):
        if self(self.source.one()) != self.target.one():
            return False
        for p in self.source.degrees():
            for q in self.source.degrees():
                if p + q >= len(self.source.betti):
                    continue
                for x in self.source.basis(p):
                    for y in self.source.basis(q):
                        if self(x * y) != self(x) * self(y):
                            return False
        return True


def frame_bracket_vanishes(spec: StructureSpec, frame) -> bool:
    for a in range(len(frame)):
        for b in range(a + 1, len(frame)):
            X, Y = frame[a], frame[b]
            for i in range(1, spec.n + 1):
                val = _ZERO
                for c, j, k in spec.differentials[i - 1]:
                    val += c * (X[j - 1] * Y[k - 1] - X[k - 1] * Y[j - 1])
                if val:
                    return False
    return True


def pullback_cochain(x: Cochain, frame, r: int) -> Cochain:
    """Restrict an invariant form to the span of ``frame`` (a list of tangent vectors)."""
    images = []
    for j in range(1, x.n + 1):
        images.append(Cochain.from_dict(r, 1, {(a + 1,): frame[a][j - 1] for a in range(r)}))
    acc = Cochain.zero(r, x.degree)
    for m, c in x.terms:
        term = Cochain.one(r).scale(c)
        for j in m:
            term = term * images[j - 1]
            if not term:
                break
        acc = acc + term
    return acc


def restriction_from_subtorus(ambient, frame, sub: Optional[CERing] = None) -> RingMap:
    """Restriction i* from the CE ring of ``ambient`` to the torus spanned by ``frame``.

    ``ambient`` may be a StructureSpec or an already computed CERing.
    """
    ring = ambient if isinstance(ambient, CERing) else compute_cohomology(ambient)
    spec = ring.spec
    frame = [tuple(Fraction(c) for c in v) for v in frame]
    if not frame or any(len(v) != spec.n for v in frame):
        raise UsageError(f"frame vectors must have {spec.n} coordinates")
    r = len(frame)
    if rank(Matrix.from_rows(frame, spec.n)) != r:
        raise NotSubtorusError("frame vectors are linearly dependent")
    if not frame_bracket_vanishes(spec, frame):
        raise NotSubtorusError("frame does not span an abelian subalgebra")
    torus = sub if sub is not None else torus_ring(r)
    if torus.spec.n != r or not torus.spec.is_abelian():
        raise UsageError(f"target must be the rank-{r} torus")
    mats = {}
    for k in ring.degrees():
        cols = []
        for rep in ring.reps[k]:
            img = pullback_cochain(rep, frame, r)
            cols.append(torus.class_of(img).coeffs if k <= r else ())
        mats[k] = Matrix.from_columns(cols, torus.betti_at(k))
    return RingMap(ring, torus, mats)


def ring_map_from_degree2(source: GradedAlgebra, target: GradedAlgebra, image_h: RingElement) -> RingMap:
    """Ring map out of a truncated polynomial ring sending h to ``image_h``."""
    if image_h.ring is not target or image_h.degree != 2:
        raise UsageError("image of h must be a degree-2 class of the target")
    mats = {}
    power = target.one()
    for k in source.degrees():
        if k % 2:
            continue
        if k:
            power = power * image_h
        mats[k] = Matrix.from_columns([power.coeffs], target.betti_at(k)) \
            if source.betti_at(k) else Matrix.zeros(target.betti_at(k), 0)
    return RingMap(source, target, mats)


def point_inclusion(ambient: GradedAlgebra, point: Optional[GradedAlgebra] = None) -> RingMap:
    point = point or point_ring()
    m = Matrix.from_rows([[1]]) if ambient.betti_at(0) == 1 else None
    return RingMap(ambient, point, {0: m})


@dataclass(frozen=True)
class Pushforward:
    """Pairing adjoint ``i_!`` of a restriction map; shifts degree by ``codim``."""

    imap: RingMap
    codim: int
    matrices: Dict[int, Matrix]

    def __call__(self, u: RingElement) -> RingElement:
        X = self.imap.source
        target_deg = u.degree + self.codim
        if u.is_zero() or u.degree not in self.matrices:
            return X.zero(target_deg)
        return RingElement(X, target_deg, self.matrices[u.degree].apply(u.coeffs))

    def adjunction_residual(self):
        """Largest |int_X i_!(u) v - int_M u i*(v)| over basis pairs (0 when exact)."""
        X, M = self.imap.source, self.imap.target
        worst = _ZERO
        for p in M.degrees():
            for u in M.basis(p):
                q = X.dimension - p - self.codim
                for v in X.basis(q):
                    lhs = X.integrate(self(u) * v)
                    rhs = M.integrate(u * self.imap(v))
                    worst = max(worst, abs(lhs - rhs))
        return worst


def pushforward(imap: RingMap, codim: int):
    """Return ``(i_!, t)`` with int_X i_!(u) v = int_M u i*(v) and t = i_!(1)."""
    X, M = imap.source, imap.target
    if not isinstance(X, CohomologyRing) or not isinstance(M, CohomologyRing):
        raise UsageError("pushforward needs rings with integration")
    if codim != X.dimension - M.dimension:
        raise UsageError(f"codimension {codim} != {X.dimension} - {M.dimension}")
    mats = {}
    for p in M.degrees():
        q = p + codim
        r = X.dimension - q
        if M.betti_at(p) == 0:
            continue
        G = X.pairing_matrix(q)
        if G.rows != G.cols or (G.rows and det(G) == 0):
            raise DegeneratePairingError(f"pairing on H^{q} of the ambient is degenerate",
                                         degree=q)
        fac = Factorization(G.T)
        cols = []
        for u in M.basis(p):
            rhs = tuple(M.integrate(u * imap(v)) for v in X.basis(r))
            sol = fac.solve(rhs) if rhs else ()
            if sol is None:
                raise DegeneratePairingError("adjunction system has no solution", degree=q)
            cols.append(sol)
        mats[p] = Matrix.from_columns(cols, X.betti_at(q))
    push = Pushforward(imap, codim, mats)
    return push, push(M.one())


@lru_cache(maxsize=None)
def _cached_ring(structure: str) -> CERing:
    return compute_cohomology(parse_structure(structure))


def ring_for(structure: str) -> CERing:
    """Memoized CE ring for a structure string (rings are immutable)."""
    return _cached_ring(structure)
