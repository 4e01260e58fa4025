"""Lefschetz maps, level-by-level reports and primitive decompositions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from .cohomring import GradedAlgebra, RingElement
from .errors import HypothesisError, InternalCheckError, NotSymplecticError, UsageError
from .exactla import Matrix, canonical_basis, rank, rref, solve


@dataclass(frozen=True)
class SymplecticClass:
    ring: GradedAlgebra
    omega: RingElement
    n: int


def symplectic_class(ring: GradedAlgebra, omega: RingElement) -> SymplecticClass:
    """Validate ``omega`` cohomologically: degree 2 with omega^n != 0."""
    if omega.ring is not ring:
        raise UsageError("omega is not an element of this ring")
    if omega.degree != 2:
        raise UsageError(f"omega has degree {omega.degree}, expected 2")
    if ring.dimension % 2:
        raise NotSymplecticError(f"ring of odd dimension {ring.dimension}")
    n = ring.dimension // 2
    if (omega ** n).is_zero():
        raise NotSymplecticError(f"omega^{n} = 0 in H^{2 * n}")
    return SymplecticClass(ring, omega, n)


def _as_symplectic(ring, omega):
    if isinstance(omega, SymplecticClass):
        return omega
    return symplectic_class(ring, omega)


def lefschetz_map(ring: GradedAlgebra, omega, k: int) -> Matrix:
    """Matrix of multiplication by omega^(n-k) from H^k to H^(2n-k)."""
    sc = _as_symplectic(ring, omega)
    if not 0 <= k <= sc.n:
        raise UsageError(f"level {k} outside 0..{sc.n}")
    return ring.multiplication_matrix(sc.omega ** (sc.n - k), k)


@dataclass
class LevelReport:
    k: int
    source_dim: int
    target_dim: int
    rank: int
    kernel_basis: tuple
    kernel_labels: List[str] = field(default_factory=list)

    @property
    def kernel_dim(self):
        return len(self.kernel_basis)

    @property
    def surjective(self):
        return self.rank == self.target_dim

    def to_json(self):
        return {
            "k": self.k,
            "kernel_dim": self.kernel_dim,
            "kernel_basis": [[str(c) for c in v] for v in self.kernel_basis],
            "kernel_labels": list(self.kernel_labels),
            "rank": self.rank,
            "surjective": self.surjective,
        }


@dataclass
class LefschetzReport:
    n: int
    levels: List[LevelReport]

    @property
    def lefschetz(self):
        return all(lv.surjective for lv in self.levels)

    def level(self, k) -> LevelReport:
        return next(lv for lv in self.levels if lv.k == k)

    def kernel_dims(self):
        return {lv.k: lv.kernel_dim for lv in self.levels}

    def to_json(self):
        return {"levels": [lv.to_json() for lv in self.levels], "lefschetz": self.lefschetz}


def level_report(ring: GradedAlgebra, sc: SymplecticClass, k: int) -> LevelReport:
    m = lefschetz_map(ring, sc, k)
    red = rref(m)
    kernel = canonical_basis(list(red.kernel_basis), m.cols)
    labels = [ring.element_label(RingElement(ring, k, v)) for v in kernel]
    lv = LevelReport(k, m.cols, m.rows, red.rank, kernel, labels)
    if lv.rank + lv.kernel_dim != lv.source_dim:
        raise InternalCheckError(f"rank-nullity fails at level {k}")
    if lv.source_dim == lv.target_dim and lv.surjective != (lv.kernel_dim == 0):
        raise InternalCheckError(f"surjectivity and injectivity disagree at level {k}")
    return lv


def full_report(ring: GradedAlgebra, omega) -> LefschetzReport:
    sc = _as_symplectic(ring, omega)
    return LefschetzReport(sc.n, [level_report(ring, sc, k) for k in range(sc.n, -1, -1)])


@dataclass
class PrimitiveDecomposition:
    """H^i = P_i + sigma H^(i-2), with P_i = ker sigma^(d-i+1) for i <= d."""

    ring: GradedAlgebra
    sigma: RingElement
    d: int
    primitive: dict
    sigma_image: dict

    def dims(self):
        return {i: len(b) for i, b in self.primitive.items()}

    def split(self, x: RingElement):
        """Write ``x = p + sigma * w`` with ``p`` primitive; returns ``(p, w)``."""
        i = x.degree
        prim = self.primitive[i]
        lower = self.ring.basis(i - 2) if i >= 2 else []
        cols = list(prim) + [(self.sigma * b).coeffs for b in lower]
        sol = solve(Matrix.from_columns(cols, self.ring.betti_at(i)), x.coeffs)
        if sol is None:
            raise InternalCheckError(f"H^{i} is not P_{i} + sigma H^{i - 2}")
        np_ = len(prim)
        p = self.ring.zero(i)
        for c, v in zip(sol[:np_], prim):
            p = p + RingElement(self.ring, i, v).scale(c)
        w = RingElement(self.ring, i - 2, tuple(sol[np_:])) if i >= 2 else None
        return p, w


def primitive_decomposition(ring: GradedAlgebra, sigma) -> PrimitiveDecomposition:
    sc = _as_symplectic(ring, sigma)
    if not full_report(ring, sc).lefschetz:
        raise HypothesisError("primitive splitting needs the Lefschetz property",
                              hypothesis="lefschetz")
    d = sc.n
    primitive, image = {}, {}
    for i in range(2 * d + 1):
        size = ring.betti_at(i)
        if i <= d:
            m = ring.multiplication_matrix(sc.omega ** (d - i + 1), i)
            prim = canonical_basis(list(rref(m).kernel_basis), size)
        else:
            prim = ()
        img = canonical_basis([(sc.omega * b).coeffs for b in ring.basis(i - 2)], size) \
            if i >= 2 else ()
        if len(prim) + len(img) != size:
            raise InternalCheckError(f"dim P_{i} + dim sigma H^{i - 2} != b_{i}")
        if size and rank(Matrix.from_rows(list(prim) + list(img), size)) != size:
            raise InternalCheckError(f"P_{i} meets sigma H^{i - 2}")
        primitive[i], image[i] = prim, img
    return PrimitiveDecomposition(ring, sc.omega, d, primitive, image)
