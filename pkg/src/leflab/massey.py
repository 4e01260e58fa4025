"""Triple Massey products at cochain level and their survival in blow-ups.

For closed x, y, z with [x][y] = [y][z] = 0 we solve

    d a13 = xbar ^ y,    d a24 = ybar ^ z,       (abar = (-1)^|a| a)

and take the class of ``xbar ^ a24 + a13bar ^ z`` modulo the degree-wise
ideal ``[x] H + [z] H``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .cemodel import Cochain, differential, differential_matrix
from .cohomring import CERing, GradedAlgebra, RingElement
from .errors import HypothesisError, MasseyUndefinedError, UsageError
from .exactla import Factorization, canonical_basis, span_contains


@dataclass(frozen=True)
class MasseyCertificate:
    a13: Cochain
    a24: Cochain
    representative: Cochain

    def verify(self, ring: CERing, x: Cochain, y: Cochain, z: Cochain) -> bool:
        spec = ring.spec
        return (differential(spec, self.a13) == wedge_bar(x, y)
                and differential(spec, self.a24) == wedge_bar(y, z)
                and not differential(spec, self.representative))


@dataclass(frozen=True)
class MasseyCoset:
    representative: RingElement
    indeterminacy: tuple
    inputs: tuple

    @property
    def degree(self):
        return self.representative.degree

    def contains(self, element: RingElement) -> bool:
        diff = element - self.representative
        return ideal_contains(self.indeterminacy, diff)

    def same_coset(self, other: "MasseyCoset") -> bool:
        return (self.degree == other.degree
                and self.contains(other.representative)
                and set(self.indeterminacy) == set(other.indeterminacy))

    def label(self):
        x, y, z = (v.label() for v in self.inputs)
        return f"<{x}, {y}, {z}>"


def wedge_bar(a: Cochain, b: Cochain) -> Cochain:
    return a.bar() * b


def ideal_contains(basis, element: RingElement) -> bool:
    return span_contains(list(basis), element.coeffs, len(element.coeffs))


def ideal_in_degree(ring: GradedAlgebra, generators: Sequence[RingElement], degree: int) -> tuple:
    """RREF basis of the degree-``degree`` part of the ideal spanned by ``generators``."""
    size = ring.betti_at(degree)
    vecs = []
    for g in generators:
        other = degree - g.degree
        if other < 0 or g.is_zero():
            continue
        for b in ring.basis(other):
            vecs.append((g * b).coeffs)
    return canonical_basis([v for v in vecs if any(v)], size)


def _exact_solver(ring: CERing, degree: int) -> Factorization:
    cache = ring.__dict__.setdefault("_massey_solvers", {})
    fac = cache.get(degree)
    if fac is None:
        fac = cache[degree] = Factorization(differential_matrix(ring.spec, degree))
    return fac


def _primitive_of(ring: CERing, target: Cochain) -> Optional[Cochain]:
    """Pivot-canonical a with d a = target, or None."""
    k = target.degree - 1
    n = ring.spec.n
    if k < 0:
        return None if target else Cochain.zero(n, 0)
    sol = _exact_solver(ring, k).solve(target.vector(ring.monomials(target.degree)))
    if sol is None:
        return None
    return Cochain.from_vector(n, k, ring.monomials(k), sol)


def triple_product(ring: CERing, x: RingElement, y: RingElement, z: RingElement,
                   shift13: Optional[Cochain] = None, shift24: Optional[Cochain] = None):
    """Return ``(MasseyCoset, MasseyCertificate)`` for <x, y, z>.

    ``shift13``/``shift24`` are closed cochains added to the canonical witnesses.
    """
    if not getattr(ring, "ce_backed", False):
        raise UsageError("Massey products need a CE-backed ring")
    for v in (x, y, z):
        if v.ring is not ring:
            raise UsageError("inputs must belong to the ring")
    if not (x * y).is_zero():
        raise MasseyUndefinedError("[x][y] != 0", which="xy")
    if not (y * z).is_zero():
        raise MasseyUndefinedError("[y][z] != 0", which="yz")
    xr, yr, zr = ring.rep(x), ring.rep(y), ring.rep(z)
    a13 = _primitive_of(ring, wedge_bar(xr, yr))
    a24 = _primitive_of(ring, wedge_bar(yr, zr))
    if a13 is None or a24 is None:
        raise MasseyUndefinedError("product not exact at cochain level",
                                   which="xy" if a13 is None else "yz")
    spec = ring.spec
    for shift, name in ((shift13, "shift13"), (shift24, "shift24")):
        if shift is not None and differential(spec, shift):
            raise UsageError(f"{name} is not closed")
    if shift13 is not None:
        a13 = a13 + shift13
    if shift24 is not None:
        a24 = a24 + shift24
    rep = xr.bar() * a24 + a13.bar() * zr
    cls = ring.class_of(rep)
    indet = ideal_in_degree(ring, [x, z], cls.degree)
    return MasseyCoset(cls, indet, (x, y, z)), MasseyCertificate(a13, a24, rep)


def is_trivial(coset: MasseyCoset) -> bool:
    return ideal_contains(coset.indeterminacy, coset.representative)


def search_triple_products(ring: CERing, degrees) -> List[MasseyCoset]:
    """Nontrivial products over ordered basis triples of the given degrees."""
    p, q, r = degrees
    found = []
    for x in ring.basis(p):
        for y in ring.basis(q):
            if not (x * y).is_zero():
                continue
            for z in ring.basis(r):
                if not (y * z).is_zero():
                    continue
                coset, _ = triple_product(ring, x, y, z)
                if not is_trivial(coset):
                    found.append(coset)
    return found


def survives_blowup_ambient(blowring, coset: MasseyCoset) -> bool:
    """Is f*<v1,v2,v3> still outside the ideal (f*v1, f*v3) in the blow-up?"""
    x, _, z = coset.inputs
    f = blowring.pullback
    rep = f(coset.representative)
    ideal = ideal_in_degree(blowring, [f(x), f(z)], rep.degree)
    return not ideal_contains(ideal, rep)


def survives_blowup_submanifold(blowring, coset: MasseyCoset, k: int) -> bool:
    """Is a^3 <v1,v2,v3> outside the ideal (a v1, a v3) in the blow-up?"""
    if k <= 3:
        raise HypothesisError(f"survival from the submanifold needs k > 3, got k = {k}",
                              hypothesis="k>3", k=k)
    if k != blowring.k:
        raise UsageError(f"k = {k} but the blow-up has k = {blowring.k}")
    x, _, z = coset.inputs
    lift = blowring.a_power_times
    rep = lift(3, coset.representative)
    ideal = ideal_in_degree(blowring, [lift(1, x), lift(1, z)], rep.degree)
    return not ideal_contains(ideal, rep)
