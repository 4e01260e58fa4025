"""Bundled end-to-end checks behind the ``verify-paper`` subcommand.

Each check takes the input table (structure strings, symplectic form, frame)
so that a corrupted entry can be injected from the command line.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List

from .blowup import (build_blowup, lefschetz_report_generic, make_blowup_input,
                     predict_surface_blowup, toeplitz_det, toeplitz_recurrence_factor)
from .cemodel import (Cochain, check_d_squared, cochain_basis, differential, parse_cochain,
                      parse_structure, wedge)
from .cohomring import (compute_cohomology, point_inclusion, restriction_from_subtorus)
from .errors import LeflabError
from .exactla import EpsScalar, Matrix, halving_schedule, rank_at, rref
from .lefschetz import full_report
from .massey import is_trivial, survives_blowup_ambient, triple_product

DEFAULT_INPUTS = {
    "heisenberg": "(0,0,12)",
    "hh": "(0,0,12,0,0,45)",
    "t6": "(0,0,0,0,0,0)",
    "omega": "14+23+56",
    "torus_omega": "12+34+56",
    "frame": "1,1,1,0,0,0;0,0,0,1,1,1",
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _frame(text):
    return [[Fraction(c) for c in row.split(",")] for row in text.split(";")]


def _hh_setup(inp):
    hh = compute_cohomology(inp["hh"])
    omega = hh.class_of(parse_cochain(inp["omega"], hh.spec.n))
    imap = restriction_from_subtorus(hh, _frame(inp["frame"]))
    data = make_blowup_input(hh, imap.target, imap)
    return hh, omega, imap, data, build_blowup(data)


def check_heisenberg_cohomology(inp):
    h = compute_cohomology(inp["heisenberg"])
    ok = h.betti == (1, 2, 2, 1) and h.labels[1] == ("e1", "e2") and h.labels[2] == ("e13", "e23")
    return ok, f"betti {h.betti}, H1 {list(h.labels[1])}, H2 {list(h.labels[2])}"


def check_heisenberg_massey(inp):
    h = compute_cohomology(inp["heisenberg"])
    n = h.spec.n
    e1 = h.class_of(Cochain.generator(n, 1))
    e2 = h.class_of(Cochain.generator(n, 2))
    coset, _ = triple_product(h, e1, e2, e1)
    expected = h.class_of(Cochain.monomial(n, (1, 3), -2))
    ok = coset.representative == expected and not coset.indeterminacy and not is_trivial(coset)
    rng = random.Random(0)
    closed = h.cycle_basis(1)
    for _ in range(100):
        s13 = sum((c.scale(rng.randint(-5, 5)) for c in closed), Cochain.zero(n, 1))
        s24 = sum((c.scale(rng.randint(-5, 5)) for c in closed), Cochain.zero(n, 1))
        other, _ = triple_product(h, e1, e2, e1, s13, s24)
        ok &= (not is_trivial(other)) and coset.same_coset(other)
    return ok, f"<e1,e2,e1> = [{coset.representative.label()}], indeterminacy dim {len(coset.indeterminacy)}"


def check_hh_symplectic(inp):
    hh = compute_cohomology(inp["hh"])
    n = hh.spec.n
    w = parse_cochain(inp["omega"], n)
    cube = wedge(wedge(w, w), w)
    rep = full_report(hh, hh.class_of(w))
    k2, k1 = rep.level(2).kernel_labels, rep.level(1).kernel_labels
    ok = cube == Cochain.monomial(n, range(1, 7), 6) and k2 == ["e25"] and k1 == ["e2", "e5"]
    return ok, f"omega^3 = {cube.label()}, ker level 2 {k2}, ker level 1 {k1}"


def check_torus_blowup(inp):
    hh, omega, imap, data, ring = _hh_setup(inp)
    amb = full_report(hh, omega).kernel_dims()
    gen = lefschetz_report_generic(ring, omega)
    dims = gen.kernel_dims()
    preds = predict_surface_blowup(hh, omega, imap.target, imap, data.thom)
    consistent = all(p.holds(dims[p.level]) for p in preds)
    ok = (gen.lefschetz and dims[2] == 0 and dims[1] == 0 and amb[2] - dims[2] == 1
          and amb[1] - dims[1] == 2 and consistent)
    return ok, (f"blow-up kernels {dims} vs ambient {amb}, lefschetz={gen.lefschetz}, "
                f"eps={gen.admissible_eps}")


def check_massey_survival(inp):
    hh, omega, imap, data, ring = _hh_setup(inp)
    n = hh.spec.n
    e1 = hh.class_of(Cochain.generator(n, 1))
    e2 = hh.class_of(Cochain.generator(n, 2))
    coset, _ = triple_product(hh, e1, e2, e1)
    survives = survives_blowup_ambient(ring, coset)
    return (not is_trivial(coset)) and survives, f"<e1,e2,e1> survives in the blow-up: {survives}"


def check_point_blowup(inp):
    t6 = compute_cohomology(inp["t6"])
    omega = t6.class_of(parse_cochain(inp["torus_omega"], t6.spec.n))
    imap = point_inclusion(t6)
    ring = build_blowup(make_blowup_input(t6, imap.target, imap))
    before = full_report(t6, omega).kernel_dims()
    after = lefschetz_report_generic(ring, omega).kernel_dims()
    ok = all(after[i] == before[i] == 0 for i in range(1, 4))
    return ok, f"kernels before {before}, after {after}"


def check_toeplitz(inp):
    bad = []
    for n in range(13):
        for p in range(7):
            for k in range(n + 1):
                d = toeplitz_det(n, p, k)
                if comb(n, k) and not d:
                    bad.append(("zero", n, p, k))
                if toeplitz_det(n + 1, p, k) != toeplitz_recurrence_factor(n, p, k) * d:
                    bad.append(("recurrence", n, p, k))
    return not bad, f"{len(bad)} failures over n<=12, p<=6, k<=n" + (f": {bad[:3]}" if bad else "")


# -- property checks ---------------------------------------------------------

def _random_cochain(rng, n, degree):
    return Cochain.from_dict(n, degree, {m: rng.randint(-3, 3) for m in cochain_basis(n, degree)})


def check_graded_commutativity(inp):
    spec = parse_structure(inp["hh"])
    n = spec.n
    for p in range(n + 1):
        for q in range(n + 1 - p):
            for a in cochain_basis(n, p):
                for b in cochain_basis(n, q):
                    x, y = Cochain.monomial(n, a), Cochain.monomial(n, b)
                    if wedge(x, y) != wedge(y, x).scale((-1) ** (p * q)):
                        return False, f"fails for {a}, {b}"
    return True, f"exhaustive on {n} generators"


def check_leibniz(inp):
    spec = parse_structure(inp["hh"])
    rng = random.Random(1)
    for _ in range(50):
        p, q = rng.randint(0, 3), rng.randint(0, 2)
        x, y = _random_cochain(rng, spec.n, p), _random_cochain(rng, spec.n, q)
        lhs = differential(spec, wedge(x, y))
        rhs = wedge(differential(spec, x), y) + wedge(x, differential(spec, y)).scale((-1) ** p)
        if lhs != rhs and (lhs or rhs):
            return False, f"fails in degrees {p}, {q}"
    return True, "50 random pairs"


def check_d_squared_rejection(inp):
    bad = check_d_squared(parse_structure("(0,0,12,34)"))
    ok = bad is not None and bad.generator == 4 and bad.witness == Cochain.monomial(4, (1, 2, 4))
    return ok, f"(0,0,12,34): {bad}"


def check_poincare(inp):
    for key in ("heisenberg", "hh", "t6"):
        compute_cohomology(inp[key]).check_poincare_duality()
    compute_cohomology("(0,0,12,0)").check_poincare_duality()
    return True, "nondegenerate for all bundled structures"


def check_reduction_confluence(inp):
    hh, omega, imap, data, ring = _hh_setup(inp)
    a = ring.a()
    k = ring.k
    ak = ring.a_power_times(k, ring.M.one())
    direct = ring.a_power_times(k + 1, ring.M.one())
    ok = a * ak == ak * a == direct and a ** k == ak
    return ok, f"a^{k + 1} = {direct.label()}"


def check_generic_rank(inp):
    rng = random.Random(2)
    for _ in range(30):
        rows = [[EpsScalar.poly([rng.randint(-2, 2) for _ in range(3)]) for _ in range(3)]
                for _ in range(3)]
        m = Matrix.from_rows(rows)
        generic = rref(m).rank
        samples = [rank_at(m, e) for e in halving_schedule()]
        if max(samples) != generic or samples[-1] != generic:
            return False, f"mismatch {generic} vs {samples}"
    return True, "30 random 3x3 matrices over Q(eps)"


CHECKS: List[tuple] = [
    ("heisenberg-cohomology", check_heisenberg_cohomology),
    ("heisenberg-massey", check_heisenberg_massey),
    ("hh-symplectic", check_hh_symplectic),
    ("torus-blowup-lefschetz", check_torus_blowup),
    ("massey-survival", check_massey_survival),
    ("point-blowup", check_point_blowup),
    ("toeplitz", check_toeplitz),
    ("property-graded-commutativity", check_graded_commutativity),
    ("property-leibniz", check_leibniz),
    ("property-d-squared", check_d_squared_rejection),
    ("property-poincare", check_poincare),
    ("property-reduction-confluence", check_reduction_confluence),
    ("property-generic-rank", check_generic_rank),
]


def run_reproduction(name_filter=None, overrides: Dict[str, str] = None) -> List[CheckResult]:
    inp = dict(DEFAULT_INPUTS)
    inp.update(overrides or {})
    results = []
    for name, fn in CHECKS:
        if name_filter and name_filter not in name:
            continue
        try:
            ok, detail = fn(inp)
        except LeflabError as exc:
            ok, detail = False, f"{exc.reason}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
