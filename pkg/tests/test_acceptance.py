"""Acceptance criteria 1-8. Each prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from leflab.blowup import (build_blowup, check_predictions, lefschetz_report_generic,
                           make_blowup_input, predict_surface_blowup, toeplitz_det,
                           toeplitz_recurrence_factor)
from leflab.cemodel import (Cochain, check_d_squared, cochain_basis, differential, parse_cochain,
                            parse_structure, wedge)
from leflab.cohomring import (compute_cohomology, point_inclusion, restriction_from_subtorus,
                              torus_ring)
from leflab.exactla import EpsScalar, Matrix, halving_schedule, rank_at, rref
from leflab.lefschetz import full_report
from leflab.massey import is_trivial, survives_blowup_ambient, triple_product

FRAME = [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]]


def _hh():
    hh = compute_cohomology("(0,0,12,0,0,45)")
    omega = hh.class_of(parse_cochain("14+23+56", 6))
    return hh, omega


def _torus_blowup():
    hh, omega = _hh()
    imap = restriction_from_subtorus(hh, FRAME)
    data = make_blowup_input(hh, imap.target, imap)
    return hh, omega, imap, data, build_blowup(data)


def criterion_1():
    h = compute_cohomology("(0,0,12)")
    ok = (h.betti == (1, 2, 2, 1) and h.labels[1] == ("e1", "e2")
          and h.labels[2] == ("e13", "e23"))
    return ok, f"betti {h.betti}, H1 {h.labels[1]}, H2 {h.labels[2]}"


def criterion_2():
    h = compute_cohomology("(0,0,12)")
    e1, e2 = (h.class_of(Cochain.generator(3, i)) for i in (1, 2))
    coset, _ = triple_product(h, e1, e2, e1)
    ok = (coset.representative == h.class_of(Cochain.monomial(3, (1, 3), -2))
          and coset.indeterminacy == () and not is_trivial(coset))
    rng = random.Random(2024)
    closed = h.cycle_basis(1)
    for _ in range(100):
        s13 = sum((c.scale(Fraction(rng.randint(-20, 20), rng.randint(1, 5))) for c in closed),
                  Cochain.zero(3, 1))
        s24 = sum((c.scale(Fraction(rng.randint(-20, 20), rng.randint(1, 5))) for c in closed),
                  Cochain.zero(3, 1))
        other, _ = triple_product(h, e1, e2, e1, s13, s24)
        ok = ok and not is_trivial(other) and coset.same_coset(other)
    return ok, f"<e1,e2,e1> = [{coset.representative.label()}], indeterminacy {list(coset.indeterminacy)}"


def criterion_3():
    hh, omega = _hh()
    w = parse_cochain("14+23+56", 6)
    cube = wedge(wedge(w, w), w)
    rep = full_report(hh, omega)
    k2, k1 = rep.level(2).kernel_labels, rep.level(1).kernel_labels
    ok = cube == Cochain.monomial(6, range(1, 7), 6) and k2 == ["e25"] and k1 == ["e2", "e5"]
    return ok, f"omega^3 = {cube.label()}, ker(omega) on H2 {k2}, ker(omega^2) on H1 {k1}"


def criterion_4():
    hh, omega, imap, data, ring = _torus_blowup()
    amb = full_report(hh, omega).kernel_dims()
    gen = lefschetz_report_generic(ring, omega)
    dims = gen.kernel_dims()
    stable = all(rank_at(ring.multiplication_matrix(gen.omega_tilde ** (3 - s.level), s.level),
                         gen.admissible_eps) == s.generic_rank for s in gen.stabilization)
    preds = predict_surface_blowup(hh, omega, imap.target, imap, data.thom)
    consistent = all(good for _, _, good in check_predictions(preds, gen))
    ok = (data.k == 2 and gen.lefschetz and dims[2] == 0 and dims[1] == 0
          and amb[2] - dims[2] == 1 and amb[1] - dims[1] == 2 and stable and consistent)
    return ok, (f"kernels {dims} (ambient {amb}), Lefschetz={gen.lefschetz}, "
                f"stable at eps={gen.admissible_eps}")


def criterion_5():
    hh, omega, imap, data, ring = _torus_blowup()
    e1, e2 = (hh.class_of(Cochain.generator(6, i)) for i in (1, 2))
    coset, _ = triple_product(hh, e1, e2, e1)
    survives = survives_blowup_ambient(ring, coset)
    return (not is_trivial(coset)) and survives, f"f*<e1,e2,e1> nontrivial in blow-up: {survives}"


def criterion_6():
    t6 = torus_ring(6)
    omega = t6.class_of(parse_cochain("12+34+56", 6))
    imap = point_inclusion(t6)
    ring = build_blowup(make_blowup_input(t6, imap.target, imap))
    before = full_report(t6, omega).kernel_dims()
    after = lefschetz_report_generic(ring, omega).kernel_dims()
    ok = all(before[i] == after[i] == 0 for i in range(1, 4))
    return ok, f"kernels before {before}, after {after}"


def criterion_7():
    zero, rec = 0, 0
    for n in range(13):
        for p in range(7):
            for k in range(n + 1):
                d = toeplitz_det(n, p, k)
                if comb(n, k) and d == 0:
                    zero += 1
                if toeplitz_det(n + 1, p, k) != toeplitz_recurrence_factor(n, p, k) * d:
                    rec += 1
    return zero == 0 and rec == 0, f"{zero} vanishing determinants, {rec} recurrence failures"


def _prop_graded_commutativity():
    n = 6
    for p in range(n + 1):
        for q in range(n + 1 - p):
            for a in cochain_basis(n, p):
                for b in cochain_basis(n, q):
                    x, y = Cochain.monomial(n, a), Cochain.monomial(n, b)
                    if wedge(x, y) != wedge(y, x).scale((-1) ** (p * q)):
                        return False
    return True


def _prop_leibniz():
    spec = parse_structure("(0,0,12,0,0,45)")
    for p in range(4):
        for q in range(3):
            for a in cochain_basis(6, p):
                for b in cochain_basis(6, q)[:6]:
                    x, y = Cochain.monomial(6, a), Cochain.monomial(6, b)
                    lhs = differential(spec, wedge(x, y))
                    rhs = (wedge(differential(spec, x), y)
                           + wedge(x, differential(spec, y)).scale((-1) ** p))
                    if lhs != rhs:
                        return False
    return True


def _prop_d_squared():
    bad = check_d_squared(parse_structure("(0,0,12,34)"))
    return bad is not None and bad.witness == Cochain.monomial(4, (1, 2, 4))


def _prop_poincare():
    for s in ("(0,0,12)", "(0,0,12,0,0,45)", "(0,0,0,0,0,0)", "(0,0,12,0)"):
        compute_cohomology(s).check_poincare_duality()
    return True


def _prop_betti_and_confluence():
    hh, omega, imap, data, ring = _torus_blowup()
    t6 = torus_ring(6)
    pt = point_inclusion(t6)
    for r in (ring, build_blowup(make_blowup_input(t6, pt.target, pt))):
        d = r.input
        for m in r.degrees():
            if r.betti_at(m) != d.ambient.betti_at(m) + sum(d.sub.betti_at(m - 2 * j)
                                                            for j in range(1, d.k)):
                return False
        one = r.M.one()
        ak = r.a_power_times(r.k, one)
        if not (r.a() * ak == ak * r.a() == r.a_power_times(r.k + 1, one) and r.a() ** r.k == ak):
            return False
    return True


def _prop_massey_invariance():
    hh, _ = _hh()
    e1, e2 = (hh.class_of(Cochain.generator(6, i)) for i in (1, 2))
    base, _ = triple_product(hh, e1, e2, e1)
    rng = random.Random(8)
    closed = hh.cycle_basis(1)
    for _ in range(100):
        s13 = sum((c.scale(rng.randint(-5, 5)) for c in closed), Cochain.zero(6, 1))
        s24 = sum((c.scale(rng.randint(-5, 5)) for c in closed), Cochain.zero(6, 1))
        other, _ = triple_product(hh, e1, e2, e1, s13, s24)
        if not base.same_coset(other) or is_trivial(other):
            return False
    return True


def _prop_generic_rank():
    rng = random.Random(4)
    for _ in range(40):
        size = rng.randint(1, 4)
        m = Matrix.from_rows([[EpsScalar.poly([rng.randint(-2, 2) for _ in range(3)])
                               for _ in range(size)] for _ in range(size)])
        generic = rref(m).rank
        samples = [rank_at(m, e) for e in halving_schedule()]
        if samples[-1] != generic or max(samples) != generic:
            return False
    return True


def criterion_8():
    props = {
        "graded-commutativity": _prop_graded_commutativity,
        "leibniz": _prop_leibniz,
        "d2-rejection": _prop_d_squared,
        "poincare": _prop_poincare,
        "betti-additivity+confluence": _prop_betti_and_confluence,
        "massey-coset-invariance": _prop_massey_invariance,
        "generic-rank-oracle": _prop_generic_rank,
    }
    failed = [name for name, fn in props.items() if not fn()]
    return not failed, f"{len(props) - len(failed)}/{len(props)} property suites" + (
        f", failed: {failed}" if failed else "")


CRITERIA = [
    ("1 Heisenberg cohomology", criterion_1),
    ("2 Heisenberg Massey product", criterion_2),
    ("3 HxH symplectic data", criterion_3),
    ("4 Torus blow-up Lefschetz", criterion_4),
    ("5 Massey survival", criterion_5),
    ("6 Point blow-up", criterion_6),
    ("7 Toeplitz determinants", criterion_7),
    ("8 Property suites", criterion_8),
]


def _line(name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}"


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn):
    ok, detail = fn()
    print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    start = time.time()
    failures = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        failures += not ok
        print(_line(name, ok, detail))
    print(f"{len(CRITERIA) - failures}/{len(CRITERIA)} criteria passed in {time.time() - start:.1f}s")
    sys.exit(1 if failures else 0)
