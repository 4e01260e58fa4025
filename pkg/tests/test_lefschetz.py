
import pytest
from hypothesis import given, settings, strategies as st

from leflab.cemodel import Cochain, parse_cochain
from leflab.cohomring import compute_cohomology, torus_ring
from leflab.errors import HypothesisError, NotSymplecticError, UsageError
from leflab.exactla import rref
from leflab.lefschetz import full_report, lefschetz_map, primitive_decomposition


def standard_form(ring, n):
    text = "+".join(f"{2 * i - 1}{2 * i}" for i in range(1, n + 1))
    return ring.class_of(parse_cochain(text, 2 * n))


def test_two_torus_identity():
    t2 = torus_ring(2)
    m = lefschetz_map(t2, standard_form(t2, 1), 1)
    assert (m.rows, m.cols) == (2, 2)
    assert rref(m).rank == 2


def test_hh_kernels(hh, hh_omega):
    rep = full_report(hh, hh_omega)
    assert not rep.lefschetz
    assert rep.level(2).kernel_labels == ["e25"]
    assert rep.level(1).kernel_labels == ["e2", "e5"]
    assert rep.kernel_dims() == {3: 0, 2: 1, 1: 2, 0: 0}


def test_hh_omega_cubed(hh):
    w = parse_cochain("14+23+56", 6)
    assert w * w * w == Cochain.monomial(6, range(1, 7), 6)


@pytest.mark.parametrize("r", [2, 4, 6, 8])
def test_tori_are_lefschetz(r):
    t = torus_ring(r)
    assert full_report(t, standard_form(t, r // 2)).lefschetz


def test_heisenberg_times_circle_report_consistent():
    kt = compute_cohomology("(0,0,12,0)")
    rep = full_report(kt, kt.class_of(parse_cochain("13+24", 4)))
    for lv in rep.levels:
        assert lv.rank + lv.kernel_dim == lv.source_dim
        assert (lv.kernel_dim == 0) == lv.surjective


def test_not_symplectic():
    t4 = torus_ring(4)
    with pytest.raises(NotSymplecticError):
        full_report(t4, t4.class_of(parse_cochain("12", 4)))


def test_level_out_of_range(hh, hh_omega):
    with pytest.raises(UsageError):
        lefschetz_map(hh, hh_omega, 4)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-7, max_value=7, max_denominator=5).filter(lambda c: c != 0))
def test_scaling_omega_keeps_kernels(c):
    from leflab.cohomring import ring_for
    hh = ring_for("(0,0,12,0,0,45)")
    w = hh.class_of(parse_cochain("14+23+56", 6))
    a, b = full_report(hh, w), full_report(hh, w.scale(c))
    for la, lb in zip(a.levels, b.levels):
        assert la.kernel_basis == lb.kernel_basis


@pytest.mark.parametrize("r", [2, 4, 6, 8])
def test_primitive_dimensions_on_tori(r):
    t = torus_ring(r)
    d = r // 2
    dec = primitive_decomposition(t, standard_form(t, d))
    for i, dim in dec.dims().items():
        if i <= d:
            assert dim == max(0, t.betti_at(i) - t.betti_at(i - 2))
        else:
            assert dim == 0
        assert dim + len(dec.sigma_image[i]) == t.betti_at(i)


def test_primitive_t4_degree_two():
    t4 = torus_ring(4)
    dec = primitive_decomposition(t4, standard_form(t4, 2))
    assert dec.dims()[2] == 5


def test_primitive_t2():
    t2 = torus_ring(2)
    dec = primitive_decomposition(t2, standard_form(t2, 1))
    assert dec.dims() == {0: 1, 1: 2, 2: 0}


def test_split_reassembles():
    t4 = torus_ring(4)
    sigma = standard_form(t4, 2)
    dec = primitive_decomposition(t4, sigma)
    for x in t4.basis(2) + t4.basis(3):
        p, w = dec.split(x)
        assert p + sigma * w == x
        assert (sigma ** (2 - x.degree + 1) * p).is_zero() if x.degree <= 2 else p.is_zero()


def test_primitive_refused_without_lefschetz(hh, hh_omega):
    with pytest.raises(HypothesisError) as exc:
        primitive_decomposition(hh, hh_omega)
    assert exc.value.as_dict()["hypothesis"] == "lefschetz"
