from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from leflab.cemodel import (Cochain, check_d_squared, cochain_basis, differential, differential_matrix,
                            format_structure, parse_cochain, parse_structure,
                            require_d_squared, wedge)
from leflab.errors import DSquaredError, StructureParseError

BUNDLED = ["(0,0,12)", "(0,0,12,0,0,45)", "(0,0,0,0,0,0)", "(0,0,12,0)", "(0,0,12,13)",
           "(0,0,12,13,14)", "(0,0,0,12,13,23)"]


def cochains(n, degree):
    basis = cochain_basis(n, degree)
    return st.lists(st.integers(-3, 3), min_size=len(basis), max_size=len(basis)).map(
        lambda cs: Cochain.from_dict(n, degree, dict(zip(basis, cs))))


def test_parse_heisenberg():
    spec = parse_structure("(0,0,12)")
    assert spec.n == 3
    assert differential(spec, Cochain.generator(3, 3)) == Cochain.monomial(3, (1, 2))


def test_parse_signed_and_scaled():
    spec = parse_structure("(0,0,0,12,-2*13+23)")
    d5 = differential(spec, Cochain.generator(5, 5))
    assert d5 == Cochain.monomial(5, (1, 3), -2) + Cochain.monomial(5, (2, 3))


def test_parse_dotted_indices():
    spec = parse_structure("(0,0,0,0,0,0,0,0,0,1.2)")
    assert spec.n == 10
    assert differential(spec, Cochain.generator(10, 10)) == Cochain.monomial(10, (1, 2))


@pytest.mark.parametrize("bad", ["(0,0,21)", "(0,0,1)", "(0,0,14)", "0,0,12", "(0,0,12", "(0,,12)",
                                 "(0,0,1x)"])
def test_parse_errors_have_position(bad):
    with pytest.raises(StructureParseError) as exc:
        parse_structure(bad)
    assert exc.value.reason == "parse_error"
    assert isinstance(exc.value.position, int)


@pytest.mark.parametrize("text", BUNDLED + ["(0,0,0,12,-2*13+23)"])
def test_format_roundtrip(text):
    spec = parse_structure(text)
    assert parse_structure(format_structure(spec)) == spec


def test_cochain_parse():
    w = parse_cochain("14+23+56", 6)
    assert w.degree == 2 and len(w.terms) == 3
    x = parse_cochain("2*1.2-1/3*3.4", 6)
    assert x.coefficient((1, 2)) == 2 and x.coefficient((3, 4)) == Fraction(-1, 3)


def test_wedge_sign_and_square():
    e1, e2 = Cochain.generator(3, 1), Cochain.generator(3, 2)
    assert wedge(e2, e1) == -wedge(e1, e2)
    assert wedge(e1, e1).is_zero()


@pytest.mark.parametrize("text", BUNDLED)
def test_d_squared_on_bundled(text):
    spec = parse_structure(text)
    assert check_d_squared(spec) is None
    for k in range(spec.n - 1):
        d1, d0 = differential_matrix(spec, k + 1), differential_matrix(spec, k)
        assert (d1 @ d0).is_zero()


def test_d_squared_rejection_with_witness():
    spec = parse_structure("(0,0,12,34)")
    bad = check_d_squared(spec)
    assert bad.generator == 4
    assert bad.witness == Cochain.monomial(4, (1, 2, 4))
    with pytest.raises(DSquaredError):
        require_d_squared(spec)


def test_differential_matrix_shape():
    spec = parse_structure("(0,0,12,0,0,45)")
    m = differential_matrix(spec, 2)
    assert (m.rows, m.cols) == (20, 15)


@pytest.mark.parametrize("n,p,q", [(4, 1, 2), (6, 2, 2), (6, 1, 3), (5, 2, 3)])
def test_graded_commutativity_exhaustive(n, p, q):
    for a in combinations(range(1, n + 1), p):
        for b in combinations(range(1, n + 1), q):
            x, y = Cochain.monomial(n, a), Cochain.monomial(n, b)
            assert wedge(x, y) == wedge(y, x).scale((-1) ** (p * q))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BUNDLED[:4]), st.data())
def test_leibniz(text, data):
    spec = parse_structure(text)
    n = spec.n
    p = data.draw(st.integers(0, n - 1))
    q = data.draw(st.integers(0, n - 1 - p))
    x, y = data.draw(cochains(n, p)), data.draw(cochains(n, q))
    lhs = differential(spec, wedge(x, y))
    rhs = wedge(differential(spec, x), y) + wedge(x, differential(spec, y)).scale((-1) ** p)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(cochains(5, 2), cochains(5, 2), cochains(5, 1))
def test_wedge_associative_and_bilinear(x, y, z):
    assert wedge(wedge(x, z), y) == wedge(x, wedge(z, y))
    assert wedge(x + y, z) == wedge(x, z) + wedge(y, z)
