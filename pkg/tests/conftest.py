from fractions import Fraction

import pytest

from leflab.cemodel import parse_cochain
from leflab.cohomring import compute_cohomology, restriction_from_subtorus
from leflab.blowup import build_blowup, make_blowup_input

HH = "(0,0,12,0,0,45)"
HH_OMEGA = "14+23+56"
DIAGONAL_FRAME = [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]]


@pytest.fixture(scope="session")
def heis():
    return compute_cohomology("(0,0,12)")


@pytest.fixture(scope="session")
def hh():
    return compute_cohomology(HH)


@pytest.fixture(scope="session")
def hh_omega(hh):
    return hh.class_of(parse_cochain(HH_OMEGA, 6))


@pytest.fixture(scope="session")
def torus_blowup(hh):
    frame = [[Fraction(c) for c in v] for v in DIAGONAL_FRAME]
    imap = restriction_from_subtorus(hh, frame)
    data = make_blowup_input(hh, imap.target, imap)
    return imap, data, build_blowup(data)
