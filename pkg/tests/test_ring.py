import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkfloer.errors import UnknownBasepoint
from linkfloer.linkconfig import Coloring
from linkfloer.ring import (
    C,
    ONE,
    ZERO,
    Poly,
    U,
    V,
    Var,
    partial_derivative,
    poly_add,
    poly_mul,
    substitute_coloring,
)

Uw, Vz = Poly.var(U("w")), Poly.var(V("z"))
VARS = [U("w1"), U("w2"), V("z1"), V("z2")]


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.lists(
        st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), max_size=3),
        max_size=max_terms))
    out = ZERO
    for t in terms:
        m = ONE
        for v, e in t:
            m = m * Poly.var(v) ** e
        out = out + m
    return out


def test_add_examples():
    assert Uw + Uw == ZERO
    assert (Uw + Vz) + Vz == Uw
    assert poly_add(ZERO, Uw) == Uw


def test_mul_examples():
    assert str(poly_mul(Uw, Vz)) == "U_w*V_z"
    assert (Uw + Vz) * (Uw + Vz) == Uw ** 2 + Vz ** 2
    assert ONE * (Uw + Vz) == Uw + Vz


def test_derivative_examples():
    assert partial_derivative(Uw ** 2 * Vz, U("w")) == ZERO
    assert partial_derivative(Uw * Vz, U("w")) == Vz
    assert partial_derivative(Uw ** 3 + Uw ** 2, U("w")) == Uw ** 2


def test_divided_derivative_lucas():
    # binom(3, 2) = 3 is odd, binom(2, 2) = 1, binom(4, 2) = 6 is even
    assert (Uw ** 3).divided_derivative(U("w"), 2) == Uw
    assert (Uw ** 2).divided_derivative(U("w"), 2) == ONE
    assert (Uw ** 4).divided_derivative(U("w"), 2) == ZERO


def test_substitute_examples():
    sigma = Coloring({"z1": "c", "z2": "c", "w1": "a", "w2": "b"})
    z1, z2 = Poly.var(V("z1")), Poly.var(V("z2"))
    w1, w2 = Poly.var(U("w1")), Poly.var(U("w2"))
    assert substitute_coloring(z1 + z2, sigma) == ZERO
    assert substitute_coloring(w1 * z1, Coloring({"w1": "a", "z1": "b"})) == Poly.var(C("a")) * Poly.var(C("b"))
    assert substitute_coloring(w1 + w2, sigma) == Poly.var(C("a")) + Poly.var(C("b"))


def test_substitute_unknown():
    with pytest.raises(UnknownBasepoint):
        substitute_coloring(Poly.var(U("w9")), Coloring({"w1": "a"}))


def test_json_roundtrip_is_canonical():
    p = Uw * Vz + Poly.var(U("a")) ** 3 + ONE
    data = p.to_json()
    assert Poly.from_json(data) == p
    assert data == Poly.from_json(list(reversed(data))).to_json()


def test_var_names():
    assert str(U("w1")) == "U_w1" and str(V("z")) == "V_z" and str(C("K")) == "C_K"
    assert Var.parse("V_z1") == V("z1")


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + p == ZERO
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.sampled_from(VARS))
def test_leibniz(p, q, v):
    assert (p * q).derivative(v) == p.derivative(v) * q + p * q.derivative(v)


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_coloring_is_a_homomorphism(p, q):
    sigma = Coloring({"w1": "a", "w2": "a", "z1": "K", "z2": "K"})
    s = lambda x: substitute_coloring(x, sigma)  # noqa: E731
    assert s(p + q) == s(p) + s(q)
    assert s(p * q) == s(p) * s(q)
