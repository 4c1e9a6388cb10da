import pytest

from linkfloer import complex as cx
from linkfloer.complex import compose, identity, zero_map
from linkfloer.derivmaps import phi, psi, psi_component
from linkfloer.errors import DegreeBoundTooLow, DifferentialNotSquareZero, ShapeMismatch, SizeCapExceeded
from linkfloer.fixtures import unknot1
from linkfloer.homotopy import grading_degree_bound, homotopic, solve_homotopy, verify_homotopy
from linkfloer.linkconfig import Coloring
from linkfloer.theorems import commutator_expected, psi_square_homotopy

from conftest import grid, pipeline


def zero_like(F):
    return zero_map(F.source, F.target, F.shift, F.alex_shift)


def anti(F, G):
    return compose(F, G) + compose(G, F)


def test_equal_maps_need_no_homotopy(two_pair):
    F = phi(two_pair, "w")
    res = solve_homotopy(F, F)
    assert res.found and res.H.is_zero()


def test_one_generator_bound():
    K = unknot1().with_coloring(Coloring.trivial(unknot1().cfg))
    assert grading_degree_bound(identity(K)) == 0


def test_psi_square_on_block(two_pair):
    F = compose(psi(two_pair, "z"), psi(two_pair, "z"))
    assert grading_degree_bound(F) <= 2
    res = solve_homotopy(F, zero_like(F))
    assert res.found and verify_homotopy(F, zero_like(F), res.H)


@pytest.mark.parametrize("name", ["two_pair_unknot", "three_pair_unknot"])
def test_commutator_dichotomy(name):
    C = pipeline(name)
    I = identity(C)
    for w in C.cfg.w_basepoints():
        for z in C.cfg.z_basepoints():
            F = anti(phi(C, w), psi(C, z))
            to_one, to_zero = homotopic(F, I), homotopic(F, zero_like(F))
            assert (to_one, to_zero) == ((True, False) if commutator_expected(C, w, z) else (False, True))


def test_nonadjacent_pair_exists():
    C = pipeline("three_pair_unknot")
    assert not C.cfg.are_adjacent("w1", "zz")


def test_unsat_report(two_pair):
    F = anti(phi(two_pair, "w"), psi(two_pair, "z"))
    res = solve_homotopy(F, zero_like(F))
    assert not res.found and res.H is None
    assert res.to_json()["status"] == "UNSAT"


def test_degree_warning_and_monotonicity():
    C = grid("unknot4")
    P = psi_component(C, "K0")
    F = compose(P, P)
    bound = grading_degree_bound(F)
    assert bound >= 1
    with pytest.warns(DegreeBoundTooLow):
        low = solve_homotopy(F, zero_like(F), degree=0)
    full = solve_homotopy(F, zero_like(F))
    assert full.found
    assert full.report["unknowns"] >= low.report["unknowns"]
    if low.found:
        assert full.found


def test_shape_mismatch(two_pair):
    with pytest.raises(ShapeMismatch):
        solve_homotopy(phi(two_pair, "w"), psi(two_pair, "z"))
    other = pipeline("two_pair_trefoil")
    with pytest.raises(ShapeMismatch):
        solve_homotopy(identity(two_pair), identity(other))


def test_needs_a_chain_complex():
    raw = pipeline("two_pair_unknot", coloring="none")
    with pytest.raises(DifferentialNotSquareZero):
        solve_homotopy(identity(raw), identity(raw))


def test_homotopy_json(two_pair):
    F = compose(psi(two_pair, "z"), psi(two_pair, "z"))
    out = solve_homotopy(F, zero_like(F)).to_json()
    assert out["status"] == "homotopic" and "homotopy" in out


def test_trefoil_psi_k_square():
    T = grid("trefoil5")
    P = psi_component(T, "K0")
    F = compose(P, P)
    res = solve_homotopy(F, zero_like(F))
    assert res.found and cx.is_chain_map(F).ok


def test_unknown_cap():
    T = grid("trefoil5")
    P = psi_component(T, "K0")
    F = compose(P, P)
    with pytest.raises(SizeCapExceeded):
        solve_homotopy(F, zero_like(F), max_unknowns=10)


@pytest.mark.parametrize("name", ["unknot4", "link4", "trefoil5"])
def test_explicit_psi_square_certificate(name):
    C = grid(name)
    for comp in C.cfg.components:
        P = psi_component(C, comp)
        F = compose(P, P)
        assert verify_homotopy(F, zero_like(F), psi_square_homotopy(C, comp))


def test_search_is_restricted_to_relevant_blocks(two_pair):
    # equal maps generate no unknowns at all
    F = phi(two_pair, "w")
    assert solve_homotopy(F, F).report["unknowns"] == 0
