import pytest

from linkfloer import complex as cx
from linkfloer.complex import compose, identity
from linkfloer.derivmaps import (
    cfk_involution,
    phi,
    phi_component,
    psi,
    psi_arc,
    psi_component,
    sarkar_map,
    second_derivative_homotopy,
    tau_map,
)
from linkfloer.errors import ColorMismatch, ColorPrecondition, NotABasepoint, NotOnePairKnot, TooFewPairs
from linkfloer.fixtures import ONE_PAIR_KNOTS, MODELS, unknot1
from linkfloer.homotopy import verify_homotopy
from linkfloer.linkconfig import Arc, Coloring
from linkfloer.ring import ONE, U, V

from conftest import grid, pipeline


def colored(C):
    return C.with_coloring(Coloring.trivial(C.cfg))


def test_block_phi_psi(two_pair):
    F, G = phi(two_pair, "w"), psi(two_pair, "z")
    assert F("x|-") == {"x|+": ONE} and F("x|+") == {}
    assert G("x|+") == {"x|-": ONE} and G("x|-") == {}


def test_one_pair_unknot_maps_vanish():
    K = colored(unknot1())
    assert phi(K, "w1").is_zero() and psi(K, "z1").is_zero()
    assert sarkar_map(K, "K") == identity(K)


def test_phi_anticommutes_on_colored_trefoil():
    T = grid("trefoil5")
    for w in T.cfg.w_basepoints():
        assert cx.is_chain_map(phi(T, w)).ok


def test_psi_defect_uncolored_and_merged(two_pair):
    raw = pipeline("two_pair_unknot", coloring="none")
    from linkfloer.ring import Poly
    want = Poly.var(U("w")) + Poly.var(U("w1"))
    assert cx.is_chain_map(psi(raw, "z")).defect.cols == [{0: want}, {1: want}]
    assert cx.is_chain_map(psi(pipeline("two_pair_unknot_merged"), "z")).ok


def test_arc_maps(two_pair_merged):
    C = two_pair_merged
    assert psi_arc(C, Arc("K")) == psi_component(C, "K")
    A = Arc("K", "w1", "w")
    assert psi_arc(C, A) + psi_arc(C, C.cfg.complement(A)) == psi_component(C, "K")
    assert psi_component(C, "K")("x|+") == {}


def test_arc_color_mismatch(two_pair):
    with pytest.raises(ColorMismatch):
        psi_arc(two_pair, Arc("K", "w1", "w"))


def test_not_a_basepoint(two_pair):
    with pytest.raises(NotABasepoint):
        phi(two_pair, "z")
    with pytest.raises(NotABasepoint):
        psi(two_pair, "nope")


def test_sarkar_identity_on_block(two_pair):
    assert compose(phi_component(two_pair, "K"), psi_component(two_pair, "K")).is_zero()
    assert sarkar_map(two_pair, "K") == identity(two_pair)


@pytest.mark.parametrize("name", ["unknot2", "unknot4", "trefoil5"])
def test_sarkar_is_a_chain_map_on_grids(name):
    C = grid(name)
    S = sarkar_map(C, "K0")
    assert S.filtered and cx.is_chain_map(S).ok


def test_tau(two_pair_merged):
    t = tau_map(two_pair_merged, "K")
    assert t.shift == (0, 0)
    assert cx.is_chain_map(t).ok


def test_tau_preconditions(two_pair):
    with pytest.raises(ColorPrecondition):
        tau_map(two_pair, "K")
    with pytest.raises(TooFewPairs):
        tau_map(colored(unknot1()), "K")


@pytest.mark.parametrize("name", ONE_PAIR_KNOTS)
def test_cfk_involution_equals_sarkar(name):
    K = colored(MODELS[name]())
    assert cfk_involution(K) == sarkar_map(K, "K")


def test_cfk_involution_preconditions(two_pair):
    with pytest.raises(NotOnePairKnot):
        cfk_involution(two_pair)
    with pytest.raises(NotOnePairKnot):
        cfk_involution(colored(MODELS["unlink1"]()))
    with pytest.raises(NotOnePairKnot):
        cfk_involution(unknot1())


def test_second_derivative_certificates():
    # differentiating d^2 = c twice: Psi_z^2 = d H + H d with H the divided second derivative
    T = grid("unknot4")
    for z in T.cfg.z_basepoints()[:2]:
        P = psi(T, z)
        H = cx.ChainMap(T, T, second_derivative_homotopy(T, V(z)), (-1, 3), True, "H", {"K0": -4})
        F = compose(P, P)
        assert verify_homotopy(F, cx.zero_map(T, T, F.shift, F.alex_shift), H)
