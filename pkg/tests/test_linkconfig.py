import pytest

from linkfloer.errors import (
    AlternationViolation,
    ColoringViolation,
    ColorMismatch,
    InvalidArc,
    NotFound,
)
from linkfloer.linkconfig import Arc, Coloring, LinkConfig, adjacent_w_of_z, arc_z_basepoints, insert_pair

ONE = LinkConfig.from_sequences({"K": ("z1", "w1")})
TWO = LinkConfig.from_sequences({"K": ("z1", "w1", "z2", "w2")})


def test_adjacent_w():
    assert adjacent_w_of_z(ONE, "z1") == ("w1", "w1")
    assert adjacent_w_of_z(TWO, "z2") == ("w1", "w2")
    assert adjacent_w_of_z(TWO, "z1") == ("w2", "w1")


def test_adjacency_queries():
    assert TWO.are_adjacent("w1", "z2") and TWO.are_adjacent("w1", "z1")
    three = LinkConfig.from_sequences({"K": ("z1", "w1", "z2", "w2", "z3", "w3")})
    assert not three.are_adjacent("w1", "z3")
    assert len(TWO.adjacency_pairs()) == 4


def test_arc_z_basepoints():
    assert arc_z_basepoints(TWO, Arc("K")) == ["z1", "z2"]
    A = Arc("K", "w1", "w2")
    assert arc_z_basepoints(TWO, A) == ["z2"]
    assert arc_z_basepoints(TWO, TWO.complement(A)) == ["z1"]


def test_arc_errors():
    with pytest.raises(InvalidArc):
        TWO.complement(Arc("K"))
    with pytest.raises(InvalidArc):
        TWO.arc_z_basepoints(Arc("L"))


def test_insert_pair():
    cfg, z, w = insert_pair(ONE, None, "w1", "zn", "wn")
    assert cfg.components["K"] == ("z1", "w1", "zn", "wn")
    cfg, _, _ = insert_pair(TWO, "K", "w1", "zn", "wn")
    assert cfg.components["K"] == ("z1", "w1", "zn", "wn", "z2", "w2")


def test_insert_pair_errors():
    with pytest.raises(AlternationViolation):
        insert_pair(ONE, None, "z1", "a", "b")
    with pytest.raises(AlternationViolation):
        insert_pair(ONE, None, "w1", "z1", "b")
    with pytest.raises(NotFound):
        insert_pair(ONE, "L", "w1")


def test_fresh_names():
    cfg, z, w = ONE.insert_pair(None, "w1")
    assert (z, w) == ("zn0", "wn0") and cfg.n_pairs("K") == 2


def test_alternation_enforced():
    with pytest.raises(AlternationViolation):
        LinkConfig.from_sequences({"K": ("z1", "z2")})


def test_json_roundtrip():
    assert LinkConfig.from_json(TWO.to_json()) == TWO


def test_colorings():
    triv = Coloring.trivial(TWO)
    assert triv.color("z1") == triv.color("z2") == "K"
    assert triv.color("w1") != triv.color("w2")
    merged = Coloring.merge_w(TWO, "K")
    assert merged.color("w1") == merged.color("w2")
    with pytest.raises(ColorMismatch):
        triv.require_same("w1", "w2")


def test_coloring_z_constraint():
    with pytest.raises(ColoringViolation):
        Coloring({"z1": "a", "z2": "b", "w1": "c", "w2": "d"}).validate(TWO)
    with pytest.raises(ColoringViolation):
        Coloring({"z1": "a"}).validate(TWO)
