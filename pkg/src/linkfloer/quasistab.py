"""Quasi-stabilization as an abstract doubling of a complex.

Inserting a pair (z, w) after a w-basepoint doubles every generator x into
x+ and x-, with

    d(x+) = (dx)+ + (V_z + V_z') x-,    d(x-) = (dx)- + (U_w + U_w') x+,

where w' is the w before z and z' the z after w, read off the configuration
at insertion time.  Each insertion is a layer; generator index
``2 * i + bit`` refines index ``i`` of the previous layer (bit 0 is +).
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .complex import (
    ChainComplex,
    ChainMap,
    Matrix,
    compose,
    d_squared_defect,
    expected_defect,
    identity,
    is_chain_map,
    mat_equal,
    mat_mul,
)
from .derivmaps import phi, psi, psi_arc, psi_component
from .errors import NotAChainMap, UnregisteredPair
from .linkconfig import W_KIND, Arc, Coloring, LinkConfig
from .ring import ONE, Poly, U, V


class StabRecord(NamedTuple):
    component: str
    z: str
    w: str
    w_ref: str  # the w preceding z when inserted
    z_ref: str  # the z following w when inserted
    base: ChainComplex  # the complex this layer was added to


def _sign_label(label: str, bit: int) -> str:
    s = "+" if bit == 0 else "-"
    return label + s if "|" in label else f"{label}|{s}"


def _stabilize_data(C: ChainComplex, cfg: LinkConfig, comp: str, z: str, w: str):
    w_ref = cfg.prev_of(z)
    z_ref = cfg.next_of(w)
    v_poly = Poly.var(V(z)) + Poly.var(V(z_ref))
    u_poly = Poly.var(U(w)) + Poly.var(U(w_ref))
    diff: Matrix = []
    for i, col in enumerate(C.diff):
        plus = {2 * y: p for y, p in col.items()}
        plus[2 * i + 1] = v_poly
        minus = {2 * y + 1: p for y, p in col.items()}
        minus[2 * i] = u_poly
        diff += [plus, minus]
    labels = []
    grads = []
    for lab, g in zip(C.labels, C.gradings):
        labels += [_sign_label(lab, 0), _sign_label(lab, 1)]
        grads += [g, g.shifted(-1, 1, comp)]
    return labels, grads, diff, w_ref, z_ref


def quasi_stabilize(
    C: ChainComplex,
    component: str | None,
    after: str,
    z_new: str | None = None,
    w_new: str | None = None,
    w_color: str | None = None,
) -> tuple[ChainComplex, ChainMap, ChainMap, StabRecord]:
    """Add a (z, w) pair right after the w-basepoint ``after``.

    On a colored complex the new z takes its component's z-color and the new
    w takes ``w_color`` (default: a fresh color named after it).
    """
    cfg, z, w = C.cfg.insert_pair(component, after, z_new, w_new)
    comp = cfg.component_of(z)
    labels, grads, diff, w_ref, z_ref = _stabilize_data(C, cfg, comp, z, w)
    coloring = None
    if C.coloring is not None:
        zc = C.coloring.color(C.cfg.z_basepoints(comp)[0])
        coloring = C.coloring.extend({z: zc, w: w_color or w})
    rec = StabRecord(comp, z, w, w_ref, z_ref, C)
    Cbar = ChainComplex(labels, grads, cfg, diff, coloring, C.stabs + (rec,), name=f"{C.name}+{z}{w}")
    return Cbar, s_plus(C, Cbar), s_minus(Cbar, C), rec


def s_plus(C: ChainComplex, Cbar: ChainComplex) -> ChainMap:
    """x -> x+ into the outermost layer."""
    return ChainMap(C, Cbar, [{2 * i: ONE} for i in range(C.n)], (0, 0), True, f"S+_{Cbar.stabs[-1].w}")


def s_minus(Cbar: ChainComplex, C: ChainComplex) -> ChainMap:
    """x- -> x, x+ -> 0 out of the outermost layer."""
    comp = Cbar.stabs[-1].component
    cols = [{} if j % 2 == 0 else {j // 2: ONE} for j in range(Cbar.n)]
    return ChainMap(Cbar, C, cols, (1, -1), True, f"S-_{Cbar.stabs[-1].w}", {comp: 2})


# -- layer bookkeeping -------------------------------------------------------


def root_of(C: ChainComplex) -> ChainComplex:
    return C.stabs[0].base if C.stabs else C


def find_layer(C: ChainComplex, w: str) -> int:
    for k, rec in enumerate(C.stabs):
        if rec.w == w or rec.z == w:
            return k
    raise UnregisteredPair(f"{w} is not a registered quasi-stabilization pair")


def materialize(root: ChainComplex, pairs: Sequence[tuple[str, str]], final_cfg: LinkConfig,
                coloring: Coloring | None) -> ChainComplex:
    """Insert ``pairs`` into ``root`` in the given order, at their places in ``final_cfg``."""
    C = root.with_coloring(None)
    for z, w in pairs:
        present = set(C.cfg.all_basepoints())
        b = final_cfg.prev_of(z)
        while b not in present:
            b = final_cfg.prev_of(b)
        if final_cfg.kinds[b] != W_KIND:
            raise UnregisteredPair(f"cannot place pair ({z}, {w})")
        C, _, _, _ = quasi_stabilize(C, None, b, z, w)
    if coloring is not None:
        sub = {b: coloring.sigma[b] for b in C.cfg.all_basepoints()}
        C = C.with_coloring(Coloring(sub))
    return C


def _pairs(C: ChainComplex) -> list[tuple[str, str]]:
    return [(r.z, r.w) for r in C.stabs]


def earlier_adjacent(cfg: LinkConfig, a: tuple[str, str], b: tuple[str, str]) -> tuple | None:
    """If pairs a, b sit next to each other, return (earlier, later) in orientation order."""
    if cfg.next_of(a[1]) == b[0]:
        return a, b
    if cfg.next_of(b[1]) == a[0]:
        return b, a
    return None


def _bits(index: int, L: int) -> tuple[int, list[int]]:
    return index >> L, [(index >> (L - 1 - j)) & 1 for j in range(L)]


def _index(base: int, bits: Sequence[int]) -> int:
    out = base
    for b in bits:
        out = 2 * out + b
    return out


def swap_layers(C: ChainComplex, k: int) -> tuple[ChainComplex, ChainMap]:
    """Re-materialize with layers k and k+1 exchanged; return the identifying isomorphism.

    The map is the relabeling plus, when the two pairs are adjacent, the
    term taking (earlier +, later -) to (earlier -, later +).
    """
    pairs = _pairs(C)
    L = len(pairs)
    if not 0 <= k < L - 1:
        raise UnregisteredPair("no layer above to swap with")
    order = pairs[:k] + [pairs[k + 1], pairs[k]] + pairs[k + 2:]
    D = materialize(root_of(C), order, C.cfg, C.coloring)
    adj = earlier_adjacent(C.cfg, pairs[k], pairs[k + 1])
    cols: Matrix = []
    for j in range(C.n):
        base, bits = _bits(j, L)
        nb = list(bits)
        nb[k], nb[k + 1] = bits[k + 1], bits[k]
        col = {_index(base, nb): ONE}
        if adj is not None:
            e_pos = k if adj[0] == pairs[k] else k + 1
            l_pos = 2 * k + 1 - e_pos
            if bits[e_pos] == 0 and bits[l_pos] == 1:
                mb = list(bits)
                mb[e_pos], mb[l_pos] = 1, 0
                mb[k], mb[k + 1] = mb[k + 1], mb[k]
                col[_index(base, mb)] = ONE
        cols.append(col)
    F = ChainMap(C, D, cols, (0, 0), True, f"reorder{k}")
    U_C, U_D = C.with_coloring(None), D.with_coloring(None)
    if not mat_equal(mat_mul(U_D.diff, F.cols), mat_mul(F.cols, U_C.diff)):
        raise NotAChainMap("layer reordering is not a chain isomorphism")
    return D, F


def move_to_top(C: ChainComplex, w: str) -> tuple[ChainComplex, ChainMap]:
    """Isomorphism onto the materialization with the pair of ``w`` as the last layer."""
    k = find_layer(C, w)
    F = identity(C)
    D = C
    while k < len(D.stabs) - 1:
        D, G = swap_layers(D, k)
        F = compose(G, F)
        k += 1
    return D, F


def destabilize(C: ChainComplex, w: str) -> tuple[ChainComplex, ChainMap]:
    """The map S- for the registered pair containing ``w``, from any layer."""
    D, F = move_to_top(C, w)
    base = D.stabs[-1].base
    if D.coloring is not None:
        base = base.with_coloring(Coloring({b: D.coloring.sigma[b] for b in base.cfg.all_basepoints()}))
    S = s_minus(D, base)
    return base, compose(S, F).renamed(f"S-_{D.stabs[-1].w}")


def stabilize_map(C: ChainComplex, after: str, z_new: str | None = None, w_new: str | None = None,
                  w_color: str | None = None) -> tuple[ChainComplex, ChainMap]:
    Cbar, Sp, _, _ = quasi_stabilize(C, None, after, z_new, w_new, w_color)
    return Cbar, Sp


# -- pipelines -----------------------------------------------------------------


@dataclass
class Pipeline:
    """A base complex, insertions applied in order, and a coloring spec."""

    base: str | dict
    insertions: list[dict]
    coloring: str | dict = "trivial"
    component: str | None = None

    @classmethod
    def from_json(cls, data: Mapping | str) -> "Pipeline":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["base"], list(data.get("insertions", [])), data.get("coloring", "trivial"),
                   data.get("component"))

    def to_json(self) -> dict:
        return {"base": self.base, "insertions": self.insertions, "coloring": self.coloring,
                "component": self.component}


def resolve_coloring(spec, cfg: LinkConfig) -> Coloring | None:
    if spec is None or spec == "none":
        return None
    if isinstance(spec, Mapping):
        return Coloring(dict(spec))
    if spec == "trivial":
        return Coloring.trivial(cfg)
    if isinstance(spec, str) and spec.startswith("merge_w:"):
        return Coloring.merge_w(cfg, spec.split(":", 1)[1])
    raise ValueError(f"unknown coloring {spec!r}")


def build_pipeline(p: Pipeline, cap: int = 7, jobs: int = 1) -> ChainComplex:
    """Materialize the pipeline's complex, colored as requested."""
    from .fixtures import base_complex

    C = base_complex(p.base, cap=cap, jobs=jobs)
    for ins in p.insertions:
        C, _, _, _ = quasi_stabilize(C, ins.get("component"), ins["after"], ins.get("z"), ins.get("w"))
    coloring = resolve_coloring(p.coloring, C.cfg)
    return C.with_coloring(coloring)


# -- the exact relation suite --------------------------------------------------


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "status": "exact" if self.ok else "fail", "detail": self.detail}


def _theta_flip(Cbar: ChainComplex) -> Matrix:
    return [{j + 1: ONE} if j % 2 == 0 else {} for j in range(Cbar.n)]


def _restrict(coloring: Coloring | None, C: ChainComplex) -> ChainComplex:
    if coloring is None:
        return C.with_coloring(None)
    return C.with_coloring(Coloring({b: coloring.sigma[b] for b in C.cfg.all_basepoints()}))


def pair_checks(Cbar: ChainComplex, w: str) -> list[Check]:
    """Exact identities for one registered pair, with it moved to the top layer."""
    D, _ = move_to_top(Cbar, w)
    rec = D.stabs[-1]
    base = _restrict(D.coloring, rec.base)
    Sp, Sm = s_plus(base, D), s_minus(D, base)
    tag = f"({rec.z},{rec.w})"
    out = []
    out.append(Check(f"S+S- = Phi_{rec.w} {tag}", compose(Sp, Sm) == phi(D, rec.w)))
    out.append(Check(f"S-S+ = 0 {tag}", compose(Sm, Sp).is_zero()))
    flip = D.to_ring_matrix(_theta_flip(D))
    dV = D.to_ring_matrix([{y: p.derivative(V(rec.z)) for y, p in col.items()} for col in D.diff])
    out.append(Check(f"dV_{rec.z} of d is the theta flip {tag}", mat_equal(dV, flip)))
    for zp in (rec.z, D.cfg.next_of(rec.w)):
        comp = compose(Sm, compose(psi(D, zp), Sp))
        out.append(Check(f"S- Psi_{zp} S+ = 1 {tag}", comp == identity(base)))
    z_next = D.cfg.next_of(rec.w)
    for zp in base.cfg.z_basepoints():
        lhs_p = compose(Sp, psi(base, zp))
        lhs_m = compose(psi(base, zp), Sm)
        if zp == z_next:
            both = psi(D, zp) + psi(D, rec.z)
            out.append(Check(f"S+ Psi_{zp} = (Psi_{zp}+Psi_{rec.z}) S+ {tag}", lhs_p == compose(both, Sp)))
            out.append(Check(f"Psi_{zp} S- = S- (Psi_{zp}+Psi_{rec.z}) {tag}", lhs_m == compose(Sm, both)))
        else:
            out.append(Check(f"S+ commutes with Psi_{zp} {tag}", lhs_p == compose(psi(D, zp), Sp)))
            out.append(Check(f"S- commutes with Psi_{zp} {tag}", lhs_m == compose(Sm, psi(D, zp))))
    for wp in base.cfg.w_basepoints():
        out.append(Check(f"S+ commutes with Phi_{wp} {tag}", compose(Sp, phi(base, wp)) == compose(phi(D, wp), Sp)))
        out.append(Check(f"S- commutes with Phi_{wp} {tag}", compose(phi(base, wp), Sm) == compose(Sm, phi(D, wp))))
    if D.coloring is not None:
        out.append(Check(f"S+ is a chain map {tag}", is_chain_map(Sp).ok))
        out.append(Check(f"S- is a chain map {tag}", is_chain_map(Sm).ok))
    return out


def disjoint_commutation_checks(Cbar: ChainComplex) -> list[Check]:
    """S-maps of two non-adjacent pairs commute (after relabeling the layers)."""
    out = []
    L = len(Cbar.stabs)
    for k in range(L - 1):
        a, b = Cbar.stabs[k], Cbar.stabs[k + 1]
        if earlier_adjacent(Cbar.cfg, (a.z, a.w), (b.z, b.w)) is not None:
            continue
        D, F = swap_layers(Cbar, k)
        ok = F.cols == [{_index(*_swapped(j, L, k)): ONE} for j in range(Cbar.n)]
        out.append(Check(f"layers ({a.z},{a.w}) and ({b.z},{b.w}) commute", ok))
    return out


def _swapped(j: int, L: int, k: int):
    base, bits = _bits(j, L)
    bits[k], bits[k + 1] = bits[k + 1], bits[k]
    return base, bits


def arc_checks(C: ChainComplex) -> list[Check]:
    """Psi_K Psi_A = Psi_{c(A)} Psi_A for arcs between same-colored w's."""
    out = []
    for comp in C.cfg.components:
        ws = C.cfg.w_basepoints(comp)
        PK = psi_component(C, comp)
        for a in ws:
            for b in ws:
                if a == b:
                    continue
                if C.coloring is not None and C.coloring.color(a) != C.coloring.color(b):
                    continue
                A = Arc(comp, a, b)
                PA = psi_arc(C, A)
                PcA = psi_arc(C, C.cfg.complement(A))
                out.append(Check(f"Psi_K Psi_A = Psi_cA Psi_A for A={a}->{b}",
                                 compose(PK, PA) == compose(PcA, PA)))
    return out


def relation_suite(Cbar: ChainComplex) -> list[Check]:
    """All exact identities for a block-built complex."""
    if not Cbar.stabs:
        raise UnregisteredPair("complex has no registered quasi-stabilization")
    out = [Check("uncolored d^2 = expected defect", d_squared_defect(Cbar) == expected_defect(Cbar.cfg))]
    for rec in Cbar.stabs:
        out += pair_checks(Cbar, rec.w)
    out += disjoint_commutation_checks(Cbar)
    out += arc_checks(Cbar)
    return out
