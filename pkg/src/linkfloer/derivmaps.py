"""Basepoint endomorphisms: formal derivatives of the differential and their sums."""

from __future__ import annotations

from .complex import ChainComplex, ChainMap, Matrix, add_all, compose, compose_all, identity, zero_map
from .errors import ColorPrecondition, NotABasepoint, NotOnePairKnot, TooFewPairs
from .linkconfig import W_KIND, Z_KIND, Arc, Coloring
from .ring import U, V, Var, mono_divide, mono_exponent, Poly


def _derivative_matrix(C: ChainComplex, v: Var) -> Matrix:
    return C.to_ring_matrix([{y: p.derivative(v) for y, p in col.items()} for col in C.diff])


def _require(C: ChainComplex, b: str, kind: str) -> str:
    if b not in C.cfg.kinds or C.cfg.kinds[b] != kind:
        raise NotABasepoint(f"{b} is not a {kind}-basepoint of this complex")
    return C.cfg.component_of(b)


def phi(C: ChainComplex, w: str) -> ChainMap:
    """d/dU_w of the uncolored differential, then colored."""
    comp = _require(C, w, W_KIND)
    return ChainMap(C, C, _derivative_matrix(C, U(w)), (1, -1), True, f"Phi_{w}", {comp: 2})


def psi(C: ChainComplex, z: str) -> ChainMap:
    """d/dV_z of the uncolored differential, then colored."""
    comp = _require(C, z, Z_KIND)
    return ChainMap(C, C, _derivative_matrix(C, V(z)), (-1, 1), True, f"Psi_{z}", {comp: -2})


def _sum(C: ChainComplex, maps: list[ChainMap], shift, alex, name: str) -> ChainMap:
    if not maps:
        return zero_map(C, C, shift, alex).renamed(name)
    return add_all(maps).renamed(name)


def psi_arc(C: ChainComplex, arc: Arc) -> ChainMap:
    """Sum of Psi_z over the z-basepoints strictly inside the arc."""
    if not arc.whole and C.coloring is not None:
        C.coloring.require_same(arc.start, arc.end)
    zs = C.cfg.arc_z_basepoints(arc)
    label = arc.component if arc.whole else f"{arc.start}->{arc.end}"
    return _sum(C, [psi(C, z) for z in zs], (-1, 1), {arc.component: -2}, f"Psi_[{label}]")


def phi_component(C: ChainComplex, comp: str) -> ChainMap:
    return _sum(C, [phi(C, w) for w in C.cfg.w_basepoints(comp)], (1, -1), {comp: 2}, f"Phi_{comp}")


def psi_component(C: ChainComplex, comp: str) -> ChainMap:
    return psi_arc(C, Arc(comp)).renamed(f"Psi_{comp}")


def sarkar_map(C: ChainComplex, comp: str) -> ChainMap:
    """1 + Phi_K Psi_K."""
    return (identity(C) + compose(phi_component(C, comp), psi_component(C, comp))).renamed(f"sarkar_{comp}")


def tau_map(C: ChainComplex, comp: str) -> ChainMap:
    """Psi_z1 Phi_w1 ... Psi_zn Phi_wn + Phi_w1 Psi_z2 Phi_w2 ... Phi_w(n-1) Psi_zn.

    Products are compositions as written (rightmost factor applied first);
    pairs (z_j, w_j) follow the component's cyclic order.
    """
    pairs = C.cfg.pairs(comp)
    n = len(pairs)
    if n < 2:
        raise TooFewPairs("the partial twist needs at least two pairs")
    if C.coloring is None or len({C.coloring.color(w) for _, w in pairs}) != 1:
        raise ColorPrecondition(f"all w-basepoints on {comp} must share one color")
    first = []
    for z, w in pairs:
        first += [psi(C, z), phi(C, w)]
    second = [phi(C, pairs[0][1])]
    for j in range(1, n):
        second.append(psi(C, pairs[j][0]))
        if j < n - 1:
            second.append(phi(C, pairs[j][1]))
    return (compose_all(first) + compose_all(second)).renamed(f"tau_{comp}")


def strip_odd(C: ChainComplex, v: Var) -> Matrix:
    """Keep differential terms with odd exponent of ``v`` and remove one factor of it."""
    out = []
    for col in C.diff:
        new = {}
        for y, p in col.items():
            q = Poly(mono_divide(m, v) for m in p.terms if mono_exponent(m, v) % 2)
            if q:
                new[y] = q
        out.append(new)
    return C.to_ring_matrix(out)


def cfk_involution(C: ChainComplex) -> ChainMap:
    """1 + (odd-U part of d, one U removed) o (odd-V part of d, one V removed)."""
    if len(C.cfg.components) != 1:
        raise NotOnePairKnot("expected a knot")
    (comp,) = C.cfg.components
    if C.cfg.n_pairs(comp) != 1:
        raise NotOnePairKnot("expected exactly one pair of basepoints")
    if C.coloring is None or C.coloring != Coloring.trivial(C.cfg):
        raise NotOnePairKnot("expected the trivial coloring")
    (z, w), = C.cfg.pairs(comp)
    A = ChainMap(C, C, strip_odd(C, U(w)), (1, -1), True, "dU", {comp: 2})
    B = ChainMap(C, C, strip_odd(C, V(z)), (-1, 1), True, "dV", {comp: -2})
    return (identity(C) + compose(A, B)).renamed("cfk_involution")


def second_derivative_homotopy(C: ChainComplex, a: Var, b: Var | None = None) -> Matrix:
    """Matrix of d^2(diff)/da db, or the divided second derivative when b is None.

    Differentiating d^2 = c * id twice gives explicit homotopies for the
    quadratic relations among the basepoint maps.
    """
    if b is None:
        mat = [{y: p.divided_derivative(a, 2) for y, p in col.items()} for col in C.diff]
    else:
        mat = [{y: p.derivative(a).derivative(b) for y, p in col.items()} for col in C.diff]
    return C.to_ring_matrix(mat)
