"""Decide F ~ G by solving dH + Hd = F + G over F2.

The unknowns are the coefficients of every monomial allowed in every entry
of H.  The grading law fixes the degree of the monomial in entry x -> y, so
the search space is finite and the solver is complete once the degree
truncation covers every admissible entry.
"""

from __future__ import annotations

import time
import warnings
from typing import NamedTuple

from . import gf2
from .complex import (
    ChainComplex,
    ChainMap,
    VarDegree,
    mat_add,
    mat_equal,
    mat_mul,
    monomial_degree,
    square_is_zero,
)
from .errors import DegreeBoundTooLow, DifferentialNotSquareZero, ShapeMismatch, SizeCapExceeded
from .ring import Poly, Var, mono_mul, mono_quotient


class HomotopyResult(NamedTuple):
    found: bool
    H: ChainMap | None
    report: dict

    def to_json(self) -> dict:
        out = dict(self.report)
        out["status"] = "homotopic" if self.found else "UNSAT"
        if self.H is not None:
            out["homotopy"] = self.H.to_json()
        return out


def _check_problem(F: ChainMap, G: ChainMap) -> None:
    if not (F.source.same_shape(G.source) and F.target.same_shape(G.target)):
        raise ShapeMismatch("F and G must share source and target")
    if F.shift != G.shift and not (F.is_zero() or G.is_zero()):
        raise ShapeMismatch("F and G must have the same grading shift")
    if not (F.filtered and G.filtered):
        raise ShapeMismatch("only filtered maps are compared")
    for C in {id(F.source): F.source, id(F.target): F.target}.values():
        if not square_is_zero(C):
            raise DifferentialNotSquareZero(f"{C!r} is not a chain complex (color it first)")


class _Shape:
    """Which monomial degrees are allowed in each entry of H."""

    def __init__(self, S: ChainComplex, T: ChainComplex, shift: tuple[int, int], alex_shift: dict):
        self.S, self.T = S, T
        self.shift = shift
        self.alex_shift = alex_shift
        self.degrees: dict[Var, VarDegree] = T.var_degrees()
        self.mixed = any(d.dw is None for d in self.degrees.values())

    def degree(self, x: int, y: int) -> tuple[int, int] | None:
        """(U-degree, V-degree) of entry x -> y, or (total, -1) when colors are mixed."""
        gx, gy = self.S.gradings[x], self.T.gradings[y]
        if self.mixed:
            d = gy.gr_w + gy.gr_z - gx.gr_w - gx.gr_z - self.shift[0] - self.shift[1]
            if d < 0 or d % 2:
                return None
            return d // 2, -1
        da = gy.gr_w - gx.gr_w - self.shift[0]
        db = gy.gr_z - gx.gr_z - self.shift[1]
        if da < 0 or db < 0 or da % 2 or db % 2:
            return None
        return da // 2, db // 2

    def alex_ok(self, x: int, y: int, m) -> bool:
        _, _, _, alex = monomial_degree(m, self.degrees)
        gx, gy = self.S.gradings[x], self.T.gradings[y]
        comps = set(dict(gx.alexander)) | set(dict(gy.alexander)) | set(alex)
        return all(gy.alex(c) + alex.get(c, 0) == gx.alex(c) + self.alex_shift.get(c, 0) for c in comps)


def homotopy_shift(F: ChainMap) -> tuple[int, int]:
    return F.shift[0] + 1, F.shift[1] + 1


def grading_degree_bound(F: ChainMap, G: ChainMap | None = None) -> int:
    """Largest total monomial degree any entry of a homotopy could need."""
    shape = _Shape(F.source, F.target, homotopy_shift(F), F.alex_shift)
    best = 0
    for x in range(F.source.n):
        for y in range(F.target.n):
            deg = shape.degree(x, y)
            if deg is not None:
                best = max(best, deg[0] if deg[1] < 0 else deg[0] + deg[1])
    return best


class _DSU:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, a: int) -> int:
        p = self.p
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


# roughly 2.5 kB of bookkeeping per unknown
MAX_UNKNOWNS = 500_000


def solve_homotopy(F: ChainMap, G: ChainMap, degree: int | None = None,
                   max_unknowns: int = MAX_UNKNOWNS) -> HomotopyResult:
    """Find a filtered, homogeneous H with dH + Hd = F + G, or prove none exists.

    Only unknowns linked to a term of F + G through some equation are
    generated: starting from those terms, each equation pulls in every
    entry of H that can contribute to it.  Unknowns outside these blocks
    appear only in homogeneous equations and can be set to zero, so the
    search stays complete.
    """
    t0 = time.perf_counter()
    _check_problem(F, G)
    S, T = F.source, F.target
    ref = F if not F.is_zero() else G
    shape = _Shape(S, T, homotopy_shift(ref), ref.alex_shift)
    bound = grading_degree_bound(ref)
    if degree is not None and degree < bound:
        warnings.warn(f"degree {degree} is below the completeness bound {bound}; UNSAT is not conclusive",
                      DegreeBoundTooLow, stacklevel=2)
    dS, dT = S.ring_diff, T.ring_diff
    # into_T[b] lists (y, term) with b appearing in dT(y)
    into_T: list[list[tuple[int, tuple]]] = [[] for _ in range(T.n)]
    for y, col in enumerate(dT):
        for b, p in col.items():
            into_T[b].extend((y, t) for t in p.terms)

    rhs: set[tuple] = set()
    for x, col in enumerate(mat_add(F.cols, G.cols)):
        for y, p in col.items():
            for m in p.terms:
                rhs ^= {(x, y, m)}

    unknowns: list[tuple[int, int, tuple]] = []
    uindex: dict[tuple, int] = {}
    eqs: dict[tuple, set[int]] = {}
    pending = list(rhs)
    explored: set[tuple] = set()
    allowed_cache: dict[tuple[int, int], tuple | None] = {}

    def allowed(x: int, y: int, m) -> bool:
        key = (x, y)
        deg = allowed_cache.get(key, ...)
        if deg is ...:
            deg = allowed_cache[key] = shape.degree(x, y)
        if deg is None:
            return False
        a, b = deg
        if b < 0:
            total = sum(e for _, e in m)
            if total != a:
                return False
        else:
            du = sum(e for v, e in m if shape.degrees[v].dw == -2)
            dz = sum(e for v, e in m if shape.degrees[v].dz == -2)
            if du != a or dz != b:
                return False
            total = a + b
        if degree is not None and total > degree:
            return False
        return shape.alex_ok(x, y, m)

    def add_unknown(x: int, y: int, m) -> None:
        key = (x, y, m)
        if key in uindex or not allowed(x, y, m):
            return
        if len(unknowns) >= max_unknowns:
            raise SizeCapExceeded(f"homotopy search exceeded {max_unknowns} unknowns")
        u = uindex[key] = len(unknowns)
        unknowns.append(key)
        # (dH + Hd) picks up H(x->y) along d out of y and along d into x
        touched = [(x, z, mono_mul(m, t)) for z, q in dT[y].items() for t in q.terms]
        touched += [(xp, y, mono_mul(t, m)) for xp, p in into_S[x] for t in p.terms]
        for k in touched:
            row = eqs.get(k)
            if row is None:
                eqs[k] = {u}
                if k not in explored:
                    pending.append(k)
            elif u in row:
                row.remove(u)
            else:
                row.add(u)

    into_S: list[list[tuple[int, Poly]]] = [[] for _ in range(S.n)]
    for xp, col in enumerate(dS):
        for x, p in col.items():
            into_S[x].append((xp, p))

    while pending:
        k = pending.pop()
        if k in explored:
            continue
        explored.add(k)
        a, b, M = k
        # H(a->y) then d: needs y with b in dT(y)
        for y, t in into_T[b]:
            m = mono_quotient(M, t)
            if m is not None:
                add_unknown(a, y, m)
        # d then H(x->b): needs x in dS(a)
        for x, p in dS[a].items():
            for t in p.terms:
                m = mono_quotient(M, t)
                if m is not None:
                    add_unknown(x, b, m)

    report = {
        "degree_bound": bound,
        "degree_used": bound if degree is None else degree,
        "unknowns": len(unknowns),
        "equations": len(set(eqs) | rhs),
    }
    orphan = [k for k in rhs if not eqs.get(k)]
    if orphan:
        report.update(blocks=0, rank=None, obstruction="right-hand side has terms no homotopy can reach",
                      seconds=round(time.perf_counter() - t0, 3))
        return HomotopyResult(False, None, report)

    dsu = _DSU(len(unknowns))
    for row in eqs.values():
        it = iter(row)
        first = next(it, None)
        if first is None:
            continue
        for u in it:
            dsu.union(first, u)
    blocks: dict[int, list[tuple]] = {}
    for key, row in eqs.items():
        if row:
            blocks.setdefault(dsu.find(next(iter(row))), []).append(key)
    solution: set[int] = set()
    total_rank = 0
    for keys in blocks.values():
        if not any(k in rhs for k in keys):
            continue
        local: dict[int, int] = {}
        rows = []
        bits = []
        for k in keys:
            r = 0
            for u in eqs[k]:
                i = local.get(u)
                if i is None:
                    i = local[u] = len(local)
                r |= 1 << i
            rows.append(r)
            bits.append(1 if k in rhs else 0)
        sol, rep = gf2.solve(rows, bits, len(local))
        total_rank += rep["rank"]
        if sol is None:
            report.update(blocks=len(blocks), rank=total_rank, obstruction=rep,
                          seconds=round(time.perf_counter() - t0, 3))
            return HomotopyResult(False, None, report)
        glob = {i: u for u, i in local.items()}
        i = 0
        while sol:
            if sol & 1:
                solution.add(glob[i])
            sol >>= 1
            i += 1
    cols: list[dict[int, set]] = [{} for _ in range(S.n)]
    for u in solution:
        x, y, m = unknowns[u]
        cols[x].setdefault(y, set()).add(m)
    Hcols = [{y: Poly(frozenset(ms)) for y, ms in col.items()} for col in cols]
    H = ChainMap(S, T, Hcols, shape.shift, True, f"H[{F.name}~{G.name}]", ref.alex_shift)
    if not verify_homotopy(F, G, H):
        raise AssertionError("solver produced a homotopy that fails re-verification")
    report.update(blocks=len(blocks), rank=total_rank, homotopy_terms=sum(len(c) for c in Hcols),
                  seconds=round(time.perf_counter() - t0, 3))
    return HomotopyResult(True, H, report)


def verify_homotopy(F: ChainMap, G: ChainMap, H: ChainMap) -> bool:
    """Check dH + Hd = F + G exactly."""
    lhs = mat_add(mat_mul(H.target.ring_diff, H.cols), mat_mul(H.cols, H.source.ring_diff))
    return mat_equal(_nz(lhs), _nz(mat_add(F.cols, G.cols)))


def _nz(A):
    return [{y: p for y, p in col.items() if p} for col in A]


def homotopic(F: ChainMap, G: ChainMap, degree: int | None = None) -> bool:
    return solve_homotopy(F, G, degree).found

