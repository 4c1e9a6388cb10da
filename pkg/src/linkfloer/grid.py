"""Grid diagrams and their full (uncolored) link complexes.

A grid of size n stores, for each row r, the column ``O[r]`` of its O marker
(a w-basepoint) and the column ``X[r]`` of its X marker (a z-basepoint).  A
generator is a permutation ``x`` with ``x[r]`` the column of its point on
the horizontal line at height r.  Points sit at lattice corners, markers in
the middle of squares.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .complex import ChainComplex, Grading, Matrix
from .errors import MarkerCollision, NotAPermutation, SizeCapExceeded
from .linkconfig import W_KIND, Z_KIND, LinkConfig
from .ring import Poly, U, V

DEFAULT_CAP = 7


@dataclass(frozen=True)
class GridDiagram:
    O: tuple[int, ...]
    X: tuple[int, ...]

    def __post_init__(self):
        n = len(self.O)
        for name, perm in (("O", self.O), ("X", self.X)):
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise NotAPermutation(f"{name} = {list(perm)} is not a permutation of 0..{n - 1}")
        if n >= 2 and any(o == x for o, x in zip(self.O, self.X)):
            raise MarkerCollision("an O and an X share a square")

    @property
    def n(self) -> int:
        return len(self.O)

    def to_json(self) -> dict:
        return {"n": self.n, "O": list(self.O), "X": list(self.X)}

    def text(self) -> str:
        return f"{self.n} / {' '.join(map(str, self.O))} / {' '.join(map(str, self.X))}"


def parse_grid(data) -> GridDiagram:
    """Accept a dict, a JSON string, or the compact text form ``n / O / X``."""
    if isinstance(data, str):
        s = data.strip()
        if s.startswith("{"):
            data = json.loads(s)
        else:
            parts = [p.strip() for p in s.split("/")]
            if len(parts) != 3:
                raise NotAPermutation("compact grid text must be 'n / O-permutation / X-permutation'")
            n = int(parts[0])
            O = [int(t) for t in parts[1].replace(",", " ").split()]
            X = [int(t) for t in parts[2].replace(",", " ").split()]
            data = {"n": n, "O": O, "X": X}
    O, X = tuple(int(v) for v in data["O"]), tuple(int(v) for v in data["X"])
    if "n" in data and (int(data["n"]) != len(O) or int(data["n"]) != len(X)):
        raise NotAPermutation("declared size differs from the permutation lengths")
    return GridDiagram(O, X)


def w_name(r: int) -> str:
    return f"w{r}"


def z_name(r: int) -> str:
    return f"z{r}"


def component_rows(g: GridDiagram) -> list[list[int]]:
    """Rows of each component, in traversal order starting from its lowest row."""
    o_row_of_col = {c: r for r, c in enumerate(g.O)}
    seen: set[int] = set()
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        rows = []
        r = start
        while r not in seen:
            seen.add(r)
            rows.append(r)
            r = o_row_of_col[g.X[r]]
        comps.append(rows)
    return comps


def derive_link_config(g: GridDiagram) -> LinkConfig:
    """Follow rows O->X and columns X->O; name markers w{row} and z{row}."""
    comps = {}
    kinds = {}
    for i, rows in enumerate(component_rows(g)):
        seq = []
        for r in rows:
            seq += [w_name(r), z_name(r)]
            kinds[w_name(r)] = W_KIND
            kinds[z_name(r)] = Z_KIND
        comps[f"K{i}"] = tuple(seq[1:] + seq[:1])
    return LinkConfig(comps, kinds)


def _count_lt(P, Q) -> int:
    return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])


def _sym(P, Q) -> int:
    # twice the symmetrized count J(P, Q)
    return _count_lt(P, Q) + _count_lt(Q, P)


class _GradingData:
    """Marker positions (coordinates doubled) and per-component constants."""

    def __init__(self, g: GridDiagram):
        n = g.n
        self.O = [(2 * g.O[r] + 1, 2 * r + 1) for r in range(n)]
        self.X = [(2 * g.X[r] + 1, 2 * r + 1) for r in range(n)]
        self.const_O = _count_lt(self.O, self.O)
        self.const_X = _count_lt(self.X, self.X)
        self.comps = []
        for i, rows in enumerate(component_rows(g)):
            Oi = [self.O[r] for r in rows]
            Xi = [self.X[r] for r in rows]
            half = Fraction(-_sym(self.X, Xi) + _sym(self.X, Oi) - _sym(self.O, Xi) + _sym(self.O, Oi), 2)
            if half.denominator != 1:
                raise ValueError("Alexander grading constant is not integral")
            self.comps.append((f"K{i}", Oi, Xi, int(half)))

    def grading(self, x: tuple[int, ...]) -> Grading:
        pts = [(2 * c, 2 * r) for r, c in enumerate(x)]
        self_count = _count_lt(pts, pts)
        m_o = self_count - _sym(pts, self.O) + self.const_O + 1
        m_x = self_count - _sym(pts, self.X) + self.const_X + 1
        alex = tuple(sorted((k, _sym(pts, Xi) - _sym(pts, Oi) + c) for k, Oi, Xi, c in self.comps))
        return Grading(m_o, m_x, alex)


def empty_rectangles(g: GridDiagram, x: tuple[int, ...]):
    """Yield ``(y, o_rows, x_rows)`` for every empty rectangle out of ``x``.

    The rectangle has lower-left corner on row r1 and upper-right corner on
    row r2 (both points of x); it covers rows [r1, r2) and columns
    [x[r1], x[r2]) cyclically, and y swaps the two entries.
    """
    n = g.n
    O, X = g.O, g.X
    for r1 in range(n):
        c1 = x[r1]
        for h in range(1, n):
            r2 = (r1 + h) % n
            c2 = x[r2]
            wd = (c2 - c1) % n
            empty = True
            for k in range(1, h):
                if 0 < (x[(r1 + k) % n] - c1) % n < wd:
                    empty = False
                    break
            if not empty:
                continue
            o_rows = []
            x_rows = []
            for k in range(h):
                r = (r1 + k) % n
                if (O[r] - c1) % n < wd:
                    o_rows.append(r)
                if (X[r] - c1) % n < wd:
                    x_rows.append(r)
            y = list(x)
            y[r1], y[r2] = c2, c1
            yield tuple(y), tuple(o_rows), tuple(x_rows)


def _rect_chunk(args):
    g, gens = args
    return [list(empty_rectangles(g, x)) for x in gens]


def build_grid_complex(g: GridDiagram, cap: int = DEFAULT_CAP, jobs: int = 1, name: str = "") -> ChainComplex:
    """Full uncolored complex: one generator per permutation, empty rectangles as differential."""
    if g.n > cap:
        raise SizeCapExceeded(f"grid size {g.n} exceeds cap {cap}")
    cfg = derive_link_config(g)
    gens = list(itertools.permutations(range(g.n)))
    index = {x: i for i, x in enumerate(gens)}
    gd = _GradingData(g)
    gradings = [gd.grading(x) for x in gens]
    if jobs > 1 and len(gens) > 200:
        size = -(-len(gens) // (4 * jobs))
        chunks = [(g, gens[i:i + size]) for i in range(0, len(gens), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rects = [r for part in pool.map(_rect_chunk, chunks) for r in part]
    else:
        rects = [list(empty_rectangles(g, x)) for x in gens]
    mono_cache: dict = {}
    diff: Matrix = []
    for x_rects in rects:
        acc: dict[int, set] = {}
        for y, o_rows, x_rows in x_rects:
            key = (o_rows, x_rows)
            m = mono_cache.get(key)
            if m is None:
                m = tuple(sorted([(U(w_name(r)), 1) for r in o_rows] + [(V(z_name(r)), 1) for r in x_rows]))
                mono_cache[key] = m
            s = acc.setdefault(index[y], set())
            s ^= {m}
        diff.append({y: Poly(frozenset(s)) for y, s in acc.items() if s})
    labels = ["".join(map(str, x)) if g.n <= 10 else ",".join(map(str, x)) for x in gens]
    return ChainComplex(labels, gradings, cfg, diff, name=name or f"grid{g.n}")


def stabilize_grid(g: GridDiagram, row: int) -> GridDiagram:
    """Grid of size n+1 presenting the same link: the X in ``row`` becomes a 2x2 zigzag."""
    n = g.n
    c = g.X[row]

    def col(k: int) -> int:
        return k + 1 if k > c else k

    O: list[int] = []
    X: list[int] = []
    for r in range(n):
        if r == row:
            O.append(col(g.O[r]))
            X.append(c + 1)
            O.append(c + 1)
            X.append(c)
        else:
            O.append(col(g.O[r]))
            X.append(col(g.X[r]))
    return GridDiagram(tuple(O), tuple(X))

