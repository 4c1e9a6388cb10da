"""Free chain complexes over F2 polynomial rings, and maps between them.

Matrices are stored column-wise: ``cols[x]`` maps a target generator index
to the polynomial coefficient, so ``F(x) = sum(cols[x][y] * y)``.

Grading convention: a U-variable has degree (-2, 0), a V-variable (0, -2),
and the differential lowers both gradings by one.  An entry ``x -> m*y`` of
a map with shift ``s`` therefore satisfies ``gr(y) + deg(m) = gr(x) + s``.
Alexander gradings are stored doubled, one per component; the doubled
Alexander change of a variable on component K is ``deg_w - deg_z``.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import NamedTuple

from . import gf2
from .errors import (
    ColoringViolation,
    DifferentialNotSquareZero,
    FiltrationViolation,
    GradingViolation,
    NotScalar,
    ShapeMismatch,
)
from .linkconfig import W_KIND, Coloring, LinkConfig
from .ring import (
    COLOR_KIND,
    ONE,
    ONE_MONO,
    ZERO,
    Poly,
    U,
    V,
    Var,
    mono_mul,
)

# When set, every constructed complex and map is checked against the grading law.
STRICT_GRADING = False

Matrix = list  # list[dict[int, Poly]]


class Grading(NamedTuple):
    gr_w: int
    gr_z: int
    alexander: tuple = ()  # sorted ((component, doubled Alexander), ...)

    def alex(self, comp: str) -> int:
        for c, a in self.alexander:
            if c == comp:
                return a
        return 0

    def shifted(self, dw: int, dz: int, comp: str | None = None) -> "Grading":
        """Shift gr_w, gr_z; the doubled Alexander of ``comp`` moves by ``dw - dz``."""
        alex = self.alexander
        if comp is not None and dw != dz:
            d = dict(alex)
            d[comp] = d.get(comp, 0) + dw - dz
            alex = tuple(sorted(d.items()))
        return Grading(self.gr_w + dw, self.gr_z + dz, alex)

    def to_json(self) -> dict:
        return {"gr_w": self.gr_w, "gr_z": self.gr_z, "alexander": dict(self.alexander)}

    @classmethod
    def from_json(cls, d: Mapping) -> "Grading":
        return cls(int(d["gr_w"]), int(d["gr_z"]), tuple(sorted((k, int(v)) for k, v in d.get("alexander", {}).items())))


class VarDegree(NamedTuple):
    dw: int | None  # None for a color shared by w- and z-basepoints
    dz: int | None
    comp: str | None


# -- sparse matrix kernels ---------------------------------------------------


def _toggle(acc: set, m) -> None:
    if m in acc:
        acc.remove(m)
    else:
        acc.add(m)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    """Column-wise product ``A o B`` (apply B first)."""
    out = []
    for col in B:
        acc: dict[int, set] = {}
        for y, p in col.items():
            for z, q in A[y].items():
                s = acc.get(z)
                if s is None:
                    s = acc[z] = set()
                pt, qt = p.terms, q.terms
                if len(qt) == 1 and ONE_MONO in qt:
                    for a in pt:
                        _toggle(s, a)
                    continue
                for a in pt:
                    for b in qt:
                        _toggle(s, mono_mul(a, b))
        out.append({z: Poly(frozenset(s)) for z, s in acc.items() if s})
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    out = []
    for a, b in zip(A, B):
        col = dict(a)
        for y, p in b.items():
            q = col.get(y)
            r = p if q is None else q + p
            if r:
                col[y] = r
            else:
                col.pop(y, None)
        out.append(col)
    return out


def mat_identity(n: int) -> Matrix:
    return [{i: ONE} for i in range(n)]


def mat_zero(n: int) -> Matrix:
    return [{} for _ in range(n)]


def mat_scale(A: Matrix, p: Poly) -> Matrix:
    if not p:
        return mat_zero(len(A))
    return [{y: q * p for y, q in col.items() if q * p} for col in A]


def mat_substitute(A: Matrix, mapping: Mapping[Var, Var]) -> Matrix:
    out = []
    for col in A:
        new = {}
        for y, p in col.items():
            q = p.substitute(mapping)
            if q:
                new[y] = q
        out.append(new)
    return out


def mat_is_zero(A: Matrix) -> bool:
    return all(not col for col in A)


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(a == b for a, b in zip(A, B))


def mat_clean(A: Matrix) -> Matrix:
    return [{y: p for y, p in col.items() if p} for col in A]


# -- complexes ---------------------------------------------------------------


class ChainComplex:
    """Free complex with an uncolored differential and an optional coloring.

    The uncolored differential is always retained: basepoint maps are formal
    derivatives of it, taken before any coloring is applied.
    """

    def __init__(
        self,
        labels: Sequence[str],
        gradings: Sequence[Grading],
        cfg: LinkConfig,
        diff: Matrix,
        coloring: Coloring | None = None,
        stabs: tuple = (),
        name: str = "",
    ):
        if len(labels) != len(gradings) or len(labels) != len(diff):
            raise ShapeMismatch("labels, gradings and differential disagree in size")
        self.labels = tuple(labels)
        self.gradings = tuple(gradings)
        self.cfg = cfg
        self.diff = mat_clean(diff)
        self.coloring = coloring
        self.stabs = tuple(stabs)
        self.name = name
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ShapeMismatch("duplicate generator labels")
        self._colored = None
        if coloring is not None:
            coloring.validate(cfg)
        self._uvdeg = _uncolored_degrees(cfg)
        self._cdeg = _colored_degrees(cfg, coloring) if coloring is not None else None
        if STRICT_GRADING:
            self.check_grading()

    def check_grading(self) -> None:
        """Raise GradingViolation unless the uncolored differential obeys the grading law."""
        check_entries(self.diff, self.gradings, self.gradings, (-1, -1), self._uvdeg, alexander=True)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    @property
    def colored(self) -> bool:
        return self.coloring is not None

    @property
    def colored_diff(self) -> Matrix:
        if self.coloring is None:
            raise ColoringViolation("complex has no coloring")
        if self._colored is None:
            self._colored = mat_substitute(self.diff, self.coloring.variable_map())
        return self._colored

    @property
    def ring_diff(self) -> Matrix:
        """The differential over this complex's working ring (colored if colored)."""
        return self.colored_diff if self.coloring is not None else self.diff

    def var_degrees(self) -> dict[Var, VarDegree]:
        return self._cdeg if self._cdeg is not None else self._uvdeg

    def to_ring(self, p: Poly) -> Poly:
        """Push an uncolored polynomial into the working ring."""
        if self.coloring is None:
            return p
        return p.substitute(self.coloring.variable_map())

    def to_ring_matrix(self, A: Matrix) -> Matrix:
        if self.coloring is None:
            return mat_clean(A)
        return mat_substitute(A, self.coloring.variable_map())

    def with_coloring(self, coloring: Coloring | None) -> "ChainComplex":
        return ChainComplex(self.labels, self.gradings, self.cfg, self.diff, coloring, self.stabs, self.name)

    def same_shape(self, other: "ChainComplex") -> bool:
        return self is other or (self.labels == other.labels and self.coloring == other.coloring
                                 and self.cfg == other.cfg)

    def to_json(self) -> dict:
        gens = [{"id": lab, **g.to_json()} for lab, g in zip(self.labels, self.gradings)]
        diff = [
            {"from": self.labels[x], "to": self.labels[y], "poly": p.to_json()}
            for x, col in enumerate(self.diff)
            for y, p in sorted(col.items())
        ]
        out = {"name": self.name, "link": self.cfg.to_json(), "generators": gens, "diff": diff}
        if self.coloring is not None:
            out["coloring"] = self.coloring.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "ChainComplex":
        cfg = LinkConfig.from_json(data["link"])
        labels = [g["id"] for g in data["generators"]]
        grads = [Grading.from_json(g) for g in data["generators"]]
        index = {lab: i for i, lab in enumerate(labels)}
        diff: Matrix = [{} for _ in labels]
        for e in data["diff"]:
            x, y = index[e["from"]], index[e["to"]]
            diff[x][y] = diff[x].get(y, ZERO) + Poly.from_json(e["poly"])
        coloring = Coloring.from_json(data["coloring"]) if data.get("coloring") else None
        return cls(labels, grads, cfg, diff, coloring, name=data.get("name", ""))

    def __repr__(self) -> str:
        tag = "colored" if self.colored else "uncolored"
        return f"ChainComplex({self.name or '?'}, {self.n} generators, {tag})"


def _uncolored_degrees(cfg: LinkConfig) -> dict[Var, VarDegree]:
    out = {}
    for b in cfg.all_basepoints():
        comp = cfg.component_of(b)
        if cfg.kinds[b] == W_KIND:
            out[U(b)] = VarDegree(-2, 0, comp)
        else:
            out[V(b)] = VarDegree(0, -2, comp)
    return out


def _colored_degrees(cfg: LinkConfig, coloring: Coloring) -> dict[Var, VarDegree]:
    kinds: dict[str, set] = {}
    comps: dict[str, set] = {}
    for b in cfg.all_basepoints():
        c = coloring.sigma[b]
        kinds.setdefault(c, set()).add(cfg.kinds[b])
        comps.setdefault(c, set()).add(cfg.component_of(b))
    out = {}
    for c, ks in kinds.items():
        comp = next(iter(comps[c])) if len(comps[c]) == 1 else None
        if ks == {W_KIND}:
            out[Var(COLOR_KIND, c)] = VarDegree(-2, 0, comp)
        elif len(ks) == 1:
            out[Var(COLOR_KIND, c)] = VarDegree(0, -2, comp)
        else:
            out[Var(COLOR_KIND, c)] = VarDegree(None, None, comp)
    return out


def monomial_degree(m, degrees: Mapping[Var, VarDegree]) -> tuple[int | None, int | None, int, dict]:
    """(deg_w, deg_z, summed degree, doubled Alexander change per component)."""
    dw = dz = 0
    total = 0
    alex: dict = {}
    mixed = False
    for v, e in m:
        d = degrees.get(v)
        if d is None:
            raise GradingViolation(f"variable {v} is not in this ring")
        total -= 2 * e
        if d.dw is None:
            mixed = True
            continue
        dw += d.dw * e
        dz += d.dz * e
        if d.comp is not None:
            alex[d.comp] = alex.get(d.comp, 0) + (d.dw - d.dz) * e
    if mixed:
        return None, None, total, alex
    return dw, dz, total, alex


def check_entries(
    cols: Matrix,
    src: Sequence[Grading],
    tgt: Sequence[Grading],
    shift: tuple[int, int],
    degrees: Mapping[Var, VarDegree],
    alexander: bool = False,
    alex_shift: Mapping[str, int] | None = None,
) -> None:
    """Raise GradingViolation unless every entry obeys the grading law."""
    sw, sz = shift
    for x, col in enumerate(cols):
        gx = src[x]
        for y, p in col.items():
            gy = tgt[y]
            for m in p.terms:
                dw, dz, total, alex = monomial_degree(m, degrees)
                if dw is None:
                    if gy.gr_w + gy.gr_z + total != gx.gr_w + gx.gr_z + sw + sz:
                        raise GradingViolation(f"entry {x}->{y} term {m} breaks the summed grading")
                    continue
                if gy.gr_w + dw != gx.gr_w + sw or gy.gr_z + dz != gx.gr_z + sz:
                    raise GradingViolation(
                        f"entry {x}->{y} term {m}: gr {gx[:2]} -> {gy[:2]} with degree {(dw, dz)}, shift {shift}")
                if alexander:
                    comps = set(dict(gx.alexander)) | set(dict(gy.alexander)) | set(alex)
                    for c in comps:
                        want = gx.alex(c) + (alex_shift or {}).get(c, 0)
                        if gy.alex(c) + alex.get(c, 0) != want:
                            raise GradingViolation(f"entry {x}->{y} term {m} breaks the Alexander grading of {c}")


class ChainMap:
    """Sparse matrix between complexes, with a declared (gr_w, gr_z) shift.

    Entries live in the working ring of the complexes (colored when the
    source is colored).
    """

    def __init__(
        self,
        source: ChainComplex,
        target: ChainComplex,
        cols: Matrix,
        shift: tuple[int, int] = (0, 0),
        filtered: bool = True,
        name: str = "",
        alex_shift: Mapping[str, int] | None = None,
    ):
        if len(cols) != source.n:
            raise ShapeMismatch("matrix width differs from source size")
        if any(y >= target.n or y < 0 for col in cols for y in col):
            raise ShapeMismatch("matrix entry outside target")
        self.source = source
        self.target = target
        self.cols = mat_clean(cols)
        self.shift = (int(shift[0]), int(shift[1]))
        self.name = name
        self.alex_shift = {k: v for k, v in (alex_shift or {}).items() if v}
        self.filtered = filtered
        if filtered:
            check_filtered(self.cols)
        if STRICT_GRADING:
            self.check_grading()

    def check_grading(self) -> None:
        check_entries(self.cols, self.source.gradings, self.target.gradings, self.shift,
                      self.target.var_degrees(), alexander=True, alex_shift=self.alex_shift)

    def __call__(self, label: str) -> dict[str, Poly]:
        col = self.cols[self.source.index(label)]
        return {self.target.labels[y]: p for y, p in sorted(col.items())}

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return compose(self, other)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return add(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source.n == other.source.n and self.target.n == other.target.n \
            and mat_equal(self.cols, other.cols)

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return mat_is_zero(self.cols)

    def renamed(self, name: str) -> "ChainMap":
        return ChainMap(self.source, self.target, self.cols, self.shift, self.filtered, name, self.alex_shift)

    def nonzero_entries(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "shift": list(self.shift),
            "filtered": self.filtered,
            "alex_shift": dict(sorted(self.alex_shift.items())),
            "entries": [
                {"from": self.source.labels[x], "to": self.target.labels[y], "poly": p.to_json()}
                for x, col in enumerate(self.cols)
                for y, p in sorted(col.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        cols: Matrix = [{} for _ in range(source.n)]
        for e in data["entries"]:
            x, y = source.index(e["from"]), target.index(e["to"])
            cols[x][y] = cols[x].get(y, ZERO) + Poly.from_json(e["poly"])
        return cls(source, target, cols, tuple(data.get("shift", (0, 0))), data.get("filtered", True),
                   data.get("name", ""), {k: int(v) for k, v in data.get("alex_shift", {}).items()})

    def __repr__(self) -> str:
        return f"ChainMap({self.name or '?'}: {self.source.n} -> {self.target.n}, shift {self.shift})"


def check_filtered(cols: Matrix) -> None:
    for col in cols:
        for p in col.values():
            for m in p.terms:
                if any(e < 0 for _, e in m):
                    raise FiltrationViolation("negative exponent in a filtered map")


def _merge_alex(a: Mapping[str, int], b: Mapping[str, int]) -> dict[str, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


def compose(F: ChainMap, G: ChainMap) -> ChainMap:
    """``F o G``: apply G, then F."""
    if not G.target.same_shape(F.source):
        raise ShapeMismatch(f"cannot compose {F!r} after {G!r}")
    return ChainMap(
        G.source, F.target, mat_mul(F.cols, G.cols),
        (F.shift[0] + G.shift[0], F.shift[1] + G.shift[1]),
        F.filtered and G.filtered,
        f"{F.name}*{G.name}" if F.name and G.name else "",
        _merge_alex(F.alex_shift, G.alex_shift),
    )


def compose_all(maps: Sequence[ChainMap]) -> ChainMap:
    """Compose as written: ``maps[0] o maps[1] o ... o maps[-1]``."""
    out = maps[-1]
    for F in reversed(maps[:-1]):
        out = compose(F, out)
    return out


def add(F: ChainMap, G: ChainMap) -> ChainMap:
    if not (F.source.same_shape(G.source) and F.target.same_shape(G.target)):
        raise ShapeMismatch("maps have different source or target")
    if F.shift != G.shift and not (F.is_zero() or G.is_zero()):
        raise ShapeMismatch(f"cannot add maps with shifts {F.shift} and {G.shift}")
    shift, alex = (F.shift, F.alex_shift) if not F.is_zero() or G.is_zero() else (G.shift, G.alex_shift)
    return ChainMap(F.source, F.target, mat_add(F.cols, G.cols), shift, F.filtered and G.filtered,
                    f"{F.name}+{G.name}" if F.name and G.name else "", alex)


def add_all(maps: Sequence[ChainMap]) -> ChainMap:
    out = maps[0]
    for F in maps[1:]:
        out = add(out, F)
    return out


def identity(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, mat_identity(C.n), (0, 0), True, "1")


def zero_map(S: ChainComplex, T: ChainComplex, shift=(0, 0), alex_shift=None) -> ChainMap:
    return ChainMap(S, T, mat_zero(S.n), shift, True, "0", alex_shift)


def scalar_map(C: ChainComplex, p: Poly, name: str = "") -> ChainMap:
    """Multiplication by a ring element of degree zero (a constant)."""
    return ChainMap(C, C, mat_scale(mat_identity(C.n), p), (0, 0), True, name or str(p))


def differential_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, C.ring_diff, (-1, -1), True, "d")


class ChainCheck(NamedTuple):
    ok: bool
    defect: ChainMap


def is_chain_map(F: ChainMap) -> ChainCheck:
    """Return ``dF + Fd`` and whether it vanishes."""
    dT = F.target.ring_diff
    dS = F.source.ring_diff
    D = mat_add(mat_mul(dT, F.cols), mat_mul(F.cols, dS))
    defect = ChainMap(F.source, F.target, D, (F.shift[0] - 1, F.shift[1] - 1), F.filtered,
                      f"[d,{F.name}]", F.alex_shift)
    return ChainCheck(mat_is_zero(D), defect)


# -- the square of the differential ------------------------------------------


def expected_defect(cfg: LinkConfig) -> Poly:
    """Sum of U_w V_z over every cyclically adjacent (w, z) pair."""
    out = ZERO
    for w, z in cfg.adjacency_pairs():
        out = out + Poly.var(U(w)) * Poly.var(V(z))
    return out


def d_squared_defect(C: ChainComplex) -> Poly:
    """The scalar c with d^2 = c * id on the uncolored differential."""
    sq = mat_mul(C.diff, C.diff)
    scalar = None
    for x, col in enumerate(sq):
        if any(y != x for y in col):
            raise NotScalar(f"d^2 has an off-diagonal entry in column {C.labels[x]}")
        c = col.get(x, ZERO)
        if scalar is None:
            scalar = c
        elif c != scalar:
            raise NotScalar("d^2 is diagonal but not scalar")
    return scalar if scalar is not None else ZERO


def apply_coloring(C: ChainComplex, coloring: Coloring, check: bool = True) -> ChainComplex:
    coloring.validate(C.cfg)
    out = C.with_coloring(coloring)
    if check and not mat_is_zero(mat_mul(out.colored_diff, out.colored_diff)):
        raise DifferentialNotSquareZero("colored differential does not square to zero")
    return out


def square_is_zero(C: ChainComplex) -> bool:
    d = C.ring_diff
    return mat_is_zero(mat_mul(d, d))


# -- Alexander classes ---------------------------------------------------------


def alexander_class(C: ChainComplex, x: int, m) -> tuple:
    """Doubled per-component Alexander class of the element ``m * x``."""
    _, _, _, alex = monomial_degree(m, C.var_degrees())
    d = dict(C.gradings[x].alexander)
    for k, v in alex.items():
        d[k] = d.get(k, 0) + v
    return tuple(sorted(d.items()))


def check_alexander_classes(C: ChainComplex) -> bool:
    """Every term of d(x) lies in the Alexander class of x."""
    for x, col in enumerate(C.ring_diff):
        cx = _nonzero(alexander_class(C, x, ONE_MONO))
        for y, p in col.items():
            for m in p.terms:
                if _nonzero(alexander_class(C, y, m)) != cx:
                    return False
    return True


def _nonzero(pairs: tuple) -> dict:
    return {k: v for k, v in pairs if v}


# -- tilde flavor ------------------------------------------------------------


def set_variables_to_zero(C: ChainComplex) -> list[set[int]]:
    """The F2 differential obtained by setting every ring variable to zero."""
    d = C.ring_diff
    out = [{y for y, p in col.items() if p.constant_term()} for col in d]
    for x, col in enumerate(out):
        acc: set = set()
        for y in col:
            acc ^= out[y]
        if acc:
            raise DifferentialNotSquareZero(f"tilde differential squares to nonzero at {C.labels[x]}")
    return out


def f2_homology_ranks(C: ChainComplex) -> dict[tuple, int]:
    """Ranks of the tilde homology keyed by ``(gr_w, alexander)``."""
    dt = set_variables_to_zero(C)
    groups: dict[tuple, list[int]] = {}
    for x, g in enumerate(C.gradings):
        groups.setdefault((g.gr_w, g.alexander), []).append(x)
    pos = {}
    for key, xs in groups.items():
        for i, x in enumerate(xs):
            pos[x] = i
    out_rank: dict[tuple, int] = {}
    for key, xs in groups.items():
        rows = []
        for x in xs:
            r = 0
            for y in dt[x]:
                gy = C.gradings[y]
                if (gy.gr_w, gy.alexander) != (key[0] - 1, key[1]):
                    raise GradingViolation("tilde differential does not preserve Alexander grading")
                r |= 1 << pos[y]
            rows.append(r)
        out_rank[key] = gf2.rank(rows)
    ranks = {}
    for key, xs in groups.items():
        into = out_rank.get((key[0] + 1, key[1]), 0)
        h = len(xs) - out_rank[key] - into
        if h:
            ranks[key] = h
    return dict(sorted(ranks.items()))


def total_alexander(alexander: tuple) -> int:
    return sum(a for _, a in alexander)


def euler_characteristic(ranks: Mapping[tuple, int]) -> dict[int, int]:
    """Graded Euler characteristic keyed by doubled total Alexander grading."""
    out: dict[int, int] = {}
    for (m, alex), r in ranks.items():
        a = total_alexander(alex)
        out[a] = out.get(a, 0) + (-1) ** (m % 2) * r
    return {k: v for k, v in sorted(out.items()) if v}
