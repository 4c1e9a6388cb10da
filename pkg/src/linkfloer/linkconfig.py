"""Multibased links as cyclic basepoint sequences, colorings and arcs."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    AlternationViolation,
    ColorMismatch,
    ColoringViolation,
    InvalidArc,
    NotFound,
)
from .ring import U, V, C, Var

W_KIND = "w"
Z_KIND = "z"


class Basepoint(NamedTuple):
    id: str
    kind: str
    component: str


class Arc(NamedTuple):
    """Oriented interval on a component from w-basepoint ``start`` to ``end``.

    ``start is None`` marks the whole component.
    """

    component: str
    start: str | None = None
    end: str | None = None

    @property
    def whole(self) -> bool:
        return self.start is None


@dataclass(frozen=True)
class LinkConfig:
    """Components mapped to their cyclic basepoint sequence (orientation order)."""

    components: Mapping[str, tuple[str, ...]]
    kinds: Mapping[str, str]

    def __post_init__(self):
        seen: set[str] = set()
        for comp, seq in self.components.items():
            if len(seq) < 2 or len(seq) % 2:
                raise AlternationViolation(f"component {comp} needs an even number >= 2 of basepoints")
            for i, b in enumerate(seq):
                if b in seen:
                    raise AlternationViolation(f"basepoint {b} repeated")
                seen.add(b)
                if self.kinds.get(b) not in (W_KIND, Z_KIND):
                    raise AlternationViolation(f"basepoint {b} has no kind")
                if self.kinds[b] == self.kinds[seq[(i + 1) % len(seq)]]:
                    raise AlternationViolation(f"component {comp} does not alternate at {b}")
        if set(self.kinds) != seen:
            raise AlternationViolation("kind map mentions basepoints outside the components")
        index = {}
        for comp, seq in self.components.items():
            for i, b in enumerate(seq):
                index[b] = (comp, i)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_sequences(cls, comps: Mapping[str, list[str]] | Mapping[str, tuple[str, ...]],
                       kinds: Mapping[str, str] | None = None) -> "LinkConfig":
        """Build from id sequences; kinds default to the first letter of each id."""
        comps = {k: tuple(v) for k, v in comps.items()}
        if kinds is None:
            kinds = {b: b[0] for seq in comps.values() for b in seq}
        return cls(comps, dict(kinds))

    # -- queries -------------------------------------------------------------

    def basepoint(self, b: str) -> Basepoint:
        try:
            comp, _ = self._index[b]
        except KeyError:
            raise NotFound(f"no basepoint {b}") from None
        return Basepoint(b, self.kinds[b], comp)

    def component_of(self, b: str) -> str:
        return self.basepoint(b).component

    def kind(self, b: str) -> str:
        return self.basepoint(b).kind

    def all_basepoints(self) -> list[str]:
        return [b for seq in self.components.values() for b in seq]

    def w_basepoints(self, comp: str | None = None) -> list[str]:
        return [b for b in self._iter(comp) if self.kinds[b] == W_KIND]

    def z_basepoints(self, comp: str | None = None) -> list[str]:
        return [b for b in self._iter(comp) if self.kinds[b] == Z_KIND]

    def _iter(self, comp):
        if comp is None:
            return self.all_basepoints()
        return self.ordered(comp)

    def ordered(self, comp: str) -> tuple[str, ...]:
        """The component's sequence rotated to start at its first z."""
        seq = self.components[comp]
        if self.kinds[seq[0]] == Z_KIND:
            return seq
        return seq[1:] + seq[:1]

    def pairs(self, comp: str) -> list[tuple[str, str]]:
        seq = self.ordered(comp)
        return [(seq[i], seq[i + 1]) for i in range(0, len(seq), 2)]

    def n_pairs(self, comp: str) -> int:
        return len(self.components[comp]) // 2

    def next_of(self, b: str) -> str:
        comp, i = self._locate(b)
        seq = self.components[comp]
        return seq[(i + 1) % len(seq)]

    def prev_of(self, b: str) -> str:
        comp, i = self._locate(b)
        seq = self.components[comp]
        return seq[(i - 1) % len(seq)]

    def _locate(self, b: str) -> tuple[str, int]:
        try:
            return self._index[b]
        except KeyError:
            raise NotFound(f"no basepoint {b}") from None

    def adjacent_w_of_z(self, z: str) -> tuple[str, str]:
        if self.kind(z) != Z_KIND:
            raise NotFound(f"{z} is not a z-basepoint")
        return self.prev_of(z), self.next_of(z)

    def adjacent_z_of_w(self, w: str) -> tuple[str, str]:
        if self.kind(w) != W_KIND:
            raise NotFound(f"{w} is not a w-basepoint")
        return self.prev_of(w), self.next_of(w)

    def adjacency_pairs(self) -> list[tuple[str, str]]:
        """Every cyclically adjacent (w, z) pair, each listed once per adjacency."""
        out = []
        for seq in self.components.values():
            n = len(seq)
            for i, b in enumerate(seq):
                c = seq[(i + 1) % n]
                out.append((b, c) if self.kinds[b] == W_KIND else (c, b))
        return out

    def are_adjacent(self, w: str, z: str) -> bool:
        return self.component_of(w) == self.component_of(z) and z in self.adjacent_z_of_w(w)

    # -- arcs ----------------------------------------------------------------

    def arc_z_basepoints(self, arc: Arc) -> list[str]:
        if arc.component not in self.components:
            raise InvalidArc(f"no component {arc.component}")
        if arc.whole:
            return self.z_basepoints(arc.component)
        for e in (arc.start, arc.end):
            if e is None or e not in self._index or self.component_of(e) != arc.component \
                    or self.kinds[e] != W_KIND:
                raise InvalidArc(f"arc endpoint {e} is not a w-basepoint on {arc.component}")
        if arc.start == arc.end:
            raise InvalidArc("arc endpoints coincide; use the whole component")
        out = []
        b = self.next_of(arc.start)
        while b != arc.end:
            if self.kinds[b] == Z_KIND:
                out.append(b)
            b = self.next_of(b)
        return out

    @staticmethod
    def complement(arc: Arc) -> Arc:
        if arc.whole:
            raise InvalidArc("the whole component has no complementary arc")
        return Arc(arc.component, arc.end, arc.start)

    # -- editing -------------------------------------------------------------

    def insert_pair(self, component: str | None, after: str, z_new: str | None = None,
                    w_new: str | None = None) -> tuple["LinkConfig", str, str]:
        """Insert a new (z, w) pair immediately after the w-basepoint ``after``."""
        comp, i = self._locate(after)
        if component is not None and component != comp:
            raise NotFound(f"{after} is not on component {component}")
        if self.kinds[after] != W_KIND:
            raise AlternationViolation(f"insertion after {after} (a z-basepoint) breaks alternation")
        z_new = z_new or self.fresh_name(Z_KIND)
        w_new = w_new or self.fresh_name(W_KIND)
        for b in (z_new, w_new):
            if b in self._index:
                raise AlternationViolation(f"basepoint {b} already exists")
        seq = self.components[comp]
        new_seq = seq[: i + 1] + (z_new, w_new) + seq[i + 1:]
        comps = dict(self.components)
        comps[comp] = new_seq
        kinds = dict(self.kinds)
        kinds[z_new] = Z_KIND
        kinds[w_new] = W_KIND
        return LinkConfig(comps, kinds), z_new, w_new

    def fresh_name(self, kind: str) -> str:
        k = 0
        while f"{kind}n{k}" in self._index:
            k += 1
        return f"{kind}n{k}"

    def to_json(self) -> dict:
        return {
            "components": {
                comp: [{"id": b, "kind": self.kinds[b]} for b in seq]
                for comp, seq in self.components.items()
            }
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinkConfig":
        comps = {}
        kinds = {}
        for comp, seq in data["components"].items():
            comps[comp] = tuple(b["id"] for b in seq)
            kinds.update({b["id"]: b["kind"] for b in seq})
        return cls(comps, kinds)


def adjacent_w_of_z(cfg: LinkConfig, z: str) -> tuple[str, str]:
    return cfg.adjacent_w_of_z(z)


def arc_z_basepoints(cfg: LinkConfig, arc: Arc) -> list[str]:
    return cfg.arc_z_basepoints(arc)


def insert_pair(cfg: LinkConfig, component: str | None, after: str,
                z_new: str | None = None, w_new: str | None = None):
    return cfg.insert_pair(component, after, z_new, w_new)


@dataclass(frozen=True)
class Coloring:
    """Color map sigma on basepoints; ``palette`` is the set of colors used."""

    sigma: Mapping[str, str]
    palette: frozenset = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "sigma", dict(self.sigma))
        object.__setattr__(self, "palette", frozenset(self.palette) | frozenset(self.sigma.values()))

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.sigma.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coloring) and self.sigma == other.sigma

    def validate(self, cfg: LinkConfig) -> None:
        missing = [b for b in cfg.all_basepoints() if b not in self.sigma]
        if missing:
            raise ColoringViolation(f"uncolored basepoints: {missing}")
        for comp in cfg.components:
            zc = {self.sigma[z] for z in cfg.z_basepoints(comp)}
            if len(zc) != 1:
                raise ColoringViolation(f"z-basepoints of {comp} carry distinct colors {sorted(zc)}")

    def color(self, b: str) -> str:
        return self.sigma[b]

    def variable_map(self) -> dict[Var, Var]:
        out: dict[Var, Var] = {}
        for b, c in self.sigma.items():
            out[U(b)] = C(c)
            out[V(b)] = C(c)
        return out

    def color_kinds(self, cfg: LinkConfig) -> dict[str, set[str]]:
        """For each color, which basepoint kinds map to it."""
        out: dict[str, set[str]] = {}
        for b in cfg.all_basepoints():
            out.setdefault(self.sigma[b], set()).add(cfg.kinds[b])
        return out

    def is_pure(self, cfg: LinkConfig) -> bool:
        """True when no color receives both w- and z-basepoints."""
        return all(len(k) == 1 for k in self.color_kinds(cfg).values())

    def extend(self, assignments: Mapping[str, str]) -> "Coloring":
        sigma = dict(self.sigma)
        sigma.update(assignments)
        return Coloring(sigma)

    def require_same(self, a: str, b: str) -> None:
        if self.sigma[a] != self.sigma[b]:
            raise ColorMismatch(f"{a} and {b} have different colors")

    def to_json(self) -> dict:
        return dict(sorted(self.sigma.items()))

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "Coloring":
        return cls(dict(data))

    @classmethod
    def trivial(cls, cfg: LinkConfig) -> "Coloring":
        """Each w its own color; the z's of a component share the component's color."""
        sigma = {}
        for comp in cfg.components:
            if comp in cfg.kinds:
                raise ColoringViolation(f"component name {comp} clashes with a basepoint")
            for b in cfg.components[comp]:
                sigma[b] = b if cfg.kinds[b] == W_KIND else comp
        return cls(sigma)

    @classmethod
    def merge_w(cls, cfg: LinkConfig, comp: str) -> "Coloring":
        """Trivial coloring except that every w on ``comp`` shares one color."""
        base = cls.trivial(cfg)
        return base.extend({w: f"{comp}w" for w in cfg.w_basepoints(comp)})
