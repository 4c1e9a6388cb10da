"""Polynomials over F2 in basepoint and color variables.

A monomial is a tuple of ``(Var, exponent)`` pairs sorted by variable, with
every exponent positive.  A polynomial is an immutable set of monomials;
addition is symmetric difference.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import NamedTuple

from .errors import UnknownBasepoint

U_KIND = "U"
V_KIND = "V"
COLOR_KIND = "C"
_KINDS = (U_KIND, V_KIND, COLOR_KIND)


class Var(NamedTuple):
    """A ring variable: ``U`` for a w-basepoint, ``V`` for a z-basepoint, ``C`` for a color."""

    kind: str
    name: str

    def __str__(self) -> str:
        return f"{self.kind}_{self.name}"

    @classmethod
    def parse(cls, text: str) -> "Var":
        kind, sep, name = text.partition("_")
        if not sep or kind not in _KINDS or not name:
            raise ValueError(f"bad variable name {text!r}")
        return cls(kind, name)


def U(w: str) -> Var:
    return Var(U_KIND, w)


def V(z: str) -> Var:
    return Var(V_KIND, z)


def C(color: str) -> Var:
    return Var(COLOR_KIND, color)


Monomial = tuple  # tuple[tuple[Var, int], ...]
ONE_MONO: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_divide(m: Monomial, v: Var) -> Monomial | None:
    """Strip one factor of ``v``; ``None`` if ``v`` does not divide ``m``."""
    out = []
    hit = False
    for u, e in m:
        if u == v:
            hit = True
            if e > 1:
                out.append((u, e - 1))
        else:
            out.append((u, e))
    return tuple(out) if hit else None


def mono_quotient(m: Monomial, t: Monomial) -> Monomial | None:
    """m / t, or ``None`` if t does not divide m."""
    if not t:
        return m
    exps = dict(m)
    for v, e in t:
        k = exps.get(v, 0) - e
        if k < 0:
            return None
        if k:
            exps[v] = k
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def mono_exponent(m: Monomial, v: Var) -> int:
    for u, e in m:
        if u == v:
            return e
    return 0


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


class Poly:
    """Immutable polynomial over F2."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[Monomial] = ()):
        if isinstance(terms, frozenset):
            self.terms = terms
        else:
            acc: set = set()
            for m in terms:
                _toggle(acc, m)
            self.terms = frozenset(acc)
        self._hash = None

    @classmethod
    def var(cls, v: Var) -> "Poly":
        return cls(frozenset({((v, 1),)}))

    @classmethod
    def monomial(cls, m: Monomial) -> "Poly":
        return cls(frozenset({m}))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ONE if other % 2 else ZERO
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        return Poly(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return ZERO
        if other.terms == ONE.terms:
            return self
        if self.terms == ONE.terms:
            return other
        acc: set = set()
        for a in self.terms:
            for b in other.terms:
                _toggle(acc, mono_mul(a, b))
        return Poly(frozenset(acc))

    def __pow__(self, k: int) -> "Poly":
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def mul_monomial(self, m: Monomial) -> "Poly":
        if not m:
            return self
        return Poly(frozenset(mono_mul(t, m) for t in self.terms))

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self) -> int:
        return 1 if ONE_MONO in self.terms else 0

    def derivative(self, v: Var) -> "Poly":
        """d/dv with exponent coefficients reduced mod 2."""
        acc: set = set()
        for m in self.terms:
            e = mono_exponent(m, v)
            if e % 2:
                _toggle(acc, mono_divide(m, v))
        return Poly(frozenset(acc))

    def divided_derivative(self, v: Var, k: int = 2) -> "Poly":
        """Hasse derivative: v^e -> binom(e, k) v^(e-k) mod 2."""
        acc: set = set()
        for m in self.terms:
            e = mono_exponent(m, v)
            if e >= k and _binom_odd(e, k):
                r = m
                for _ in range(k):
                    r = mono_divide(r, v)
                _toggle(acc, r)
        return Poly(frozenset(acc))

    def substitute(self, mapping: Mapping[Var, Var]) -> "Poly":
        acc: set = set()
        for m in self.terms:
            exps: dict = {}
            for v, e in m:
                try:
                    u = mapping[v]
                except KeyError:
                    raise UnknownBasepoint(f"no color for variable {v}") from None
                exps[u] = exps.get(u, 0) + e
            _toggle(acc, tuple(sorted(exps.items())))
        return Poly(frozenset(acc))

    def to_json(self) -> list:
        return [[[str(v), e] for v, e in sorted(m, key=lambda t: str(t[0]))] for m in _canonical(self.terms)]

    @classmethod
    def from_json(cls, data: list) -> "Poly":
        monos = []
        for m in data:
            exps: dict = {}
            for name, e in m:
                if int(e) < 0:
                    raise ValueError("negative exponent")
                if int(e):
                    v = Var.parse(name)
                    exps[v] = exps.get(v, 0) + int(e)
            monos.append(tuple(sorted(exps.items())))
        return cls(monos)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(mono_str(m) for m in _canonical(self.terms))

    def __repr__(self) -> str:
        return f"Poly({self})"


def _canonical(terms: Iterable[Monomial]) -> list[Monomial]:
    return sorted(terms, key=lambda m: [(str(v), e) for v, e in m])


def _toggle(acc: set, m: Monomial) -> None:
    if m in acc:
        acc.remove(m)
    else:
        acc.add(m)


def _binom_odd(n: int, k: int) -> bool:
    # Lucas: binom(n, k) is odd iff k's bits are a subset of n's
    return (n & k) == k


ZERO = Poly(frozenset())
ONE = Poly(frozenset({ONE_MONO}))


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def partial_derivative(p: Poly, v: Var) -> Poly:
    return p.derivative(v)


def substitute_coloring(p: Poly, coloring) -> Poly:
    """Replace every basepoint variable by its color variable."""
    return p.substitute(coloring.variable_map())
