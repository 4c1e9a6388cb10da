"""GF(2) elimination on Python-int bitset rows."""

from __future__ import annotations

from collections.abc import Iterable


def rank(rows: Iterable[int]) -> int:
    """Rank of a set of bitset rows over GF(2)."""
    basis = Eliminator()
    for r in rows:
        basis.add(r)
    return len(basis.pivots)


class Eliminator:
    """Incremental row reduction keyed on the lowest set bit.

    Each stored row has a distinct lowest bit (its pivot) and no other stored
    pivot appears in it below that bit.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def reduce(self, row: int) -> int:
        pivots = self.pivots
        while row:
            low = (row & -row).bit_length() - 1
            p = pivots.get(low)
            if p is None:
                return row
            row ^= p
        return 0

    def add(self, row: int) -> int | None:
        """Insert ``row``; return its new pivot, or ``None`` if it was dependent."""
        row = self.reduce(row)
        if not row:
            return None
        low = (row & -row).bit_length() - 1
        self.pivots[low] = row
        return low

    def __len__(self) -> int:
        return len(self.pivots)


def solve(rows: list[int], rhs: list[int], n_vars: int) -> tuple[int | None, dict]:
    """Solve ``rows * x = rhs`` over GF(2).

    ``rows[i]`` is a bitset over ``n_vars`` unknowns and ``rhs[i]`` is 0 or 1.
    Returns ``(solution_bitset, report)``; the solution is ``None`` when the
    system is inconsistent.  Free variables are set to zero.
    """
    flag = 1 << n_vars
    elim = Eliminator()
    inconsistent = 0
    for r, b in zip(rows, rhs):
        got = elim.add(r | (flag if b else 0))
        if got == n_vars:
            inconsistent += 1
    rank_aug = len(elim)
    rank_coeff = rank_aug - (1 if n_vars in elim.pivots else 0)
    report = {
        "unknowns": n_vars,
        "equations": len(rows),
        "rank": rank_coeff,
        "augmented_rank": rank_aug,
    }
    if n_vars in elim.pivots:
        return None, report
    mask = flag - 1
    sol = 0
    for p in sorted(elim.pivots, reverse=True):
        row = elim.pivots[p]
        bit = (row >> n_vars) & 1
        bit ^= (row & mask & sol).bit_count() & 1
        if bit:
            sol |= 1 << p
    return sol, report
