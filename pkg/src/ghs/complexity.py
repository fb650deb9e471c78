"""Width of a generalized Heegaard surface and the conserved quantity netchi."""
from __future__ import annotations

import enum
from typing import Iterable

from .core import GeneralizedSurface, require_valid


class Order(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


class WidthSeq(tuple):
    """Thick-surface complexities in non-increasing order."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(x) for x in entries)
        if any(x < 0 for x in entries):
            raise ValueError(f"negative width entry in {entries}")
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise ValueError(f"width entries must be non-increasing: {entries}")
        return super().__new__(cls, entries)

    def __repr__(self):
        return f"WidthSeq({tuple(self)})"

    # Comparison follows compare_width, not tuple ordering.
    def __lt__(self, other):
        return compare_width(self, other) is Order.LT

    def __le__(self, other):
        return compare_width(self, other) is not Order.GT

    def __gt__(self, other):
        return compare_width(self, other) is Order.GT

    def __ge__(self, other):
        return compare_width(self, other) is not Order.LT


def component_complexity(genus: int) -> int:
    """1 - chi/2 for a closed orientable surface, which is its genus."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    chi = 2 - 2 * genus
    return 1 - chi // 2


def width(g: GeneralizedSurface) -> WidthSeq:
    require_valid(g)
    return WidthSeq(sorted((component_complexity(e.genus) for e in g.thick_edges), reverse=True))


def compare_width(a, b) -> Order:
    """Order complexity sequences.

    ``a < b`` when, after a common prefix of length k, either ``a`` stops while
    ``b`` has a (k+1)st term, or ``b``'s (k+1)st term is larger.  Trailing zeros
    count: (3) < (3, 0).
    """
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    if k == len(a) and k == len(b):
        return Order.EQ
    if k == len(a):
        return Order.LT
    if k == len(b):
        return Order.GT
    return Order.LT if a[k] < b[k] else Order.GT


def net_chi(g: GeneralizedSurface) -> int:
    """-chi(thick) + chi(thin), as an exact integer."""
    require_valid(g)
    total = 0
    for e in g.edges:
        total += (2 * e.genus - 2) if e.is_thick else (2 - 2 * e.genus)
    return total


def predicted_genus(g: GeneralizedSurface) -> int:
    """Genus of any Heegaard surface reached by amalgamation (netchi is conserved)."""
    return net_chi(g) // 2 + 1
