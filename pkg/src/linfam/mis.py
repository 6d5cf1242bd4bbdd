"""Exact maximum independent set by branch and bound.

Graphs are adjacency bitsets: bit j of row i is set when i and j are
adjacent.  Independent sets of a graph are the cliques of its complement,
so the solver is a max-clique search with a greedy colouring bound: the
candidate set is partitioned into colour classes, and a clique can take
at most one vertex per class.
"""
from __future__ import annotations

from typing import Sequence

from .budget import Budget, ensure
from .errors import DomainError

__all__ = [
    "all_maximum_independent_sets",
    "bits_of",
    "complement_bitsets",
    "max_clique",
    "max_independent_set",
]

# beyond this the exact search is no longer a desk-scale oracle
MAX_VERTICES = 4096


def bits_of(mask: int):
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def complement_bitsets(adj: Sequence[int], nverts: int) -> list[int]:
    full = (1 << nverts) - 1
    return [full & ~adj[i] & ~(1 << i) for i in range(nverts)]


def _color_sequence(adj: Sequence[int], cand: int) -> list[tuple[int, int]]:
    """Greedy colouring of the candidate set, vertices tagged by colour.

    Returned in colour order, so a prefix ending at colour c certifies
    that no clique inside the remaining candidates exceeds c.
    """
    seq = []
    rest = cand
    color = 0
    while rest:
        color += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~(adj[v] | low)
            rest ^= low
            seq.append((v, color))
    return seq


def max_clique(adj: Sequence[int], nverts: int,
               budget: Budget | None = None,
               incumbent: tuple[int, int] | None = None) -> tuple[int, int]:
    """(size, vertex bitset) of one maximum clique.

    incumbent, when given, must be a valid clique (size, bitset); it
    seeds the bound so the search only has to beat it.
    """
    if nverts > MAX_VERTICES:
        raise DomainError(f"exact search capped at {MAX_VERTICES} vertices")
    b = ensure(budget)
    best_size, best_set = incumbent if incumbent is not None else (0, 0)
    nodes = 0

    def expand(cur: int, size: int, cand: int) -> None:
        nonlocal best_size, best_set, nodes
        nodes += 1
        if nodes % 4096 == 0:
            b.check_clock("independent set search")
        if not cand:
            if size > best_size:
                best_size, best_set = size, cur
            return
        seq = _color_sequence(adj, cand)
        for v, c in reversed(seq):
            if size + c <= best_size:
                return
            expand(cur | (1 << v), size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, 0, (1 << nverts) - 1)
    return best_size, best_set


def max_independent_set(adj: Sequence[int], nverts: int,
                        budget: Budget | None = None) -> tuple[int, int]:
    """(size, vertex bitset) of one maximum independent set."""
    return max_clique(complement_bitsets(adj, nverts), nverts, budget)


def all_maximum_independent_sets(adj: Sequence[int], nverts: int,
                                 budget: Budget | None = None) -> list[int]:
    """Every maximum independent set, as vertex bitsets.

    Each set is produced exactly once: a branch on v collects the sets
    containing v, then v is dropped from the candidates for good.
    """
    target, _ = max_independent_set(adj, nverts, budget)
    comp = complement_bitsets(adj, nverts)
    out: list[int] = []
    b = ensure(budget)
    nodes = 0

    def expand(cur: int, size: int, cand: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes % 4096 == 0:
            b.check_clock("independent set enumeration")
        if size == target:
            out.append(cur)
            return
        seq = _color_sequence(comp, cand)
        for v, c in reversed(seq):
            if size + c < target:
                return
            expand(cur | (1 << v), size + 1, cand & comp[v])
            cand &= ~(1 << v)

    expand(0, 0, (1 << nverts) - 1)
    return out
