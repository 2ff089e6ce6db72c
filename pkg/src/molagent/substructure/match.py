"""Backtracking subgraph matcher for compiled patterns."""

from __future__ import annotations

from typing import Iterator

from ..molgraph.model import Molecule
from .smarts import Pattern

DEFAULT_STEP_BUDGET = 1_000_000


class MatchBudgetExceeded(RuntimeError):
    """The search visited more states than its step budget allows."""


def _plan(p: Pattern, sizes: list[int], first: int):
    """Order pattern atoms so each one after the first touches an earlier one.

    Picks the most constrained atom next (fewest candidates, then most
    pattern neighbours).
    """
    n = len(p.atoms)
    order = [first]
    placed = {first}
    while len(order) < n:
        frontier = {j for k in order for j, _ in p.adjacency[k] if j not in placed}
        nxt = min(frontier, key=lambda k: (sizes[k], -len(p.adjacency[k]), k))
        order.append(nxt)
        placed.add(nxt)
    steps = []
    pos = {k: s for s, k in enumerate(order)}
    for s, k in enumerate(order):
        back = [(j, p.bonds[b][2]) for j, b in p.adjacency[k] if pos[j] < s]
        back.sort(key=lambda jb: pos[jb[0]])
        steps.append((k, back))
    return steps


def iter_matches(
    p: Pattern,
    m: Molecule,
    root: int | None = None,
    budget: int = DEFAULT_STEP_BUDGET,
) -> Iterator[tuple[int, ...]]:
    """Yield every embedding as a tuple (molecule atom per pattern atom).

    With ``root`` set, pattern atom 0 is pinned to molecule atom ``root``.
    """
    n = len(p.atoms)
    if n == 0 or n > len(m.atoms):
        return
    memo: dict[tuple[int, int], bool] = {}

    def atom_ok(k: int, i: int) -> bool:
        key = (k, i)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = p.atoms[k](m, i)
        return hit

    if root is not None:
        if not atom_ok(0, root):
            return
        first_options = [root]
        steps = _plan(p, [0] * n, 0)
    else:
        cands = []
        for k in range(n):
            cset = [i for i in range(len(m.atoms)) if atom_ok(k, i)]
            if not cset:
                return
            cands.append(cset)
        sizes = [len(c) for c in cands]
        first = min(range(n), key=lambda k: (sizes[k], -len(p.adjacency[k]), k))
        first_options = cands[first]
        steps = _plan(p, sizes, first)
    mapping = [-1] * n
    used: set[int] = set()
    count = 0

    def extend(s: int):
        nonlocal count
        if s == n:
            yield tuple(mapping)
            return
        k, back = steps[s]
        if back:
            options = [w for w, _ in m.neighbors(mapping[back[0][0]])]
        else:
            options = first_options
        for i in options:
            if i in used or not atom_ok(k, i):
                continue
            count += 1
            if count > budget:
                raise MatchBudgetExceeded(f"substructure search exceeded {budget} states for {p.source}")
            ok = True
            for j, pred in back:
                b = m.bond_index(mapping[j], i)
                if b is None or not pred(m, b):
                    ok = False
                    break
            if not ok:
                continue
            mapping[k] = i
            used.add(i)
            yield from extend(s + 1)
            used.discard(i)
            mapping[k] = -1

    yield from extend(0)


def count_matches(
    p: Pattern,
    m: Molecule,
    limit: int | None = None,
    budget: int = DEFAULT_STEP_BUDGET,
) -> int:
    """Number of distinct matched atom sets, stopping early at ``limit``."""
    seen: set[frozenset[int]] = set()
    for match in iter_matches(p, m, budget=budget):
        seen.add(frozenset(match))
        if limit is not None and len(seen) >= limit:
            break
    return len(seen)


def has_match(p: Pattern, m: Molecule, root: int | None = None, budget: int = DEFAULT_STEP_BUDGET) -> bool:
    for _ in iter_matches(p, m, root=root, budget=budget):
        return True
    return False


def matched_roots(p: Pattern, m: Molecule, budget: int = DEFAULT_STEP_BUDGET) -> set[int]:
    """Molecule atoms that pattern atom 0 can be mapped to."""
    return {i for i in range(len(m.atoms)) if p.atoms[0](m, i) and has_match(p, m, root=i, budget=budget)}
