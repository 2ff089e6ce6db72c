"""Ring perception: ring bonds and a smallest set of smallest rings."""

from __future__ import annotations

from collections import deque


def connected_components(n: int, edges: list[tuple[int, int]]) -> list[int]:
    """Component label per vertex."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(i) for i in range(n)]


def ring_edges(n: int, edges: list[tuple[int, int]]) -> set[int]:
    """Indices of edges lying on at least one cycle (the non-bridges)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (a, b) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    disc = [-1] * n
    low = [0] * n
    bridges: set[int] = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, k in it:
                if k == via:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, k, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(via)
    return set(range(len(edges))) - bridges


def _bfs_tree(root: int, adj: list[list[tuple[int, int]]]):
    dist = {root: 0}
    parent: dict[int, tuple[int, int] | None] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, k in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                parent[w] = (v, k)
                queue.append(w)
    return dist, parent


def _path_to_root(v: int, parent) -> tuple[list[int], list[int]]:
    atoms, bonds = [v], []
    while parent[v] is not None:
        v, k = parent[v]
        bonds.append(k)
        atoms.append(v)
    return atoms, bonds


def sssr(n: int, edges: list[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Minimum cycle basis via Horton candidates and GF(2) elimination.

    Returns each ring as an ordered cycle of vertices, sorted by size and
    then by vertex content so that output is deterministic.
    """
    cyclic = ring_edges(n, edges)
    if not cyclic:
        return []
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    verts = set()
    for k in sorted(cyclic):
        a, b = edges[k]
        adj[a].append((b, k))
        adj[b].append((a, k))
        verts.update((a, b))
    labels = connected_components(n, [edges[k] for k in cyclic])
    ncomp = len({labels[v] for v in verts})
    dim = len(cyclic) - len(verts) + ncomp

    candidates: dict[int, tuple[int, ...]] = {}
    for root in sorted(verts):
        dist, parent = _bfs_tree(root, adj)
        for k in sorted(cyclic):
            x, y = edges[k]
            if x not in dist or y not in dist:
                continue
            if parent[x] is not None and parent[x][1] == k:
                continue
            if parent[y] is not None and parent[y][1] == k:
                continue
            px, bx = _path_to_root(x, parent)
            py, by = _path_to_root(y, parent)
            if set(px) & set(py) != {root}:
                continue
            mask = 1 << k
            for e in bx + by:
                mask |= 1 << e
            if mask in candidates:
                continue
            cycle = tuple(px + py[-2::-1])
            candidates[mask] = cycle

    ordered = sorted(candidates.items(), key=lambda kv: (len(kv[1]), sorted(kv[1])))
    basis: dict[int, int] = {}  # pivot bit -> reduced vector
    chosen: list[tuple[int, ...]] = []
    for mask, cycle in ordered:
        v = mask
        while v:
            pivot = v.bit_length() - 1
            if pivot in basis:
                v ^= basis[pivot]
            else:
                basis[pivot] = v
                chosen.append(_canonical_cycle(cycle))
                break
        if len(chosen) == dim:
            break
    chosen.sort(key=lambda c: (len(c), sorted(c)))
    return chosen


def _canonical_cycle(cycle: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate so the smallest vertex is first and its smaller neighbour second."""
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    if len(rot) > 2 and rot[-1] < rot[1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot
