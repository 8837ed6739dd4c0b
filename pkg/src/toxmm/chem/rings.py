"""Smallest-set-of-smallest-rings perception.

Candidate cycles come from per-bond BFS (shortest cycle through each bond);
the final set is a greedy GF(2)-independent selection of the smallest
candidates, tie-broken by lowest atom indices so perception is deterministic.
"""

from collections import deque


def _shortest_cycle_through(adj, a, b):
    """Shortest path a..b avoiding the direct edge, as an ordered atom list."""
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        for v in adj[u]:
            if u == a and v == b:
                continue
            if v not in prev:
                prev[v] = u
                queue.append(v)
    return None


def _fragments(n_atoms, adj):
    seen = [False] * n_atoms
    count = 0
    for start in range(n_atoms):
        if seen[start]:
            continue
        count += 1
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
    return count


def sssr(n_atoms: int, bonds: list[tuple[int, int]]) -> list[list[int]]:
    """Return the smallest set of smallest rings as ordered atom cycles."""
    adj = [[] for _ in range(n_atoms)]
    for a, b in bonds:
        adj[a].append(b)
        adj[b].append(a)
    for neighbors in adj:
        neighbors.sort()

    n_rings = len(bonds) - n_atoms + _fragments(n_atoms, adj)
    if n_rings <= 0:
        return []

    edge_index = {}
    for a, b in bonds:
        edge_index[(min(a, b), max(a, b))] = len(edge_index)

    candidates = []
    seen_atom_sets = set()
    for a, b in bonds:
        path = _shortest_cycle_through(adj, a, b)
        if path is None:
            continue
        key = frozenset(path)
        if key in seen_atom_sets:
            continue
        seen_atom_sets.add(key)
        candidates.append(path)
    candidates.sort(key=lambda cyc: (len(cyc), sorted(cyc)))

    def edge_mask(cycle):
        mask = 0
        for i, u in enumerate(cycle):
            v = cycle[(i + 1) % len(cycle)]
            mask |= 1 << edge_index[(min(u, v), max(u, v))]
        return mask

    # Greedy XOR basis (GF(2)) over edge-incidence vectors, keyed by leading bit.
    basis: dict[int, int] = {}
    selected: list[list[int]] = []
    for cycle in candidates:
        if len(selected) == n_rings:
            break
        vec = edge_mask(cycle)
        while vec:
            lead = vec.bit_length() - 1
            if lead not in basis:
                basis[lead] = vec
                selected.append(cycle)
                break
            vec ^= basis[lead]
    return selected
