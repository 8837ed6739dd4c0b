"""Deterministic template 2D layout.

Ring systems land as regular polygons sharing edges; acyclic stretches
zig-zag at 120 degrees from a BFS rooted at the lowest atom index. A short
unit-repulsion relaxation separates accidentally overlapping non-bonded
atoms and the result is centered on its centroid. Only the largest fragment
receives coordinates; other fragments stay NaN and are skipped downstream.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..chem.parse import MolGraph
from ..errors import EmptyMolecule

BOND_LENGTH = 1.5
RELAX_STEPS = 50
MIN_SEPARATION = 1.0


@dataclass
class Layout2D:
    coords: np.ndarray  # (n_atoms, 2), NaN outside the drawn fragment
    bond_length: float = BOND_LENGTH


def _rot(v, degrees):
    rad = math.radians(degrees)
    c, s = math.cos(rad), math.sin(rad)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _unit(v):
    n = float(np.hypot(v[0], v[1]))
    if n < 1e-12:
        return np.array([1.0, 0.0])
    return v / n


def _circumradius(n):
    return BOND_LENGTH / (2.0 * math.sin(math.pi / n))


def _apothem(n):
    return BOND_LENGTH / (2.0 * math.tan(math.pi / n))


class _RingSystems:
    """Rings grouped by shared atoms, with centers recorded as placed."""

    def __init__(self, rings):
        self.rings = rings
        parent = list(range(len(rings)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(rings)):
            for j in range(i + 1, len(rings)):
                if set(rings[i]) & set(rings[j]):
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(len(rings)):
            groups.setdefault(find(i), []).append(i)
        self.systems = [sorted(v) for v in sorted(groups.values(), key=min)]
        self.system_of_atom: dict[int, int] = {}
        for sid, ring_ids in enumerate(self.systems):
            for rid in ring_ids:
                for a in rings[rid]:
                    self.system_of_atom[a] = sid
        self.ring_center: dict[int, np.ndarray] = {}


def _orient_cycle(cycle, first, second=None):
    """Rotate (and possibly reverse) a cycle to start at `first`; when
    `second` is given it becomes the next element."""
    i = cycle.index(first)
    cyc = cycle[i:] + cycle[:i]
    if second is not None and len(cyc) > 1 and cyc[1] != second:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return cyc


def _place_polygon(cyc, center, start_angle, step_sign, coords):
    n = len(cyc)
    radius = _circumradius(n)
    step = step_sign * 2.0 * math.pi / n
    for k, atom in enumerate(cyc):
        ang = start_angle + k * step
        pos = center + radius * np.array([math.cos(ang), math.sin(ang)])
        if np.isnan(coords[atom]).any():
            coords[atom] = pos


def _place_ring_system(rs, sid, coords, anchor=None, anchor_pos=None, direction=None):
    """Lay out every ring of one system; returns the atoms it placed."""
    ring_ids = rs.systems[sid]
    if anchor is not None:
        start_rid = min(rid for rid in ring_ids if anchor in rs.rings[rid])
    else:
        start_rid = min(ring_ids, key=lambda rid: min(rs.rings[rid]))

    ring0 = rs.rings[start_rid]
    n = len(ring0)
    if anchor is None:
        center = np.zeros(2)
        cyc = _orient_cycle(ring0, min(ring0))
        start_angle = math.pi / 2.0
        coords[cyc[0]] = center + _circumradius(n) * np.array(
            [math.cos(start_angle), math.sin(start_angle)])
    else:
        coords[anchor] = anchor_pos
        center = anchor_pos + _circumradius(n) * direction
        cyc = _orient_cycle(ring0, anchor)
        start_angle = math.atan2(anchor_pos[1] - center[1], anchor_pos[0] - center[0])
    _place_polygon(cyc, center, start_angle, 1, coords)
    rs.ring_center[start_rid] = center

    done = {start_rid}
    while len(done) < len(ring_ids):
        progressed = False
        for rid in ring_ids:
            if rid in done:
                continue
            ring = rs.rings[rid]
            placed = [a for a in ring if not np.isnan(coords[a]).any()]
            if not placed:
                continue
            shared_edge = None
            for i, u in enumerate(ring):
                v = ring[(i + 1) % len(ring)]
                if u in placed and v in placed:
                    shared_edge = (u, v)
                    break
            if shared_edge is not None:
                a, b = shared_edge
                pa, pb = coords[a], coords[b]
                mid = (pa + pb) / 2.0
                normal = _unit(np.array([-(pb - pa)[1], (pb - pa)[0]]))
                neighbor_rid = min(
                    (r for r in done if a in rs.rings[r] and b in rs.rings[r]),
                    default=min(done),
                )
                away = mid - rs.ring_center[neighbor_rid]
                if float(np.dot(normal, away)) < 0:
                    normal = -normal
                center = mid + _apothem(len(ring)) * normal
                cyc = _orient_cycle(ring, a, b)
                ang_a = math.atan2(pa[1] - center[1], pa[0] - center[0])
                ang_b = math.atan2(pb[1] - center[1], pb[0] - center[0])
                delta = (ang_b - ang_a + math.pi) % (2.0 * math.pi) - math.pi
                sign = 1 if delta >= 0 else -1
                _place_polygon(cyc, center, ang_a, sign, coords)
            else:
                # spiro or exotic sharing: grow away from the placed portion
                a = min(placed)
                prev_rid = min(r for r in done if set(rs.rings[r]) & set(ring))
                outward = _unit(coords[a] - rs.ring_center[prev_rid])
                center = coords[a] + _circumradius(len(ring)) * outward
                cyc = _orient_cycle(ring, a)
                ang_a = math.atan2(coords[a][1] - center[1], coords[a][0] - center[0])
                _place_polygon(cyc, center, ang_a, 1, coords)
            rs.ring_center[rid] = center
            done.add(rid)
            progressed = True
        if not progressed:  # disconnected ring bookkeeping should not happen
            break
    return [a for rid in ring_ids for a in rs.rings[rid]]


def _outward_direction(atom, rs, coords):
    centers = [rs.ring_center[rid]
               for rid, ring in enumerate(rs.rings)
               if atom in ring and rid in rs.ring_center]
    if not centers:
        return np.array([1.0, 0.0])
    mean = np.mean(centers, axis=0)
    return _unit(coords[atom] - mean)


def layout_2d(g: MolGraph) -> Layout2D:
    if not g.atoms:
        raise EmptyMolecule(g.source)
    coords = np.full((len(g.atoms), 2), np.nan)
    fragments = g.fragments()
    frag = max(fragments, key=lambda f: (len(f), -f[0]))
    frag_set = set(frag)

    rings = [r for r in g.rings if set(r) <= frag_set]
    rs = _RingSystems(rings)
    adj = g.adjacency()
    for neighbors in adj:
        neighbors.sort()

    root = frag[0]
    # (atom, incoming unit direction, zig sign, straight_first)
    queue: deque[tuple[int, np.ndarray, int, bool]] = deque()

    def enqueue_ring_atoms(atoms):
        for a in sorted(set(atoms)):
            queue.append((a, _outward_direction(a, rs, coords), 1, True))

    if root in rs.system_of_atom:
        placed = _place_ring_system(rs, rs.system_of_atom[root], coords)
        enqueue_ring_atoms(placed)
    else:
        coords[root] = np.zeros(2)
        # first chain bond runs horizontal; the +/-60 alternation starts after
        queue.append((root, _rot(np.array([1.0, 0.0]), -60.0), 1, False))

    while queue:
        u, incoming, sign, straight_first = queue.popleft()
        offsets = [0.0, 60.0, -60.0, 120.0, -120.0, 180.0] if straight_first \
            else [60.0, -60.0, 0.0, 120.0, -120.0, 180.0]
        candidates = [_unit(_rot(incoming, sign * off)) for off in offsets]
        taken = []
        for v in adj[u]:
            if not np.isnan(coords[v]).any():
                taken.append(_unit(coords[v] - coords[u]))
        for v in adj[u]:
            if not np.isnan(coords[v]).any() or v not in frag_set:
                continue
            chosen = None
            for cand in candidates:
                if all(float(np.dot(cand, t)) < 0.999 for t in taken):
                    chosen = cand
                    break
            if chosen is None:
                chosen = candidates[0]
            taken.append(chosen)
            if v in rs.system_of_atom and np.isnan(coords[v]).any():
                entry = coords[u] + BOND_LENGTH * chosen
                placed = _place_ring_system(
                    rs, rs.system_of_atom[v], coords,
                    anchor=v, anchor_pos=entry, direction=chosen)
                enqueue_ring_atoms(placed)
            else:
                coords[v] = coords[u] + BOND_LENGTH * chosen
                queue.append((v, chosen, -sign, False))

    _relax(coords, g, frag)
    mask = ~np.isnan(coords[:, 0])
    coords[mask] -= coords[mask].mean(axis=0)
    return Layout2D(coords=coords)


def _relax(coords, g, frag):
    bonded = {(min(b.a, b.b), max(b.a, b.b)) for b in g.bonds}
    idx = [a for a in frag if not np.isnan(coords[a]).any()]
    for _ in range(RELAX_STEPS):
        moved = False
        for i in range(len(idx)):
            for j in range(i + 1, len(idx)):
                a, b = idx[i], idx[j]
                if (a, b) in bonded:
                    continue
                delta = coords[b] - coords[a]
                dist = float(np.hypot(delta[0], delta[1]))
                if dist >= MIN_SEPARATION:
                    continue
                if dist < 1e-9:
                    ang = 0.7 * a + 1.3 * b  # deterministic tie-break direction
                    direction = np.array([math.cos(ang), math.sin(ang)])
                else:
                    direction = delta / dist
                push = 0.5 * (MIN_SEPARATION - dist) * 0.2
                coords[a] -= push * direction
                coords[b] += push * direction
                moved = True
        if not moved:
            break
