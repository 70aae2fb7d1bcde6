"""Straight-line planar embeddings that respect the cyclic edge orders.

Each vertex owns an open angular wedge narrower than a half-turn; its
children are placed inside disjoint sub-wedges, so every subtree stays in
the convex cone spanned by its wedge and no two edges can cross.
"""

from __future__ import annotations

import math

from .tree import AngledTree

_ROOT_SPREAD = 0.9  # fraction of the available sector a root wedge may use


def planar_layout(t: AngledTree, root: str | None = None) -> dict:
    """Return ``{vertex: (x, y)}`` scaled into the unit box ``[0, 1]^2``."""
    if not t.vertices:
        return {}
    root = root if root is not None else t.vertices[0]
    pos = {root: (0.0, 0.0)}
    nbrs = t.neighbors(root)
    if not nbrs:
        return {root: (0.5, 0.5)}
    k = len(nbrs)
    width = min(math.pi, 2 * math.pi / k) * _ROOT_SPREAD
    # evenly spaced root edges keep the root wedges disjoint
    stack = [(n, root, 2 * math.pi * i / k, width) for i, n in enumerate(nbrs)]
    while stack:
        v, parent, direction, width = stack.pop()
        px, py = pos[parent]
        pos[v] = (px + math.cos(direction), py + math.sin(direction))
        children = []
        n = t.next_neighbor(v, parent)
        while n != parent:
            children.append(n)
            n = t.next_neighbor(v, n)
        if not children:
            continue
        # counterclockwise after the parent edge means increasing direction
        # inside the wedge; child wedges are disjoint slices of it
        slot = width / len(children)
        lo = direction - width / 2
        for i, c in enumerate(children):
            stack.append((c, v, lo + slot * (i + 0.5), slot * 0.9))
    return _normalise(pos)


def _normalise(pos: dict) -> dict:
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    return {v: ((x - min(xs)) / span, (y - min(ys)) / span) for v, (x, y) in pos.items()}


def orientation(a, b, c) -> float:
    """Twice the signed area of the triangle ``abc``."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def ccw_order_matches(t: AngledTree, pos: dict, v: str) -> bool:
    """True when the directions of the edges at ``v`` appear counterclockwise
    in the tree's cyclic order."""
    nbrs = t.neighbors(v)
    if len(nbrs) < 3:
        return True
    x0, y0 = pos[v]
    ang = [math.atan2(pos[n][1] - y0, pos[n][0] - x0) % (2 * math.pi) for n in nbrs]
    # the sequence of directions must increase after one cyclic rotation
    start = min(range(len(ang)), key=ang.__getitem__)
    rolled = ang[start:] + ang[:start]
    return all(a < b for a, b in zip(rolled, rolled[1:]))


def segments_cross(p1, p2, q1, q2) -> bool:
    """Proper intersection test for segments sharing no endpoint."""
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0) and 0 not in (d1, d2, d3, d4)


def is_plane_embedding(t: AngledTree, pos: dict) -> bool:
    edges = sorted(t.edges)
    for i, (a, b) in enumerate(edges):
        for c, d in edges[i + 1:]:
            if {a, b} & {c, d}:
                continue
            if segments_cross(pos[a], pos[b], pos[c], pos[d]):
                return False
    return all(ccw_order_matches(t, pos, v) for v in t.vertices)
