"""Angled trees: cyclically ordered edges with rational gaps at every vertex."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .angles import Angle
from .report import Violation

Edge = tuple  # a sorted pair of vertex ids


def edge(a: str, b: str) -> Edge:
    return (a, b) if a <= b else (b, a)


def other_end(e: Edge, v: str) -> str:
    return e[1] if e[0] == v else e[0]


class PseudoAccess(NamedTuple):
    """Vertex together with two consecutive incident edges (equal at a leaf)."""

    vertex: str
    edge_in: Edge
    edge_out: Edge

    def label(self) -> str:
        return f"{self.vertex}:{'-'.join(self.edge_in)}>{'-'.join(self.edge_out)}"


def _canonical_rotation(items) -> tuple:
    items = tuple((str(n), Fraction(g)) for n, g in items)
    if not items:
        return ()
    start = min(range(len(items)), key=lambda i: items[i][0])
    return items[start:] + items[:start]


@dataclass(frozen=True, eq=False)
class AngledTree:
    """A finite tree with a cyclic order of edges at each vertex.

    ``rotation[v]`` lists the neighbours of ``v`` counterclockwise; the
    fraction stored with neighbour ``n`` is the gap from the edge ``v-n`` to
    the next edge.  A leaf has a single gap of 1 (a full turn).
    """

    vertices: tuple
    edges: frozenset
    rotation: Mapping[str, tuple]
    _parents: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(str(v) for v in self.vertices)))
        object.__setattr__(self, "edges", frozenset(edge(str(a), str(b)) for a, b in self.edges))
        rot = {str(v): _canonical_rotation(items) for v, items in self.rotation.items()}
        for v in self.vertices:
            rot.setdefault(v, ())
        object.__setattr__(self, "rotation", rot)

    # construction -----------------------------------------------------

    @classmethod
    def from_rotation(cls, rotation: Mapping[str, Iterable]) -> "AngledTree":
        edges = set()
        for v, items in rotation.items():
            for n, _ in items:
                edges.add(edge(v, n))
        return cls(tuple(rotation), frozenset(edges), dict(rotation))

    @classmethod
    def single(cls, v: str) -> "AngledTree":
        return cls((v,), frozenset(), {v: ()})

    @classmethod
    def star(cls, center: str, leaves: list, gaps: list | None = None) -> "AngledTree":
        """Star whose leaves appear counterclockwise in the given order."""
        k = len(leaves)
        gaps = [Fraction(1, k)] * k if gaps is None else [Fraction(g) for g in gaps]
        rot = {center: list(zip(leaves, gaps))}
        for leaf in leaves:
            rot[leaf] = [(center, Fraction(1))]
        return cls.from_rotation(rot)

    @classmethod
    def path_tree(cls, names: list, gaps: list | None = None) -> "AngledTree":
        """Path through ``names``; ``gaps[i]`` is the gap at the i-th interior
        vertex from the edge toward its predecessor to the edge toward its
        successor (default 1/2)."""
        rot = {}
        n = len(names)
        if n == 1:
            return cls.single(names[0])
        interior = n - 2
        gaps = [Fraction(1, 2)] * interior if gaps is None else [Fraction(g) for g in gaps]
        rot[names[0]] = [(names[1], Fraction(1))]
        rot[names[-1]] = [(names[-2], Fraction(1))]
        for i in range(1, n - 1):
            g = gaps[i - 1]
            rot[names[i]] = [(names[i - 1], g), (names[i + 1], 1 - g)]
        return cls.from_rotation(rot)

    # basic queries ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, AngledTree):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self.rotation == other.rotation
        )

    def __hash__(self):
        return hash((self.vertices, self.edges, tuple(sorted(self.rotation.items()))))

    def __contains__(self, v):
        return v in self.rotation

    def neighbors(self, v: str) -> tuple:
        return tuple(n for n, _ in self.rotation[v])

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def gaps(self, v: str) -> tuple:
        return tuple(g for _, g in self.rotation[v])

    def _index(self, v: str, n: str) -> int:
        for i, (m, _) in enumerate(self.rotation[v]):
            if m == n:
                return i
        raise KeyError(f"{n!r} is not adjacent to {v!r}")

    def next_neighbor(self, v: str, n: str) -> str:
        """Counterclockwise successor of the edge ``v-n`` at ``v``."""
        items = self.rotation[v]
        return items[(self._index(v, n) + 1) % len(items)][0]

    def gap_after(self, v: str, n: str) -> Fraction:
        return self.rotation[v][self._index(v, n)][1]

    def angle(self, v: str, a: str, b: str) -> Angle:
        """Counterclockwise angle at ``v`` from edge ``v-a`` to edge ``v-b``."""
        items = self.rotation[v]
        i, j = self._index(v, a), self._index(v, b)
        total = Fraction(0)
        while i != j:
            total += items[i][1]
            i = (i + 1) % len(items)
        return Angle(total)

    def leaves(self) -> list:
        return [v for v in self.vertices if self.degree(v) == 1]

    # paths ------------------------------------------------------------

    def _require(self, v):
        if v not in self.rotation:
            raise KeyError(f"unknown vertex {v!r}")

    def _parent_map(self, root: str) -> dict:
        if root not in self._parents:
            parent = {root: None}
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y in self.neighbors(x):
                    if y not in parent:
                        parent[y] = x
                        queue.append(y)
            self._parents[root] = parent
        return self._parents[root]

    def path_vertices(self, v: str, w: str) -> list:
        self._require(v)
        self._require(w)
        parent = self._parent_map(w)
        if v not in parent:
            raise ValueError(f"{v!r} and {w!r} are not connected")
        out = [v]
        while out[-1] != w:
            out.append(parent[out[-1]])
        return out

    def path(self, v: str, w: str) -> list:
        """Edges of the unique simple path from ``v`` to ``w``."""
        pv = self.path_vertices(v, w)
        return [edge(a, b) for a, b in zip(pv, pv[1:])]

    def distance(self, v: str, w: str) -> int:
        return len(self.path_vertices(v, w)) - 1

    def direction(self, v: str, w: str) -> str:
        """The neighbour of ``v`` on the path toward ``w`` (``v != w``)."""
        pv = self.path_vertices(v, w)
        if len(pv) < 2:
            raise ValueError("direction from a vertex to itself is undefined")
        return pv[1]

    def component(self, v: str, n: str) -> list:
        """Vertices of the component of ``T - {v}`` containing neighbour ``n``."""
        seen = {v, n}
        order = [n]
        queue = deque([n])
        while queue:
            x = queue.popleft()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        return order

    # pseudoaccesses ---------------------------------------------------

    def successor(self, pa: PseudoAccess) -> PseudoAccess:
        v2 = other_end(pa.edge_out, pa.vertex)
        n = self.next_neighbor(v2, pa.vertex)
        return PseudoAccess(v2, pa.edge_out, edge(v2, n))

    def first_pseudoaccess(self) -> PseudoAccess:
        if not self.edges:
            raise ValueError("a single-vertex tree has no pseudoaccesses")
        v = min(w for w in self.vertices if self.degree(w) > 0)
        a = self.rotation[v][0][0]
        return PseudoAccess(v, edge(v, a), edge(v, self.next_neighbor(v, a)))

    def pseudoaccess_cycle(self, start: PseudoAccess | None = None) -> list:
        """All pseudoaccesses in successor order, starting at ``start``."""
        first = start or self.first_pseudoaccess()
        out = [first]
        limit = 2 * len(self.vertices) + 1
        pa = self.successor(first)
        while pa != first:
            out.append(pa)
            if len(out) > limit:
                raise ValueError("successor walk does not close up; not a tree")
            pa = self.successor(pa)
        return out

    def pseudoaccess_gap(self, pa: PseudoAccess) -> Fraction:
        """Gap angle of a pseudoaccess (1 at a leaf)."""
        return self.gap_after(pa.vertex, other_end(pa.edge_in, pa.vertex))

    # derived trees ----------------------------------------------------

    def restrict(self, keep: Iterable[str]) -> "AngledTree":
        """Induced angled tree on a connected vertex subset."""
        keep = set(keep)
        rot = {}
        for v in keep:
            items = self.rotation[v]
            kept = [i for i, (n, _) in enumerate(items) if n in keep]
            new = []
            for idx, i in enumerate(kept):
                j = kept[(idx + 1) % len(kept)]
                total = Fraction(0)
                k = i
                while True:
                    total += items[k][1]
                    k = (k + 1) % len(items)
                    if k == j:
                        break
                new.append((items[i][0], total))
            rot[v] = new
        return AngledTree.from_rotation(rot)

    def relabel(self, mapping: Mapping[str, str]) -> "AngledTree":
        rot = {mapping[v]: [(mapping[n], g) for n, g in items] for v, items in self.rotation.items()}
        return AngledTree.from_rotation(rot)

    def mirror(self) -> "AngledTree":
        """Reverse every cyclic order (complex conjugation)."""
        rot = {}
        for v, items in self.rotation.items():
            k = len(items)
            # gap after n_i becomes the gap after n_{i+1} in reversed order
            rot[v] = [(items[i][0], items[(i - 1) % k][1]) for i in reversed(range(k))]
        return AngledTree.from_rotation(rot)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": sorted([list(e) for e in self.edges]),
            "rotation": {
                v: [[n, str(g)] for n, g in self.rotation[v]] for v in self.vertices
            },
        }


def validate_tree(t: AngledTree) -> list[Violation]:
    """List every violated angled-tree invariant (empty when valid).

    Structural problems are tagged C1, problems with the angle data C4.
    """
    out = []
    verts = set(t.vertices)
    for v in t.rotation:
        if v not in verts:
            out.append(Violation("C1", v, "rotation given for an unknown vertex"))
    adj = {v: set() for v in verts}
    for a, b in t.edges:
        if a == b:
            out.append(Violation("C1", a, "self-loop edge"))
            continue
        if a not in verts or b not in verts:
            out.append(Violation("C1", f"{a}-{b}", "edge endpoint is not a vertex"))
            continue
        adj[a].add(b)
        adj[b].add(a)
    for v in t.vertices:
        nbrs = [n for n, _ in t.rotation.get(v, ())]
        if len(set(nbrs)) != len(nbrs):
            out.append(Violation("C1", v, "a neighbour is repeated in the cyclic order"))
        if set(nbrs) != adj[v]:
            out.append(Violation("C1", v, "cyclic order does not list exactly the incident edges"))
    if out:
        return sorted(out)
    if len(t.edges) != len(verts) - 1:
        out.append(Violation("C1", "*", f"{len(t.edges)} edges on {len(verts)} vertices; not a tree"))
    if verts:
        root = t.vertices[0]
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != verts:
            out.append(Violation("C1", "*", "graph is disconnected"))
    for v in t.vertices:
        gaps = t.gaps(v)
        if not gaps:
            continue
        bad = [g for g in gaps if g <= 0]
        if bad:
            out.append(Violation("C4", v, "gap angles must be strictly positive"))
        if sum(gaps) != 1:
            out.append(Violation("C4", v, f"gap angles sum to {sum(gaps)}, not 1"))
    return sorted(out)


def tree_distance(t: AngledTree, v: str, w: str) -> int:
    return t.distance(v, w)


def pseudoaccess_cycle(t: AngledTree) -> list:
    return t.pseudoaccess_cycle()
