"""Abstract coverings between angled trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .angles import Angle
from .report import Violation
from .tree import AngledTree, PseudoAccess, edge, other_end, validate_tree


@dataclass(frozen=True, eq=False)
class Covering:
    """Vertex map plus local degree from ``domain`` to ``codomain``.

    Every edge is carried onto the shortest codomain path between the images
    of its endpoints; the image of the edge ``v-n`` *at* ``v`` is the first
    edge of that path.
    """

    domain: AngledTree
    codomain: AngledTree
    vertex_map: Mapping[str, str]
    local_degree: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", {str(k): str(v) for k, v in self.vertex_map.items()})
        object.__setattr__(self, "local_degree", {str(k): int(v) for k, v in self.local_degree.items()})

    def __eq__(self, other):
        if not isinstance(other, Covering):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.vertex_map == other.vertex_map
            and self.local_degree == other.local_degree
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, tuple(sorted(self.vertex_map.items()))))

    def __call__(self, v: str) -> str:
        return self.vertex_map[v]

    def image_direction(self, v: str, n: str) -> str:
        """Codomain neighbour of ``f(v)`` that the edge ``v-n`` starts along."""
        return self.codomain.direction(self.vertex_map[v], self.vertex_map[n])

    def degree(self) -> int:
        return 1 + sum(d - 1 for d in self.local_degree.values())

    def preimage_count(self, w: str) -> int:
        if w not in self.codomain:
            raise KeyError(f"unknown codomain vertex {w!r}")
        return sum(self.local_degree[v] for v, x in self.vertex_map.items() if x == w)

    def is_homogeneous(self) -> bool:
        n = self.degree()
        return all(self.preimage_count(w) == n for w in self.codomain.vertices)

    def critical_vertices(self) -> list:
        return sorted(v for v, d in self.local_degree.items() if d > 1)

    def retarget(self, codomain: AngledTree) -> "Covering":
        return Covering(self.domain, codomain, self.vertex_map, self.local_degree)

    def to_json(self) -> dict:
        return {
            "map": {v: self.vertex_map[v] for v in sorted(self.vertex_map)},
            "degree": {v: self.local_degree[v] for v in sorted(self.local_degree)},
        }


def covering_degree(c: Covering) -> int:
    return c.degree()


def preimage_count(c: Covering, w: str) -> int:
    return c.preimage_count(w)


def is_homogeneous(c: Covering) -> bool:
    return c.is_homogeneous()


def validate_covering(c: Covering, where: str = "") -> list[Violation]:
    """Itemise violations of the covering conditions (empty when valid).

    Collapsed edges are tagged C3, angle mismatches C4, missing data
    ``covering``.  Both trees are assumed to be valid angled trees.
    """
    pre = f"{where}:" if where else ""
    out = []
    dom, cod = c.domain, c.codomain
    for v in dom.vertices:
        if v not in c.vertex_map:
            out.append(Violation("covering", pre + v, "vertex has no image"))
        elif c.vertex_map[v] not in cod:
            out.append(Violation("C3", pre + v, f"image {c.vertex_map[v]!r} is not in the target tree"))
        if v not in c.local_degree:
            out.append(Violation("covering", pre + v, "vertex has no local degree"))
        elif c.local_degree[v] < 1:
            out.append(Violation("covering", pre + v, "local degree must be at least 1"))
    extra = set(c.vertex_map) - set(dom.vertices)
    for v in sorted(extra):
        out.append(Violation("covering", pre + v, "image given for a vertex outside the tree"))
    if out:
        return sorted(out)
    f = c.vertex_map
    collapsed = set()
    for a, b in sorted(dom.edges):
        if f[a] == f[b]:
            collapsed.add((a, b))
            out.append(Violation("C3", f"{pre}{a}-{b}", f"both endpoints map to {f[a]!r}"))
    for v in dom.vertices:
        items = dom.rotation[v]
        if len(items) < 2:
            continue
        d = c.local_degree[v]
        for i, (n, g) in enumerate(items):
            n2 = items[(i + 1) % len(items)][0]
            if edge(v, n) in collapsed or edge(v, n2) in collapsed:
                continue
            got = cod.angle(f[v], c.image_direction(v, n), c.image_direction(v, n2))
            want = Angle(g * d)
            if got != want:
                out.append(
                    Violation(
                        "C4",
                        f"{pre}{v}",
                        f"angle from {n} to {n2} is {g}; image angle {got} != {d}*{g} = {want}",
                    )
                )
    return sorted(out)


@dataclass(frozen=True)
class ExtensionResult:
    extended: Covering
    embedding: dict
    subdivision: dict = field(default_factory=dict)
    added: tuple = ()


class _Namer:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.counter = {}

    def __call__(self, base: str) -> str:
        k = self.counter.get(base, 0)
        while True:
            k += 1
            name = f"{base}'{k}"
            if name not in self.taken:
                break
        self.counter[base] = k
        self.taken.add(name)
        return name


def homogenize(c: Covering, reserved: Iterable[str] = ()) -> ExtensionResult:
    """Canonical homogeneous extension of a covering.

    Edges whose image is a longer path are subdivided first; then every
    pseudoaccess whose gap exceeds the image gap divided by the local degree
    receives a copy of the missing codomain branch, inserted at exactly that
    angle.  New vertex names are ``<codomain vertex>'<k>`` and avoid
    ``reserved``.
    """
    problems = validate_tree(c.domain) + validate_tree(c.codomain) + validate_covering(c)
    if problems:
        raise ValueError("cannot homogenize an invalid covering: " + "; ".join(map(str, problems)))
    cod = c.codomain
    fmap = dict(c.vertex_map)
    delta = dict(c.local_degree)
    rot = {v: [list(item) for item in c.domain.rotation[v]] for v in c.domain.vertices}
    namer = _Namer(set(rot) | set(reserved))
    subdivision = {}
    added = []

    for a, b in sorted(c.domain.edges):
        images = cod.path_vertices(fmap[a], fmap[b])
        if len(images) <= 2:
            continue
        chain = [a]
        for p in images[1:-1]:
            x = namer(p)
            fmap[x], delta[x] = p, 1
            chain.append(x)
            added.append(x)
        chain.append(b)
        for i in range(1, len(chain) - 1):
            p, prev, nxt = images[i], images[i - 1], images[i + 1]
            g = cod.angle(p, prev, nxt).value
            rot[chain[i]] = [[chain[i - 1], g], [chain[i + 1], 1 - g]]
        for item in rot[a]:
            if item[0] == b:
                item[0] = chain[1]
        for item in rot[b]:
            if item[0] == a:
                item[0] = chain[-2]
        subdivision[edge(a, b)] = [edge(x, y) for x, y in zip(chain, chain[1:])]

    def glue(v: str, towards: str) -> str:
        w = fmap[v]
        copy = {z: namer(z) for z in cod.component(w, towards)}
        for z, new in copy.items():
            rot[new] = [[v if n == w else copy[n], g] for n, g in cod.rotation[z]]
            fmap[new], delta[new] = z, 1
            added.append(new)
        return copy[towards]

    if not c.domain.edges and cod.edges:
        (v,) = c.domain.vertices
        w = fmap[v]
        rot[v] = [[glue(v, cod.rotation[w][0][0]), Fraction(1)]]

    passes = 0
    while True:
        passes += 1
        grew = False
        for v in sorted(rot):
            i = 0
            while i < len(rot[v]):
                n, g = rot[v][i]
                w = fmap[v]
                fn = cod.direction(w, fmap[n])
                theta = cod.gap_after(w, fn)
                need = theta / delta[v]
                if g < need:
                    raise ValueError(f"gap {g} at {v} is smaller than {theta}/{delta[v]}")
                if g > need:
                    x = glue(v, cod.next_neighbor(w, fn))
                    rot[v][i][1] = need
                    rot[v].insert(i + 1, [x, g - need])
                    grew = True
                i += 1
        if not grew:
            break
    assert passes <= 2, "extension walk did not stabilise after one pass"

    dom = AngledTree.from_rotation(rot)
    ext = Covering(dom, cod, fmap, delta)
    return ExtensionResult(
        extended=ext,
        embedding={v: v for v in c.domain.vertices},
        subdivision=subdivision,
        added=tuple(added),
    )


def access_image(c: Covering, pa: PseudoAccess) -> PseudoAccess:
    v = pa.vertex
    w = c.vertex_map[v]
    fn = c.image_direction(v, other_end(pa.edge_in, v))
    return PseudoAccess(w, edge(w, fn), edge(w, c.codomain.next_neighbor(w, fn)))


def access_dynamics(c: Covering) -> dict:
    """Induced map between the pseudoaccess cycles of a homogeneous covering."""
    if not c.is_homogeneous():
        raise ValueError("access dynamics need a homogeneous covering")
    if not c.domain.edges:
        return {}
    out = {}
    for pa in c.domain.pseudoaccess_cycle():
        img = access_image(c, pa)
        fout = c.image_direction(pa.vertex, other_end(pa.edge_out, pa.vertex))
        if edge(img.vertex, fout) != img.edge_out:
            raise ValueError(f"consecutive edges at {pa.vertex} do not map to consecutive edges")
        out[pa] = img
    return out


def compose(c2: Covering, c1: Covering) -> Covering:
    """The covering ``c2 * c1`` (apply ``c1`` first); ``c1`` must be homogeneous."""
    if c1.codomain != c2.domain:
        raise ValueError("codomain of the first covering is not the domain of the second")
    if not c1.is_homogeneous():
        raise ValueError("the first covering must be homogeneous")
    fmap = {v: c2.vertex_map[w] for v, w in c1.vertex_map.items()}
    delta = {v: c1.local_degree[v] * c2.local_degree[c1.vertex_map[v]] for v in c1.vertex_map}
    return Covering(c1.domain, c2.codomain, fmap, delta)


def identity_covering(t: AngledTree) -> Covering:
    return Covering(t, t, {v: v for v in t.vertices}, {v: 1 for v in t.vertices})
