"""Hubbard forests: one angled tree per schema vertex plus a covering of
each tree onto the tree of its image vertex."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Mapping

from .angles import Angle
from .covering import Covering, validate_covering
from .report import Violation, sorted_report
from .schema import MappingSchema, map_equivalences, validate_schema
from .tree import AngledTree, validate_tree


@dataclass(frozen=True, eq=False)
class HubbardForest:
    schema: MappingSchema
    trees: Mapping[str, AngledTree]
    coverings: Mapping[str, Covering]

    @classmethod
    def build(cls, schema: MappingSchema, trees: Mapping, maps: Mapping) -> "HubbardForest":
        """``maps[u]`` is a pair ``(vertex_map, local_degree)`` for tree ``u``."""
        coverings = {}
        for u, (fmap, delta) in maps.items():
            coverings[u] = Covering(trees[u], trees[schema.F[u]], dict(fmap), dict(delta))
        return cls(schema, dict(trees), coverings)

    def __eq__(self, other):
        if not isinstance(other, HubbardForest):
            return NotImplemented
        return (
            self.schema == other.schema
            and dict(self.trees) == dict(other.trees)
            and dict(self.coverings) == dict(other.coverings)
        )

    __hash__ = None

    # global dynamics --------------------------------------------------

    def tree_of(self, v: str) -> str:
        for u, t in self.trees.items():
            if v in t:
                return u
        raise KeyError(f"unknown vertex {v!r}")

    def vertices(self) -> list:
        return sorted(v for t in self.trees.values() for v in t.vertices)

    def f(self, v: str) -> str:
        return self.coverings[self.tree_of(v)].vertex_map[v]

    def dynamics(self) -> dict:
        out = {}
        for c in self.coverings.values():
            out.update(c.vertex_map)
        return out

    def local_degrees(self) -> dict:
        out = {}
        for c in self.coverings.values():
            out.update(c.local_degree)
        return out

    def replace(self, trees=None, coverings=None, schema=None) -> "HubbardForest":
        return HubbardForest(
            schema or self.schema,
            dict(trees or self.trees),
            dict(coverings or self.coverings),
        )


def schema_of_forest(h: HubbardForest) -> MappingSchema:
    """Schema whose weights are read off the covering degrees."""
    return MappingSchema(
        tuple(h.schema.vertices),
        dict(h.schema.F),
        {u: h.coverings[u].degree() - 1 for u in h.schema.vertices},
    )


# classification -----------------------------------------------------


@dataclass(frozen=True)
class VertexClass:
    kind: str  # "julia" or "fatou"
    preperiod: int
    period: int
    critical: bool

    @property
    def periodic(self) -> bool:
        return self.preperiod == 0


def _orbit_data(fmap: Mapping[str, str], v: str):
    index = {}
    orbit = []
    x = v
    while x not in index:
        index[x] = len(orbit)
        orbit.append(x)
        x = fmap[x]
    pre = index[x]
    return orbit, pre, len(orbit) - pre


def classify_vertices(h: HubbardForest) -> dict:
    fmap = h.dynamics()
    delta = h.local_degrees()
    out = {}
    for v in h.vertices():
        orbit, pre, per = _orbit_data(fmap, v)
        cycle = orbit[pre:]
        fatou = any(delta[x] > 1 for x in cycle)
        out[v] = VertexClass("fatou" if fatou else "julia", pre, per, delta[v] > 1)
    return out


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def check_expanding(h: HubbardForest, classes: dict | None = None) -> list[Violation]:
    """Pairs of periodic Julia vertices in one tree that never separate."""
    classes = classes or classify_vertices(h)
    fmap = h.dynamics()
    out = []
    for u in sorted(h.trees):
        t = h.trees[u]
        pj = [v for v in t.vertices if classes[v].kind == "julia" and classes[v].periodic]
        for i, a in enumerate(pj):
            for b in pj[i + 1:]:
                bound = _lcm(classes[a].period, classes[b].period)
                x, y = a, b
                separated = False
                for _ in range(bound):
                    tx = h.trees[h.tree_of(x)]
                    if tx.distance(x, y) > 1:
                        separated = True
                        break
                    x, y = fmap[x], fmap[y]
                if not separated:
                    out.append(
                        Violation("C6", f"{u}:{a},{b}", f"distance stays <= 1 for {bound} iterates")
                    )
    return out


def _check_normalisation(h: HubbardForest, classes: dict) -> list[Violation]:
    out = []
    for u in sorted(h.trees):
        t = h.trees[u]
        for v in t.vertices:
            m = t.degree(v)
            if m < 2 or classes[v].kind != "julia" or not classes[v].periodic:
                continue
            bad = [g for g in t.gaps(v) if (g * m).denominator != 1]
            if bad:
                out.append(
                    Violation("C5", f"{u}:{v}", f"gaps {[str(g) for g in t.gaps(v)]} are not multiples of 1/{m}")
                )
    return out


def validate_forest(h: HubbardForest, strict_components: bool = False) -> list[Violation]:
    """Check the six forest axioms; violations carry tags C1..C6.

    With ``strict_components`` every tree needs a critical vertex; otherwise
    it is enough that every cycle of trees contains one.
    """
    out = []
    s = h.schema
    out += validate_schema_structure(s)
    for u in s.vertices:
        if u not in h.trees:
            out.append(Violation("schema", u, "no tree for schema vertex"))
        if u not in h.coverings:
            out.append(Violation("schema", u, "no covering for schema vertex"))
    if out:
        return sorted_report(out)

    owner = {}
    for u in s.vertices:
        for v in h.trees[u].vertices:
            if v in owner:
                out.append(Violation("C1", v, f"vertex belongs to trees {owner[v]} and {u}"))
            owner[v] = u

    broken = set()
    for u in s.vertices:
        problems = validate_tree(h.trees[u])
        for p in problems:
            if p.tag == "C1":
                broken.add(u)
            out.append(Violation(p.tag, f"{u}:{p.where}", p.message))

    def critical(u):
        return any(d > 1 for d in h.coverings[u].local_degree.values())

    if strict_components:
        for u in s.vertices:
            if not critical(u):
                out.append(Violation("C2", u, "tree contains no critical vertex"))
    else:
        for cyc in s.cycles():
            if not any(critical(u) for u in cyc):
                out.append(Violation("C2", "->".join(cyc), "cycle of trees contains no critical vertex"))

    dynamics_ok = not broken and not any(p.tag == "C1" for p in out)
    for u in s.vertices:
        c = h.coverings[u]
        if c.domain != h.trees[u] or c.codomain != h.trees[s.F[u]]:
            out.append(Violation("covering", u, "covering does not run between the schema's trees"))
            dynamics_ok = False
            continue
        if u in broken or s.F[u] in broken:
            continue
        problems = validate_covering(c, where=u)
        out += problems
        incomplete = any(p.tag == "covering" for p in problems)
        if incomplete or any(x not in c.codomain for x in c.vertex_map.values()):
            dynamics_ok = False
        if not incomplete:
            deg = c.degree()
            if deg != s.d(u):
                out.append(Violation("covering", u, f"degree {deg} but schema weight {s.w[u]} needs {s.d(u)}"))

    if dynamics_ok:
        classes = classify_vertices(h)
        out += _check_normalisation(h, classes)
        out += check_expanding(h, classes)
    return sorted_report(out)


def validate_schema_structure(s: MappingSchema) -> list[Violation]:
    return [p for p in validate_schema(s) if "no critical vertex" not in p.message]


# isomorphism --------------------------------------------------------


def planar_isomorphisms(t1: AngledTree, t2: AngledTree) -> list:
    """Every bijection of vertices preserving edges, cyclic orders and gaps."""
    if len(t1.vertices) != len(t2.vertices) or len(t1.edges) != len(t2.edges):
        return []
    if not t1.edges:
        return [{t1.vertices[0]: t2.vertices[0]}]
    r0 = t1.vertices[0]
    n0 = t1.neighbors(r0)[0]
    found = []
    for r in t2.vertices:
        if t2.degree(r) != t1.degree(r0):
            continue
        for n in t2.neighbors(r):
            phi = _extend_planar(t1, t2, r0, n0, r, n)
            if phi is not None:
                found.append(phi)
    return found


def _rotation_from(t: AngledTree, v: str, start: str) -> list:
    items = list(t.rotation[v])
    k = [n for n, _ in items].index(start)
    return items[k:] + items[:k]


def _extend_planar(t1, t2, r1, n1, r2, n2):
    phi = {r1: r2}
    stack = [(r1, n1, r2, n2)]
    while stack:
        v1, a1, v2, a2 = stack.pop()
        rot1 = _rotation_from(t1, v1, a1)
        rot2 = _rotation_from(t2, v2, a2)
        if len(rot1) != len(rot2):
            return None
        for (x1, g1), (x2, g2) in zip(rot1, rot2):
            if g1 != g2:
                return None
            if x1 in phi:
                if phi[x1] != x2:
                    return None
                continue
            phi[x1] = x2
            stack.append((x1, v1, x2, v2))
    return phi


def forest_isomorphic(h1: HubbardForest, h2: HubbardForest):
    """``(True, witness)`` when an isomorphism exists; witness has keys
    ``schema`` and ``vertices``."""
    for phi in map_equivalences(h1.schema, h2.schema):
        order = sorted(h1.schema.vertices)
        candidates = {}
        for u in order:
            c1, c2 = h1.coverings[u], h2.coverings[phi[u]]
            cands = [
                m
                for m in planar_isomorphisms(h1.trees[u], h2.trees[phi[u]])
                if all(c1.local_degree[v] == c2.local_degree[m[v]] for v in m)
            ]
            if not cands:
                break
            candidates[u] = cands
        else:
            found = _choose_tree_maps(h1, h2, phi, order, candidates, 0, {})
            if found is not None:
                return True, {"schema": dict(phi), "vertices": found}
    return False, None


def _choose_tree_maps(h1, h2, phi, order, candidates, i, chosen):
    if i == len(order):
        merged = {}
        for m in chosen.values():
            merged.update(m)
        return merged
    u = order[i]
    for m in candidates[u]:
        chosen[u] = m
        if _dynamics_consistent(h1, h2, phi, chosen):
            got = _choose_tree_maps(h1, h2, phi, order, candidates, i + 1, chosen)
            if got is not None:
                return got
        del chosen[u]
    return None


def _dynamics_consistent(h1, h2, phi, chosen) -> bool:
    for u, m in chosen.items():
        fu = h1.schema.F[u]
        if fu not in chosen:
            continue
        c1, c2 = h1.coverings[u], h2.coverings[phi[u]]
        for v, image in m.items():
            if c2.vertex_map[image] != chosen[fu][c1.vertex_map[v]]:
                return False
    return True


# regulated hull -----------------------------------------------------


def _spanning_subtree(t: AngledTree, marks: set) -> set:
    keep = set(t.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(keep):
            nb = [n for n in t.neighbors(v) if n in keep]
            if v not in marks and len(nb) <= 1 and len(keep) > 1:
                keep.discard(v)
                changed = True
    return keep


def hull(h: HubbardForest, marked: Iterable[str]) -> HubbardForest:
    """Forest spanned by a forward-invariant vertex set containing every
    critical vertex: marked vertices plus branch points, with unmarked
    degree-two vertices merged away."""
    M = set(marked)
    fmap = h.dynamics()
    delta = h.local_degrees()
    unknown = M - set(fmap)
    if unknown:
        raise ValueError(f"unknown marked vertices {sorted(unknown)}")
    if any(fmap[v] not in M for v in M):
        raise ValueError("marked set is not forward invariant")
    missing = [v for v, d in delta.items() if d > 1 and v not in M]
    if missing:
        raise ValueError(f"marked set misses critical vertices {sorted(missing)}")

    new_trees = {}
    for u in h.schema.vertices:
        t = h.trees[u]
        marks = M & set(t.vertices)
        if not marks:
            raise ValueError(f"tree {u} contains no marked vertex")
        span = t.restrict(_spanning_subtree(t, marks))
        kept = {v for v in span.vertices if v in marks or span.degree(v) >= 3}
        rot = {}
        for v in kept:
            items = []
            for n, g in span.rotation[v]:
                prev, x = v, n
                while x not in kept:
                    nxt = [y for y in span.neighbors(x) if y != prev]
                    prev, x = x, nxt[0]
                items.append((x, g))
            rot[v] = items
        new_trees[u] = AngledTree.from_rotation(rot)

    for u in h.schema.vertices:
        target = new_trees[h.schema.F[u]]
        for v in new_trees[u].vertices:
            if fmap[v] not in target:
                raise ValueError(f"vertex {v} maps to {fmap[v]}, which is not retained in the hull")

    classes = classify_vertices(h)
    new_trees = _renormalise(h, new_trees, classes)
    coverings = {
        u: Covering(
            new_trees[u],
            new_trees[h.schema.F[u]],
            {v: fmap[v] for v in new_trees[u].vertices},
            {v: delta[v] for v in new_trees[u].vertices},
        )
        for u in h.schema.vertices
    }
    return HubbardForest(h.schema, new_trees, coverings)


def _renormalise(h: HubbardForest, trees: dict, classes: dict) -> dict:
    """Re-derive Julia angles after vertices were dropped.

    Periodic Julia vertices get evenly spaced edges; preperiodic Julia
    vertices that then violate the angle condition are pulled back from
    their image, choosing the solution closest to the ambient gaps.
    """
    rot = {u: {v: list(t.rotation[v]) for v in t.vertices} for u, t in trees.items()}
    owner = {v: u for u, t in trees.items() for v in t.vertices}
    fmap = h.dynamics()
    delta = h.local_degrees()
    for v, u in owner.items():
        k = len(rot[u][v])
        if classes[v].kind == "julia" and classes[v].periodic and k >= 2:
            rot[u][v] = [(n, Fraction(1, k)) for n, _ in rot[u][v]]
    pending = sorted(
        (classes[v].preperiod, v)
        for v in owner
        if classes[v].kind == "julia" and not classes[v].periodic and len(rot[owner[v]][v]) >= 2
    )
    for _, v in pending:
        u = owner[v]
        fu = h.schema.F[u]
        tf = AngledTree.from_rotation(rot[fu])
        w = fmap[v]
        d = delta[v]
        items = rot[u][v]
        dirs = [tf.direction(w, fmap[n]) for n, _ in items]
        targets = [tf.angle(w, dirs[i], dirs[(i + 1) % len(dirs)]).value for i in range(len(dirs))]
        if all(Angle(g * d) == Angle(t) for (_, g), t in zip(items, targets)):
            continue
        rot[u][v] = list(zip([n for n, _ in items], _pullback_gaps([g for _, g in items], targets, d)))
    return {u: AngledTree.from_rotation(r) for u, r in rot.items()}


def _pullback_gaps(ambient: list, targets: list, d: int) -> list:
    """Solve ``d * g_i = t_i mod 1`` with positive ``g_i`` summing to 1."""
    budget = d - sum(targets)
    if budget.denominator != 1 or budget < 0:
        raise ValueError("image angles cannot be pulled back by this local degree")
    budget = int(budget)
    ks = []
    for g, t in zip(ambient, targets):
        k = max(floor(d * g - t + Fraction(1, 2)), 1 if t == 0 else 0)
        ks.append(k)
    while sum(ks) > budget:
        cands = [i for i, k in enumerate(ks) if k > (1 if targets[i] == 0 else 0)]
        i = max(cands, key=lambda i: (ks[i] + targets[i]) / d - ambient[i])
        ks[i] -= 1
    while sum(ks) < budget:
        i = min(range(len(ks)), key=lambda i: (ks[i] + targets[i]) / d - ambient[i])
        ks[i] += 1
    return [(k + t) / d for k, t in zip(ks, targets)]
