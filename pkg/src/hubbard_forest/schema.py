"""Mapping schemata: a finite self-map with critical weights."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .report import Violation


@dataclass(frozen=True, eq=False)
class MappingSchema:
    vertices: tuple
    F: Mapping[str, str]
    w: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(str(v) for v in self.vertices)))
        object.__setattr__(self, "F", {str(k): str(v) for k, v in self.F.items()})
        object.__setattr__(self, "w", {str(k): int(v) for k, v in self.w.items()})

    def __eq__(self, other):
        if not isinstance(other, MappingSchema):
            return NotImplemented
        return (self.vertices, self.F, self.w) == (other.vertices, other.F, other.w)

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.F.items())), tuple(sorted(self.w.items()))))

    def d(self, v: str) -> int:
        return self.w[v] + 1

    def total_weight(self) -> int:
        return sum(self.w.values())

    def is_reduced(self) -> bool:
        return all(self.w[v] > 0 for v in self.vertices)

    def cycles(self) -> list:
        """Every periodic cycle, each listed in F-order from its least vertex."""
        seen = set()
        found = []
        for v in self.vertices:
            path = []
            index = {}
            x = v
            while x not in index and x not in seen:
                index[x] = len(path)
                path.append(x)
                x = self.F[x]
            if x in index:
                cyc = path[index[x]:]
                k = cyc.index(min(cyc))
                found.append(cyc[k:] + cyc[:k])
            seen.update(path)
        return sorted(found)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "map": {v: self.F[v] for v in self.vertices},
            "weight": {v: self.w[v] for v in self.vertices},
        }


def validate_schema(s: MappingSchema) -> list[Violation]:
    out = []
    verts = set(s.vertices)
    for v in s.vertices:
        if v not in s.F or s.F[v] not in verts:
            out.append(Violation("schema", v, "map is not defined inside the schema"))
        if s.w.get(v, -1) < 0:
            out.append(Violation("schema", v, "weight must be a non-negative integer"))
    if out:
        return sorted(out)
    for cyc in s.cycles():
        if all(s.w[v] == 0 for v in cyc):
            out.append(Violation("schema", "->".join(cyc), "cycle contains no critical vertex"))
    return sorted(out)


def total_weight(s: MappingSchema) -> int:
    return s.total_weight()


def reduce(s: MappingSchema) -> MappingSchema:
    """Drop weight-zero vertices, redirecting F past them."""
    problems = validate_schema(s)
    if problems:
        raise ValueError("cannot reduce an invalid schema: " + "; ".join(map(str, problems)))
    keep = [v for v in s.vertices if s.w[v] > 0]
    F = {}
    for v in keep:
        x = s.F[v]
        while s.w[x] == 0:
            x = s.F[x]
        F[v] = x
    return MappingSchema(tuple(keep), F, {v: s.w[v] for v in keep})


def _equivalences(s1: MappingSchema, s2: MappingSchema, first_only: bool):
    if len(s1.vertices) != len(s2.vertices):
        return
    if sorted(s1.w.values()) != sorted(s2.w.values()):
        return

    def indeg(s):
        out = {v: 0 for v in s.vertices}
        for v in s.vertices:
            out[s.F[v]] += 1
        return out

    in1, in2 = indeg(s1), indeg(s2)
    order = list(s1.vertices)

    def extend(phi: dict, used: set, v: str, target: str):
        # assign v -> target and propagate along F; returns the list of new keys or None
        added = []
        while True:
            if v in phi:
                if phi[v] != target:
                    break
                return added
            if target in used or s1.w[v] != s2.w[target] or in1[v] != in2[target]:
                break
            phi[v] = target
            used.add(target)
            added.append(v)
            v, target = s1.F[v], s2.F[target]
        for k in added:
            used.discard(phi.pop(k))
        return None

    def search(phi, used, i):
        while i < len(order) and order[i] in phi:
            i += 1
        if i == len(order):
            yield dict(phi)
            return
        v = order[i]
        for t in s2.vertices:
            added = extend(phi, used, v, t)
            if added is None:
                continue
            yield from search(phi, used, i + 1)
            for k in added:
                used.discard(phi.pop(k))

    yield from search({}, set(), 0)


def schema_equivalent(s1: MappingSchema, s2: MappingSchema):
    """``(True, witness)`` for a weight-preserving conjugacy, else ``(False, None)``."""
    for phi in _equivalences(s1, s2, True):
        return True, phi
    return False, None


def automorphisms(s: MappingSchema) -> list:
    return sorted(_equivalences(s, s, False), key=lambda p: [p[v] for v in s.vertices])


def map_equivalences(s1: MappingSchema, s2: MappingSchema):
    """Iterate over every equivalence from ``s1`` to ``s2``."""
    return _equivalences(s1, s2, False)
