"""JSON documents for forests, coverings and schemata.

Canonical text is ``json.dumps(..., sort_keys=True, indent=2)`` plus a
trailing newline; vertex lists and edges are sorted, rotations start at the
least neighbour, and every angle is a reduced fraction string.
"""

from __future__ import annotations

import json

from .angles import parse_fraction
from .covering import Covering
from .forest import HubbardForest
from .schema import MappingSchema
from .tree import AngledTree

VERSION = 1


class DocumentError(ValueError):
    """Malformed document; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


def _load(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, "", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise DocumentError("top level must be an object")
    version = data.get("version")
    if version != VERSION:
        raise DocumentError(f"unsupported version {version!r}", "version")
    return data


def _get(obj, key, kind, path):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"missing field {key!r}", path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise DocumentError(f"expected {kind.__name__}", f"{path}.{key}" if path else key)
    return val


def _ids(seq, path) -> list:
    if not isinstance(seq, list) or not all(isinstance(v, str) and v for v in seq):
        raise DocumentError("expected a list of non-empty strings", path)
    if len(set(seq)) != len(seq):
        raise DocumentError("duplicate id", path)
    return seq


# trees ------------------------------------------------------------------


def tree_to_json(t: AngledTree) -> dict:
    return {
        "vertices": sorted(t.vertices),
        "edges": sorted([list(e) for e in t.edges]),
        "rotation": {v: [[n, str(g)] for n, g in t.rotation[v]] for v in sorted(t.vertices)},
    }


def tree_from_json(obj, path: str = "tree") -> AngledTree:
    verts = _ids(_get(obj, "vertices", list, path), f"{path}.vertices")
    edges = _get(obj, "edges", list, path)
    eset = set()
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise DocumentError("edge must be a pair of ids", f"{path}.edges[{i}]")
        a, b = e
        if a not in verts or b not in verts:
            raise DocumentError("edge endpoint is not a vertex of this tree", f"{path}.edges[{i}]")
        eset.add(tuple(sorted(e)))
    rot_obj = _get(obj, "rotation", dict, path)
    rotation = {}
    for v in verts:
        rpath = f"{path}.rotation.{v}"
        if v not in rot_obj:
            raise DocumentError("missing rotation", rpath)
        items = rot_obj[v]
        if not isinstance(items, list):
            raise DocumentError("expected a list of [neighbour, gap] pairs", rpath)
        entries = []
        for i, item in enumerate(items):
            if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
                raise DocumentError("expected [neighbour, gap]", f"{rpath}[{i}]")
            try:
                g = parse_fraction(item[1])
            except ValueError as exc:
                raise DocumentError(str(exc), f"{rpath}[{i}]") from None
            entries.append((item[0], g))
        rotation[v] = tuple(entries)
    extra = set(rot_obj) - set(verts)
    if extra:
        raise DocumentError(f"rotation for unknown vertex {sorted(extra)[0]!r}", f"{path}.rotation")
    for v, items in rotation.items():
        for n, _ in items:
            if tuple(sorted((v, n))) not in eset:
                raise DocumentError(f"rotation lists {n!r}, which is not adjacent", f"{path}.rotation.{v}")
    return AngledTree(tuple(verts), frozenset(eset), rotation)


# coverings --------------------------------------------------------------


def covering_to_json(c: Covering) -> dict:
    return {"map": dict(sorted(c.vertex_map.items())), "degree": dict(sorted(c.local_degree.items()))}


def _covering_maps(obj, verts, path):
    fmap = _get(obj, "map", dict, path)
    delta = _get(obj, "degree", dict, path)
    for v in verts:
        if v not in fmap:
            raise DocumentError(f"no image for vertex {v!r}", f"{path}.map")
        if not isinstance(fmap[v], str):
            raise DocumentError("image must be an id", f"{path}.map.{v}")
        d = delta.get(v)
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise DocumentError("local degree must be a positive integer", f"{path}.degree.{v}")
    for key in set(fmap) | set(delta):
        if key not in verts:
            raise DocumentError(f"unknown vertex {key!r}", path)
    return dict(fmap), dict(delta)


# forests ----------------------------------------------------------------


def forest_to_json(h: HubbardForest, marked=None) -> dict:
    doc = {
        "version": VERSION,
        "schema": h.schema.to_json(),
        "trees": {u: tree_to_json(h.trees[u]) for u in h.schema.vertices},
        "coverings": {u: covering_to_json(h.coverings[u]) for u in h.schema.vertices},
    }
    if marked is not None:
        doc["marked"] = sorted(marked)
    return doc


def schema_from_json(obj, path: str = "schema") -> MappingSchema:
    verts = _ids(_get(obj, "vertices", list, path), f"{path}.vertices")
    fmap = _get(obj, "map", dict, path)
    weight = _get(obj, "weight", dict, path)
    for u in verts:
        if not isinstance(fmap.get(u), str):
            raise DocumentError(f"no image for schema vertex {u!r}", f"{path}.map")
        w = weight.get(u)
        if not isinstance(w, int) or isinstance(w, bool):
            raise DocumentError(f"no integer weight for schema vertex {u!r}", f"{path}.weight")
    return MappingSchema(tuple(verts), fmap, weight)


def forest_from_json(data: dict) -> tuple[HubbardForest, list | None]:
    schema = schema_from_json(_get(data, "schema", dict, ""))
    trees_obj = _get(data, "trees", dict, "")
    cov_obj = _get(data, "coverings", dict, "")
    trees = {}
    owner = {}
    for u in schema.vertices:
        if u not in trees_obj:
            raise DocumentError(f"missing tree for schema vertex {u!r}", "trees")
        t = tree_from_json(trees_obj[u], f"trees.{u}")
        for v in t.vertices:
            if v in owner:
                raise DocumentError(f"vertex {v!r} appears in trees {owner[v]!r} and {u!r}", f"trees.{u}")
            owner[v] = u
        trees[u] = t
    for key in set(trees_obj) - set(schema.vertices):
        raise DocumentError(f"tree {key!r} is not a schema vertex", "trees")
    coverings = {}
    for u in schema.vertices:
        if u not in cov_obj:
            raise DocumentError(f"missing covering for schema vertex {u!r}", "coverings")
        target = schema.F[u]
        if target not in trees:
            raise DocumentError(f"schema maps {u!r} to unknown {target!r}", "schema.map")
        fmap, delta = _covering_maps(cov_obj[u], trees[u].vertices, f"coverings.{u}")
        coverings[u] = Covering(trees[u], trees[target], fmap, delta)
    for key in set(cov_obj) - set(schema.vertices):
        raise DocumentError(f"covering {key!r} is not a schema vertex", "coverings")
    marked = None
    if "marked" in data:
        marked = _ids(data["marked"], "marked")
        for v in marked:
            if v not in owner:
                raise DocumentError(f"marked vertex {v!r} is not in any tree", "marked")
    return HubbardForest(schema, trees, coverings), marked


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def serialize(h: HubbardForest, marked=None) -> str:
    return dumps(forest_to_json(h, marked))


def parse(text: str) -> tuple[HubbardForest, list | None]:
    """Forest and optional marked set from document text."""
    return forest_from_json(_load(text))


def canonical(text: str) -> str:
    h, marked = parse(text)
    return serialize(h, marked)


# other document kinds -----------------------------------------------------


def covering_document(c: Covering) -> dict:
    return {
        "version": VERSION,
        "domain": tree_to_json(c.domain),
        "codomain": tree_to_json(c.codomain),
        "covering": covering_to_json(c),
    }


def parse_covering(text: str) -> Covering:
    data = _load(text)
    dom = tree_from_json(_get(data, "domain", dict, ""), "domain")
    cod = tree_from_json(_get(data, "codomain", dict, ""), "codomain")
    fmap, delta = _covering_maps(_get(data, "covering", dict, ""), dom.vertices, "covering")
    return Covering(dom, cod, fmap, delta)


def schema_document(s: MappingSchema) -> dict:
    return {"version": VERSION, "schema": s.to_json()}


def parse_schema(text: str) -> MappingSchema:
    return schema_from_json(_get(_load(text), "schema", dict, ""))


def kind_of(text: str) -> str:
    """``"forest"``, ``"covering"`` or ``"schema"``."""
    data = _load(text)
    if "trees" in data:
        return "forest"
    if "covering" in data:
        return "covering"
    if "schema" in data:
        return "schema"
    raise DocumentError("cannot tell the document kind")

