"""Small named Hubbard forests used in the docs, tests and bundled data."""

from __future__ import annotations

from fractions import Fraction

from .forest import HubbardForest
from .schema import MappingSchema
from .tree import AngledTree

H = Fraction(1, 2)


def _one(u, tree, fmap, delta, weight):
    schema = MappingSchema((u,), {u: u}, {u: weight})
    return HubbardForest.build(schema, {u: tree}, {u: (fmap, _full(tree, delta))})


def _full(tree, delta):
    return {v: delta.get(v, 1) for v in tree.vertices}


def basilica() -> HubbardForest:
    """Period-two critical cycle ``c0 -> c1 -> c0`` around the fixed point."""
    t = AngledTree.path_tree(["c0", "alpha", "c1"])
    return _one("u", t, {"c0": "c1", "c1": "c0", "alpha": "alpha"}, {"c0": 2}, 1)


def chebyshev() -> HubbardForest:
    """``z^2 - 2``: the critical point lands on a fixed endpoint."""
    t = AngledTree.path_tree(["-2", "0", "2"])
    return _one("u", t, {"0": "-2", "-2": "2", "2": "2"}, {"0": 2}, 1)


def rabbit() -> HubbardForest:
    """Period-three critical cycle rotating by 1/3 about the fixed point."""
    t = AngledTree.star("alpha", ["c0", "c1", "c2"])
    return _one("u", t, {"c0": "c1", "c1": "c2", "c2": "c0", "alpha": "alpha"}, {"c0": 2}, 1)


def corabbit() -> HubbardForest:
    """Mirror image of the rabbit."""
    t = AngledTree.star("alpha", ["c0", "c2", "c1"])
    return _one("u", t, {"c0": "c1", "c1": "c2", "c2": "c0", "alpha": "alpha"}, {"c0": 2}, 1)


def cubic() -> HubbardForest:
    """Cubic with two fixed critical points joined through a fixed point."""
    t = AngledTree.path_tree(["c0", "alpha", "c1"])
    return _one("u", t, {"c0": "c0", "c1": "c1", "alpha": "alpha"}, {"c0": 2, "c1": 2}, 2)


def twocycle() -> HubbardForest:
    """Two one-point trees exchanged by quadratic steps (return degree 4)."""
    schema = MappingSchema(("u0", "u1"), {"u0": "u1", "u1": "u0"}, {"u0": 1, "u1": 1})
    trees = {"u0": AngledTree.single("p"), "u1": AngledTree.single("q")}
    maps = {"u0": ({"p": "q"}, {"p": 2}), "u1": ({"q": "p"}, {"q": 2})}
    return HubbardForest.build(schema, trees, maps)


def starcycle() -> HubbardForest:
    """A star and an edge exchanged by quadratic steps (return degree 4)."""
    schema = MappingSchema(("u0", "u1"), {"u0": "u1", "u1": "u0"}, {"u0": 1, "u1": 1})
    trees = {
        "u0": AngledTree.star("c", ["a", "b"], [H, H]),
        "u1": AngledTree.path_tree(["v", "w"]),
    }
    maps = {
        "u0": ({"c": "v", "a": "w", "b": "w"}, {"c": 2, "a": 1, "b": 1}),
        "u1": ({"v": "c", "w": "a"}, {"v": 2, "w": 1}),
    }
    return HubbardForest.build(schema, trees, maps)


EXAMPLES = {
    "basilica": basilica,
    "chebyshev": chebyshev,
    "rabbit": rabbit,
    "corabbit": corabbit,
    "cubic": cubic,
    "twocycle": twocycle,
    "starcycle": starcycle,
}


def pathhull() -> HubbardForest:
    """A preperiodic path ``a-b-c-d`` carried homeomorphically onto the
    extended Basilica tree; ``{a, d}`` plus the critical orbit is admissible."""
    schema = MappingSchema(("u0", "u1"), {"u0": "u1", "u1": "u1"}, {"u0": 0, "u1": 1})
    base = AngledTree.path_tree(["c0'", "alpha'", "c0", "alpha", "c1"])
    path = AngledTree.path_tree(["a", "b", "c", "d"])
    maps = {
        "u0": ({"a": "c0'", "b": "alpha'", "c": "c0", "d": "c1"}, {}),
        "u1": (
            {"c0'": "c0", "alpha'": "alpha", "c0": "c1", "alpha": "alpha", "c1": "c0"},
            {"c0": 2},
        ),
    }
    trees = {"u0": path, "u1": base}
    maps = {u: (fm, _full(trees[u], d)) for u, (fm, d) in maps.items()}
    return HubbardForest.build(schema, trees, maps)


EXAMPLES["pathhull"] = pathhull


def broken_angle() -> HubbardForest:
    """The cubic with gaps 1/3, 2/3 at its fixed Julia vertex: the map is
    angle-consistent but violates the 1/m normalisation."""
    t = AngledTree.path_tree(["c0", "alpha", "c1"], [Fraction(1, 3)])
    return _one("u", t, {"c0": "c0", "c1": "c1", "alpha": "alpha"}, {"c0": 2, "c1": 2}, 2)


# bundled documents: name -> (builder, marked set, valid)
BUNDLED = {
    "basilica": (basilica, None, True),
    "chebyshev": (chebyshev, None, True),
    "rabbit": (rabbit, ["c0", "c1", "c2"], True),
    "corabbit": (corabbit, None, True),
    "cubic": (cubic, None, True),
    "twocycle": (twocycle, None, True),
    "starcycle": (starcycle, None, True),
    "pathhull": (pathhull, ["a", "c0", "c0'", "c1", "d"], True),
    "broken-angle": (broken_angle, None, False),
}
