from __future__ import annotations

import random
from fractions import Fraction

import pytest
from generators import random_tree
from oracles import count_cycles

from hubbard_forest.angles import Angle
from hubbard_forest.tree import AngledTree, validate_tree


def test_pseudoaccess_cycle_on_random_trees():
    rng = random.Random(11)
    for _ in range(100):
        t = random_tree(rng, rng.randint(2, 12))
        cyc = t.pseudoaccess_cycle()
        assert len(cyc) == 2 * (len(t.vertices) - 1)
        assert len(set(cyc)) == len(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert t.successor(a) == b
        assert count_cycles(t) == 1


def test_star_angles_and_order():
    t = AngledTree.star("s", ["x", "y", "z"], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    assert t.angle("s", "x", "y") == Angle(Fraction(1, 2))
    assert t.angle("s", "x", "z") == Angle(Fraction(3, 4))
    assert t.angle("s", "y", "x") == Angle(Fraction(1, 2))
    assert t.next_neighbor("s", "z") == "x"
    assert t.gaps("x") == (Fraction(1),)


def test_paths_and_directions():
    t = AngledTree.path_tree(["a", "b", "c", "d"])
    assert t.path_vertices("a", "d") == ["a", "b", "c", "d"]
    assert t.distance("d", "b") == 2
    assert t.direction("a", "c") == "b"
    assert sorted(t.component("b", "c")) == ["c", "d"]


@pytest.mark.parametrize(
    "rotation, tag",
    [
        ({"a": [("b", Fraction(1))], "b": [("a", Fraction(1, 2))]}, "C4"),
        ({"a": [("b", Fraction(1, 2)), ("c", Fraction(1, 2))], "b": [("a", Fraction(1))],
          "c": [("a", Fraction(1, 2)), ("b", Fraction(1, 2))]}, "C1"),
        ({"a": [("b", Fraction(0)), ("c", Fraction(1))], "b": [("a", Fraction(1))], "c": [("a", Fraction(1))]}, "C4"),
    ],
)
def test_validate_tree_flags(rotation, tag):
    t = AngledTree.from_rotation(rotation)
    assert tag in {v.tag for v in validate_tree(t)}


def test_disconnected_is_not_a_tree():
    t = AngledTree(("a", "b"), frozenset(), {"a": (), "b": ()})
    assert {v.tag for v in validate_tree(t)} == {"C1"}


def test_single_vertex_has_no_pseudoaccesses():
    t = AngledTree.single("p")
    assert not validate_tree(t)
    with pytest.raises(ValueError):
        t.pseudoaccess_cycle()


def test_restrict_uses_ambient_angles():
    t = AngledTree.star("s", ["x", "y", "z"], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    r = t.restrict({"s", "x", "z"})
    assert r.angle("s", "x", "z") == Angle(Fraction(3, 4))
    assert not validate_tree(r)


def test_mirror_reverses_order():
    t = AngledTree.star("s", ["x", "y", "z"], [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    m = t.mirror()
    assert m.angle("s", "y", "x") == t.angle("s", "x", "y")
    assert m.next_neighbor("s", "x") == "z"
    assert m.mirror() == t


def test_relabel_preserves_structure():
    t = AngledTree.path_tree(["a", "b", "c"], [Fraction(1, 3)])
    r = t.relabel({"a": "x", "b": "y", "c": "z"})
    assert r.angle("y", "x", "z") == Angle(Fraction(1, 3))
