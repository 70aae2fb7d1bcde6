from __future__ import annotations

import random
from fractions import Fraction

import pytest
from generators import random_covering

from hubbard_forest.angles import Angle
from hubbard_forest.covering import (
    Covering,
    access_dynamics,
    compose,
    covering_degree,
    homogenize,
    identity_covering,
    is_homogeneous,
    preimage_count,
    validate_covering,
)
from hubbard_forest.forest import planar_isomorphisms
from hubbard_forest.tree import AngledTree, validate_tree

H = Fraction(1, 2)


def star_example():
    cod = AngledTree.star("c", ["a", "b"], [H, H])
    dom = AngledTree.path_tree(["v", "w"])
    return Covering(dom, cod, {"v": "c", "w": "a"}, {"v": 2, "w": 1})


def test_identity_is_valid_and_homogeneous():
    t = AngledTree.star("s", ["x", "y", "z"])
    c = identity_covering(t)
    assert validate_covering(c) == []
    assert covering_degree(c) == 1
    assert is_homogeneous(c)
    assert all(preimage_count(c, v) == 1 for v in t.vertices)


def test_adjacent_collapse_is_rejected():
    t = AngledTree.path_tree(["a", "b"])
    c = Covering(t, t, {"a": "a", "b": "a"}, {"a": 1, "b": 1})
    assert [v.tag for v in validate_covering(c)] == ["C3"]


def test_doubling_a_quarter_gap():
    cod = AngledTree.star("c", ["a", "b"], [H, H])
    dom = AngledTree.star("v", ["x", "y"], [Fraction(1, 4), Fraction(3, 4)])
    c = Covering(dom, cod, {"v": "c", "x": "a", "y": "b"}, {"v": 2, "x": 1, "y": 1})
    assert validate_covering(c) == []


def test_angle_mismatch_is_c4():
    cod = AngledTree.star("c", ["a", "b"], [H, H])
    dom = AngledTree.star("v", ["x", "y"], [Fraction(1, 3), Fraction(2, 3)])
    c = Covering(dom, cod, {"v": "c", "x": "a", "y": "b"}, {"v": 2, "x": 1, "y": 1})
    assert {v.tag for v in validate_covering(c)} == {"C4"}


@pytest.mark.parametrize("deltas, n", [({}, 1), ({"a": 2}, 2), ({"a": 2, "b": 3}, 4)])
def test_degree_formula(deltas, n):
    t = AngledTree.path_tree(["a", "b", "c"])
    c = Covering(t, t, {v: v for v in t.vertices}, {v: deltas.get(v, 1) for v in t.vertices})
    assert covering_degree(c) == n


def test_preimage_count_zero_and_unknown():
    c = star_example()
    assert preimage_count(c, "b") == 0
    assert not is_homogeneous(c)
    with pytest.raises(KeyError):
        preimage_count(c, "nowhere")


def test_worked_star_extension():
    res = homogenize(star_example())
    ext = res.extended
    t = ext.domain
    assert len(t.vertices) == 5
    order = [t.angle("v", "w", n) for n in t.neighbors("v")]
    assert sorted(order) == [Angle(0), Angle(Fraction(1, 4)), Angle(H), Angle(Fraction(3, 4))]
    by_angle = {t.angle("v", "w", n).value: ext.vertex_map[n] for n in t.neighbors("v")}
    assert by_angle == {0: "a", Fraction(1, 4): "b", H: "a", Fraction(3, 4): "b"}
    assert [preimage_count(ext, x) for x in ("c", "a", "b")] == [2, 2, 2]
    assert len(t.pseudoaccess_cycle()) == 8
    assert all(ext.local_degree[x] == 1 for x in res.added)


def test_access_dynamics_two_to_one():
    ext = homogenize(star_example()).extended
    sigma = access_dynamics(ext)
    assert len(sigma) == 8
    counts = {}
    for img in sigma.values():
        counts[img] = counts.get(img, 0) + 1
    assert sorted(counts.values()) == [2, 2, 2, 2]
    # winding: steps along the codomain cycle over one domain traversal
    dcyc = ext.domain.pseudoaccess_cycle()
    ccyc = ext.codomain.pseudoaccess_cycle()
    idx = {pa: i for i, pa in enumerate(ccyc)}
    steps = sum((idx[sigma[b]] - idx[sigma[a]]) % len(ccyc) for a, b in zip(dcyc, dcyc[1:] + dcyc[:1]))
    assert steps == 2 * len(ccyc)


def test_access_dynamics_rejects_non_homogeneous():
    with pytest.raises(ValueError):
        access_dynamics(star_example())


def test_identity_access_dynamics():
    t = AngledTree.star("s", ["x", "y", "z"])
    sigma = access_dynamics(identity_covering(t))
    assert all(k == v for k, v in sigma.items())


def test_subdivision_of_long_images():
    cod = AngledTree.path_tree(["a", "b", "c"], [Fraction(1, 3)])
    dom = AngledTree.path_tree(["x", "y"])
    c = Covering(dom, cod, {"x": "a", "y": "c"}, {"x": 1, "y": 1})
    res = homogenize(c)
    assert len(res.subdivision) == 1
    (path,) = res.subdivision.values()
    assert len(path) == 2
    assert validate_covering(res.extended) == []
    assert res.extended.is_homogeneous()


def test_extension_of_homogeneous_is_trivial():
    ext = homogenize(star_example()).extended
    again = homogenize(ext)
    assert again.added == () and again.subdivision == {}
    assert again.extended == ext


def test_homogenize_rejects_invalid():
    t = AngledTree.path_tree(["a", "b"])
    with pytest.raises(ValueError):
        homogenize(Covering(t, t, {"a": "a", "b": "a"}, {"a": 1, "b": 1}))


def test_random_extensions():
    rng = random.Random(3)
    for _ in range(60):
        c = random_covering(rng)
        res = homogenize(c)
        ext = res.extended
        n = c.degree()
        assert validate_tree(ext.domain) == [] and validate_covering(ext) == []
        assert ext.degree() == n and ext.is_homogeneous()
        assert len(ext.domain.vertices) + n - 1 == n * len(c.codomain.vertices)
        for v in c.domain.vertices:
            assert ext.vertex_map[v] == c.vertex_map[v]
            assert ext.local_degree[v] == c.local_degree[v]
        # canonical: extending a second time changes nothing
        assert homogenize(ext).added == ()
        # a homogeneous degree-one covering is a copy of its codomain
        if n == 1:
            assert planar_isomorphisms(ext.domain, ext.codomain)


def test_compose_degree_and_delta_rule():
    cod = AngledTree.star("c", ["a", "b"], [H, H])
    c1 = homogenize(star_example()).extended
    c2 = Covering(cod, cod, {"c": "c", "a": "b", "b": "a"}, {"c": 1, "a": 1, "b": 1})
    out = compose(c2, c1)
    assert out.degree() == 2
    for v in c1.domain.vertices:
        assert out.local_degree[v] == c1.local_degree[v] * c2.local_degree[c1.vertex_map[v]]
        assert out.vertex_map[v] == c2.vertex_map[c1.vertex_map[v]]


def test_compose_requires_homogeneous_first_map():
    c = star_example()
    with pytest.raises(ValueError):
        compose(identity_covering(c.codomain), c)


def test_compose_with_identity():
    c = homogenize(star_example()).extended
    assert compose(identity_covering(c.codomain), c) == c


def test_compose_two_by_three():
    cod = AngledTree.path_tree(["a", "b"])
    seed = Covering(AngledTree.single("p"), cod, {"p": "a"}, {"p": 3})
    c2 = homogenize(seed, set(cod.vertices)).extended
    seed1 = Covering(AngledTree.single("q"), c2.domain, {"q": "p"}, {"q": 2})
    c1 = homogenize(seed1, set(c2.domain.vertices) | set(cod.vertices)).extended
    out = compose(c2, c1)
    assert out.degree() == 6
    assert out.local_degree["q"] == 6
    assert validate_covering(out) == []
