"""First-return dynamics of a cycle of trees and external arguments.

After the cycle ``u_0 -> ... -> u_{r-1} -> u_0`` is homogenized backwards
from ``u_0``, the composite is a degree-``m`` covering of the extended base
tree onto the original one, and its pseudoaccess map winds ``m`` times.
The pseudoaccess cycle of the extended tree is modelled as a circle of
length ``L = m * N`` (one unit per pseudoaccess); each pseudoaccess is
stretched linearly over the arc of its image.  Fixed points of that
degree-``m`` circle map are the possible zero markings, and arguments are
the unique order-preserving semiconjugacy to multiplication by ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, prod

from .angles import Angle
from .covering import Covering, access_dynamics, compose, homogenize
from .forest import HubbardForest, classify_vertices, validate_forest
from .schema import MappingSchema
from .tree import AngledTree, PseudoAccess, edge, other_end


@dataclass(frozen=True, eq=False)
class CycleContext:
    forest: HubbardForest
    cycle: tuple
    trees: tuple  # trees[i] is the (extended) domain of steps[i]
    base_tree: AngledTree  # original tree at cycle[0], codomain of the last step
    steps: tuple
    embeddings: tuple = ()
    added: tuple = ()

    @property
    def r(self) -> int:
        return len(self.cycle)

    @property
    def m(self) -> int:
        return prod(c.degree() for c in self.steps)

    @property
    def base(self) -> str:
        return self.cycle[0]


def forest_cycle(h: HubbardForest, start: str | None = None) -> tuple:
    cycles = h.schema.cycles()
    if start is None:
        if not cycles:
            raise ValueError("schema has no cycle")
        return tuple(cycles[0])
    for cyc in cycles:
        if start in cyc:
            k = cyc.index(start)
            return tuple(cyc[k:] + cyc[:k])
    raise ValueError(f"schema vertex {start!r} is not periodic")


def homogenize_cycle(h: HubbardForest, start: str | None = None, check: bool = True) -> CycleContext:
    """Make every step of one cycle homogeneous, working backwards from the
    original tree at ``start`` (default: least vertex of the first cycle)."""
    if check:
        problems = validate_forest(h)
        if problems:
            raise ValueError("invalid forest: " + "; ".join(map(str, problems)))
    cycle = forest_cycle(h, start)
    r = len(cycle)
    reserved = set(h.vertices())
    base = h.trees[cycle[0]]
    target = base
    trees = [None] * r
    steps = [None] * r
    embeddings = [None] * r
    added = [()] * r
    for i in range(r - 1, -1, -1):
        cov = h.coverings[cycle[i]].retarget(target)
        res = homogenize(cov, reserved)
        reserved.update(res.added)
        steps[i] = res.extended
        trees[i] = res.extended.domain
        embeddings[i] = res.embedding
        added[i] = res.added
        target = trees[i]
    return CycleContext(h, cycle, tuple(trees), base, tuple(steps), tuple(embeddings), tuple(added))


def return_covering(ctx: CycleContext) -> Covering:
    """Composite of the homogeneous steps: extended base tree onto the
    original base tree, of degree ``m``."""
    c = ctx.steps[0]
    for step in ctx.steps[1:]:
        c = compose(step, c)
    assert c.degree() == ctx.m
    return c


def _rebased(ctx: CycleContext, base: int | None) -> CycleContext:
    if base is None or base % ctx.r == 0:
        return ctx
    return homogenize_cycle(ctx.forest, ctx.cycle[base % ctx.r], check=False)


def return_tree(ctx: CycleContext, base: int | None = None) -> Covering:
    """Self-covering of the extended tree at cycle position ``base``."""
    ctx = _rebased(ctx, base)
    c = return_covering(ctx)
    return c.retarget(ctx.trees[0])


def return_forest(ctx: CycleContext, base: int | None = None) -> HubbardForest:
    ctx = _rebased(ctx, base)
    c = return_tree(ctx)
    u = ctx.base
    schema = MappingSchema((u,), {u: u}, {u: ctx.m - 1})
    return HubbardForest(schema, {u: c.domain}, {u: c})


# circle model -------------------------------------------------------


class _CircleModel:
    def __init__(self, ctx: CycleContext):
        self.ctx = ctx
        self.m = ctx.m
        cov = return_covering(ctx)
        self.cover = cov
        T, B = ctx.trees[0], ctx.base_tree
        self.T, self.B = T, B
        self.classes = classify_vertices(return_forest(ctx))
        if not T.edges:
            self.L = 0
            return
        self.tcycle = T.pseudoaccess_cycle()
        self.tindex = {pa: j for j, pa in enumerate(self.tcycle)}
        self.bcycle = B.pseudoaccess_cycle()
        self.bindex = {pa: k for k, pa in enumerate(self.bcycle)}
        L, N = len(self.tcycle), len(self.bcycle)
        assert L == self.m * N, "extended tree has the wrong number of pseudoaccesses"
        self.L, self.N = L, N
        self.start = []
        self.simple = []
        for b in self.bcycle:
            v = b.vertex
            first = T.direction(v, other_end(b.edge_in, v))
            nxt = T.next_neighbor(v, first)
            self.start.append(self.tindex[PseudoAccess(v, edge(v, first), edge(v, nxt))])
            self.simple.append(nxt == T.direction(v, other_end(b.edge_out, v)))
        self.length = [(self.start[(k + 1) % N] - self.start[k]) % L or L for k in range(N)]
        assert sum(self.length) == L, "blocks of the base tree do not tile the extended cycle"
        sigma = access_dynamics(cov)
        self.sigma = [self.bindex[sigma[pa]] for pa in self.tcycle]
        S = [self.start[self.sigma[0]]]
        for j in range(L - 1):
            S.append(S[-1] + self.length[self.sigma[j]])
        assert S[-1] + self.length[self.sigma[-1]] - S[0] == self.m * L
        self.S = S

    # lift of the circle map on [0, L)
    def lift(self, x: Fraction) -> Fraction:
        L = self.L
        shift, y = divmod(x, L)
        j = int(floor(y))
        return self.S[j] + (y - j) * self.length[self.sigma[j]] + shift * self.m * L

    def is_julia_access(self, j: int) -> bool:
        return self.classes[self.tcycle[j].vertex].kind == "julia"

    def fixed_components(self) -> list:
        """Fixed components as ``(position, kind, j)``; kind is ``"piece"``
        for a whole fixed pseudoaccess, ``"point"`` otherwise."""
        L = self.L
        found = []
        identity = [False] * L
        for j in range(L):
            lo = self.S[j] - j
            ln = self.length[self.sigma[j]]
            if ln == 1:
                if lo % L == 0:
                    identity[j] = True
                continue
            k = ceil(Fraction(lo, L))
            while k * L < lo + ln - 1:
                found.append((j + Fraction(k * L - lo, ln - 1), "point", j))
                k += 1
        merged = []
        for pos, kind, j in found:
            if pos == j and identity[(j - 1) % L]:
                continue
            merged.append((Fraction(pos), kind, j))
        for j in range(L):
            if identity[j] and not identity[(j - 1) % L]:
                merged.append((Fraction(j), "piece", j))
        return sorted(merged)


@dataclass(frozen=True)
class Anchor:
    index: int
    kind: str  # "access", "gap" or "fatou"
    position: Fraction | None
    access: PseudoAccess | None
    location: str
    fixed_argument: Angle

    @property
    def flagged(self) -> bool:
        return self.kind != "access"

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "position": None if self.position is None else str(self.position),
            "access": None if self.access is None else self.access.label(),
            "location": self.location,
            "fixed_argument": str(self.fixed_argument),
            "flagged": self.flagged,
        }


def anchor_choices(ctx: CycleContext, base: int | None = None) -> list:
    """The ``m - 1`` fixed points of the return dynamics usable as zero ray."""
    ctx = _rebased(ctx, base)
    model = _CircleModel(ctx)
    m = ctx.m
    if model.L == 0:
        (v,) = ctx.trees[0].vertices
        return [
            Anchor(i, "fatou", None, None, f"sector {i} at {v}", Angle(Fraction(i, m - 1)))
            for i in range(m - 1)
        ]
    comps = model.fixed_components()
    if len(comps) != m - 1:
        raise AssertionError(f"found {len(comps)} fixed components, expected {m - 1}")
    out = []
    for pos, kind, j in comps:
        pa = model.tcycle[j]
        b = model.sigma[j]
        fixed_access = (
            pos == j and model.start[b] == j and model.simple[b] and model.is_julia_access(j)
        )
        if kind == "piece" or fixed_access:
            out.append(Anchor(len(out), "access", pos, pa, f"at {pa.label()}", Angle(0)))
        elif pos == j:
            prev = model.tcycle[(j - 1) % model.L]
            out.append(Anchor(len(out), "gap", pos, None, f"between {prev.label()} and {pa.label()}", Angle(0)))
        else:
            out.append(Anchor(len(out), "gap", pos, None, f"inside {pa.label()}", Angle(0)))
    # the k-th fixed point counted from anchor 0 has argument k/(m-1)
    return [
        Anchor(a.index, a.kind, a.position, a.access, a.location, Angle(Fraction(a.index, m - 1)))
        for a in out
    ]


@dataclass(frozen=True)
class ArgumentAssignment:
    anchor: Anchor
    m: int
    cycle: tuple
    trees: tuple
    arguments: tuple  # per cycle position: {PseudoAccess: Angle}
    unresolved: tuple = ()
    digits: dict = field(default_factory=dict)

    def at(self, position: int = 0) -> dict:
        return self.arguments[position]

    def to_json(self) -> dict:
        rows = []
        for i, table in enumerate(self.arguments):
            for pa in sorted(table, key=lambda p: p.label()):
                rows.append({"tree": self.cycle[i], "position": i, "access": pa.label(),
                             "vertex": pa.vertex, "argument": str(table[pa])})
        return {
            "degree": self.m,
            "cycle": list(self.cycle),
            "anchor": self.anchor.to_json(),
            "arguments": rows,
            "unresolved": [
                {"position": i, "access": pa.label()} for i, pas in enumerate(self.unresolved) for pa in pas
            ],
        }


def external_arguments(ctx: CycleContext, anchor: Anchor | int = 0, base: int | None = None) -> ArgumentAssignment:
    """Arguments of the Julia accesses of every tree in the cycle, cut at
    the chosen zero marking of the base tree."""
    ctx = _rebased(ctx, base)
    anchors = anchor_choices(ctx)
    if isinstance(anchor, int):
        if not 0 <= anchor < len(anchors):
            raise ValueError(f"anchor index {anchor} out of range (0..{len(anchors) - 1})")
        anchor = anchors[anchor]
    model = _CircleModel(ctx)
    m, r = ctx.m, ctx.r
    empty = tuple({} for _ in range(r))
    if model.L == 0:
        return ArgumentAssignment(anchor, m, ctx.cycle, ctx.trees, empty, tuple(() for _ in range(r)))
    L = model.L
    x0 = anchor.position
    k0 = (model.lift(x0) - x0) / L
    assert k0.denominator == 1

    digits = {}
    nxt = {}
    for j in range(L):
        if not model.is_julia_access(j):
            continue
        b = model.sigma[j]
        y = j + Fraction(1, 2 * model.length[b])
        g = model.lift(y if y >= x0 else y + L)
        c = floor((g - x0 - k0 * L) / L)
        if not 0 <= c < m:
            raise ValueError(f"digit {c} out of range at {model.tcycle[j].label()}")
        digits[j] = c
        nxt[j] = model.start[b] if model.simple[b] else None

    theta = {}
    bad = set()
    for j in sorted(digits):
        if j in theta or j in bad:
            continue
        seq = []
        index = {}
        x = j
        while x is not None and x not in theta and x not in bad and x not in index:
            index[x] = len(seq)
            seq.append(x)
            x = nxt.get(x)
        if x is None or x in bad or (x not in theta and x not in digits):
            bad.update(seq)
            continue
        if x in index:
            cyc = seq[index[x]:]
            q = len(cyc)
            num = sum(digits[a] * m ** (q - 1 - i) for i, a in enumerate(cyc))
            val = Fraction(num, m ** q - 1)
            theta[cyc[0]] = val - floor(val)
            for a in reversed(cyc[1:]):
                nxt_val = theta[cyc[0]] if nxt[a] == cyc[0] else theta[nxt[a]]
                theta[a] = (digits[a] + nxt_val) / m
            seq = seq[: index[x]]
        for a in reversed(seq):
            theta[a] = (digits[a] + theta[nxt[a]]) / m

    base_table = {model.tcycle[j]: Angle(v) for j, v in theta.items()}
    unresolved0 = tuple(sorted((model.tcycle[j] for j in bad), key=lambda p: p.label()))

    tables = [base_table]
    unresolved = [unresolved0]
    fclasses = classify_vertices(ctx.forest)
    for i in range(1, r):
        step = ctx.steps[i - 1]
        sig = access_dynamics(step)
        d = step.degree()
        table = {}
        for a, val in tables[i - 1].items():
            img = sig[a]
            new = val * d
            if img in table and table[img] != new:
                raise ValueError(f"inconsistent arguments at {img.label()}")
            table[img] = new
        tables.append(table)
        tree = ctx.trees[i]
        julia = [
            pa
            for pa in (tree.pseudoaccess_cycle() if tree.edges else [])
            if _is_julia(pa.vertex, fclasses, ctx)
        ]
        unresolved.append(tuple(sorted((pa for pa in julia if pa not in table), key=lambda p: p.label())))
    return ArgumentAssignment(
        anchor, m, ctx.cycle, ctx.trees, tuple(tables), tuple(unresolved),
        {model.tcycle[j]: c for j, c in digits.items()},
    )


def _is_julia(v: str, fclasses: dict, ctx: CycleContext) -> bool:
    if v in fclasses:
        return fclasses[v].kind == "julia"
    # extension vertices: Julia exactly when their image is
    for step in ctx.steps:
        if v in step.vertex_map:
            return _is_julia(step.vertex_map[v], fclasses, ctx)
    raise KeyError(v)


def return_access_map(ctx: CycleContext) -> dict:
    """Pseudoaccess map of the return covering (extended base onto base)."""
    return access_dynamics(return_covering(ctx))
