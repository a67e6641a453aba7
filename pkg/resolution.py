"""Resolved graphs of a layered diagram and their relation families.

A resolution index has one bit per crossing layer. Bit 0 singularizes a
positive crossing and smooths a negative one; bit 1 does the opposite.

Regions are computed from a grid of cells: cell (k, g) is the stretch of
gap g (between the strands at distance g and g+1 from the braid axis) that
meets layer boundary k. Gap 0 touches the axis and gap b is the exterior.
Cell (k, g) continues into cell (k+1, g) through layer k unless that layer
holds a singularized crossing in gap g. The two regions next to the
basepoint (the exterior and the gap b-1 region holding cell (0, b-1)) are not
elementary regions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from braid import LayeredBraidDiagram
from config import DEFAULT_SUBSET_CAP
from polyalg import FieldElem, MultiPoly


class SubsetCapExceeded(RuntimeError):
    pass


class Provenance(str, Enum):
    CYCLE = "cycle"
    REGION = "region"
    SUBSET = "subset"
    LOCAL_LINEAR = "local-linear"
    LOCAL_QUADRATIC = "local-quadratic"
    CLOSED_COMPONENT = "closed-component"


Cell = Tuple[int, int]


@dataclass(frozen=True)
class FourValent:
    layer: int
    position: int  # left position of the crossing
    gap: int
    out_edges: Tuple[int, int]  # (a, b): top-left, top-right
    in_edges: Tuple[int, int]  # (c, d): bottom-left, bottom-right

    weight = 2

    @property
    def inner_distance(self) -> int:
        return self.gap


@dataclass(frozen=True)
class Bivalent:
    layer: int
    position: int
    distance: int
    in_edge: int
    out_edge: int
    smoothing: bool = False

    weight = 1

    @property
    def in_edges(self) -> Tuple[int]:
        return (self.in_edge,)

    @property
    def out_edges(self) -> Tuple[int]:
        return (self.out_edge,)

    @property
    def inner_distance(self) -> int:
        return self.distance


Vertex = Union[FourValent, Bivalent]


@dataclass(frozen=True)
class ResolvedGraph:
    diagram: LayeredBraidDiagram
    index: Tuple[int, ...]
    vertices: Tuple[Vertex, ...]
    tails: Tuple[Optional[int], ...]  # per edge label; None is the basepoint
    heads: Tuple[Optional[int], ...]

    @property
    def nvars(self) -> int:
        return self.diagram.num_edges

    @property
    def singular_points(self) -> int:
        return sum(1 for v in self.vertices if isinstance(v, FourValent))

    def singular_layers(self) -> FrozenSet[int]:
        return frozenset(v.layer for v in self.vertices if isinstance(v, FourValent))


@dataclass(frozen=True)
class Relation:
    """t^weight * prod(x_out) - prod(x_in), or t*(sum x_out) - sum x_in when ``summed``."""

    provenance: Provenance
    weight: int
    w_out: Tuple[int, ...] = ()
    w_in: Tuple[int, ...] = ()
    summed: bool = False
    source: str = ""

    def key(self) -> Tuple:
        return (self.summed, self.weight, self.w_out, self.w_in)

    def to_poly(self, nvars: int) -> MultiPoly:
        t = FieldElem.t(self.weight)
        if self.summed:
            out = MultiPoly.zero(nvars)
            for e in self.w_out:
                out = out + MultiPoly.variable(e, nvars, t)
            for e in self.w_in:
                out = out + MultiPoly.variable(e, nvars)
            return out
        # minus is plus in characteristic 2
        return MultiPoly.product(self.w_out, nvars, t) + MultiPoly.product(self.w_in, nvars)

    @property
    def degree(self) -> int:
        return len(self.w_out)

    def __str__(self) -> str:
        tpow = "" if self.weight == 0 else "t*" if self.weight == 1 else f"t^{self.weight}*"
        if self.summed:
            lhs = " + ".join(f"x{e}" for e in self.w_out)
            rhs = " + ".join(f"x{e}" for e in self.w_in)
            return f"{tpow}({lhs}) - ({rhs})"
        lhs = "*".join(f"x{e}" for e in self.w_out)
        rhs = "*".join(f"x{e}" for e in self.w_in) or "1"
        if not lhs:
            return f"{tpow[:-1] or '1'} - {rhs}"
        return f"{tpow}{lhs} - {rhs}"


@dataclass(frozen=True)
class Region:
    kind: str  # "elementary" or "coherent"
    name: str
    members: Tuple[str, ...]
    boundary_vertices: Tuple[int, ...]
    weight: int
    gap: Optional[int] = None
    cells: FrozenSet[Cell] = frozenset()


@dataclass(frozen=True)
class RegionDecomposition:
    graph: ResolvedGraph
    regions: Tuple[Region, ...]
    cell_region: Dict[Cell, Optional[str]] = field(compare=False)
    below: Dict[str, FrozenSet[str]] = field(compare=False)  # strictly smaller regions

    def less(self, a: str, b: str) -> bool:
        return a in self.below[b]

    def by_name(self, name: str) -> Region:
        return next(r for r in self.regions if r.name == name)


# ---------------------------------------------------------------------------
# Resolutions
# ---------------------------------------------------------------------------


def singular_index(D: LayeredBraidDiagram) -> Tuple[int, ...]:
    """Index singularizing every crossing."""
    return tuple(0 if D.layers[k].sign > 0 else 1 for k in D.crossing_layers)


def all_indices(D: LayeredBraidDiagram) -> List[Tuple[int, ...]]:
    """Every index, ordered by homological grading then lexicographically."""
    k = len(D.crossing_layers)
    return sorted(itertools.product((0, 1), repeat=k), key=lambda i: (sum(i), i))


def parse_index(text: str, D: LayeredBraidDiagram) -> Tuple[int, ...]:
    bits = text.strip()
    if len(bits) != len(D.crossing_layers) or set(bits) - {"0", "1"}:
        raise ValueError(f"resolution {text!r} must be {len(D.crossing_layers)} bits of 0/1")
    return tuple(int(c) for c in bits)


def resolve(D: LayeredBraidDiagram, I: Sequence[int]) -> ResolvedGraph:
    I = tuple(int(x) for x in I)
    if len(I) != len(D.crossing_layers) or any(x not in (0, 1) for x in I):
        raise ValueError(f"index {I} needs {len(D.crossing_layers)} bits")
    bit_of = dict(zip(D.crossing_layers, I))
    b = D.strands

    vertices: List[Vertex] = []
    for layer in D.layers:
        k = layer.index
        if layer.crossing is not None:
            c = layer.crossing
            singular = (bit_of[k] == 0) == (layer.sign > 0)
            if singular:
                vertices.append(
                    FourValent(
                        k,
                        c,
                        b - c,
                        (D.label(k + 1, c), D.label(k + 1, c + 1)),
                        (D.label(k, c), D.label(k, c + 1)),
                    )
                )
            else:
                for p in (c, c + 1):
                    vertices.append(Bivalent(k, p, D.distance(p), D.label(k, p), D.label(k + 1, p), True))
        for p in layer.bivalent:
            vertices.append(Bivalent(k, p, D.distance(p), D.label(k, p), D.label(k + 1, p)))
    vertices.sort(key=lambda v: (v.layer, v.position))

    tails: List[Optional[int]] = [None] * D.num_edges
    heads: List[Optional[int]] = [None] * D.num_edges
    for vid, v in enumerate(vertices):
        for e in v.out_edges:
            tails[e] = vid
        for e in v.in_edges:
            heads[e] = vid
    return ResolvedGraph(D, I, tuple(vertices), tuple(tails), tuple(heads))


def dump_resolution(G: ResolvedGraph) -> str:
    """Stable adjacency table: one line per edge, then one per vertex."""
    name = lambda vid: "*" if vid is None else f"v{vid}"  # noqa: E731
    lines = [f"# {G.diagram.word}  I={''.join(map(str, G.index))}"]
    for e in range(G.nvars):
        lines.append(f"x{e}: {name(G.tails[e])} -> {name(G.heads[e])}")
    for vid, v in enumerate(G.vertices):
        if isinstance(v, FourValent):
            lines.append(
                f"v{vid}: 4-valent s{v.layer} in=x{v.in_edges[0]},x{v.in_edges[1]} out=x{v.out_edges[0]},x{v.out_edges[1]}"
            )
        else:
            kind = "smoothing" if v.smoothing else "bivalent"
            lines.append(f"v{vid}: {kind} s{v.layer} in=x{v.in_edge} out=x{v.out_edge}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Local relations
# ---------------------------------------------------------------------------


def local_relations(G: ResolvedGraph) -> List[Relation]:
    out: List[Relation] = []
    for vid, v in enumerate(G.vertices):
        src = f"v{vid}"
        if isinstance(v, FourValent):
            out.append(Relation(Provenance.LOCAL_LINEAR, 1, v.out_edges, v.in_edges, summed=True, source=src))
            out.append(Relation(Provenance.LOCAL_QUADRATIC, 2, v.out_edges, v.in_edges, source=src))
        else:
            out.append(Relation(Provenance.LOCAL_LINEAR, 1, (v.out_edge,), (v.in_edge,), source=src))
    return out


# ---------------------------------------------------------------------------
# Subsets
# ---------------------------------------------------------------------------


def relation_for_subset(
    G: ResolvedGraph, V: Iterable[int], provenance: Provenance = Provenance.SUBSET, source: str = ""
) -> Relation:
    """t^w(V) * (edges leaving V) - (edges entering V); the basepoint is outside V."""
    V = frozenset(V)
    weight = sum(G.vertices[v].weight for v in V)
    w_out = tuple(e for e in range(G.nvars) if G.tails[e] in V and G.heads[e] not in V)
    w_in = tuple(e for e in range(G.nvars) if G.heads[e] in V and G.tails[e] not in V)
    return Relation(provenance, weight, w_out, w_in, source=source or _subset_name(V))


def _subset_name(V: Iterable[int]) -> str:
    return "{" + ",".join(f"v{v}" for v in sorted(V)) + "}"


def outermost_relation(G: ResolvedGraph) -> Relation:
    """t^w(D) x_n - x_0, from the set of all vertices."""
    return relation_for_subset(G, range(len(G.vertices)), source="all vertices")


def _neighbours(G: ResolvedGraph) -> List[Set[int]]:
    adj: List[Set[int]] = [set() for _ in G.vertices]
    for e in range(G.nvars):
        t, h = G.tails[e], G.heads[e]
        if t is not None and h is not None and t != h:
            adj[t].add(h)
            adj[h].add(t)
    return adj


def _has_directed_cycle(G: ResolvedGraph, V: FrozenSet[int]) -> bool:
    indeg = {v: 0 for v in V}
    succ: Dict[int, List[int]] = {v: [] for v in V}
    for e in range(G.nvars):
        t, h = G.tails[e], G.heads[e]
        if t in V and h in V:
            if t == h:
                return True
            succ[t].append(h)
            indeg[h] += 1
    ready = [v for v in V if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for h in succ[v]:
            indeg[h] -= 1
            if indeg[h] == 0:
                ready.append(h)
    return seen < len(V)


def _connected_subsets(G: ResolvedGraph, cap: int) -> Iterator[FrozenSet[int]]:
    adj = _neighbours(G)
    seen: Set[FrozenSet[int]] = set()
    stack = [frozenset([v]) for v in range(len(G.vertices))]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        if len(seen) > cap:
            raise SubsetCapExceeded(f"more than {cap} connected vertex subsets")
        yield s
        frontier = set().union(*(adj[v] for v in s)) - s
        stack.extend(s | {u} for u in frontier)


def nonlocal_from_subsets(G: ResolvedGraph, minimal: bool = False, cap: int = DEFAULT_SUBSET_CAP) -> List[Relation]:
    """Relations of vertex subsets.

    With ``minimal`` only connected subsets containing an oriented cycle are
    used; otherwise every non-empty subset, refused past ``cap`` subsets.
    """
    n = len(G.vertices)
    if minimal:
        subsets = [V for V in _connected_subsets(G, cap) if _has_directed_cycle(G, V)]
        subsets.sort(key=lambda V: (len(V), sorted(V)))
    else:
        if 2 ** n - 1 > cap:
            raise SubsetCapExceeded(f"{2 ** n - 1} subsets of {n} vertices exceed cap {cap}")
        subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(range(n), r)]
    return [relation_for_subset(G, V) for V in subsets]


# ---------------------------------------------------------------------------
# Closed components
# ---------------------------------------------------------------------------


def connected_components(G: ResolvedGraph) -> List[FrozenSet[int]]:
    adj = _neighbours(G)
    comps: List[FrozenSet[int]] = []
    seen: Set[int] = set()
    for start in range(len(G.vertices)):
        if start in seen:
            continue
        comp, todo = set(), [start]
        while todo:
            v = todo.pop()
            if v in comp:
                continue
            comp.add(v)
            todo.extend(adj[v] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def detect_closed_components(G: ResolvedGraph) -> List[Relation]:
    """t^k - 1 for each component not touching the basepoint."""
    anchored = {G.heads[0], G.tails[G.nvars - 1]}
    out = []
    for comp in connected_components(G):
        if comp & anchored:
            continue
        weight = sum(G.vertices[v].weight for v in comp)
        out.append(Relation(Provenance.CLOSED_COMPONENT, weight, (), (), source=_subset_name(comp)))
    return out


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


def _find(parent: Dict[Cell, Cell], c: Cell) -> Cell:
    while parent[c] != c:
        parent[c] = parent[parent[c]]
        c = parent[c]
    return c


def _vertex_cells(G: ResolvedGraph, v: Vertex) -> Tuple[Cell, ...]:
    L = len(G.diagram.layers)
    if isinstance(v, FourValent):
        return ((v.layer, v.gap - 1), (v.layer, v.gap + 1), (v.layer, v.gap), ((v.layer + 1) % L, v.gap))
    return ((v.layer, v.distance - 1), (v.layer, v.distance))


def elementary_regions(G: ResolvedGraph) -> RegionDecomposition:
    """Elementary regions named E1.. by distance from the axis, with their partial order."""
    D = G.diagram
    b, L = D.strands, len(D.layers)
    blocked = {(v.layer, v.gap) for v in G.vertices if isinstance(v, FourValent)}

    cells = [(k, g) for k in range(L) for g in range(b + 1)]
    parent = {c: c for c in cells}
    for k, g in cells:
        if (k, g) not in blocked:
            ra, rb = _find(parent, (k, g)), _find(parent, ((k + 1) % L, g))
            if ra != rb:
                parent[ra] = rb

    groups: Dict[Cell, List[Cell]] = {}
    for c in cells:
        groups.setdefault(_find(parent, c), []).append(c)
    excluded = {_find(parent, (0, b)), _find(parent, (0, b - 1))}

    comps = [sorted(members) for root, members in groups.items() if root not in excluded]
    # within one gap: regions not meeting boundary 0 first, then by lowest boundary
    comps.sort(key=lambda cs: (cs[0][1], any(k == 0 for k, _ in cs), min(k for k, _ in cs)))

    cell_region: Dict[Cell, Optional[str]] = {c: None for c in cells}
    for i, cs in enumerate(comps):
        for c in cs:
            cell_region[c] = f"E{i + 1}"

    covers: Dict[str, Set[str]] = {f"E{i + 1}": set() for i in range(len(comps))}
    for k in range(L):
        for g in range(b - 1):
            lo, hi = cell_region[(k, g)], cell_region[(k, g + 1)]
            if lo and hi:
                covers[hi].add(lo)
    below: Dict[str, FrozenSet[str]] = {}
    for i in range(len(comps)):
        name = f"E{i + 1}"
        seen: Set[str] = set()
        todo = list(covers[name])
        while todo:
            r = todo.pop()
            if r not in seen:
                seen.add(r)
                todo.extend(covers[r])
        below[name] = frozenset(seen)

    regions = []
    for i, cs in enumerate(comps):
        name = f"E{i + 1}"
        vids = _closure(G, {name}, cell_region)
        regions.append(
            Region(
                "elementary",
                name,
                (name,),
                vids,
                sum(G.vertices[v].weight for v in vids),
                gap=cs[0][1],
                cells=frozenset(cs),
            )
        )
    return RegionDecomposition(G, tuple(regions), cell_region, below)


def _closure(G: ResolvedGraph, names: Set[str], cell_region: Dict[Cell, Optional[str]]) -> Tuple[int, ...]:
    return tuple(
        vid for vid, v in enumerate(G.vertices) if any(cell_region.get(c) in names for c in _vertex_cells(G, v))
    )


def _region_order(name: str) -> int:
    return int(name[1:])


def _down_sets(dec: RegionDecomposition) -> List[FrozenSet[str]]:
    names = [r.name for r in sorted(dec.regions, key=lambda r: (r.gap, _region_order(r.name)))]
    out: List[FrozenSet[str]] = []

    def _grow(i: int, chosen: FrozenSet[str]) -> None:
        if i == len(names):
            if chosen:
                out.append(chosen)
            return
        _grow(i + 1, chosen)
        if dec.below[names[i]] <= chosen:
            _grow(i + 1, chosen | {names[i]})

    _grow(0, frozenset())
    out.sort(key=lambda s: (len(s), sorted(_region_order(n) for n in s)))
    return out


def _coherent(dec: RegionDecomposition, members: FrozenSet[str]) -> Region:
    ordered = tuple(sorted(members, key=_region_order))
    vids = _closure(dec.graph, set(members), dec.cell_region)
    return Region("coherent", "∪".join(ordered), ordered, vids, sum(dec.graph.vertices[v].weight for v in vids))


def redundant_regions(dec: RegionDecomposition) -> List[str]:
    """Coherent regions R with an elementary E, R∪E coherent, adding only bivalent closure vertices."""
    out = []
    for members in _down_sets(dec):
        base = set(_closure(dec.graph, set(members), dec.cell_region))
        for r in dec.regions:
            if r.name in members or not dec.below[r.name] <= members:
                continue
            extra = set(_closure(dec.graph, set(members) | {r.name}, dec.cell_region)) - base
            if all(isinstance(dec.graph.vertices[v], Bivalent) for v in extra):
                out.append(_coherent(dec, members).name)
                break
    return out


def coherent_regions(G: ResolvedGraph, minimal: bool = False) -> List[Region]:
    """Non-empty down-sets of elementary regions; ``minimal`` drops redundant ones."""
    dec = elementary_regions(G)
    regions = [_coherent(dec, m) for m in _down_sets(dec)]
    if minimal:
        drop = set(redundant_regions(dec))
        regions = [r for r in regions if r.name not in drop]
    return regions


def nonlocal_from_regions(G: ResolvedGraph, minimal: bool = False) -> List[Relation]:
    return [
        relation_for_subset(G, r.boundary_vertices, Provenance.REGION, source=r.name)
        for r in coherent_regions(G, minimal=minimal)
    ]


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------


def directed_cycles(G: ResolvedGraph) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Coherently oriented cycles avoiding the basepoint, as (edges, vertices).

    Each one crosses every layer boundary once; ``edges[k]`` is its edge at
    boundary k.
    """
    D = G.diagram
    L = len(D.layers)
    found = []

    def _walk(start: int, edges: List[int], verts: List[int]) -> None:
        v = G.heads[edges[-1]]
        if v is None:
            return
        for e in G.vertices[v].out_edges:
            if len(edges) == L:
                if e == start:
                    found.append((tuple(edges), tuple(verts + [v])))
            else:
                _walk(start, edges + [e], verts + [v])

    for p in range(2, D.strands + 1):
        start = D.label(0, p)
        _walk(start, [start], [])
    return found


def relation_for_cycle(G: ResolvedGraph, edges: Sequence[int], verts: Sequence[int]) -> Relation:
    """Relation of the region a cycle bounds on the braid-axis side."""
    D = G.diagram
    b = D.strands
    edge_at = {e.label: e for e in D.edges}

    def _dist(label: int) -> Tuple[int, int]:
        e = edge_at[label]
        return (0, b) if label == D.n else (e.boundary, e.distance)

    cut = [_dist(e)[1] for e in edges]  # distance of the cycle at each boundary
    on_cycle = set(verts)
    cycle_edges = set(edges)

    weight = sum(v.weight for v in G.vertices if v.inner_distance <= cut[v.layer])
    w_out, w_in = [], []
    for e in range(G.nvars):
        if e in cycle_edges:
            continue
        t, h = G.tails[e], G.heads[e]
        if (t in on_cycle) == (h in on_cycle):
            continue
        k, d = _dist(e)
        if d <= cut[k]:
            continue
        (w_out if t in on_cycle else w_in).append(e)
    name = "Z[" + ",".join(f"x{e}" for e in edges) + "]"
    return Relation(Provenance.CYCLE, weight, tuple(sorted(w_out)), tuple(sorted(w_in)), source=name)


def nonlocal_from_cycles(G: ResolvedGraph) -> List[Relation]:
    return [relation_for_cycle(G, edges, verts) for edges, verts in directed_cycles(G)]


def nonlocal_relations(
    G: ResolvedGraph, method: str = "regions", minimal: bool = False, cap: int = DEFAULT_SUBSET_CAP
) -> List[Relation]:
    if method == "regions":
        return nonlocal_from_regions(G, minimal=minimal)
    if method == "cycles":
        return nonlocal_from_cycles(G)
    if method == "subsets":
        return nonlocal_from_subsets(G, minimal=minimal, cap=cap)
    raise ValueError(f"unknown relation method {method!r}")


def relation_polys(relations: Iterable[Relation], nvars: int) -> List[MultiPoly]:
    return [r.to_poly(nvars) for r in relations]
