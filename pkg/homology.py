"""Cube of resolutions: vertex algebras, edge maps, gradings and homology.

Alexander gradings are stored doubled everywhere. For a standard monomial
x^e of the algebra at index I:

    A_x2 = -2|e| + (sigma - b + 1) + (-N + sum(I))

with sigma the number of singular points of the resolution and N the number
of negative crossings. Homological grading is sum(I).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from braid import BraidWord, LayeredBraidDiagram, build_layered_diagram
from config import DEFAULT_DEGREE_CAP
from oracle import IntLaurentPoly
from polyalg import (
    FieldElem,
    GroebnerBasis,
    HilbertSeries,
    InfiniteDimensional,
    Monomial,
    MultiPoly,
    buchberger,
    hilbert_series,
    is_finite_dimensional,
    normal_form,
    standard_monomials,
)
from resolution import (
    Relation,
    all_indices,
    detect_closed_components,
    local_relations,
    nonlocal_relations,
    resolve,
)
from utils import append_debug_log, fraction_free_rank, parallel_map


class DifferentialNotSquareZero(RuntimeError):
    pass


class GradingViolation(RuntimeError):
    pass


Index = Tuple[int, ...]
Matrix = Dict[Tuple[int, int], FieldElem]  # (row, col) -> entry


@dataclass(frozen=True)
class AlgebraPresentation:
    index: Index
    relations: Tuple[Relation, ...]
    basis: GroebnerBasis
    reduced: bool
    monomials: Tuple[Monomial, ...]
    singular_points: int
    gradings_x2: Tuple[int, ...]  # internal grading per monomial, without the cube shift
    hilbert: Optional[HilbertSeries] = None
    position: Dict[Monomial, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", {m: i for i, m in enumerate(self.monomials)})

    @property
    def is_zero(self) -> bool:
        return self.basis.is_unit

    @property
    def dimension(self) -> int:
        return len(self.monomials)


def internal_grading_x2(monomial: Monomial, singular_points: int, strands: int) -> int:
    return -2 * sum(monomial) + singular_points - strands + 1


def grading_of(monomial: Monomial, presentation: AlgebraPresentation, D: LayeredBraidDiagram) -> int:
    """Final doubled Alexander grading of ``monomial`` at the presentation's cube vertex."""
    internal = internal_grading_x2(monomial, presentation.singular_points, D.strands)
    return internal - D.negative_crossings + sum(presentation.index)


def final_gradings(D: LayeredBraidDiagram, P: AlgebraPresentation) -> Tuple[int, ...]:
    shift = -D.negative_crossings + sum(P.index)
    return tuple(g + shift for g in P.gradings_x2)


def build_algebra(
    D: LayeredBraidDiagram,
    I: Sequence[int],
    reduced: bool = True,
    method: str = "regions",
    degree_cap: Optional[int] = DEFAULT_DEGREE_CAP,
) -> AlgebraPresentation:
    G = resolve(D, I)
    relations = local_relations(G) + nonlocal_relations(G, method=method) + detect_closed_components(G)
    polys = [r.to_poly(G.nvars) for r in relations]
    if reduced:
        polys.append(MultiPoly.variable(0, G.nvars))
    basis = buchberger(polys, nvars=G.nvars, degree_cap=degree_cap)

    if not reduced:
        return AlgebraPresentation(
            G.index, tuple(relations), basis, False, (), G.singular_points, (), hilbert=hilbert_series(basis)
        )
    if not is_finite_dimensional(basis):
        raise InfiniteDimensional(f"reduced algebra of {D.word} at I={G.index} is not finite-dimensional")
    monomials = tuple(standard_monomials(basis))
    gradings = tuple(internal_grading_x2(m, G.singular_points, D.strands) for m in monomials)
    return AlgebraPresentation(G.index, tuple(relations), basis, True, monomials, G.singular_points, gradings)


def graded_dimensions(D: LayeredBraidDiagram, P: AlgebraPresentation) -> Dict[int, int]:
    """Dimension of ``P`` per final doubled Alexander grading."""
    out: Dict[int, int] = {}
    for a in final_gradings(D, P):
        out[a] = out.get(a, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Edge maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeMap:
    source: Index
    target: Index
    bit: int
    layer: int
    kind: str  # "quotient" or "multiply"
    multiplier: MultiPoly
    shape: Tuple[int, int]  # (target dim, source dim)
    entries: Matrix = field(compare=False)

    def is_zero(self) -> bool:
        return not self.entries


def edge_multiplier(D: LayeredBraidDiagram, layer_index: int) -> MultiPoly:
    """1 for a positive crossing; t*x_a - x_d for a negative one."""
    layer = D.layers[layer_index]
    nvars = D.num_edges
    if layer.sign > 0:
        return MultiPoly.one(nvars)
    c = layer.crossing
    a, d = D.label(layer_index + 1, c), D.label(layer_index, c + 1)
    return MultiPoly.variable(a, nvars, FieldElem.t(1)) + MultiPoly.variable(d, nvars)


def edge_map(D: LayeredBraidDiagram, source: AlgebraPresentation, target: AlgebraPresentation) -> EdgeMap:
    flips = [j for j, (s, t) in enumerate(zip(source.index, target.index)) if s != t]
    if len(flips) != 1 or source.index[flips[0]] != 0:
        raise ValueError(f"{source.index} -> {target.index} is not a cube edge")
    bit = flips[0]
    layer_index = D.crossing_layers[bit]
    f = edge_multiplier(D, layer_index)
    kind = "quotient" if D.layers[layer_index].sign > 0 else "multiply"

    entries: Matrix = {}
    if not source.is_zero and not target.is_zero:
        src_grades = final_gradings(D, source)
        tgt_grades = final_gradings(D, target)
        for col, m in enumerate(source.monomials):
            image = normal_form(MultiPoly.monomial(m) * f, target.basis)
            for mono, c in image.terms.items():
                row = target.position[mono]
                if tgt_grades[row] != src_grades[col]:
                    raise GradingViolation(
                        f"{source.index}->{target.index}: A={src_grades[col]} maps to A={tgt_grades[row]}"
                    )
                entries[(row, col)] = c
    return EdgeMap(
        source.index, target.index, bit, layer_index, kind, f, (target.dimension, source.dimension), entries
    )


def compose(second: Matrix, first: Matrix) -> Matrix:
    """second ∘ first for sparse matrices."""
    by_row: Dict[int, List[Tuple[int, FieldElem]]] = {}
    for (r, c), v in first.items():
        by_row.setdefault(r, []).append((c, v))
    out: Matrix = {}
    for (r, k), v in second.items():
        for c, w in by_row.get(k, ()):
            s = out.get((r, c), FieldElem()) + v * w
            if s:
                out[(r, c)] = s
            else:
                out.pop((r, c), None)
    return out


# ---------------------------------------------------------------------------
# Cube
# ---------------------------------------------------------------------------


@dataclass
class CubeComplex:
    diagram: LayeredBraidDiagram
    reduced: bool
    vertices: Dict[Index, AlgebraPresentation]
    maps: Dict[Tuple[Index, Index], EdgeMap]

    @property
    def negative_crossings(self) -> int:
        return self.diagram.negative_crossings

    def gradings(self, I: Index) -> Tuple[int, ...]:
        return final_gradings(self.diagram, self.vertices[I])

    def generators(self) -> List[Tuple[Index, int, int, int]]:
        """(index, basis position, alexander_x2, homological) for every basis element."""
        out = []
        for I, P in self.vertices.items():
            for pos, a in enumerate(self.gradings(I)):
                out.append((I, pos, a, sum(I)))
        return out


def _flip(I: Index, j: int) -> Index:
    return I[:j] + (1,) + I[j + 1:]


def check_square_zero(C: CubeComplex) -> None:
    for I in C.vertices:
        zeros = [j for j, e in enumerate(I) if e == 0]
        for x, j in enumerate(zeros):
            for k in zeros[x + 1:]:
                Ij, Ik, Ijk = _flip(I, j), _flip(I, k), _flip(_flip(I, j), k)
                via_j = compose(C.maps[(Ij, Ijk)].entries, C.maps[(I, Ij)].entries)
                via_k = compose(C.maps[(Ik, Ijk)].entries, C.maps[(I, Ik)].entries)
                total = dict(via_j)
                for key, v in via_k.items():
                    s = total.get(key, FieldElem()) + v
                    if s:
                        total[key] = s
                    else:
                        total.pop(key, None)
                if total:
                    raise DifferentialNotSquareZero(f"face {I} bits ({j},{k}) does not commute")


def assemble_cube(
    D: LayeredBraidDiagram,
    reduced: bool = True,
    method: str = "regions",
    degree_cap: Optional[int] = DEFAULT_DEGREE_CAP,
    threads: Optional[int] = None,
    progress: bool = False,
    check: bool = True,
) -> CubeComplex:
    """All vertex algebras and (for the reduced cube) all edge maps.

    Vertex algebras are built in a thread pool; edge maps are computed once
    both endpoints exist. With ``check`` every square face is verified.
    """
    started = time.time()
    indices = all_indices(D)

    def _vertex(I: Index) -> AlgebraPresentation:
        t0 = time.time()
        P = build_algebra(D, I, reduced=reduced, method=method, degree_cap=degree_cap)
        append_debug_log(
            {
                "location": "homology.assemble_cube:vertex",
                "braid": str(D.word),
                "index": "".join(map(str, I)),
                "dimension": P.dimension,
                "zero": P.is_zero,
                "groebner_size": len(P.basis),
                "seconds": round(time.time() - t0, 4),
            }
        )
        return P

    algebras = parallel_map(_vertex, indices, threads=threads, progress=progress, desc="resolutions")
    vertices = dict(zip(indices, algebras))

    maps: Dict[Tuple[Index, Index], EdgeMap] = {}
    if reduced:
        pairs = [(I, _flip(I, j)) for I in indices for j, e in enumerate(I) if e == 0]
        edge_maps = parallel_map(
            lambda p: edge_map(D, vertices[p[0]], vertices[p[1]]),
            pairs,
            threads=threads,
            progress=progress,
            desc="edge maps",
        )
        maps = dict(zip(pairs, edge_maps))

    C = CubeComplex(D, reduced, vertices, maps)
    if reduced and check:
        check_square_zero(C)
    append_debug_log(
        {
            "location": "homology.assemble_cube:done",
            "braid": str(D.word),
            "reduced": reduced,
            "vertices": len(vertices),
            "edges": len(maps),
            "generators": sum(P.dimension for P in vertices.values()),
            "seconds": round(time.time() - started, 4),
        }
    )
    return C


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoincareTable:
    dims: Dict[Tuple[int, int], int]  # (alexander_x2, raw homological) -> dim, non-zero only
    euler: IntLaurentPoly  # doubled exponents

    @property
    def shift(self) -> int:
        return min((h for _, h in self.dims), default=0)

    def normalized(self) -> Dict[Tuple[int, int], int]:
        s = self.shift
        return {(a, h - s): d for (a, h), d in self.dims.items()}

    @property
    def total_rank(self) -> int:
        return sum(self.dims.values())

    def records(self) -> List[dict]:
        return [
            {"alexander_x2": a, "homological": h, "dim": d}
            for (a, h), d in sorted(self.normalized().items())
        ]

    def to_dict(self) -> dict:
        return {
            "homological_shift": self.shift,
            "table": self.records(),
            "euler": [[e, c] for e, c in self.euler.terms],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PoincareTable":
        shift = int(payload.get("homological_shift", 0))
        dims = {(int(r["alexander_x2"]), int(r["homological"]) + shift): int(r["dim"]) for r in payload["table"]}
        return cls(dims, IntLaurentPoly.from_pairs(payload.get("euler", [])))

    def to_frame(self) -> pd.DataFrame:
        rows = [dict(r, alexander=_half(r["alexander_x2"])) for r in self.records()]
        return pd.DataFrame(rows, columns=["alexander_x2", "alexander", "homological", "dim"])

    def to_text(self) -> str:
        df = self.to_frame()
        if df.empty:
            return "(zero homology)"
        pivot = df.pivot_table(index="alexander_x2", columns="homological", values="dim", aggfunc="sum", fill_value=0)
        pivot = pivot.sort_index(ascending=False)
        pivot.index = [_half(a) for a in pivot.index]
        pivot.index.name = "A \\ h"
        return pivot.to_string()


def _half(a_x2: int) -> str:
    return str(a_x2 // 2) if a_x2 % 2 == 0 else f"{a_x2}/2"


def homology(C: CubeComplex) -> PoincareTable:
    """Bigraded dimensions of the reduced cube via exact ranks over F2(t)."""
    if not C.reduced:
        raise ValueError("homology is computed for the reduced cube only")

    groups: Dict[Tuple[int, int], List[Tuple[Index, int]]] = {}
    for I, pos, a, h in C.generators():
        groups.setdefault((h, a), []).append((I, pos))
    column = {gen: i for gens in groups.values() for i, gen in enumerate(gens)}
    gradings = {I: C.gradings(I) for I in C.vertices}

    rows: Dict[Tuple[int, int], Dict[Tuple[Index, int], Dict[int, FieldElem]]] = {}
    for (src, tgt), M in C.maps.items():
        h = sum(src)
        for (r, c), v in M.entries.items():
            key = (h, gradings[src][c])
            rows.setdefault(key, {}).setdefault((tgt, r), {})[column[(src, c)]] = v

    ranks = {key: fraction_free_rank(list(r.values()), len(groups[key])) for key, r in rows.items()}
    dims: Dict[Tuple[int, int], int] = {}
    for (h, a), gens in groups.items():
        d = len(gens) - ranks.get((h, a), 0) - ranks.get((h - 1, a), 0)
        if d:
            dims[(a, h)] = d
    euler = IntLaurentPoly.from_dict(_alternating(dims))
    return PoincareTable(dims, euler)


def _alternating(dims: Dict[Tuple[int, int], int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for (a, h), d in dims.items():
        out[a] = out.get(a, 0) + (-1) ** h * d
    return out


def euler_characteristic(C: CubeComplex) -> IntLaurentPoly:
    """sum over the cube of (-1)^h q^A, exponents doubled."""
    counts: Dict[Tuple[int, int], int] = {}
    for _, _, a, h in C.generators():
        counts[(a, h)] = counts.get((a, h), 0) + 1
    return IntLaurentPoly.from_dict(_alternating(counts))


def generator_counts(C: CubeComplex, table: Optional[PoincareTable] = None) -> Dict[str, int]:
    """Candidate readings of "number of generators" of the cube."""
    dims = [P.dimension for P in C.vertices.values()]
    out = {
        "resolutions": len(C.vertices),
        "nonzero_resolutions": sum(1 for P in C.vertices.values() if not P.is_zero),
        "total_reduced_rank": sum(dims),
        "max_vertex_rank": max(dims, default=0),
    }
    if table is not None:
        out["homology_rank"] = table.total_rank
    return out


# ---------------------------------------------------------------------------
# Invariance
# ---------------------------------------------------------------------------


def compute_table(
    w: BraidWord,
    method: str = "regions",
    degree_cap: Optional[int] = DEFAULT_DEGREE_CAP,
    threads: Optional[int] = None,
    progress: bool = False,
) -> Tuple[CubeComplex, PoincareTable]:
    C = assemble_cube(build_layered_diagram(w), reduced=True, method=method, degree_cap=degree_cap, threads=threads,
                      progress=progress)
    return C, homology(C)


@dataclass
class InvarianceReport:
    left: str
    right: str
    equal: bool
    shift: int  # right minus left homological shift
    diff: List[Tuple[int, int, int, int]]  # (alexander_x2, homological, dim left, dim right)
    left_table: PoincareTable
    right_table: PoincareTable

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "verdict": "PASS" if self.equal else "FAIL",
            "homological_shift": self.shift,
            "diff": [
                {"alexander_x2": a, "homological": h, "left": l, "right": r} for a, h, l, r in self.diff
            ],
        }


def compare_tables(left: PoincareTable, right: PoincareTable) -> Tuple[bool, List[Tuple[int, int, int, int]]]:
    ln, rn = left.normalized(), right.normalized()
    diff = [(a, h, ln.get((a, h), 0), rn.get((a, h), 0)) for a, h in sorted(set(ln) | set(rn)) if ln.get((a, h), 0) != rn.get((a, h), 0)]
    return not diff, diff


def compare_invariance(
    w1: BraidWord,
    w2: BraidWord,
    method: str = "regions",
    degree_cap: Optional[int] = DEFAULT_DEGREE_CAP,
    threads: Optional[int] = None,
) -> InvarianceReport:
    _, t1 = compute_table(w1, method=method, degree_cap=degree_cap, threads=threads)
    _, t2 = compute_table(w2, method=method, degree_cap=degree_cap, threads=threads)
    equal, diff = compare_tables(t1, t2)
    return InvarianceReport(str(w1), str(w2), equal, t2.shift - t1.shift, diff, t1, t2)
