import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braid import build_layered_diagram, parse_braid
from polyalg import FieldElem, MultiPoly, buchberger, ideal_equal
from resolution import (
    Bivalent,
    FourValent,
    Provenance,
    SubsetCapExceeded,
    all_indices,
    coherent_regions,
    detect_closed_components,
    directed_cycles,
    dump_resolution,
    elementary_regions,
    local_relations,
    nonlocal_from_cycles,
    nonlocal_from_regions,
    nonlocal_from_subsets,
    nonlocal_relations,
    outermost_relation,
    parse_index,
    redundant_regions,
    relation_for_subset,
    relation_polys,
    resolve,
    singular_index,
)

FIGURE8 = build_layered_diagram(parse_braid("b=3; 1 -2 1 -2"))
UNKNOT = build_layered_diagram(parse_braid("b=2; 1"))
TREFOIL = build_layered_diagram(parse_braid("b=2; 1 1 1"))

# Relations of the five coherent regions of the all-singular figure-eight graph.
FIGURE8_REGION_RELATIONS = {
    "E1": "t^6*x1*x7 - x4*x10",
    "E1∪E2": "t^8*x1*x9 - x4*x6",
    "E1∪E3": "t^8*x3*x7 - x0*x10",
    "E1∪E2∪E3": "t^10*x3*x9 - x0*x6",
    "E1∪E2∪E3∪E4": "t^11*x9 - x0",
}


def _singular_figure8():
    return resolve(FIGURE8, singular_index(FIGURE8))


def test_singular_index_and_vertices():
    assert singular_index(FIGURE8) == (0, 1, 0, 1)
    G = _singular_figure8()
    assert G.singular_points == 4
    assert sum(isinstance(v, Bivalent) for v in G.vertices) == 4
    assert G.singular_layers() == frozenset({0, 1, 2, 3})
    # every edge has both ends except the two at the basepoint
    assert [e for e in range(G.nvars) if G.tails[e] is None] == [0]
    assert [e for e in range(G.nvars) if G.heads[e] is None] == [12]


def test_smoothing_gives_two_bivalent_vertices():
    G = resolve(FIGURE8, (1, 0, 1, 0))
    assert G.singular_points == 0
    assert len(G.vertices) == 12
    assert sum(v.smoothing for v in G.vertices) == 8


def test_index_parsing():
    assert parse_index("0101", FIGURE8) == (0, 1, 0, 1)
    for bad in ("010", "01a1", "01011"):
        with pytest.raises(ValueError):
            parse_index(bad, FIGURE8)
    with pytest.raises(ValueError):
        resolve(FIGURE8, (0, 1))
    assert len(all_indices(FIGURE8)) == 16
    assert all_indices(FIGURE8)[0] == (0, 0, 0, 0)
    assert all_indices(FIGURE8)[-1] == (1, 1, 1, 1)


def test_local_relations():
    G = _singular_figure8()
    rels = local_relations(G)
    assert len(rels) == 12
    kinds = [r.provenance for r in rels]
    assert kinds.count(Provenance.LOCAL_QUADRATIC) == 4
    x0_vertex = next(r for r in rels if r.provenance == Provenance.LOCAL_LINEAR and 0 in r.w_in)
    assert str(x0_vertex) == "t*(x3 + x4) - (x0 + x1)"


def test_elementary_regions_and_order():
    dec = elementary_regions(_singular_figure8())
    assert [r.name for r in dec.regions] == ["E1", "E2", "E3", "E4"]
    assert dec.less("E1", "E2")
    assert dec.less("E1", "E3")
    assert dec.less("E3", "E4")
    assert dec.less("E2", "E4")
    assert not dec.less("E2", "E3")
    assert not dec.less("E3", "E2")


def test_five_coherent_regions():
    names = [r.name for r in coherent_regions(_singular_figure8())]
    assert names == list(FIGURE8_REGION_RELATIONS)


def test_region_relation_table():
    rels = {r.source: str(r) for r in nonlocal_from_regions(_singular_figure8())}
    assert rels == FIGURE8_REGION_RELATIONS


def test_cycle_relations_contain_bold_cycle():
    G = _singular_figure8()
    cycles = directed_cycles(G)
    assert cycles
    assert all(len(edges) == len(FIGURE8.layers) for edges, _ in cycles)
    rels = {str(r) for r in nonlocal_from_cycles(G)}
    assert "t^8*x1*x9 - x4*x6" in rels


def test_subset_from_caption():
    # bivalent in s0, crossing in s1, all of s2, crossing in s3
    G = _singular_figure8()
    pick = {
        vid
        for vid, v in enumerate(G.vertices)
        if (v.layer == 0 and isinstance(v, Bivalent))
        or (v.layer in (1, 3) and isinstance(v, FourValent))
        or v.layer == 2
    }
    assert str(relation_for_subset(G, pick)) == "t^8*x1*x9 - x4*x6"


def test_outermost_relation():
    assert str(outermost_relation(_singular_figure8())) == "t^12*x12 - x0"
    assert str(outermost_relation(resolve(UNKNOT, (0,)))) == "t^2*x2 - x0"


def test_closed_component_on_two_strands():
    G = resolve(UNKNOT, (1,))
    rels = detect_closed_components(G)
    assert [str(r) for r in rels] == ["t - 1"]
    assert rels[0].provenance == Provenance.CLOSED_COMPONENT
    assert buchberger(relation_polys(rels, G.nvars)).is_unit
    assert detect_closed_components(_singular_figure8()) == []


def test_subset_cap():
    G = _singular_figure8()
    with pytest.raises(SubsetCapExceeded):
        nonlocal_from_subsets(G, cap=100)
    assert len(nonlocal_from_subsets(G)) == 2 ** 8 - 1
    with pytest.raises(ValueError, match="unknown relation method"):
        nonlocal_relations(G, method="loops")


def test_minimal_regions_drop_only_redundant_ones():
    G = _singular_figure8()
    dec = elementary_regions(G)
    drop = set(redundant_regions(dec))
    names = [r.name for r in coherent_regions(G, minimal=True)]
    assert set(names) == set(FIGURE8_REGION_RELATIONS) - drop
    local = relation_polys(local_relations(G), G.nvars)
    full = relation_polys(nonlocal_from_regions(G), G.nvars)
    minimal = relation_polys(nonlocal_from_regions(G, minimal=True), G.nvars)
    assert ideal_equal(full, minimal, extra=local)


@pytest.mark.parametrize("D", [UNKNOT, TREFOIL, FIGURE8], ids=["unknot", "trefoil", "figure8"])
def test_relation_families_generate_same_ideal(D):
    for I in all_indices(D):
        G = resolve(D, I)
        local = relation_polys(local_relations(G), G.nvars)
        cycles = relation_polys(nonlocal_from_cycles(G), G.nvars)
        regions = relation_polys(nonlocal_from_regions(G), G.nvars)
        subsets = relation_polys(nonlocal_from_subsets(G, minimal=True), G.nvars)
        assert ideal_equal(cycles, regions, extra=local, nvars=G.nvars), I
        assert ideal_equal(regions, subsets, extra=local, nvars=G.nvars), I


@settings(max_examples=16, deadline=None)
@given(I=st.sampled_from(all_indices(FIGURE8)))
def test_outermost_relation_in_every_vertex_ideal(I):
    G = resolve(FIGURE8, I)
    gens = relation_polys(
        local_relations(G) + nonlocal_from_regions(G) + detect_closed_components(G), G.nvars
    )
    assert buchberger(gens, nvars=G.nvars).contains(outermost_relation(G).to_poly(G.nvars))


def test_dump_resolution():
    text = dump_resolution(_singular_figure8())
    lines = text.splitlines()
    assert lines[0] == "# b=3; 1 -2 1 -2  I=0101"
    assert "x0: * -> v0" in lines
    assert sum(1 for line in lines if "4-valent" in line) == 4


def test_relation_polynomial_is_binomial():
    G = _singular_figure8()
    r = next(r for r in nonlocal_from_regions(G) if r.source == "E1")
    p = r.to_poly(G.nvars)
    assert len(p.terms) == 2
    assert p == MultiPoly.product([1, 7], G.nvars, FieldElem.t(6)) + MultiPoly.product([4, 10], G.nvars)