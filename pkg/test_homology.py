import json

import pytest

from braid import MarkovMove, MoveKind, apply_markov, build_layered_diagram, insert_bivalent_layer, parse_braid
from config import KNOT_CATALOGUE
from homology import (
    PoincareTable,
    assemble_cube,
    build_algebra,
    check_square_zero,
    compare_invariance,
    compare_tables,
    compute_table,
    edge_map,
    euler_characteristic,
    generator_counts,
    graded_dimensions,
    homology,
)
from oracle import IntLaurentPoly, burau_alexander, equal_up_to_unit
from polyalg import HilbertSeries, MultiPoly, buchberger, normal_form
from resolution import (
    all_indices,
    detect_closed_components,
    local_relations,
    nonlocal_from_regions,
    relation_polys,
    resolve,
    singular_index,
)
from scripts.export_golden_tables import export_catalogue


def _diagram(text):
    return build_layered_diagram(parse_braid(text))


def _sum_dims(*dims):
    out = {}
    for d in dims:
        for a, n in d.items():
            out[a] = out.get(a, 0) + n
    return out


def test_unknot_vertex_algebras():
    D = _diagram("b=2; 1")
    P = build_algebra(D, (0,))
    assert P.dimension == 1
    assert P.monomials == ((0, 0, 0),)
    assert graded_dimensions(D, P) == {0: 1}
    assert build_algebra(D, (1,)).is_zero


def test_trefoil_vertex_dimension():
    D = _diagram("b=2; 1 1 1")
    assert build_algebra(D, (1, 0, 0)).dimension == 2


def test_figure8_region_relations_in_singular_ideal():
    D = _diagram("b=3; 1 -2 1 -2")
    I = singular_index(D)
    P = build_algebra(D, I, method="cycles")
    G = resolve(D, I)
    for r in nonlocal_from_regions(G):
        assert normal_form(r.to_poly(G.nvars), P.basis).is_zero(), r.source


def test_unreduced_algebra_reports_hilbert_series():
    D = _diagram("b=2; 1")
    P = build_algebra(D, (0,), reduced=False)
    assert P.hilbert is not None
    assert P.hilbert.reduced() == HilbertSeries((1,), 1)
    assert P.hilbert.dimension is None
    assert P.monomials == ()


def test_unknot_homology():
    C, table = compute_table(parse_braid("b=2; 1"))
    assert table.dims == {(0, 0): 1}
    assert table.total_rank == 1
    assert table.euler == IntLaurentPoly.from_dict({0: 1})
    assert len(C.maps) == 1


@pytest.mark.parametrize("key", ["unknot", "trefoil", "figure8", "cinquefoil"])
def test_euler_characteristic_matches_alexander(key):
    w = parse_braid(KNOT_CATALOGUE[key]["braid"])
    C, table = compute_table(w)
    chi = euler_characteristic(C)
    assert table.euler == chi
    assert equal_up_to_unit(chi, burau_alexander(w).doubled())


@pytest.mark.parametrize("text", ["b=2; 1 1 1", "b=3; 1 -2 1 -2"])
def test_differential_squares_to_zero(text):
    C = assemble_cube(_diagram(text), check=False)
    check_square_zero(C)
    for (src, tgt), M in C.maps.items():
        assert sum(tgt) == sum(src) + 1
        gs, gt = C.gradings(src), C.gradings(tgt)
        assert all(gs[c] == gt[r] for r, c in M.entries)


def test_edge_map_kinds():
    D = _diagram("b=3; 1 -2 1 -2")
    C = assemble_cube(D, check=False)
    kinds = {M.layer: M.kind for M in C.maps.values()}
    assert kinds == {0: "quotient", 1: "multiply", 2: "quotient", 3: "multiply"}
    with pytest.raises(ValueError, match="not a cube edge"):
        edge_map(D, C.vertices[(0, 0, 0, 0)], C.vertices[(1, 1, 0, 0)])


def test_trefoil_invariance_under_markov_moves():
    tre = parse_braid("b=2; 1 1 1")
    for move in (
        MarkovMove(MoveKind.CONJUGATE, position=1),
        MarkovMove(MoveKind.STABILIZE_POSITIVE),
        MarkovMove(MoveKind.STABILIZE_NEGATIVE),
    ):
        report = compare_invariance(tre, apply_markov(tre, move))
        assert report.equal, (move, report.diff)
        assert report.to_dict()["verdict"] == "PASS"


@pytest.mark.parametrize(
    "text, move",
    [
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.REID2_INSERT, generator=1, position=2)),
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.CONJUGATE, position=1)),
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.STABILIZE_NEGATIVE)),
        ("b=3; 1 2 1 2", MarkovMove(MoveKind.REID3, position=0)),
    ],
    ids=["figure8-reid2", "figure8-conjugate", "figure8-stabilize", "trefoil3-reid3"],
)
def test_invariance_under_word_moves(text, move):
    w = parse_braid(text)
    report = compare_invariance(w, apply_markov(w, move))
    assert report.equal, (move, report.diff)
    assert report.diff == []


def test_trefoil_and_figure8_differ():
    report = compare_invariance(parse_braid("b=2; 1 1 1"), parse_braid("b=3; 1 -2 1 -2"))
    assert not report.equal
    assert report.diff
    assert report.to_dict()["verdict"] == "FAIL"


@pytest.mark.parametrize("text, position", [("b=2; 1", 1), ("b=3; 1 -2 1 -2", 2)])
def test_reid2_pair_splits_into_single_singularizations(text, position):
    base = parse_braid(text)
    w = apply_markov(base, MarkovMove(MoveKind.REID2_INSERT, generator=1, position=position))
    D = build_layered_diagram(w)
    others = len(w.letters) - 2
    for rest in range(2 ** others):
        bits = [(rest >> i) & 1 for i in range(others)]

        def _index(pair):
            return tuple(bits[:position]) + pair + tuple(bits[position:])

        both = build_algebra(D, _index((0, 1)))
        lower = build_algebra(D, _index((0, 0)))
        upper = build_algebra(D, _index((1, 1)))
        assert graded_dimensions(D, both) == _sum_dims(graded_dimensions(D, lower), graded_dimensions(D, upper))


def test_bivalent_layer_leaves_homology_unchanged():
    D = _diagram("b=3; 1 -2 1 -2")
    plain = homology(assemble_cube(D))
    padded = homology(assemble_cube(insert_bivalent_layer(D, 2)))
    equal, diff = compare_tables(plain, padded)
    assert equal, diff
    assert plain.shift == padded.shift


def test_poincare_table_serialisation():
    table = PoincareTable({(2, 1): 1, (0, 2): 3, (-2, 3): 1}, IntLaurentPoly.from_dict({2: -1, 0: 3, -2: -1}))
    assert table.shift == 1
    assert table.normalized() == {(2, 0): 1, (0, 1): 3, (-2, 2): 1}
    payload = table.to_dict()
    assert payload["homological_shift"] == 1
    assert PoincareTable.from_dict(payload) == table
    frame = table.to_frame()
    assert list(frame.columns) == ["alexander_x2", "alexander", "homological", "dim"]
    assert frame["dim"].sum() == 5
    text = table.to_text()
    assert "A \\ h" in text
    assert text.splitlines()[-1].split()[0] == "-1"


def test_generator_counts_for_trefoil():
    C, table = compute_table(parse_braid("b=2; 1 1 1"))
    counts = generator_counts(C, table)
    assert counts["resolutions"] == 8
    assert counts["total_reduced_rank"] == sum(P.dimension for P in C.vertices.values())
    assert counts["homology_rank"] == table.total_rank
    assert counts["nonzero_resolutions"] <= counts["resolutions"]


def test_debug_log_records_vertices(tmp_path, monkeypatch):
    log = tmp_path / "debug.ndjson"
    monkeypatch.setenv("HFK_DEBUG_LOG", str(log))
    assemble_cube(_diagram("b=2; 1"))
    lines = log.read_text().splitlines()
    assert len(lines) == 3
    assert '"location": "homology.assemble_cube:done"' in lines[-1]


def test_homology_requires_reduced_cube():
    C = assemble_cube(_diagram("b=2; 1"), reduced=False)
    assert C.maps == {}
    with pytest.raises(ValueError, match="reduced"):
        homology(C)


def test_multiplier_for_negative_crossing():
    D = _diagram("b=3; 1 -2 1 -2")
    C = assemble_cube(D, check=False)
    M = C.maps[((0, 0, 0, 0), (0, 1, 0, 0))]
    assert M.kind == "multiply"
    assert isinstance(M.multiplier, MultiPoly)
    assert len(M.multiplier.terms) == 2


@pytest.mark.parametrize("key", ["unknot", "trefoil", "figure8"])
def test_closed_components_give_zero_algebra(key):
    D = _diagram(KNOT_CATALOGUE[key]["braid"])
    seen = 0
    for I in all_indices(D):
        if detect_closed_components(resolve(D, I)):
            seen += 1
            G = resolve(D, I)
            # local and region relations alone already generate the unit ideal
            gens = relation_polys(local_relations(G) + nonlocal_from_regions(G), G.nvars)
            assert buchberger(gens, nvars=G.nvars).is_unit, I
            assert build_algebra(D, I).is_zero, I
    # the all-smoothed resolution always leaves closed strands
    assert seen


def test_export_golden_tables(tmp_path):
    index = export_catalogue(["unknot", "trefoil"], str(tmp_path))
    assert list(index["verdict"]) == ["MATCH", "MATCH"]
    payload = json.loads((tmp_path / "trefoil.json").read_text())
    assert payload["braid"] == "b=2; 1 1 1"
    assert PoincareTable.from_dict(payload).total_rank == int(index.loc[1, "total_rank"])
    assert (tmp_path / "index.csv").exists()
