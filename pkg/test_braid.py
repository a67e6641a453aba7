import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braid import (
    BraidError,
    BraidWord,
    InapplicableMove,
    MalformedWord,
    MarkovMove,
    MoveKind,
    NotAKnot,
    apply_markov,
    build_layered_diagram,
    dump_diagram,
    insert_bivalent_layer,
    invert_move,
    parse_braid,
    random_moves,
)

FIGURE8 = "b=3; 1 -2 1 -2"


def test_parse_figure8():
    w = parse_braid(FIGURE8)
    assert w.strands == 3
    assert w.letters == (1, -2, 1, -2)
    assert str(w) == FIGURE8
    assert w.components() == 1


def test_parse_accepts_commas_and_spacing():
    assert parse_braid(" b = 2 ;1,1, 1").letters == (1, 1, 1)


@pytest.mark.parametrize(
    "text",
    ["b=3 1 2", "b=x; 1", "b=2; 1 a", "b=2; 0", "b=2; 2", "b=1; 1", "b=2;"],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(MalformedWord):
        parse_braid(text)


def test_two_component_closure_is_rejected():
    # sigma_1^2 closes to the Hopf link
    with pytest.raises(NotAKnot):
        parse_braid("b=2; 1 1")
    # (1 2)^3 leaves strand 3 as its own circle
    with pytest.raises(NotAKnot):
        parse_braid("b=3; 1 1 1")


def test_braid_errors_are_value_errors():
    assert issubclass(BraidError, ValueError)
    assert issubclass(InapplicableMove, BraidError)


def test_figure8_layered_diagram():
    D = build_layered_diagram(parse_braid(FIGURE8))
    assert len(D.layers) == 4
    assert D.n == 12
    assert D.num_edges == 13
    assert D.negative_crossings == 2
    assert D.bivalent_count() == 4

    by_label = {e.label: e for e in D.edges}
    assert sorted(by_label) == list(range(13))
    # x0 leaves the basepoint, x12 enters it
    assert by_label[0].tail is None
    assert by_label[12].head is None
    assert by_label[12].tail == (3, 1)
    # boundary 0 edges off the basepoint strand come down from the top layer
    assert by_label[1].tail == (3, 2)
    assert by_label[2].tail == (3, 2)
    assert by_label[1].head == (0, 1)
    assert by_label[2].head == (0, 3)


def test_labels_and_distances():
    D = build_layered_diagram(parse_braid(FIGURE8))
    assert D.label(2, 3) == 8
    assert D.label(4, 1) == 12
    assert D.label(4, 3) == 2
    assert [D.distance(p) for p in (1, 2, 3)] == [3, 2, 1]


def test_insert_bivalent_layer():
    D = build_layered_diagram(parse_braid(FIGURE8))
    D2 = insert_bivalent_layer(D, 2)
    assert len(D2.layers) == 5
    assert D2.num_edges == 16
    assert D2.bivalent_count() == 7
    assert not D2.layers[2].has_crossing
    assert [layer.sign for layer in D2.layers if layer.has_crossing] == [1, -1, 1, -1]

    with pytest.raises(InapplicableMove):
        insert_bivalent_layer(D, 9)


def test_dump_diagram_lists_every_edge():
    text = dump_diagram(build_layered_diagram(parse_braid(FIGURE8)))
    assert text.splitlines()[0].startswith("# b=3; 1 -2 1 -2")
    assert "x12: s3.1 -> *" in text
    assert "x0: * -> s0.1" in text


def test_conjugate_and_stabilize():
    w = parse_braid(FIGURE8)
    assert apply_markov(w, MarkovMove(MoveKind.CONJUGATE, position=1)).letters == (-2, 1, -2, 1)

    tre = parse_braid("b=2; 1 1 1")
    up = apply_markov(tre, MarkovMove(MoveKind.STABILIZE_POSITIVE))
    down = apply_markov(tre, MarkovMove(MoveKind.STABILIZE_NEGATIVE))
    assert (up.strands, up.letters) == (3, (1, 1, 1, 2))
    assert down.letters == (1, 1, 1, -2)
    assert apply_markov(up, MarkovMove(MoveKind.DESTABILIZE)) == tre


def test_reid_moves():
    w = parse_braid(FIGURE8)
    ins = apply_markov(w, MarkovMove(MoveKind.REID2_INSERT, generator=2, position=1))
    assert ins.letters == (1, 2, -2, -2, 1, -2)
    assert apply_markov(ins, MarkovMove(MoveKind.REID2_REMOVE, position=1)) == w

    w3 = parse_braid("b=3; 1 2 1 2")
    assert apply_markov(w3, MarkovMove(MoveKind.REID3, position=0)).letters == (2, 1, 2, 2)


@pytest.mark.parametrize(
    "text, move",
    [
        ("b=2; 1 1 1", MarkovMove(MoveKind.DESTABILIZE)),
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.REID2_REMOVE, position=0)),
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.REID3, position=0)),
        ("b=3; 1 -2 1 -2", MarkovMove(MoveKind.REID2_INSERT, generator=3)),
    ],
)
def test_inapplicable_moves(text, move):
    with pytest.raises(InapplicableMove):
        apply_markov(parse_braid(text), move)


@pytest.mark.parametrize(
    "move",
    [
        MarkovMove(MoveKind.CONJUGATE, position=3),
        MarkovMove(MoveKind.STABILIZE_POSITIVE),
        MarkovMove(MoveKind.STABILIZE_NEGATIVE),
        MarkovMove(MoveKind.REID2_INSERT, generator=-1, position=2),
    ],
)
def test_invert_move_restores_word(move):
    w = parse_braid(FIGURE8)
    moved = apply_markov(w, move)
    assert apply_markov(moved, invert_move(w, move)) == w


def test_random_moves_reproducible():
    w = parse_braid("b=2; 1 1 1")
    first = random_moves(w, 5, seed=7)
    again = random_moves(w, 5, seed=7)
    assert first == again
    assert len(first) == 5
    assert all(isinstance(moved, BraidWord) and moved.components() == 1 for _, moved in first)

    with pytest.raises(ValueError, match="non-negative"):
        random_moves(w, -1)


@settings(max_examples=40, deadline=None)
@given(k=st.integers(min_value=0, max_value=20))
def test_conjugation_preserves_knot_and_letters(k):
    w = parse_braid(FIGURE8)
    moved = apply_markov(w, MarkovMove(MoveKind.CONJUGATE, position=k))
    assert sorted(moved.letters) == sorted(w.letters)
    assert moved.components() == 1


@pytest.mark.parametrize("text, bivalents", [("b=2; 1", 0), ("b=3; 1", 1)])
def test_single_crossing_diagrams(text, bivalents):
    D = build_layered_diagram(parse_braid(text))
    assert len(D.layers) == 1
    assert D.bivalent_count() == bivalents
    assert D.num_edges == D.n + 1
