"""Braid words, layered braid diagrams and Markov moves.

Conventions:
- Strand positions run 1..b from left to right. Position 1 is the outermost
  strand and carries the basepoint; the distance of a position from the braid
  axis is b + 1 - position.
- The letter +i / -i is a positive / negative crossing of positions i and i+1.
- Layers are read bottom to top. The edge crossing layer boundary k at
  position p is labelled k*b + (p - 1). The top boundary reuses the bottom
  labels except at position 1, whose edge n = L*b runs into the basepoint.

Every type here is immutable; diagrams can be shared between worker threads.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple


class BraidError(ValueError):
    """Invalid braid input or move."""


class MalformedWord(BraidError):
    pass


class NotAKnot(BraidError):
    pass


class InapplicableMove(BraidError):
    pass


_BRAID_RE = re.compile(r"^\s*b\s*=\s*(?P<strands>[^;]*);(?P<letters>.*)$", re.DOTALL)


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 2:
            raise MalformedWord(f"need at least 2 strands, got b={self.strands}")
        if not self.letters:
            raise MalformedWord("braid word has no letters")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise MalformedWord(f"generator {x} out of range for b={self.strands}")
        if self.components() != 1:
            raise NotAKnot(f"closure of {self} has {self.components()} components")

    @property
    def crossings(self) -> int:
        return len(self.letters)

    def permutation(self) -> Tuple[int, ...]:
        """perm[p-1] is the top position reached by the strand entering at bottom position p."""
        return _permutation(self.strands, self.letters)

    def components(self) -> int:
        return _cycle_count(_permutation(self.strands, self.letters))

    def __str__(self) -> str:
        return f"b={self.strands}; " + " ".join(str(x) for x in self.letters)


def _permutation(strands: int, letters: Sequence[int]) -> Tuple[int, ...]:
    pos = list(range(1, strands + 1))
    for x in letters:
        i = abs(x)
        for s, p in enumerate(pos):
            if p == i:
                pos[s] = i + 1
            elif p == i + 1:
                pos[s] = i
    return tuple(pos)


def _cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p] - 1
    return cycles


def parse_braid(text: str) -> BraidWord:
    """Parse ``"b=<strands>; <signed generators>"`` into a validated knot braid."""
    m = _BRAID_RE.match(text or "")
    if not m:
        raise MalformedWord(f"expected 'b=<int>; <letters>', got {text!r}")
    try:
        strands = int(m.group("strands").strip())
    except ValueError:
        raise MalformedWord(f"strand count {m.group('strands').strip()!r} is not an integer") from None
    letters = []
    for token in m.group("letters").replace(",", " ").split():
        try:
            letters.append(int(token))
        except ValueError:
            raise MalformedWord(f"token {token!r} is not an integer") from None
    return BraidWord(strands, tuple(letters))


# ---------------------------------------------------------------------------
# Layered diagrams
# ---------------------------------------------------------------------------

# A vertex of the layered diagram is (layer, position). A crossing is keyed by
# its left position. None stands for the basepoint.
VertexKey = Tuple[int, int]


@dataclass(frozen=True)
class Layer:
    index: int
    crossing: Optional[int]  # left position of the crossing; None for an all-bivalent layer
    sign: int  # +1 / -1, 0 without crossing
    bivalent: Tuple[int, ...]  # positions carrying bivalent vertices

    @property
    def has_crossing(self) -> bool:
        return self.crossing is not None


@dataclass(frozen=True)
class Edge:
    label: int
    boundary: int  # 0..L; boundary L only for the edge entering the basepoint
    position: int
    distance: int
    tail: Optional[VertexKey]
    head: Optional[VertexKey]


@dataclass(frozen=True)
class LayeredBraidDiagram:
    word: BraidWord
    layers: Tuple[Layer, ...]
    edges: Tuple[Edge, ...]

    @property
    def strands(self) -> int:
        return self.word.strands

    @property
    def n(self) -> int:
        """Label of the edge entering the basepoint; edge 0 leaves it."""
        return len(self.layers) * self.strands

    @property
    def num_edges(self) -> int:
        return self.n + 1

    @property
    def crossing_layers(self) -> Tuple[int, ...]:
        return tuple(layer.index for layer in self.layers if layer.has_crossing)

    @property
    def negative_crossings(self) -> int:
        return sum(1 for layer in self.layers if layer.sign < 0)

    def distance(self, position: int) -> int:
        return self.strands + 1 - position

    def label(self, boundary: int, position: int) -> int:
        return _edge_label(self.strands, len(self.layers), boundary, position)

    def bivalent_count(self) -> int:
        return sum(len(layer.bivalent) for layer in self.layers)


def _edge_label(strands: int, num_layers: int, boundary: int, position: int) -> int:
    if boundary == num_layers:
        return num_layers * strands if position == 1 else position - 1
    return boundary * strands + position - 1


def _vertex_at(layer: Layer, position: int) -> VertexKey:
    if layer.crossing is not None and position in (layer.crossing, layer.crossing + 1):
        return (layer.index, layer.crossing)
    return (layer.index, position)


def _assemble(word: BraidWord, crossings: Sequence[Optional[int]]) -> LayeredBraidDiagram:
    """Build layers and labelled edges; ``crossings`` holds a signed letter or None per layer."""
    b = word.strands
    layers: List[Layer] = []
    for k, letter in enumerate(crossings):
        if letter is None:
            layers.append(Layer(k, None, 0, tuple(range(1, b + 1))))
            continue
        c = abs(letter)
        layers.append(Layer(k, c, 1 if letter > 0 else -1, tuple(p for p in range(1, b + 1) if p not in (c, c + 1))))

    num_layers = len(layers)
    edges: List[Edge] = []
    for k in range(num_layers):
        for p in range(1, b + 1):
            if k == 0 and p == 1:
                tail = None
            else:
                tail = _vertex_at(layers[k - 1], p)  # k = 0 wraps to the top layer
            edges.append(Edge(k * b + p - 1, k, p, b + 1 - p, tail, _vertex_at(layers[k], p)))
    edges.append(Edge(num_layers * b, num_layers, 1, b, _vertex_at(layers[-1], 1), None))
    return LayeredBraidDiagram(word, tuple(layers), tuple(edges))


def build_layered_diagram(w: BraidWord) -> LayeredBraidDiagram:
    """One layer per letter, a bivalent vertex on every strand the crossing misses."""
    return _assemble(w, w.letters)


def insert_bivalent_layer(D: LayeredBraidDiagram, k: int) -> LayeredBraidDiagram:
    """Insert a layer of b bivalent vertices and no crossing below layer ``k``."""
    if not 0 <= k <= len(D.layers):
        raise InapplicableMove(f"layer index {k} outside 0..{len(D.layers)}")
    letters: List[Optional[int]] = [
        (layer.crossing * layer.sign) if layer.crossing is not None else None for layer in D.layers
    ]
    letters.insert(k, None)
    return _assemble(D.word, letters)


def dump_diagram(D: LayeredBraidDiagram) -> str:
    lines = [f"# {D.word}  layers={len(D.layers)} edges=x0..x{D.n}"]
    for layer in D.layers:
        if layer.has_crossing:
            kind = f"crossing {'+' if layer.sign > 0 else '-'}{layer.crossing}"
        else:
            kind = "bivalent layer"
        lines.append(f"layer {layer.index}: {kind}; bivalent at {list(layer.bivalent)}")
    for e in D.edges:
        lines.append(f"x{e.label}: {_fmt_key(e.tail)} -> {_fmt_key(e.head)} (boundary {e.boundary}, position {e.position})")
    return "\n".join(lines)


def _fmt_key(key: Optional[VertexKey]) -> str:
    return "*" if key is None else f"s{key[0]}.{key[1]}"


# ---------------------------------------------------------------------------
# Markov moves
# ---------------------------------------------------------------------------


class MoveKind(str, Enum):
    CONJUGATE = "conjugate"
    STABILIZE_POSITIVE = "stabilize_positive"
    STABILIZE_NEGATIVE = "stabilize_negative"
    DESTABILIZE = "destabilize"
    REID2_INSERT = "reid2_insert"
    REID2_REMOVE = "reid2_remove"
    REID3 = "reid3"


@dataclass(frozen=True)
class MarkovMove:
    kind: MoveKind
    generator: int = 1  # signed for reid2_insert: inserts [g, -g]
    position: int = 0  # rotation amount for conjugate, word index otherwise

    def __str__(self) -> str:
        if self.kind in (MoveKind.STABILIZE_POSITIVE, MoveKind.STABILIZE_NEGATIVE, MoveKind.DESTABILIZE):
            return self.kind.value
        if self.kind == MoveKind.CONJUGATE:
            return f"conjugate({self.position})"
        return f"{self.kind.value}({self.generator}@{self.position})"


def apply_markov(w: BraidWord, mv: MarkovMove) -> BraidWord:
    letters = list(w.letters)
    b = w.strands

    if mv.kind == MoveKind.CONJUGATE:
        k = mv.position % len(letters)
        return BraidWord(b, tuple(letters[k:] + letters[:k]))

    if mv.kind == MoveKind.STABILIZE_POSITIVE:
        return BraidWord(b + 1, tuple(letters + [b]))

    if mv.kind == MoveKind.STABILIZE_NEGATIVE:
        return BraidWord(b + 1, tuple(letters + [-b]))

    if mv.kind == MoveKind.DESTABILIZE:
        last = letters[-1]
        if abs(last) != b - 1 or sum(1 for x in letters if abs(x) == b - 1) != 1 or len(letters) < 2:
            raise InapplicableMove(f"{w}: last letter must be the only ±{b - 1}")
        return BraidWord(b - 1, tuple(letters[:-1]))

    if mv.kind == MoveKind.REID2_INSERT:
        g = mv.generator
        if g == 0 or abs(g) >= b:
            raise InapplicableMove(f"generator {g} out of range for b={b}")
        if not 0 <= mv.position <= len(letters):
            raise InapplicableMove(f"position {mv.position} outside 0..{len(letters)}")
        letters[mv.position:mv.position] = [g, -g]
        return BraidWord(b, tuple(letters))

    if mv.kind == MoveKind.REID2_REMOVE:
        i = mv.position
        if not 0 <= i < len(letters) - 1 or letters[i] != -letters[i + 1]:
            raise InapplicableMove(f"{w}: no cancelling pair at position {i}")
        if len(letters) == 2:
            raise InapplicableMove(f"{w}: removing the pair would leave an empty word")
        del letters[i:i + 2]
        return BraidWord(b, tuple(letters))

    if mv.kind == MoveKind.REID3:
        i = mv.position
        window = letters[i:i + 3]
        if len(window) != 3 or not _is_reid3_window(window):
            raise InapplicableMove(f"{w}: no braid-relation triple at position {i}")
        a, c = window[0], window[1]
        letters[i:i + 3] = [c, a, c]
        return BraidWord(b, tuple(letters))

    raise InapplicableMove(f"unknown move {mv.kind}")


def _is_reid3_window(window: Sequence[int]) -> bool:
    x, y, z = window
    if x != z or x == 0:
        return False
    same_sign = (x > 0) == (y > 0)
    return same_sign and abs(abs(x) - abs(y)) == 1


def invert_move(w: BraidWord, mv: MarkovMove) -> MarkovMove:
    """Return the move that undoes ``mv`` on ``apply_markov(w, mv)``."""
    if mv.kind == MoveKind.CONJUGATE:
        return MarkovMove(MoveKind.CONJUGATE, position=(-mv.position) % len(w.letters))
    if mv.kind in (MoveKind.STABILIZE_POSITIVE, MoveKind.STABILIZE_NEGATIVE):
        return MarkovMove(MoveKind.DESTABILIZE)
    if mv.kind == MoveKind.DESTABILIZE:
        kind = MoveKind.STABILIZE_POSITIVE if w.letters[-1] > 0 else MoveKind.STABILIZE_NEGATIVE
        return MarkovMove(kind)
    if mv.kind == MoveKind.REID2_INSERT:
        return MarkovMove(MoveKind.REID2_REMOVE, position=mv.position)
    if mv.kind == MoveKind.REID2_REMOVE:
        return MarkovMove(MoveKind.REID2_INSERT, generator=w.letters[mv.position], position=mv.position)
    return mv


def random_moves(w: BraidWord, count: int, seed: int = 0) -> List[Tuple[MarkovMove, BraidWord]]:
    """Reproducible battery of single moves applied to ``w``.

    Draws from conjugation, both stabilizations, Reid-II insertion and (when
    the word has a braid-relation triple) Reid-III.
    """
    if count < 0:
        raise ValueError("count must be a non-negative integer")
    rng = random.Random(seed)
    triples = [i for i in range(len(w.letters) - 2) if _is_reid3_window(w.letters[i:i + 3])]
    out: List[Tuple[MarkovMove, BraidWord]] = []
    for _ in range(count):
        kinds = [MoveKind.STABILIZE_POSITIVE, MoveKind.STABILIZE_NEGATIVE, MoveKind.REID2_INSERT]
        if len(w.letters) > 1:
            kinds.append(MoveKind.CONJUGATE)
        if triples:
            kinds.append(MoveKind.REID3)
        kind = rng.choice(kinds)
        if kind == MoveKind.CONJUGATE:
            mv = MarkovMove(kind, position=rng.randint(1, len(w.letters) - 1))
        elif kind == MoveKind.REID2_INSERT:
            g = rng.randint(1, w.strands - 1) * rng.choice((1, -1))
            mv = MarkovMove(kind, generator=g, position=rng.randint(0, len(w.letters)))
        elif kind == MoveKind.REID3:
            mv = MarkovMove(kind, position=rng.choice(triples))
        else:
            mv = MarkovMove(kind)
        out.append((mv, apply_markov(w, mv)))
    return out
