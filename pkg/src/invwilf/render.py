"""Lattice-path and replacement diagrams as SVG or TikZ text.

A sequence is drawn as a step path: entry ``i`` is a horizontal segment at
height ``s[i]`` over ``x in [i-1, i]``, joined by vertical connectors.  A
highlighted occurrence shades the cells under its ``r`` segments and gets an
arc below the axis labelled with the pattern's role (``p`` or ``q``).

Output depends only on the inputs: coordinates are formatted with fixed
precision and every collection is emitted in sorted order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from html import escape
from typing import Iterable, Sequence

from .core import OccurrenceSet, Pattern, PatternLike, Word, as_pattern, format_word, occurrences
from .errors import EmptyWord, InconsistentTriple, InvalidInput, UnknownFormat
from .exchange import Family, OccurrenceKind, audit_pass, exchange

FORMATS = ("svg", "tikz")

# style slot -> (TikZ colour, SVG colour)
SLOT_COLOURS = {
    "p": ("blue", "#1f4fd6"),
    "q": ("green", "#1e9e3a"),
}

UNIT = 40       # SVG pixels per grid unit
MARGIN = 20


@dataclass(frozen=True)
class Highlight:
    pattern: Pattern
    positions: OccurrenceSet
    slot: str = "p"


@dataclass
class PathDiagram:
    sequence: Word
    highlights: list[Highlight] = field(default_factory=list)

    def __post_init__(self):
        self.sequence = tuple(self.sequence)
        if not self.sequence:
            raise EmptyWord("cannot draw an empty sequence")
        for h in self.highlights:
            if h.slot not in SLOT_COLOURS:
                raise InvalidInput(f"unknown style slot {h.slot!r}")

    @classmethod
    def with_patterns(cls, sequence: Sequence[int], p: PatternLike | None = None,
                      q: PatternLike | None = None) -> "PathDiagram":
        """Highlight every occurrence of ``p`` (slot p) and ``q`` (slot q)."""
        hl = []
        for pat, slot in ((p, "p"), (q, "q")):
            if pat is not None:
                pat = as_pattern(pat)
                hl.append(Highlight(pat, occurrences(pat, sequence), slot))
        return cls(tuple(sequence), hl)


def _num(x: float) -> str:
    text = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _verified(d: PathDiagram) -> list[tuple[int, int, str]]:
    """Windows to draw as (start, length, slot), after re-checking each occurrence."""
    actual = {}
    windows = []
    for h in d.highlights:
        if h.pattern not in actual:
            actual[h.pattern] = set(occurrences(h.pattern, d.sequence))
        for i in h.positions:
            if i not in actual[h.pattern]:
                raise InvalidInput(f"{h.pattern} does not occur at {i} in {format_word(d.sequence)}")
            windows.append((i, h.pattern.r, h.slot))
    return sorted(windows)


def render_diagram(d: PathDiagram, format: str = "svg") -> str:
    fmt = format.lower()
    if fmt == "svg":
        return _svg(d)
    if fmt == "tikz":
        return _tikz(d)
    raise UnknownFormat(f"unknown format {format!r}; choose from {', '.join(FORMATS)}")


def _tikz(d: PathDiagram) -> str:
    s = d.sequence
    lines = ["\\begin{tikzpicture}[scale = .5]"]
    for i, r, slot in _verified(d):
        colour = SLOT_COLOURS[slot][0]
        for x in range(i - 1, i - 1 + r):
            h = s[x]
            lines.append(f"\\filldraw[{colour}, opacity=.3] ({x}, 0) -- ({x}, {h}) -- "
                         f"({x + 1}, {h}) -- ({x + 1},0);")
        a, b = i - 1 + 0.1, i - 1 + r - 0.1
        lines.append(f"\\draw[thick, {colour}] ({_num(a)}, -.3 ) to[out=-30,in= 210] ({_num(b)}, -.3);")
        lines.append(f"\\draw[{colour}] ({_num(i - 1 + r / 2)},-1.3) node{{${slot}$}};")
    prev = s[0]
    for x, h in enumerate(s):
        lines.append(f"\\draw ({x},{prev}) -- ({x}, {h}) -- ({x + 1}, {h});")
        prev = h
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def _svg(d: PathDiagram) -> str:
    s = d.sequence
    n, top = len(s), max(s)
    width = n * UNIT + 2 * MARGIN
    height = (top + 2) * UNIT + 2 * MARGIN
    base = MARGIN + (top + 1) * UNIT  # pixel row of value 0; values grow upwards

    def X(x: float) -> str:
        return _num(MARGIN + x * UNIT)

    def Y(y: float) -> str:
        return _num(base - y * UNIT)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(format_word(s))}</title>',
    ]
    for i, r, slot in _verified(d):
        colour = SLOT_COLOURS[slot][1]
        for x in range(i - 1, i - 1 + r):
            h = s[x]
            if h:
                out.append(f'<rect x="{X(x)}" y="{Y(h)}" width="{UNIT}" height="{_num(h * UNIT)}" '
                           f'fill="{colour}" fill-opacity="0.3" class="slot-{slot}"/>')
        a, b = i - 1 + 0.1, i - 1 + r - 0.1
        mid = i - 1 + r / 2
        out.append(f'<path d="M {X(a)} {Y(-0.3)} Q {X(mid)} {Y(-0.9)} {X(b)} {Y(-0.3)}" '
                   f'fill="none" stroke="{colour}" stroke-width="2" class="arc-{slot}"/>')
        out.append(f'<text x="{X(mid)}" y="{Y(-1.2)}" fill="{colour}" font-size="14" '
                   f'text-anchor="middle">{slot}</text>')
    points = [(0, s[0])]
    for x, h in enumerate(s):
        points += [(x, h), (x + 1, h)]
    path = " ".join(f"{X(x)},{Y(y)}" for x, y in points)
    out.append(f'<polyline points="{path}" fill="none" stroke="black" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# replacement diagrams
# ---------------------------------------------------------------------------

Node = tuple[int, int]  # (row, 1-based position)


@dataclass(frozen=True)
class ExchangeEdges:
    solid: tuple[tuple[Node, Node], ...]   # copy edges, source -> destination
    dotted: tuple[tuple[Node, Node], ...]  # equality that triggered the replacement


def exchange_edges(before: Sequence[int], mid: Sequence[int], after: Sequence[int],
                   family: Family = Family.F0102_0112) -> ExchangeEdges:
    """Copy and trigger edges of both passes, taken from their replacement logs.

    Rows are 0 (``before``), 1 (``mid``) and 2 (``after``).
    """
    before, mid, after = tuple(before), tuple(mid), tuple(after)
    if exchange(before, family) != mid or exchange(mid, family) != after:
        raise InconsistentTriple("rows must satisfy mid = exchange(before), after = exchange(mid)")
    solid, dotted = [], []
    for row in (0, 1):
        src = (before, mid)[row]
        for rep in audit_pass(src, family).replacements:
            i, out = rep.position, row + 1
            if rep.kind is OccurrenceKind.ORIGINAL_P:
                solid.append(((row, i - 1), (out, i)))
                dotted.append(((row, i - 2), (row, i)))
            elif rep.kind is OccurrenceKind.ORIGINAL_Q:
                solid.append(((out, i - 2), (out, i)))
                dotted.append(((row, i), (out, i - 1)))
            else:
                solid.append(((row, i - 2), (out, i)))
                dotted.append(((out, i - 2), (row, i)))
    # trigger edges are undirected; store each with its endpoints in order
    dotted = [tuple(sorted(e)) for e in dotted]
    return ExchangeEdges(tuple(sorted(solid)), tuple(sorted(dotted)))


def render_exchange_diagram(before: Sequence[int], mid: Sequence[int], after: Sequence[int],
                            family: Family = Family.F0102_0112, format: str = "tikz") -> str:
    fmt = format.lower()
    if fmt not in FORMATS:
        raise UnknownFormat(f"unknown format {format!r}; choose from {', '.join(FORMATS)}")
    edges = exchange_edges(before, mid, after, family)
    rows = (tuple(before), tuple(mid), tuple(after))
    if fmt == "tikz":
        return _exchange_tikz(rows, edges)
    return _exchange_svg(rows, edges)


def _exchange_tikz(rows, edges: ExchangeEdges) -> str:
    lines = ["\\begin{tikzpicture}[scale = .8]"]
    for r, row in enumerate(rows):
        for i, v in enumerate(row, start=1):
            lines.append(f"\\node (n{r}_{i}) at ({i}, {-r}) {{{v}}};")
    for a, b in edges.dotted:
        lines.append(f"\\draw[dotted] (n{a[0]}_{a[1]}) -- (n{b[0]}_{b[1]});")
    for a, b in edges.solid:
        lines.append(f"\\draw[->] (n{a[0]}_{a[1]}) -- (n{b[0]}_{b[1]});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def _exchange_svg(rows, edges: ExchangeEdges) -> str:
    n = len(rows[0])
    width, height = (n + 1) * UNIT, 3 * UNIT + MARGIN

    def at(node: Node) -> tuple[str, str]:
        r, i = node
        return _num(i * UNIT), _num(MARGIN + r * UNIT * 1.2)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="8" refY="4" orient="auto">'
        '<path d="M 0 0 L 8 4 L 0 8 z"/></marker></defs>',
    ]
    for a, b in edges.dotted:
        (x1, y1), (x2, y2) = at(a), at(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="grey" '
                   f'stroke-dasharray="2,3" class="trigger"/>')
    for a, b in edges.solid:
        (x1, y1), (x2, y2) = at(a), at(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" '
                   f'marker-end="url(#arrow)" class="copy"/>')
    for r, row in enumerate(rows):
        for i, v in enumerate(row, start=1):
            x, y = at((r, i))
            out.append(f'<text x="{x}" y="{y}" text-anchor="middle" dominant-baseline="middle" '
                       f'font-size="16">{v}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_sequence(sequence: Sequence[int], patterns: Iterable[PatternLike] = (),
                    format: str = "svg") -> str:
    """Convenience wrapper: first pattern drawn in slot p, second in slot q."""
    pats = list(patterns)
    if len(pats) > 2:
        raise InvalidInput("at most two patterns can be highlighted")
    p = pats[0] if pats else None
    q = pats[1] if len(pats) > 1 else None
    return render_diagram(PathDiagram.with_patterns(sequence, p, q), format)
