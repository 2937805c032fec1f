"""Plain SVG drawings of strand diagrams and of their tangles.

Nodes are laid out in sweep order, one per horizontal band; strands sit at
evenly spaced positions, splits fan out and merges fan in.  Each region's
added edge is drawn in red through the middle of its gap.  In the tangle
view every node becomes a crossing, the under strand broken by a small gap.
Output is deterministic text so golden files can be compared byte for byte.
"""

from __future__ import annotations

from .orient import OrientedStrandDiagram
from .strand import SPLIT, StrandDiagram, StrandGraph, as_graph
from .tangle import Tangle, sweep

BAND = 40
GAP = 30
MARGIN = 20
HOLE = 7          # half-length of the break in an under strand


def _xs(width: int, total: int) -> list[float]:
    span = (total - 1) * GAP
    left = MARGIN + GAP + (span - (width - 1) * GAP) / 2
    return [left + i * GAP for i in range(width)]


def _gap_x(xs: list, g: int) -> float:
    if g == 0:
        return xs[0] - GAP / 2
    if g == len(xs):
        return xs[-1] + GAP / 2
    return (xs[g - 1] + xs[g]) / 2


def _toward(p, q, dist):
    """The point at distance ``dist`` from p on the segment p-q."""
    (x0, y0), (x1, y1) = p, q
    n = ((x1 - x0) ** 2 + (y1 - y0) ** 2) ** 0.5 or 1.0
    return (x0 + (x1 - x0) * dist / n, y0 + (y1 - y0) * dist / n)


class _Layout:
    """Coordinates of every edge piece, node and red region edge."""

    def __init__(self, d):
        self.sw = sw = sweep(d)
        gr = self.gr = sw.graph
        widths = [gr.top]
        for nid, _ in sw.order:
            widths.append(widths[-1] + (1 if gr.kind[nid] == SPLIT else -1))
        self.total = max(widths)
        n = len(sw.order)
        self.level_y = [MARGIN + BAND / 2 + i * BAND for i in range(n + 1)]
        self.top_y, self.bottom_y = MARGIN, self.level_y[-1] + BAND / 2
        self.width = 2 * MARGIN + 2 * GAP + (self.total - 1) * GAP
        self.height = self.bottom_y + MARGIN
        self.node = {}
        # edge src -> list of points (top to bottom); ends keyed by node and slot
        paths, frontier = {}, []
        xs = _xs(gr.top, self.total)
        for i in range(gr.top):
            paths[("T", i)] = [(xs[i], self.top_y), (xs[i], self.level_y[0])]
            frontier.append(("T", i))
        gaps = list(sw.top_gaps)
        red = {rid: [(_gap_x(xs, g), self.top_y), (_gap_x(xs, g), self.level_y[0])]
               for g, rid in enumerate(gaps)}
        for lvl, (nid, p) in enumerate(sw.order):
            y0, y1 = self.level_y[lvl], self.level_y[lvl + 1]
            ym = (y0 + y1) / 2
            cur, nxt = _xs(widths[lvl], self.total), _xs(widths[lvl + 1], self.total)
            if gr.kind[nid] == SPLIT:
                pt = (cur[p], ym)
                paths[frontier[p]].append(pt)
                new = [(nid, 0), (nid, 1)]
                for j, e in enumerate(new):
                    paths[e] = [pt, (nxt[p + j], y1)]
                keep = frontier[:p] + [None, None] + frontier[p + 1:]
                frontier[p:p + 1] = new
                mid = sw.node_regions[nid][1]
                gaps.insert(p + 1, mid)
                red[mid] = [pt]
            else:
                pt = (nxt[p], ym)
                paths[frontier[p]].append(pt)
                paths[frontier[p + 1]].append(pt)
                paths[(nid, 0)] = [pt, (nxt[p], y1)]
                keep = frontier[:p] + [None] + frontier[p + 2:]
                frontier[p:p + 2] = [(nid, 0)]
                dead = gaps.pop(p + 1)
                red[dead].append(pt)
            self.node[nid] = pt
            for j, e in enumerate(keep):
                if e is not None:
                    paths[e].append((nxt[j], y1))
            # strand positions halfway down the band, in the new indexing
            if gr.kind[nid] == SPLIT:
                mids = ([(cur[j] + nxt[j]) / 2 for j in range(p)] + [pt[0], pt[0]]
                        + [(cur[j] + nxt[j + 1]) / 2 for j in range(p + 1, len(cur))])
            else:
                mids = ([(cur[j] + nxt[j]) / 2 for j in range(p)] + [pt[0]]
                        + [(cur[j + 1] + nxt[j]) / 2 for j in range(p + 1, len(nxt))])
            for g, rid in enumerate(gaps):
                if not (gr.kind[nid] == SPLIT and g == p + 1):
                    red[rid].append((_gap_x(mids, g), ym))
                red[rid].append((_gap_x(nxt, g), y1))
        for j, e in enumerate(frontier):
            paths[e].append((_xs(widths[-1], self.total)[j], self.bottom_y))
        for g, rid in enumerate(gaps):
            red[rid].append((_gap_x(_xs(widths[-1], self.total), g), self.bottom_y))
        self.paths = paths
        self.red = {rid: pts for rid, pts in red.items() if rid != sw.rightmost}

    def strand_ends(self, nid):
        """Node slot -> (path key, is_black), in the crossing's slot order."""
        gr, mid = self.gr, self.sw.node_regions[nid][1]
        if gr.kind[nid] == SPLIT:
            return [((nid, 0), True), (mid, False), ((nid, 1), True), (gr.up[(nid, 0)], True)]
        return [(gr.up[(nid, 0)], True), ((nid, 0), True), (gr.up[(nid, 1)], True), (mid, False)]


def _poly(pts, attrs) -> str:
    s = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)
    return f'<polyline points="{s}" {attrs}/>'


def _trim(pts, at, dist):
    """Shorten a path by ``dist`` where it touches the point ``at``."""
    pts = list(pts)
    if pts[0] == at:
        pts[0] = _toward(pts[0], pts[1], dist)
    if pts[-1] == at:
        pts[-1] = _toward(pts[-1], pts[-2], dist)
    return pts


def _head(x, y, down: bool) -> str:
    s = 5 if down else -5
    return (f'<polygon points="{x - 4:.1f},{y - s:.1f} {x + 4:.1f},{y - s:.1f} {x:.1f},{y + s:.1f}" '
            f'fill="black"/>')


def _svg(lay: _Layout, title: str, body: list) -> str:
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{lay.width:.0f}" height="{lay.height:.0f}" '
           f'viewBox="0 0 {lay.width:.0f} {lay.height:.0f}">']
    if title:
        out.append(f"<title>{title}</title>")
    out += body
    out.append("</svg>")
    return "\n".join(out) + "\n"


def strand_svg(d, title: str = "", signs=None) -> str:
    """SVG of the strand diagram d with its red region edges dashed.

    ``signs`` optionally gives the top boundary sign, one entry per strand,
    written in the gap left of each strand.
    """
    lay = _Layout(d)
    body = ['<g stroke="black" stroke-width="2" fill="none">']
    body += [_poly(pts, "") for _, pts in sorted(lay.paths.items(), key=str)]
    body.append("</g>")
    body.append('<g stroke="red" stroke-width="1" stroke-dasharray="4 3" fill="none">')
    body += [_poly(pts, "") for _, pts in sorted(lay.red.items())]
    body.append("</g>")
    body += [f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="black"/>'
             for _, (x, y) in sorted(lay.node.items())]
    if signs is not None:
        seq = signs.seq if hasattr(signs, "seq") else tuple(signs)
        xs = _xs(lay.gr.top, lay.total)
        for x, s in zip(xs, seq):
            body.append(f'<text x="{x - GAP / 2 - 3:.1f}" y="{MARGIN - 5}" font-size="10">'
                        f'{"+" if s > 0 else "-"}</text>')
    return _svg(lay, title, body)


def tangle_svg(d, title: str = "", mirror: bool = False, signs: dict | None = None) -> str:
    """SVG of the tangle T(d): black and red strands, a crossing at each node.

    The under strand of a crossing joins slots 0 and 2 (1 and 3 when
    mirrored) and is drawn broken.  With region ``signs`` each endpoint gets
    an arrowhead, pointing down for a + endpoint.
    """
    lay = _Layout(d)
    black = {k: list(v) for k, v in lay.paths.items()}
    red = {k: list(v) for k, v in lay.red.items()}
    for nid, pt in sorted(lay.node.items()):
        ends = lay.strand_ends(nid)
        under = (ends[1], ends[3]) if mirror else (ends[0], ends[2])
        for key, is_black in under:
            pool = black if is_black else red
            pool[key] = _trim(pool[key], pt, HOLE)
    body = ['<g stroke="black" stroke-width="2" fill="none">']
    body += [_poly(pts, "") for _, pts in sorted(black.items(), key=str)]
    body.append("</g>")
    body.append('<g stroke="red" stroke-width="2" fill="none">')
    body += [_poly(pts, "") for _, pts in sorted(red.items())]
    body.append("</g>")
    if signs is not None:
        sw = lay.sw
        for key, pts in sorted(black.items(), key=str):
            if key[0] == "T" or lay.gr.down[key][0] == "B":
                down = signs[sw.edge_left[key]] < 0
                for x, y in (pts[0], pts[-1]):
                    if y in (lay.top_y, lay.bottom_y):
                        body.append(_head(x, y, down))
        for rid, pts in sorted(red.items()):
            down = signs[rid] > 0
            for x, y in (pts[0], pts[-1]):
                if y in (lay.top_y, lay.bottom_y):
                    body.append(_head(x, y, down))
    return _svg(lay, title, body)


def render_svg(x, title: str = "", as_tangle: bool = False, mirror: bool = False) -> str:
    """Draw a strand diagram, an oriented one, or (as_tangle) its tangle.

    A bare PD code has no layout, so tangles are drawn from their diagram.
    """
    if isinstance(x, Tangle):
        raise TypeError("a PD code carries no layout; render its strand diagram with as_tangle=True")
    if isinstance(x, OrientedStrandDiagram):
        if as_tangle:
            return tangle_svg(x.graph, title, mirror, x.signs)
        return strand_svg(x.graph, title, x.top_sign)
    if isinstance(x, (StrandDiagram, StrandGraph)):
        return tangle_svg(x, title, mirror) if as_tangle else strand_svg(x, title)
    raise TypeError(f"cannot render {type(x).__name__}")


__all__ = ["strand_svg", "tangle_svg", "render_svg", "as_graph"]
