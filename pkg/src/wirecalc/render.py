"""Deterministic layout and SVG / TikZ emission.

Rows are equal-height; each level is drawn in its own band, split at the
node line so wires interpolate between the words below and above. Regions
tile the canvas as trapezoid fans between adjacent wires; colors come
from a fixed palette keyed by a stable hash of the category name, with
terminal-marked categories drawn unfilled.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .diagram import BoxCell, Hole

UNIT = 36.0
BAND = 44.0
MARGIN = 30.0

PALETTE = (
    "#cfe2f3", "#d9ead3", "#fce5cd", "#ead1dc", "#fff2cc", "#d0e0e3",
    "#f4cccc", "#d9d2e9", "#e6b8af", "#c9daf8", "#b6d7a8", "#ffe599",
)


def category_color(sig, name):
    if sig.category(name).terminal:
        return "#ffffff"
    h = int(hashlib.sha256(name.encode("utf8")).hexdigest(), 16)
    return PALETTE[h % len(PALETTE)]


@dataclass
class Layout:
    width: float
    height: float
    regions: list = field(default_factory=list)  # (points, category)
    wires: list = field(default_factory=list)  # (points, label or None)
    nodes: list = field(default_factory=list)  # (x, y, label)
    boxes: list = field(default_factory=list)  # (x0, y0, x1, y1, Layout)
    holes: list = field(default_factory=list)  # (x0, y0, x1, y1)
    labels: list = field(default_factory=list)  # (x, y, text)
    sig: object = None

    def glyph_count(self):
        n = len(self.nodes) + len(self.holes)
        for *_, sub in self.boxes:
            n += 1 + sub.glyph_count()
        return n


def _xs(word, width_slots):
    """Wire x positions for a word, centered in the canvas."""
    n = len(word)
    total = width_slots * UNIT
    if n == 0:
        return []
    pad = (total - (n - 1) * UNIT) / 2.0
    return [MARGIN + pad + i * UNIT for i in range(n)]


def layout(d):
    """Deterministic geometry for a diagram (holes drawn dashed)."""
    sig = d.sig
    words = [d.word_at(i) for i in range(len(d.levels) + 1)]
    slots = max([len(w) for w in words] + [1])
    width = 2 * MARGIN + slots * UNIT
    height = 2 * MARGIN + max(len(d.levels), 1) * BAND
    lay = Layout(width, height, sig=sig)
    y_bot = height - MARGIN

    def y_of(i):
        if not d.levels:
            return y_bot if i == 0 else MARGIN
        return y_bot - i * (height - 2 * MARGIN) / len(d.levels)

    xs = [_xs(w, slots) for w in words]

    # boundary labels
    for j, s in enumerate(words[0].syms):
        lay.labels.append((xs[0][j], y_bot + 14, s))
    for j, s in enumerate(words[-1].syms):
        lay.labels.append((xs[-1][j], MARGIN - 6, s))

    if not d.levels:
        for j in range(len(words[0])):
            lay.wires.append((((xs[0][j], y_bot), (xs[0][j], MARGIN)), None))
        _regions_band(lay, sig, words[0], xs[0], xs[0], y_bot, MARGIN, width)
        return lay

    for i, lv in enumerate(d.levels):
        w_lo, w_hi = words[i], words[i + 1]
        x_lo, x_hi = xs[i], xs[i + 1]
        y0, y1 = y_of(i), y_of(i + 1)
        ym = (y0 + y1) / 2.0
        k, n_in, n_out = lv.offset, lv.in_width, lv.out_width
        # node x: center over the union of input and output spans
        span = x_lo[k : k + n_in] + x_hi[k : k + n_out]
        if span:
            nx = sum(span) / len(span)
        else:
            left = x_lo[k - 1] + UNIT / 2 if k > 0 else MARGIN + UNIT / 2
            nx = left
        # through wires below and above the node line
        for j in range(len(w_lo)):
            if k <= j < k + n_in:
                lay.wires.append((((x_lo[j], y0), (nx, ym)), None))
            else:
                j2 = j if j < k else j - n_in + n_out
                lay.wires.append((((x_lo[j], y0), (x_hi[j2], ym)), None))
        for j in range(len(w_hi)):
            if k <= j < k + n_out:
                lay.wires.append((((nx, ym), (x_hi[j], y1)), None))
            else:
                j0 = j if j < k else j - n_out + n_in
                lay.wires.append((((x_hi[j], ym), (x_hi[j], y1)), None))
        _regions_band(lay, sig, w_lo, x_lo, x_lo, y0, ym, width)
        _regions_band(lay, sig, w_hi, x_hi, x_hi, ym, y1, width)
        g = lv.gen
        if isinstance(g, Hole):
            lay.holes.append((nx - UNIT * 0.6, ym - BAND * 0.3,
                              nx + UNIT * 0.6, ym + BAND * 0.3))
            lay.labels.append((nx, ym + 4, "?"))
        elif isinstance(g, BoxCell):
            pads = [layout(p) for p in g.payloads]
            bw = max(UNIT * 1.4, sum(p.width * 0.35 for p in pads))
            lay.boxes.append((nx - bw / 2, ym - BAND * 0.42,
                              nx + bw / 2, ym + BAND * 0.42,
                              _merge_payload_layouts(pads)))
            lay.labels.append((nx, ym - BAND * 0.42 - 4, g.rep))
        else:
            lay.nodes.append((nx, ym, g.to_text()))
    return lay


def _merge_payload_layouts(pads):
    if len(pads) == 1:
        return pads[0]
    width = sum(p.width for p in pads)
    height = max(p.height for p in pads)
    merged = Layout(width, height, sig=pads[0].sig)
    dx = 0.0
    for p in pads:
        merged.regions += [([(x + dx, y) for x, y in pts], c)
                           for pts, c in p.regions]
        merged.wires += [(tuple((x + dx, y) for x, y in pts), lb)
                         for pts, lb in p.wires]
        merged.nodes += [(x + dx, y, t) for x, y, t in p.nodes]
        merged.boxes += [(x0 + dx, y0, x1 + dx, y1, sub)
                         for x0, y0, x1, y1, sub in p.boxes]
        merged.holes += [(x0 + dx, y0, x1 + dx, y1)
                         for x0, y0, x1, y1 in p.holes]
        merged.labels += [(x + dx, y, t) for x, y, t in p.labels]
        dx += p.width
    return merged


def _regions_band(lay, sig, word, x_lo, x_hi, y0, y1, width):
    """Vertical strips between adjacent wires of one half-band."""
    cuts_lo = [MARGIN * 0.0] + list(x_lo) + [width]
    cuts_hi = [MARGIN * 0.0] + list(x_hi) + [width]
    for r in range(len(word) + 1):
        pts = (
            (cuts_lo[r], y0),
            (cuts_lo[r + 1], y0),
            (cuts_hi[r + 1], y1),
            (cuts_hi[r], y1),
        )
        lay.regions.append((pts, sig.cat_at(word, r)))


# -- SVG -----------------------------------------------------------------------


def emit_svg(lay):
    """Standalone SVG 1.1 bytes; byte-identical across runs."""
    out = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%.1f" height="%.1f" viewBox="0 0 %.1f %.1f">'
        % (lay.width, lay.height, lay.width, lay.height)
    )
    _svg_body(lay, out)
    out.append("</svg>")
    return ("\n".join(out)).encode("utf8")


def _svg_body(lay, out, dx=0.0, dy=0.0, scale=1.0):
    for pts, cat in lay.regions:
        path = " ".join("%.1f,%.1f" % (dx + x * scale, dy + y * scale)
                        for x, y in pts)
        out.append('<polygon points="%s" fill="%s" stroke="none"/>'
                   % (path, category_color(lay.sig, cat)))
    for pts, _ in lay.wires:
        (x0, y0), (x1, y1) = pts
        if abs(x0 - x1) < 0.01:
            out.append('<line x1="%.1f" y1="%.1f" x2="%.1f" y2="%.1f" '
                       'stroke="black" stroke-width="1.2"/>'
                       % (dx + x0 * scale, dy + y0 * scale,
                          dx + x1 * scale, dy + y1 * scale))
        else:
            my = (y0 + y1) / 2.0
            out.append('<path d="M %.1f %.1f C %.1f %.1f %.1f %.1f %.1f %.1f" '
                       'stroke="black" stroke-width="1.2" fill="none"/>'
                       % (dx + x0 * scale, dy + y0 * scale,
                          dx + x0 * scale, dy + my * scale,
                          dx + x1 * scale, dy + my * scale,
                          dx + x1 * scale, dy + y1 * scale))
    for x, y, label in lay.nodes:
        out.append('<circle class="glyph" cx="%.1f" cy="%.1f" r="%.1f" '
                   'fill="black"/>' % (dx + x * scale, dy + y * scale,
                                       4.0 * scale))
        out.append('<text x="%.1f" y="%.1f" font-size="%.1f" '
                   'font-family="serif">%s</text>'
                   % (dx + (x + 7) * scale, dy + (y + 4) * scale,
                      11 * scale, escape(label)))
    for x0, y0, x1, y1 in lay.holes:
        out.append('<rect class="glyph hole" x="%.1f" y="%.1f" width="%.1f" '
                   'height="%.1f" fill="none" stroke="black" '
                   'stroke-dasharray="4 3"/>'
                   % (dx + x0 * scale, dy + y0 * scale,
                      (x1 - x0) * scale, (y1 - y0) * scale))
    for x0, y0, x1, y1, sub in lay.boxes:
        out.append('<rect class="glyph box" x="%.1f" y="%.1f" width="%.1f" '
                   'height="%.1f" fill="white" stroke="black" '
                   'stroke-width="1.6"/>'
                   % (dx + x0 * scale, dy + y0 * scale,
                      (x1 - x0) * scale, (y1 - y0) * scale))
        if sub is not None:
            sub_scale = min((x1 - x0) / max(sub.width, 1.0),
                            (y1 - y0) / max(sub.height, 1.0)) * scale
            _svg_body(sub, out, dx + x0 * scale, dy + y0 * scale, sub_scale)
    for x, y, text in lay.labels:
        out.append('<text x="%.1f" y="%.1f" font-size="%.1f" '
                   'font-family="serif" text-anchor="middle">%s</text>'
                   % (dx + x * scale, dy + y * scale, 11 * scale,
                      escape(text)))


# -- TikZ ----------------------------------------------------------------------


def emit_tikz(lay):
    """A tikzpicture body with background-layer region fills."""
    out = []
    s = 0.02  # points to cm-ish
    out.append("\\begin{tikzpicture}[yscale=-1]")
    out.append("\\begin{pgfonlayer}{background}")
    for pts, cat in lay.regions:
        path = " -- ".join("(%.2f,%.2f)" % (x * s, y * s) for x, y in pts)
        out.append("\\fill[%s] %s -- cycle;" % (_tikz_color(lay.sig, cat), path))
    out.append("\\end{pgfonlayer}")
    for pts, _ in lay.wires:
        (x0, y0), (x1, y1) = pts
        if abs(x0 - x1) < 0.01:
            out.append("\\draw (%.2f,%.2f) -- (%.2f,%.2f);"
                       % (x0 * s, y0 * s, x1 * s, y1 * s))
        else:
            out.append("\\draw (%.2f,%.2f) to[out=90, in=-90] (%.2f,%.2f);"
                       % (x0 * s, y0 * s, x1 * s, y1 * s))
    for x, y, label in lay.nodes:
        out.append("\\node[circle, fill, inner sep=1.6pt, "
                   "label=right:{%s}] at (%.2f,%.2f) {};"
                   % (_tikz_escape(label), x * s, y * s))
    for x0, y0, x1, y1 in lay.holes:
        out.append("\\draw[dashed] (%.2f,%.2f) rectangle (%.2f,%.2f);"
                   % (x0 * s, y0 * s, x1 * s, y1 * s))
    for x0, y0, x1, y1, sub in lay.boxes:
        out.append("\\draw[very thick] (%.2f,%.2f) rectangle (%.2f,%.2f);"
                   % (x0 * s, y0 * s, x1 * s, y1 * s))
    for x, y, text in lay.labels:
        out.append("\\node[font=\\small] at (%.2f,%.2f) {%s};"
                   % (x * s, y * s, _tikz_escape(text)))
    out.append("\\end{tikzpicture}")
    return "\n".join(out)


def _tikz_color(sig, cat):
    if sig.category(cat).terminal:
        return "white"
    h = int(hashlib.sha256(cat.encode("utf8")).hexdigest(), 16)
    hue = ["blue", "green", "orange", "purple", "yellow", "teal",
           "red", "violet", "brown", "cyan", "lime", "olive"][h % 12]
    return "%s!18" % hue


def _tikz_escape(s):
    return s.replace("_", "\\_").replace("[", "{[}").replace("]", "{]}")


def tikz_standalone(lay):
    return "\n".join([
        "\\documentclass{standalone}",
        "\\usepackage{tikz}",
        "\\pgfdeclarelayer{background}",
        "\\pgfsetlayers{background,main}",
        "\\begin{document}",
        emit_tikz(lay),
        "\\end{document}",
    ])
