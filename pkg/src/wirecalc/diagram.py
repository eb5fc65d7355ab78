"""Term representation of progressive string diagrams.

A diagram is an anchored domain word plus a bottom-to-top sequence of
levels; each level stores only its left offset and the generator sitting
there (whisker words are derived, never stored). Equality modulo the
interchange law is decided through a canonical normal form obtained by
greedily moving levels down and to the left.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AnchorMismatch,
    BoundaryMismatch,
    IndexOutOfRange,
    NotIndependent,
)
from .signature import Word


@dataclass(frozen=True)
class GenRef:
    """An instantiated cell family occurrence."""

    name: str
    args: tuple  # tuple[str] functor names, one per family parameter
    src: Word
    dst: Word

    def to_text(self):
        if self.args:
            return "%s[%s]" % (self.name, ", ".join(self.args))
        return self.name


@dataclass(frozen=True)
class BoxCell:
    """A box of the representable-functor notation.

    direction "to" boxes elements into morphisms (payload per slot);
    direction "from" with a slot index boxes a morphism back into the
    element of that slot. Boundaries are instantiated from the RepDecl at
    construction and stored explicitly.
    """

    rep: str
    direction: str  # "to" | "from"
    slot: int
    payloads: tuple  # tuple[Diagram]
    probe: Word
    src: Word
    dst: Word

    def to_text(self):
        if self.direction == "to":
            d = "to"
        elif len(self.payloads) == 1 and self.slot == 0:
            d = "from"
        else:
            d = "from%d" % (self.slot + 1)
        pay = ", ".join(p.to_text() for p in self.payloads)
        return "box(%s, %s, [ %s ], probe=%s)" % (self.rep, d, pay, self.probe.to_text())


@dataclass(frozen=True)
class Hole:
    """One-hole-context marker; carrier for rewrite contexts."""

    src: Word
    dst: Word

    def to_text(self):
        return "hole(%s => %s)" % (self.src.to_text(), self.dst.to_text())


@dataclass(frozen=True)
class Level:
    offset: int
    gen: object  # GenRef | BoxCell | Hole

    @property
    def in_width(self):
        return len(self.gen.src)

    @property
    def out_width(self):
        return len(self.gen.dst)

    def to_text(self):
        return "(%d, %s)" % (self.offset, self.gen.to_text())


def apply_level(sig, word, level):
    """The codomain word of one level applied to ``word``."""
    g = level.gen
    k = level.offset
    n = level.in_width
    if k < 0 or k + n > len(word):
        raise BoundaryMismatch(
            "level %s at offset %d does not fit word %s"
            % (g.to_text(), k, word.to_text())
        )
    if word.syms[k : k + n] != g.src.syms:
        raise BoundaryMismatch(
            "level %s expects %s at offset %d of %s"
            % (g.to_text(), g.src.to_text(), k, word.to_text())
        )
    if sig.cat_at(word, k) != g.src.anchor:
        raise AnchorMismatch(
            "level %s anchored at %s applied in region %s"
            % (g.to_text(), g.src.anchor, sig.cat_at(word, k))
        )
    return Word(word.anchor, word.syms[:k] + g.dst.syms + word.syms[k + n :])


class Diagram:
    """Immutable leveled diagram over a frozen signature."""

    __slots__ = ("sig", "dom", "levels", "_cod", "_hash")

    def __init__(self, sig, dom, levels=()):
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "levels", tuple(levels))
        cod = dom
        for lv in self.levels:
            cod = apply_level(sig, cod, lv)
        object.__setattr__(self, "_cod", cod)
        object.__setattr__(self, "_hash", hash((dom, self.levels)))

    def __setattr__(self, *a):
        raise AttributeError("Diagram is immutable")

    @property
    def cod(self):
        return self._cod

    def boundary(self):
        return (self.dom, self._cod)

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.dom == other.dom
            and self.levels == other.levels
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Diagram(%s)" % self.to_text()

    def to_text(self):
        lv = ", ".join(l.to_text() for l in self.levels)
        return "diagram { dom = %s ; levels = [ %s ] }" % (self.dom.to_text(), lv)

    def word_at(self, i):
        """The word below level i (dom for i == 0)."""
        w = self.dom
        for lv in self.levels[:i]:
            w = apply_level(self.sig, w, lv)
        return w


# -- construction ------------------------------------------------------------


def identity(sig, word):
    return Diagram(sig, word, ())


def from_cell(sig, name, args=()):
    src, dst = sig.instantiate_family(name, tuple(args))
    g = GenRef(name, tuple(args), src, dst)
    return Diagram(sig, src, (Level(0, g),))


def from_gen(sig, gen):
    return Diagram(sig, gen.src, (Level(0, gen),))


def vcompose(lower, upper):
    if lower.cod != upper.dom:
        raise BoundaryMismatch(
            "vertical composite: %s != %s"
            % (lower.cod.to_text(), upper.dom.to_text())
        )
    return Diagram(lower.sig, lower.dom, lower.levels + upper.levels)


def vcompose_all(first, *rest):
    d = first
    for r in rest:
        d = vcompose(d, r)
    return d


def whisker_left(word, d):
    sig = d.sig
    if sig.word_dst(word) != d.dom.anchor:
        raise AnchorMismatch(
            "cannot whisker %s left of a diagram anchored at %s"
            % (word.to_text(), d.dom.anchor)
        )
    shift = len(word)
    dom = Word(word.anchor, word.syms + d.dom.syms)
    levels = tuple(Level(lv.offset + shift, lv.gen) for lv in d.levels)
    return Diagram(sig, dom, levels)


def whisker_right(d, word):
    sig = d.sig
    if sig.word_dst(d.dom) != word.anchor:
        raise AnchorMismatch(
            "cannot whisker %s right of a diagram ending at %s"
            % (word.to_text(), sig.word_dst(d.dom))
        )
    dom = Word(d.dom.anchor, d.dom.syms + word.syms)
    return Diagram(sig, dom, d.levels)


def hcompose(left, right):
    """Canonical stacking: all left levels first, then right's shifted."""
    sig = left.sig
    if sig.word_dst(left.dom) != right.dom.anchor:
        raise AnchorMismatch(
            "horizontal composite: %s does not meet %s"
            % (left.dom.to_text(), right.dom.to_text())
        )
    a = whisker_right(left, right.dom)
    b = whisker_left(left.cod, right)
    return vcompose(a, b)


# -- interchange -------------------------------------------------------------


def _intervals_disjoint(a_start, a_len, b_start, b_len):
    """Disjointness of [a_start, a_start+a_len) and [b_start, b_start+b_len).

    Empty intervals are separated whenever they do not fall strictly
    inside the other interval; two empty intervals at the same seam count
    as separated with the upper passing on the left (the configurations
    are equal by the interchange argument for width-zero blocks).
    """
    if a_len == 0 and b_len == 0:
        return True
    if a_len == 0:
        return not (b_start < a_start < b_start + b_len)
    if b_len == 0:
        return not (a_start < b_start < a_start + a_len)
    return a_start + a_len <= b_start or b_start + b_len <= a_start


COMMUTE_NONE = "none"
UPPER_LEFT = "upper_left"
UPPER_RIGHT = "upper_right"


def levels_commute(d, i):
    """Whether levels i and i+1 commute, and on which side the upper lies."""
    if i < 0 or i >= len(d.levels) - 1:
        raise IndexOutOfRange("no adjacent pair at index %d" % i)
    lo, up = d.levels[i], d.levels[i + 1]
    if not _intervals_disjoint(lo.offset, lo.out_width, up.offset, up.in_width):
        return COMMUTE_NONE
    if up.offset + up.in_width <= lo.offset:
        return UPPER_LEFT
    return UPPER_RIGHT


def swap_adjacent(d, i):
    side = levels_commute(d, i)
    if side == COMMUTE_NONE:
        raise NotIndependent("levels %d and %d overlap" % (i, i + 1))
    lo, up = d.levels[i], d.levels[i + 1]
    if side == UPPER_LEFT:
        new_lower = up
        new_upper = Level(lo.offset - up.in_width + up.out_width, lo.gen)
    else:
        new_lower = Level(up.offset - lo.out_width + lo.in_width, up.gen)
        new_upper = lo
    levels = d.levels[:i] + (new_lower, new_upper) + d.levels[i + 2 :]
    return Diagram(d.sig, d.dom, levels)


def _normalize_box(box):
    pays = tuple(normalize(p) for p in box.payloads)
    if pays == box.payloads:
        return box
    return BoxCell(box.rep, box.direction, box.slot, pays, box.probe, box.src, box.dst)


def _pair_commute(lo, up):
    if not _intervals_disjoint(lo.offset, lo.out_width, up.offset, up.in_width):
        return COMMUTE_NONE
    if up.offset + up.in_width <= lo.offset:
        return UPPER_LEFT
    return UPPER_RIGHT


def _pair_swap(lo, up, side):
    if side == UPPER_LEFT:
        return up, Level(lo.offset - up.in_width + up.out_width, lo.gen)
    return Level(up.offset - lo.out_width + lo.in_width, up.gen), lo


def _bubble_to(levels, j, stop):
    """Bubble levels[j] down to index ``stop``; None if blocked.

    Returns the new level list; relative order of all other levels is
    preserved (they each shift up by one slot as the chosen level passes).
    """
    cur = list(levels)
    for pos in range(j, stop, -1):
        side = _pair_commute(cur[pos - 1], cur[pos])
        if side == COMMUTE_NONE:
            return None
        cur[pos - 1], cur[pos] = _pair_swap(cur[pos - 1], cur[pos], side)
    return cur


def _normalize_pass(d):
    levels = [
        Level(lv.offset, _normalize_box(lv.gen))
        if isinstance(lv.gen, BoxCell)
        else lv
        for lv in d.levels
    ]
    out = []
    work = list(levels)
    while work:
        cands = []  # (key, original_index, bubbled_levels)
        for j in range(len(work)):
            cur = _bubble_to(work, j, 0)
            if cur is None:
                continue
            bottom = cur[0]
            key = (bottom.offset, 0 if bottom.in_width == 0 else 1)
            cands.append((key, j, cur))
        min_key = min(c[0] for c in cands)
        tied = [c for c in cands if c[0] == min_key]
        winner = tied[0]
        for other in tied[1:]:
            # In the winner's bubbled stack every other level moved up one
            # slot if it sat below the winner. Bring the contender down to
            # index 1 and read off which side it passes the bottom on.
            _, jw, curw = winner
            _, jo, _ = other
            idx = jo + 1 if jo < jw else jo
            probe = _bubble_to(curw, idx, 1)
            if probe is not None and _pair_commute(probe[0], probe[1]) == UPPER_LEFT:
                winner = other
        _, _, cur = winner
        out.append(cur[0])
        work = cur[1:]
    return Diagram(d.sig, d.dom, out)


def normalize(d):
    """Left-greedy normal form, iterated to a fixpoint.

    One pass extracts, among the levels that can be bubbled to the
    bottom, the one landing at the smallest offset (zero-input generators
    win ties by passing on the left); box payloads are normalized
    recursively. A pass can expose a smaller landing seam when width-zero
    blocks are involved, so passes repeat until stable; each pass
    lexicographically decreases the emitted key sequence, so the loop
    terminates. Validated against the breadth-first swap oracle.
    """
    cur = d
    for _ in range(len(d.levels) * len(d.levels) + 2):
        nxt = _normalize_pass(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise AssertionError("normal form did not stabilize for %s" % d.to_text())


def equivalent(d1, d2):
    """Equality modulo the interchange law (recursing into boxes)."""
    if d1.dom != d2.dom or d1.cod != d2.cod:
        return False
    return normalize(d1) == normalize(d2)


def enumerate_presentations(d, max_moves=None):
    """All diagrams reachable by adjacent interchange swaps (BFS)."""
    seen = {d}
    frontier = [d]
    moves = 0
    while frontier and (max_moves is None or moves < max_moves):
        moves += 1
        nxt = []
        for cur in frontier:
            for i in range(len(cur.levels) - 1):
                if levels_commute(cur, i) != COMMUTE_NONE:
                    s = swap_adjacent(cur, i)
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
        frontier = nxt
    return seen


# -- boxes -------------------------------------------------------------------


def box_boundary(sig, rep_name, direction, slot, probe):
    """Instantiated (src, dst) of a box of the given kind."""
    rep = sig.rep(rep_name)
    binding = {rep.probe: probe}
    if direction == "to":
        src_t, dst_t = rep.boxed
    else:
        if slot < 0 or slot >= rep.payload_count:
            raise BoundaryMismatch(
                "representation %s has no payload slot %d" % (rep_name, slot)
            )
        src_t, dst_t = rep.payloads[slot]
    src = src_t.substitute(binding)
    dst = dst_t.substitute(binding)
    return sig.word(src.anchor, src.syms), sig.word(dst.anchor, dst.syms)


def make_box(sig, rep_name, direction, payloads, probe, slot=0):
    """Construct a box level's generator, checking payload boundaries."""
    rep = sig.rep(rep_name)
    f = sig.functor(probe.syms[0]) if len(probe) == 1 else None
    if f is not None and (f.src != rep.probe_src or f.dst != rep.probe_dst):
        raise BoundaryMismatch(
            "probe %s : %s -> %s does not fit representation %s (%s -> %s)"
            % (probe.to_text(), f.src, f.dst, rep_name, rep.probe_src, rep.probe_dst)
        )
    if probe.anchor != rep.probe_src or sig.word_dst(probe) != rep.probe_dst:
        raise BoundaryMismatch(
            "probe word %s does not run %s -> %s"
            % (probe.to_text(), rep.probe_src, rep.probe_dst)
        )
    binding = {rep.probe: probe}
    if direction == "to":
        if len(payloads) != rep.payload_count:
            raise BoundaryMismatch(
                "representation %s takes %d payloads, got %d"
                % (rep_name, rep.payload_count, len(payloads))
            )
        for k, p in enumerate(payloads):
            es = rep.payloads[k][0].substitute(binding)
            ed = rep.payloads[k][1].substitute(binding)
            if p.dom != es or p.cod != ed:
                raise BoundaryMismatch(
                    "payload %d of %s box must be %s => %s, got %s => %s"
                    % (k, rep_name, es.to_text(), ed.to_text(),
                       p.dom.to_text(), p.cod.to_text())
                )
    else:
        if len(payloads) != 1:
            raise BoundaryMismatch("a from-box takes exactly one payload")
        bs = rep.boxed[0].substitute(binding)
        bd = rep.boxed[1].substitute(binding)
        p = payloads[0]
        if p.dom != bs or p.cod != bd:
            raise BoundaryMismatch(
                "payload of %s from-box must be %s => %s, got %s => %s"
                % (rep_name, bs.to_text(), bd.to_text(),
                   p.dom.to_text(), p.cod.to_text())
            )
    src, dst = box_boundary(sig, rep_name, direction, slot, probe)
    return BoxCell(rep_name, direction, slot, tuple(payloads), probe, src, dst)


def box_diagram(sig, rep_name, direction, payloads, probe, slot=0):
    b = make_box(sig, rep_name, direction, payloads, probe, slot)
    return Diagram(sig, b.src, (Level(0, b),))


# -- hole utilities ----------------------------------------------------------


def count_holes(d):
    n = 0
    for lv in d.levels:
        if isinstance(lv.gen, Hole):
            n += 1
        elif isinstance(lv.gen, BoxCell):
            for p in lv.gen.payloads:
                n += count_holes(p)
    return n
