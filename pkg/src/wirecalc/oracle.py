"""Brute-force interchange oracle.

Enumerates every diagram up to a level bound over a fixed signature,
partitions each boundary class both by breadth-first swap reachability
and by normal form, and reports any disagreement. This is the ground
truth the greedy normal form is validated against.
"""

from __future__ import annotations

from .diagram import Diagram, GenRef, Level, normalize
from .signature import SignatureBuilder, Word, tmpl


def fixed_signature():
    """Three categories, six functors, six cells.

    Includes one zero-input cell (a unit) and one two-input cell (a cap
    with no outputs), so the enumeration exercises both degenerate
    widths and the seam conventions they force.
    """
    b = SignatureBuilder()
    for c in ("A", "B", "C"):
        b.declare_category(c)
    b.declare_functor("F", "A", "B")
    b.declare_functor("Fp", "A", "B")
    b.declare_functor("G", "B", "C")
    b.declare_functor("Gp", "B", "C")
    b.declare_functor("T", "A", "A")
    b.declare_functor("H", "C", "C")
    b.declare_cell_family("alpha", (), tmpl("A", "F"), tmpl("A", "Fp"))
    b.declare_cell_family("beta", (), tmpl("B", "G"), tmpl("B", "Gp"))
    b.declare_cell_family("gamma", (), tmpl("A", "Fp"), tmpl("A", "F"))
    b.declare_cell_family("unit", (), tmpl("A"), tmpl("A", "T"))
    b.declare_cell_family("cap", (), tmpl("A", "T", "T"), tmpl("A"))
    b.declare_cell_family("rho", (), tmpl("C", "H"), tmpl("C", "H"))
    return b.freeze()


def base_words(sig, max_len=3):
    """All composable words up to a length bound, every anchor."""
    out = []
    for cat in sig.category_names():
        frontier = [Word(cat)]
        out.append(Word(cat))
        for _ in range(max_len):
            nxt = []
            for w in frontier:
                at = sig.word_dst(w)
                for fname in sig.functor_names():
                    f = sig.functor(fname)
                    if f.src == at:
                        w2 = Word(cat, w.syms + (fname,))
                        nxt.append(w2)
                        out.append(w2)
            frontier = nxt
    return out


def applicable_levels(sig, word):
    out = []
    for name in sorted(sig.family_names()):
        src, dst = sig.instantiate_family(name, ())
        g = GenRef(name, (), src, dst)
        for off in range(len(word) - len(src) + 1):
            if word.syms[off : off + len(src)] == src.syms and \
                    sig.cat_at(word, off) == src.anchor:
                out.append(Level(off, g))
    return out


def enumerate_diagrams(sig, max_levels, dom_words):
    """All diagrams with at most ``max_levels`` levels, deduplicated."""
    seen = set()
    for dom in dom_words:
        frontier = [Diagram(sig, dom, ())]
        seen.update(frontier)
        for _ in range(max_levels):
            nxt = []
            for d in frontier:
                w = d.cod
                for lv in applicable_levels(sig, w):
                    d2 = Diagram(sig, dom, d.levels + (lv,))
                    if d2 not in seen:
                        seen.add(d2)
                        nxt.append(d2)
            frontier = nxt
    return seen


def agreement(sig, max_levels=5, dom_words=None, word_len=3):
    """Compare swap-move components with normal-form classes.

    Components are taken over undirected swap edges (a swap and its undo
    land on the two ends of one edge, but seam conventions can make a
    third presentation reachable from only one side, so the closure is
    symmetrized). Returns (diagram_count, component_count, mismatches).
    """
    from .diagram import levels_commute, swap_adjacent

    if dom_words is None:
        dom_words = base_words(sig, word_len)
    diagrams = enumerate_diagrams(sig, max_levels, dom_words)
    parent = {}

    def find(x):
        while parent[x] is not x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra is not rb:
            parent[ra] = rb

    for d in diagrams:
        parent.setdefault(d, d)
    for d in diagrams:
        for i in range(len(d.levels) - 1):
            if levels_commute(d, i) != "none":
                s = swap_adjacent(d, i)
                parent.setdefault(s, s)
                union(d, s)
    comps = {}
    for d in parent:
        comps.setdefault(find(d), []).append(d)
    mismatches = []
    nf_to_comp = {}
    for root, members in sorted(comps.items(), key=lambda kv: kv[0].to_text()):
        nfs = {normalize(p) for p in members}
        if len(nfs) > 1:
            ordered = sorted(members, key=lambda x: x.to_text())
            mismatches.append((ordered[0], ordered[-1]))
            continue
        nf = next(iter(nfs))
        key = (nf, members[0].dom, members[0].cod)
        if key in nf_to_comp:
            mismatches.append((nf_to_comp[key], members[0]))
        else:
            nf_to_comp[key] = members[0]
    return len(diagrams), len(comps), mismatches


def interchange_trials(seed, count):
    """Seeded random interchange-law quadruples; returns failures.

    Builds chains of vertically composable cells on two side-by-side
    wires and compares the two stackings of the horizontal composite.
    """
    import random

    from .diagram import equivalent, hcompose, vcompose

    depth = 6
    b = SignatureBuilder()
    for c in ("A", "B", "C"):
        b.declare_category(c)
    for i in range(depth + 1):
        b.declare_functor("F%d" % i, "A", "B")
        b.declare_functor("G%d" % i, "B", "C")
    for i in range(depth):
        b.declare_cell_family("a%d" % i, (), tmpl("A", "F%d" % i),
                              tmpl("A", "F%d" % (i + 1)))
        b.declare_cell_family("b%d" % i, (), tmpl("B", "G%d" % i),
                              tmpl("B", "G%d" % (i + 1)))
    sig = b.freeze()
    rng = random.Random(seed)
    failures = []
    for trial in range(count):
        i0 = rng.randrange(0, depth - 1)
        j0 = rng.randrange(0, depth - 1)
        k1 = rng.randrange(1, depth - i0)
        k2 = rng.randrange(1, depth - j0)
        cut1 = rng.randrange(0, k1 + 1)
        cut2 = rng.randrange(0, k2 + 1)

        def chain(prefix, start, length):
            from .diagram import from_cell, identity as ident

            if length == 0:
                f = sig.functor("%s%d" % ("F" if prefix == "a" else "G", start))
                return ident(sig, Word(f.src, (f.name,)))
            d = from_cell(sig, "%s%d" % (prefix, start))
            for k in range(start + 1, start + length):
                from .diagram import vcompose as vc

                d = vc(d, from_cell(sig, "%s%d" % (prefix, k)))
            return d

        alpha = chain("a", i0, cut1)
        alpha_p = chain("a", i0 + cut1, k1 - cut1)
        beta = chain("b", j0, cut2)
        beta_p = chain("b", j0 + cut2, k2 - cut2)
        lhs = hcompose(vcompose(alpha, alpha_p), vcompose(beta, beta_p))
        rhs = vcompose(hcompose(alpha, beta), hcompose(alpha_p, beta_p))
        if not equivalent(lhs, rhs):
            failures.append((trial, lhs, rhs))
    return failures
