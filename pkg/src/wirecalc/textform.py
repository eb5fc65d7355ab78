"""Serialization of diagrams back into the script expression language.

Any leveled diagram prints as a vertical composite of whiskered
generators, parseable by the script front end; used for diagnostics and
for writing generated proofs to disk.
"""

from __future__ import annotations

from .diagram import BoxCell, GenRef, Hole


def word_expr(word):
    if not word.syms:
        return "id(%s)" % word.anchor
    return " . ".join(word.syms)


def gen_expr(gen):
    if isinstance(gen, GenRef):
        if gen.args:
            return "%s[%s]" % (gen.name, ", ".join(gen.args))
        return gen.name
    if isinstance(gen, Hole):
        return "hole(%s => %s)" % (word_expr(gen.src), word_expr(gen.dst))
    if isinstance(gen, BoxCell):
        if gen.direction == "to":
            d = "to"
        else:
            d = "from%d" % (gen.slot + 1)
        pays = ", ".join(diagram_expr(p) for p in gen.payloads)
        return "box(%s, %s, [%s], probe=%s)" % (
            gen.rep, d, pays, word_expr(gen.probe)
        )
    raise TypeError(gen)


def level_expr(sig, word, level):
    """One level as a whiskered generator expression."""
    off, gen = level.offset, level.gen
    core = gen_expr(gen)
    suffix = word.syms[off + len(gen.src):]
    if suffix:
        core = "wr(%s, %s)" % (core, " . ".join(suffix))
    prefix = word.syms[:off]
    if prefix:
        core = "wl(%s, %s)" % (" . ".join(prefix), core)
    return core


def diagram_expr(d):
    """A script expression evaluating to the diagram."""
    if not d.levels:
        return "id(%s)" % word_expr(d.dom)
    parts = []
    for i, lv in enumerate(d.levels):
        parts.append(level_expr(d.sig, d.word_at(i), lv))
    if len(parts) == 1:
        return parts[0]
    return "v(%s)" % ", ".join(parts)
