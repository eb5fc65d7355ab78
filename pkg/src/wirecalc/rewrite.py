"""Rule instantiation, one-hole contexts and proof-step verification.

Rules are pattern pairs over cell variables (matching whole subdiagrams)
and functor variables (matching words). Checking is verification only: a
proof step supplies the context and the full substitution, and the checker
confirms the rewrite by deciding equality modulo interchange. Matching is
offered separately as a best-effort authoring aid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    BoxCell,
    Diagram,
    GenRef,
    Hole,
    Level,
    count_holes,
    enumerate_presentations,
    equivalent,
    make_box,
    normalize,
)
from .errors import (
    BoundaryMismatch,
    MultipleHoles,
    NoHole,
    RuleNotFound,
    StepMismatch,
    UnboundMetavariable,
    UnboundVariable,
)
from .signature import SYM, VAR, FunctorSym, Signature, Template, Word


# -- pattern structure -------------------------------------------------------


@dataclass(frozen=True)
class PCell:
    """Cell family occurrence; args are (kind, name) entries."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class PCellVar:
    name: str


@dataclass(frozen=True)
class PBox:
    rep: str
    direction: str
    slot: int
    payloads: tuple  # tuple[PatternDiagram]
    probe: Template


@dataclass(frozen=True)
class PatternDiagram:
    """Like Diagram, but over templates; level offsets count segments."""

    dom: Template
    levels: tuple = ()  # tuple[(segment_offset, pgen)]

    def cell_vars(self):
        out = []
        for _, g in self.levels:
            if isinstance(g, PCellVar):
                out.append(g.name)
            elif isinstance(g, PBox):
                for p in g.payloads:
                    out.extend(p.cell_vars())
        return out

    def functor_vars(self):
        out = list(self.dom.vars())
        for _, g in self.levels:
            if isinstance(g, PCell):
                out.extend(n for k, n in g.args if k == VAR)
            elif isinstance(g, PBox):
                out.extend(g.probe.vars())
                for p in g.payloads:
                    out.extend(p.functor_vars())
        return out


def ground_template(word):
    return Template(word.anchor, tuple((SYM, s) for s in word.syms))


def ground_pattern(d):
    """Lift a ground Diagram into a PatternDiagram (symbols only)."""
    levels = tuple((lv.offset, _ground_gen(lv.gen)) for lv in d.levels)
    return PatternDiagram(ground_template(d.dom), levels)


def _ground_gen(g):
    if isinstance(g, GenRef):
        return PCell(g.name, tuple((SYM, a) for a in g.args))
    if isinstance(g, BoxCell):
        return PBox(g.rep, g.direction, g.slot,
                    tuple(ground_pattern(p) for p in g.payloads),
                    ground_template(g.probe))
    raise BoundaryMismatch("holes cannot appear in patterns")


@dataclass(frozen=True)
class RewriteRule:
    """A named bidirectional pattern pair.

    ``cell_vars`` maps a variable to its (src, dst) boundary templates;
    ``functor_vars`` maps a variable to (src_cat, dst_cat, single) where
    ``single`` restricts bindings to one-symbol words (required when the
    variable instantiates a cell-family parameter).
    """

    name: str
    lhs: PatternDiagram
    rhs: PatternDiagram
    cell_vars: tuple = ()  # tuple[(name, (src Template, dst Template))]
    functor_vars: tuple = ()  # tuple[(name, (src, dst, single))]

    def cell_var(self, name):
        for n, td in self.cell_vars:
            if n == name:
                return td
        return None

    def functor_var(self, name):
        for n, k in self.functor_vars:
            if n == name:
                return k
        return None


@dataclass
class Substitution:
    cells: dict = field(default_factory=dict)  # name -> Diagram
    functors: dict = field(default_factory=dict)  # name -> Word

    def copy(self):
        return Substitution(dict(self.cells), dict(self.functors))


@dataclass(frozen=True)
class ProofStep:
    rule: str
    forward: bool
    context: Diagram  # contains exactly one Hole
    subst: Substitution


# -- instantiation -----------------------------------------------------------


def _subst_template(sig, t, functors):
    syms = []
    for kind, n in t.entries:
        if kind == SYM:
            syms.append(n)
        else:
            if n not in functors:
                raise UnboundVariable("unbound functor variable %r" % n)
            syms.extend(functors[n].syms)
    return sig.word(t.anchor, tuple(syms))


def _segment_widths(t, functors):
    out = []
    for kind, n in t.entries:
        if kind == SYM:
            out.append(1)
        else:
            if n not in functors:
                raise UnboundVariable("unbound functor variable %r" % n)
            out.append(len(functors[n].syms))
    return out


def instantiate(sig, pattern, subst, rule=None):
    """Ground a pattern at a substitution, returning a Diagram.

    Segment offsets are converted to wire offsets against the running
    word; cell-variable occurrences are replaced by their bound diagrams
    spliced in at the occurrence offset.
    """
    functors = subst.functors
    dom = _subst_template(sig, pattern.dom, functors)
    blocks = _segment_widths(pattern.dom, functors)
    levels = []
    for seg_off, g in pattern.levels:
        if seg_off < 0 or seg_off > len(blocks):
            raise BoundaryMismatch("segment offset %d out of range" % seg_off)
        off = sum(blocks[:seg_off])
        if isinstance(g, PCell):
            args = []
            for kind, n in g.args:
                if kind == SYM:
                    args.append(n)
                else:
                    w = functors.get(n)
                    if w is None:
                        raise UnboundVariable("unbound functor variable %r" % n)
                    if len(w) != 1:
                        raise BoundaryMismatch(
                            "variable %s must bind a single functor, got %s"
                            % (n, w.to_text())
                        )
                    args.append(w.syms[0])
            src, dst = sig.instantiate_family(g.name, tuple(args))
            fam = sig.family(g.name)
            levels.append(Level(off, GenRef(g.name, tuple(args), src, dst)))
            in_segs = len(fam.src_t.entries)
            out_segs = [1] * len(fam.dst_t.entries)
            blocks[seg_off:seg_off + in_segs] = out_segs
        elif isinstance(g, PCellVar):
            d = subst.cells.get(g.name)
            if d is None:
                raise UnboundVariable("unbound cell variable %r" % g.name)
            spec = rule.cell_var(g.name) if rule else None
            if spec is not None:
                st, dt = spec
                want_src = _subst_template(sig, st, functors)
                want_dst = _subst_template(sig, dt, functors)
                if d.dom != want_src or d.cod != want_dst:
                    raise BoundaryMismatch(
                        "cell variable %s must be %s => %s, got %s => %s"
                        % (g.name, want_src.to_text(), want_dst.to_text(),
                           d.dom.to_text(), d.cod.to_text())
                    )
                in_segs = len(st.entries)
                out_segs = _segment_widths(dt, functors)
            else:
                in_segs = 1
                out_segs = [len(d.cod)]
            for lv in d.levels:
                levels.append(Level(lv.offset + off, lv.gen))
            blocks[seg_off:seg_off + in_segs] = out_segs
        elif isinstance(g, PBox):
            probe = _subst_template(sig, g.probe, functors)
            pays = tuple(instantiate(sig, p, subst, rule) for p in g.payloads)
            box = make_box(sig, g.rep, g.direction, pays, probe, g.slot)
            rep = sig.rep(g.rep)
            st, dt = rep.boxed if g.direction == "to" else rep.payloads[g.slot]
            binding = dict(functors)
            binding[rep.probe] = probe
            levels.append(Level(off, box))
            in_segs = len(st.entries)
            out_segs = _segment_widths(dt, binding)
            blocks[seg_off:seg_off + in_segs] = out_segs
        else:
            raise BoundaryMismatch("cannot instantiate %r" % (g,))
    return Diagram(sig, dom, tuple(levels))


# -- rule validation ---------------------------------------------------------


def extend_signature(sig, functors=()):
    """A scratch signature with extra functor symbols (validation only)."""
    ext = Signature.__new__(Signature)
    ext._categories = dict(sig._categories)
    ext._functors = dict(sig._functors)
    for f in functors:
        ext._functors[f.name] = f
    ext._families = dict(sig._families)
    ext._rules = dict(sig._rules)
    ext._reps = dict(sig._reps)
    return ext


def validate_rule(sig, rule):
    """Boundary-check a rule symbolically via fresh placeholder symbols."""
    missing = set(rule.rhs.cell_vars()) - set(rule.lhs.cell_vars())
    bound = set(rule.lhs.functor_vars())
    for name in rule.lhs.cell_vars():
        spec = rule.cell_var(name)
        if spec:
            bound.update(spec[0].vars())
            bound.update(spec[1].vars())
    missing |= set(rule.rhs.functor_vars()) - bound
    if missing:
        raise UnboundMetavariable(
            "rule %s: right side uses unbound %s"
            % (rule.name, ", ".join(sorted(missing)))
        )
    subst = Substitution()
    placeholders = []
    for n, (sc, dc, single) in rule.functor_vars:
        ph = "?" + n
        placeholders.append(FunctorSym(ph, sc, dc))
        subst.functors[n] = Word(sc, (ph,))
    ext = extend_signature(sig, placeholders)
    for n, (st, dt) in rule.cell_vars:
        src = _subst_template(ext, st, subst.functors)
        dst = _subst_template(ext, dt, subst.functors)
        g = GenRef("?" + n, (), src, dst)
        subst.cells[n] = Diagram(ext, src, (Level(0, g),))
    li = instantiate(ext, rule.lhs, subst, rule)
    ri = instantiate(ext, rule.rhs, subst, rule)
    if li.dom != ri.dom or li.cod != ri.cod:
        raise BoundaryMismatch(
            "rule %s: %s => %s versus %s => %s"
            % (rule.name, li.dom.to_text(), li.cod.to_text(),
               ri.dom.to_text(), ri.cod.to_text())
        )
    return li, ri


# -- one-hole contexts -------------------------------------------------------


def plug(context, filler):
    """Replace the unique hole with the filler's levels."""
    n = count_holes(context)
    if n == 0:
        raise NoHole("context has no hole")
    if n > 1:
        raise MultipleHoles("context has %d holes" % n)
    return _plug(context, filler)


def _plug(context, filler):
    sig = context.sig
    levels = []
    for lv in context.levels:
        g = lv.gen
        if isinstance(g, Hole):
            if filler.dom != g.src or filler.cod != g.dst:
                raise BoundaryMismatch(
                    "hole is %s => %s but filler is %s => %s"
                    % (g.src.to_text(), g.dst.to_text(),
                       filler.dom.to_text(), filler.cod.to_text())
                )
            for flv in filler.levels:
                levels.append(Level(flv.offset + lv.offset, flv.gen))
        elif isinstance(g, BoxCell) and any(count_holes(p) for p in g.payloads):
            pays = tuple(
                _plug(p, filler) if count_holes(p) else p for p in g.payloads
            )
            box = make_box(sig, g.rep, g.direction, pays, g.probe, g.slot)
            levels.append(Level(lv.offset, box))
        else:
            levels.append(lv)
    return Diagram(sig, context.dom, tuple(levels))


def hole_diagram(sig, src, dst):
    return Diagram(sig, src, (Level(0, Hole(src, dst)),))


# -- step checking -----------------------------------------------------------


def check_step(sig, current, step):
    """Verify one rewrite step and return the rewritten diagram."""
    rule = sig.rule(step.rule)
    if rule is None:
        raise RuleNotFound("no rule named %r" % step.rule)
    lhs, rhs = (rule.lhs, rule.rhs) if step.forward else (rule.rhs, rule.lhs)
    li = instantiate(sig, lhs, step.subst, rule)
    ri = instantiate(sig, rhs, step.subst, rule)
    expected = plug(step.context, li)
    if not equivalent(current, expected):
        raise StepMismatch(
            "step %s does not match the current diagram" % step.rule,
            current_text=normalize(current).to_text(),
            expected_text=normalize(expected).to_text(),
        )
    return plug(step.context, ri)


# -- best-effort matching ----------------------------------------------------


def _window_extract(sig, pres, i, j):
    """Subdiagram of levels [i, j) plus its one-hole context, or None."""
    from .diagram import apply_level

    word = pres.word_at(i)
    if i == j:
        # empty window: a (w, w) hole over any single position span
        return None
    lo = min(lv.offset for lv in pres.levels[i:j])
    tail = None
    w = word
    for lv in pres.levels[i:j]:
        margin = len(w) - (lv.offset + lv.in_width)
        tail = margin if tail is None else min(tail, margin)
        w = apply_level(sig, w, lv)
    if lo < 0 or tail < 0:
        return None
    sub_dom = Word(sig.cat_at(word, lo), word.syms[lo:len(word) - tail])
    sub_levels = tuple(Level(lv.offset - lo, lv.gen) for lv in pres.levels[i:j])
    try:
        sub = Diagram(sig, sub_dom, sub_levels)
    except Exception:
        return None
    hole = Hole(sub.dom, sub.cod)
    try:
        ctx = Diagram(sig, pres.dom,
                      pres.levels[:i] + (Level(lo, hole),) + pres.levels[j:])
    except Exception:
        return None
    return sub, ctx


def _match_word(sig, tpl, word, rule, binding):
    """Match a template against a word; variables bind greedily shortest."""
    entries = list(tpl.entries)
    syms = list(word.syms)
    cats = [sig.cat_at(word, i) for i in range(len(syms) + 1)]
    if cats[0] != tpl.anchor and not (entries and entries[0][0] == VAR):
        if tpl.anchor != word.anchor:
            return False

    def go(ei, si):
        if ei == len(entries):
            return si == len(syms)
        kind, n = entries[ei]
        if kind == SYM:
            return si < len(syms) and syms[si] == n and go(ei + 1, si + 1)
        spec = rule.functor_var(n)
        sc, dc, single = spec if spec else (None, None, False)
        if n in binding:
            w = binding[n]
            k = len(w)
            return tuple(syms[si:si + k]) == w.syms and go(ei + 1, si + k)
        lengths = [1] if single else range(0, len(syms) - si + 1)
        for k in lengths:
            if si + k > len(syms):
                break
            if sc is not None and cats[si] != sc:
                return False
            if dc is not None and cats[si + k] != dc:
                continue
            binding[n] = Word(cats[si], tuple(syms[si:si + k]))
            if go(ei + 1, si + k):
                return True
            del binding[n]
        return False

    return go(0, 0)


def _bind_chunk(sig, rule, name, chunk_levels, base_word, base_off, subst):
    """Bind a cell variable to a chunk of ground levels starting at base."""
    spec = rule.cell_var(name)
    if spec is None or name in subst.cells:
        return False
    st, dt = spec
    try:
        src = _subst_template(sig, st, subst.functors)
    except UnboundVariable:
        return False
    if base_word.syms[base_off:base_off + len(src)] != src.syms:
        return False
    if sig.cat_at(base_word, base_off) != src.anchor:
        return False
    levels = tuple(Level(lv.offset - base_off, lv.gen) for lv in chunk_levels)
    if any(lv.offset < 0 for lv in levels):
        return False
    try:
        d = Diagram(sig, src, levels)
    except Exception:
        return False
    try:
        dst = _subst_template(sig, dt, subst.functors)
        if d.cod != dst:
            return False
    except UnboundVariable:
        # a lone unbound variable in the target template is inferred
        free = [n for k, n in dt.entries if k == VAR and n not in subst.functors]
        if len(free) != 1:
            return False
        n = free[0]
        spec_f = rule.functor_var(n)
        probe = dict(subst.functors)
        if not _match_word(sig, dt, d.cod, rule, probe):
            return False
        subst.functors.update(probe)
    subst.cells[name] = d
    return True


def _match_seq(sig, rule, plevels, window, word, subst):
    """Match pattern levels against ground levels, in order."""
    if not plevels:
        return not window
    from .diagram import apply_level

    (seg_off, g), rest = plevels[0], plevels[1:]
    if isinstance(g, PCellVar):
        spec = rule.cell_var(g.name)
        if spec is None:
            return False
        for take in range(len(window), -1, -1):
            chunk = window[:take]
            base_off = min([lv.offset for lv in chunk], default=0)
            saved = subst.copy()
            if _bind_chunk(sig, rule, g.name, chunk, word, base_off, subst):
                w2 = word
                for lv in chunk:
                    w2 = apply_level(sig, w2, lv)
                if _match_seq(sig, rule, rest, window[take:], w2, subst):
                    return True
            subst.cells, subst.functors = saved.cells, saved.functors
        return False
    if not window:
        return False
    lv = window[0]
    matched = False
    saved = subst.copy()
    if isinstance(g, PCell) and isinstance(lv.gen, GenRef) and g.name == lv.gen.name:
        matched = True
        for (kind, n), a in zip(g.args, lv.gen.args):
            if kind == SYM:
                if n != a:
                    matched = False
                    break
            else:
                f = sig.functor(a)
                w = Word(f.src, (a,))
                if subst.functors.get(n, w) != w:
                    matched = False
                    break
                subst.functors[n] = w
    elif isinstance(g, PBox) and isinstance(lv.gen, BoxCell):
        b = lv.gen
        matched = (g.rep, g.direction, g.slot) == (b.rep, b.direction, b.slot)
        if matched:
            matched = _match_word(sig, g.probe, b.probe, rule, subst.functors)
        if matched:
            for pp, bp in zip(g.payloads, b.payloads):
                if not (
                    _match_word(sig, pp.dom, bp.dom, rule, subst.functors)
                    and _match_seq(sig, rule, list(pp.levels), list(bp.levels),
                                   bp.dom, subst)
                ):
                    matched = False
                    break
    if matched:
        w2 = apply_level(sig, word, lv)
        if _match_seq(sig, rule, rest, window[1:], w2, subst):
            return True
    subst.cells, subst.functors = saved.cells, saved.functors
    return False


def _match_pattern(sig, rule, sub):
    subst = Substitution()
    if not _match_word(sig, rule.lhs.dom, sub.dom, rule, subst.functors):
        return None
    if _match_seq(sig, rule, list(rule.lhs.levels), list(sub.levels),
                  sub.dom, subst):
        return subst
    return None


def find_matches(sig, d, rule_name, move_budget=16, window_limit=6):
    """Best-effort search for rule redexes; every returned pair verifies
    under check_step. Deterministic ordering; completeness not promised.
    """
    rule = sig.rule(rule_name)
    if rule is None:
        raise RuleNotFound("no rule named %r" % rule_name)
    out = []
    seen = set()
    for pres in sorted(enumerate_presentations(d, move_budget),
                       key=lambda p: p.to_text()):
        n = len(pres.levels)
        for i in range(n):
            for j in range(i + 1, min(n, i + window_limit) + 1):
                got = _window_extract(sig, pres, i, j)
                if got is None:
                    continue
                sub, ctx = got
                subst = _match_pattern(sig, rule, sub)
                if subst is None:
                    continue
                step = ProofStep(rule_name, True, ctx, subst)
                try:
                    check_step(sig, d, step)
                except Exception:
                    continue
                key = (ctx.to_text(), _subst_key(subst))
                if key not in seen:
                    seen.add(key)
                    out.append((ctx, subst))
    return out


def _subst_key(subst):
    return (
        tuple(sorted((k, v.to_text()) for k, v in subst.cells.items())),
        tuple(sorted((k, v.to_text()) for k, v in subst.functors.items())),
    )
