"""Theory constructors: generators plus definitional rules, and derived
diagram builders (wire bending, mates, Kleisli composition, composite
monads, representation boxes, folds and unfolds).

Only definitional equations are installed as rules; everything provable
from them ships as a checked proof in the corpus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    Diagram,
    box_diagram,
    equivalent,
    from_cell,
    identity,
    vcompose,
    whisker_left,
    whisker_right,
)
from .errors import (
    BoundaryMismatch,
    EndpointMismatch,
    NotEndofunctor,
)
from .rewrite import (
    PBox,
    PCell,
    PCellVar,
    PatternDiagram,
    ProofStep,
    RewriteRule,
    check_step,
    find_matches,
)
from .signature import SYM, VAR, Param, RepDecl, Template, Word, tmpl


def _t(anchor, *entries):
    return tmpl(anchor, *entries)


def _v(name):
    return ("?", name)


def _pcell(name, *args):
    out = []
    for a in args:
        if a.startswith("?"):
            out.append((VAR, a[1:]))
        else:
            out.append((SYM, a))
    return PCell(name, tuple(out))


# -- adjunctions -------------------------------------------------------------


@dataclass
class Adjunction:
    """F -| G with unit/counit diagrams; rule names when installed."""

    name: str
    fw: Word  # left adjoint, as a word C -> D
    gw: Word  # right adjoint,  D -> C
    unit: Diagram  # id(C) => F . G
    counit: Diagram  # G . F => id(D)
    snake_l: str = None
    snake_r: str = None

    @property
    def c(self):
        return self.fw.anchor

    @property
    def d(self):
        return self.gw.anchor


def adjunction(b, fname, gname, prefix):
    """Install eta, eps and the two snake rules for F -| G."""
    snap = b.snapshot()
    f = snap.functor(fname)
    g = snap.functor(gname)
    if f.src != g.dst or f.dst != g.src:
        raise EndpointMismatch(
            "%s : %s -> %s and %s : %s -> %s do not form an adjoint pair"
            % (fname, f.src, f.dst, gname, g.src, g.dst)
        )
    c, d = f.src, f.dst
    eta = prefix + "_eta"
    eps = prefix + "_eps"
    b.declare_cell_family(eta, (), _t(c), _t(c, fname, gname))
    b.declare_cell_family(eps, (), _t(d, gname, fname), _t(d))
    snake_l = RewriteRule(
        prefix + "_snakeL",
        lhs=PatternDiagram(_t(c, fname), ((0, PCell(eta)), (1, PCell(eps)))),
        rhs=PatternDiagram(_t(c, fname), ()),
    )
    snake_r = RewriteRule(
        prefix + "_snakeR",
        lhs=PatternDiagram(_t(d, gname), ((1, PCell(eta)), (0, PCell(eps)))),
        rhs=PatternDiagram(_t(d, gname), ()),
    )
    b.declare_rule(snake_l)
    b.declare_rule(snake_r)
    sig = b.snapshot()
    return Adjunction(
        prefix,
        sig.word(c, (fname,)),
        sig.word(d, (gname,)),
        from_cell(sig, eta),
        from_cell(sig, eps),
        snake_l.name,
        snake_r.name,
    )


def identity_adjunction(sig, cat):
    """The trivial adjunction on a category (empty words, empty cells)."""
    w = Word(cat)
    return Adjunction("id_" + cat, w, w, identity(sig, w), identity(sig, w))


def rebind(adj, sig):
    """The same adjunction with its diagrams re-rooted at ``sig``."""
    return Adjunction(
        adj.name,
        adj.fw,
        adj.gw,
        Diagram(sig, adj.unit.dom, adj.unit.levels),
        Diagram(sig, adj.counit.dom, adj.counit.levels),
        adj.snake_l,
        adj.snake_r,
    )


def compose_adjunctions(sig, a1, a2):
    """F'F -| GG' with the nested unit/counit; snakes are corpus proofs."""
    if sig.word_dst(a1.fw) != a2.fw.anchor:
        raise EndpointMismatch(
            "adjunctions do not share the middle category: %s vs %s"
            % (sig.word_dst(a1.fw), a2.fw.anchor)
        )
    unit = vcompose(
        a1.unit, whisker_left(a1.fw, whisker_right(a2.unit, a1.gw))
    )
    counit = vcompose(
        whisker_left(a2.gw, whisker_right(a1.counit, a2.fw)), a2.counit
    )
    return Adjunction(
        a1.name + "." + a2.name,
        a1.fw + a2.fw,
        a2.gw + a1.gw,
        unit,
        counit,
    )


# -- wire bending ------------------------------------------------------------

CORNERS = ("to_upper_right", "to_lower_right", "to_lower_left", "to_upper_left")

# (corner, dir) -> source-corner tag
_BEND_SOURCE = {
    ("to_upper_right", "right"): "TL",
    ("to_lower_right", "right"): "TR",
    ("to_lower_left", "right"): "BR",
    ("to_upper_left", "right"): "BL",
    ("to_upper_left", "left"): "TR",
    ("to_lower_left", "left"): "TL",
    ("to_lower_right", "left"): "BL",
    ("to_upper_right", "left"): "BR",
}


def _strip_prefix(word, pre):
    if word.syms[: len(pre)] != pre.syms:
        raise BoundaryMismatch(
            "%s does not start with %s" % (word.to_text(), pre.to_text())
        )
    return word.syms[len(pre):]


def _strip_suffix(word, suf):
    if len(suf) and word.syms[-len(suf):] != suf.syms:
        raise BoundaryMismatch(
            "%s does not end with %s" % (word.to_text(), suf.to_text())
        )
    return word.syms[: len(word) - len(suf)]


def wire_bend(sig, sigma, corner, direction, adjs):
    """One of the eight wire-bending maps between the four corner types.

    ``adjs`` is the pair (left adjunction F -| G, right adjunction
    F' -| G'); ``corner`` names the target corner and ``direction`` is
    "right" (clockwise) or "left".
    """
    a1, a2 = adjs
    src = _BEND_SOURCE.get((corner, direction))
    if src is None:
        raise BoundaryMismatch("unknown bend %r %r" % (corner, direction))
    dom, cod = sigma.dom, sigma.cod
    if src == "TL":
        h = Word(dom.anchor, _strip_suffix(dom, a2.fw))
        k = Word(sig.word_dst(a1.fw), _strip_prefix(cod, a1.fw))
        if direction == "right":  # TL -> TR, paste eta'
            return vcompose(
                whisker_left(h, a2.unit), whisker_right(sigma, a2.gw)
            )
        # TL -> BL, paste eps
        return vcompose(
            whisker_left(a1.gw, sigma), whisker_right(a1.counit, k)
        )
    if src == "TR":
        h = dom
        inner = Word(sig.word_dst(a1.fw), _strip_prefix(cod, a1.fw))
        k = Word(inner.anchor, _strip_suffix(inner, a2.gw))
        if direction == "left":  # TR -> TL, paste eps'
            return vcompose(
                whisker_right(sigma, a2.fw),
                whisker_left(a1.fw + k, a2.counit),
            )
        # TR -> BR, paste eps
        return vcompose(
            whisker_left(a1.gw, sigma),
            whisker_right(a1.counit, k + a2.gw),
        )
    if src == "BR":
        h = Word(sig.word_dst(a1.gw), _strip_prefix(dom, a1.gw))
        k = Word(cod.anchor, _strip_suffix(cod, a2.gw))
        if direction == "left":  # BR -> TR, paste eta
            return vcompose(
                whisker_right(a1.unit, h), whisker_left(a1.fw, sigma)
            )
        # BR -> BL, paste eps'
        return vcompose(
            whisker_right(sigma, a2.fw), whisker_left(k, a2.counit)
        )
    # src == "BL"
    inner = Word(sig.word_dst(a1.gw), _strip_prefix(dom, a1.gw))
    h = Word(inner.anchor, _strip_suffix(inner, a2.fw))
    k = cod
    if direction == "right":  # BL -> TL, paste eta
        return vcompose(
            whisker_right(a1.unit, h + a2.fw), whisker_left(a1.fw, sigma)
        )
    # BL -> BR, paste eta'
    return vcompose(
        whisker_left(a1.gw + h, a2.unit), whisker_right(sigma, a2.gw)
    )


def mate(sig, sigma, adj):
    """The mate under a single adjunction (both bending adjunctions equal).

    A transformation H . G => K . G maps to F . H => K . F and back.
    """
    adjs = (adj, adj)
    dom, cod = sigma.dom, sigma.cod
    g = adj.gw.syms
    f = adj.fw.syms
    if dom.syms[: len(g)] == g and cod.syms[-len(g):] == g:
        step = wire_bend(sig, sigma, "to_lower_left", "right", adjs)
        return wire_bend(sig, step, "to_upper_left", "right", adjs)
    if dom.syms[-len(f):] == f and cod.syms[: len(f)] == f:
        step = wire_bend(sig, sigma, "to_lower_left", "left", adjs)
        return wire_bend(sig, step, "to_lower_right", "left", adjs)
    raise BoundaryMismatch(
        "no mate for %s => %s under %s"
        % (dom.to_text(), cod.to_text(), adj.name)
    )


def bend_cancellation_steps(sig, roundtrip, target, rules, budget=6):
    """Search the snake steps reducing a bend roundtrip back to ``target``.

    Every returned step verifies under check_step; raises if the
    reduction cannot be found within the budget.
    """
    steps = []
    current = roundtrip
    for _ in range(8):
        if equivalent(current, target):
            return steps
        advanced = False
        for rule in rules:
            for ctx, subst in find_matches(sig, current, rule, budget, 4):
                step = ProofStep(rule, True, ctx, subst)
                nxt = check_step(sig, current, step)
                if len(nxt.levels) < len(current.levels):
                    steps.append(step)
                    current = nxt
                    advanced = True
                    break
            if advanced:
                break
        if not advanced:
            raise BoundaryMismatch("no cancellation found")
    if equivalent(current, target):
        return steps
    raise BoundaryMismatch("cancellation did not reach the target")


# -- monads ------------------------------------------------------------------


@dataclass
class Monad:
    name: str
    t: str
    cat: str
    eta: str
    mu: str
    unit_l: str
    unit_r: str
    assoc: str

    def tw(self):
        return Word(self.cat, (self.t,))


def monad(b, tname, prefix):
    snap = b.snapshot()
    t = snap.functor(tname)
    if t.src != t.dst:
        raise NotEndofunctor("%s : %s -> %s is not an endofunctor" % (tname, t.src, t.dst))
    c = t.src
    eta = prefix + "_eta"
    mu = prefix + "_mu"
    b.declare_cell_family(eta, (), _t(c), _t(c, tname))
    b.declare_cell_family(mu, (), _t(c, tname, tname), _t(c, tname))
    unit_l = RewriteRule(
        prefix + "_unitL",
        lhs=PatternDiagram(_t(c, tname), ((0, PCell(eta)), (0, PCell(mu)))),
        rhs=PatternDiagram(_t(c, tname), ()),
    )
    unit_r = RewriteRule(
        prefix + "_unitR",
        lhs=PatternDiagram(_t(c, tname), ((1, PCell(eta)), (0, PCell(mu)))),
        rhs=PatternDiagram(_t(c, tname), ()),
    )
    assoc = RewriteRule(
        prefix + "_assoc",
        lhs=PatternDiagram(
            _t(c, tname, tname, tname), ((0, PCell(mu)), (0, PCell(mu)))
        ),
        rhs=PatternDiagram(
            _t(c, tname, tname, tname), ((1, PCell(mu)), (0, PCell(mu)))
        ),
    )
    for r in (unit_l, unit_r, assoc):
        b.declare_rule(r)
    return Monad(prefix, tname, c, eta, mu, unit_l.name, unit_r.name, assoc.name)


def monad_from_adjunction(sig, adj):
    """(eta, mu) of the induced monad on G . F; axioms are corpus proofs."""
    mu = whisker_left(adj.fw, whisker_right(adj.counit, adj.gw))
    return adj.unit, mu


def monad_morphism_rules(b, sigma, m, mp, prefix):
    """sigma : T => T' commuting with units and multiplications."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(sigma, ())
    if src != Word(m.cat, (m.t,)) or dst != Word(mp.cat, (mp.t,)):
        raise BoundaryMismatch(
            "monad morphism must be %s => %s, got %s => %s"
            % (m.t, mp.t, src.to_text(), dst.to_text())
        )
    c = m.cat
    unit = RewriteRule(
        prefix + "_unit",
        lhs=PatternDiagram(_t(c), ((0, PCell(m.eta)), (0, PCell(sigma)))),
        rhs=PatternDiagram(_t(c), ((0, PCell(mp.eta)),)),
    )
    mult = RewriteRule(
        prefix + "_mult",
        lhs=PatternDiagram(
            _t(c, m.t, m.t), ((0, PCell(m.mu)), (0, PCell(sigma)))
        ),
        rhs=PatternDiagram(
            _t(c, m.t, m.t),
            ((0, PCell(sigma)), (1, PCell(sigma)), (0, PCell(mp.mu))),
        ),
    )
    b.declare_rule(unit)
    b.declare_rule(mult)
    return [unit.name, mult.name]


def em_algebra_rules(b, m, x, a, prefix):
    """(X, a : X.T => X) satisfying the unit and multiplication laws."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(a, ())
    xw = snap.word(snap.functor(x).src, (x,))
    if src != Word(xw.anchor, (x, m.t)) or dst != xw:
        raise BoundaryMismatch(
            "algebra map must be %s . %s => %s, got %s => %s"
            % (x, m.t, x, src.to_text(), dst.to_text())
        )
    one = xw.anchor
    unit = RewriteRule(
        prefix + "_unit",
        lhs=PatternDiagram(_t(one, x), ((1, PCell(m.eta)), (0, PCell(a)))),
        rhs=PatternDiagram(_t(one, x), ()),
    )
    mult = RewriteRule(
        prefix + "_mult",
        lhs=PatternDiagram(
            _t(one, x, m.t, m.t), ((1, PCell(m.mu)), (0, PCell(a)))
        ),
        rhs=PatternDiagram(
            _t(one, x, m.t, m.t), ((0, PCell(a)), (0, PCell(a)))
        ),
    )
    b.declare_rule(unit)
    b.declare_rule(mult)
    return [unit.name, mult.name]


def em_hom_rule(b, m, h, x, a, y, bb, prefix):
    """h : X => Y is a homomorphism from (X, a) to (Y, b)."""
    snap = b.snapshot()
    one = snap.functor(x).src
    rule = RewriteRule(
        prefix + "_hom",
        lhs=PatternDiagram(_t(one, x, m.t), ((0, PCell(a)), (0, PCell(h)))),
        rhs=PatternDiagram(_t(one, x, m.t), ((0, PCell(h)), (0, PCell(bb)))),
    )
    b.declare_rule(rule)
    return [rule.name]


def kleisli_compose(sig, g, f, m):
    """mu . T g . f, the composite of effectful morphisms."""
    tw = Word(m.cat, (m.t,))
    if f.cod.syms[-1:] != (m.t,) or g.cod.syms[-1:] != (m.t,):
        raise BoundaryMismatch("Kleisli morphisms must end in %s" % m.t)
    y = Word(f.cod.anchor, f.cod.syms[:-1])
    if g.dom != y:
        raise BoundaryMismatch(
            "middle objects disagree: %s vs %s" % (y.to_text(), g.dom.to_text())
        )
    z = Word(g.cod.anchor, g.cod.syms[:-1])
    return vcompose(
        vcompose(f, whisker_right(g, tw)),
        whisker_left(z, from_cell(sig, m.mu)),
    )


def cmonad_morphism_rules(b, fname, f, m, mp, prefix):
    """(F, f : T'F => FT): a morphism in the category of monads."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(f, ())
    want_src = Word(m.cat, (fname, mp.t))
    want_dst = Word(m.cat, (m.t, fname))
    if src != want_src or dst != want_dst:
        raise BoundaryMismatch(
            "morphism cell must be %s => %s, got %s => %s"
            % (want_src.to_text(), want_dst.to_text(), src.to_text(), dst.to_text())
        )
    c = m.cat
    unit = RewriteRule(
        prefix + "_unit",
        lhs=PatternDiagram(_t(c, fname), ((1, PCell(mp.eta)), (0, PCell(f)))),
        rhs=PatternDiagram(_t(c, fname), ((0, PCell(m.eta)),)),
    )
    mult = RewriteRule(
        prefix + "_mult",
        lhs=PatternDiagram(
            _t(c, fname, mp.t, mp.t), ((1, PCell(mp.mu)), (0, PCell(f)))
        ),
        rhs=PatternDiagram(
            _t(c, fname, mp.t, mp.t),
            ((0, PCell(f)), (1, PCell(f)), (0, PCell(m.mu))),
        ),
    )
    b.declare_rule(unit)
    b.declare_rule(mult)
    return [unit.name, mult.name]


def cmonadstar_morphism_rules(b, fname, f, m, mp, prefix):
    """(F, f : FT => T'F): a morphism in the starred category of monads."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(f, ())
    want_src = Word(m.cat, (m.t, fname))
    want_dst = Word(m.cat, (fname, mp.t))
    if src != want_src or dst != want_dst:
        raise BoundaryMismatch(
            "morphism cell must be %s => %s, got %s => %s"
            % (want_src.to_text(), want_dst.to_text(), src.to_text(), dst.to_text())
        )
    c = m.cat
    unit = RewriteRule(
        prefix + "_unit",
        lhs=PatternDiagram(_t(c, fname), ((0, PCell(m.eta)), (0, PCell(f)))),
        rhs=PatternDiagram(_t(c, fname), ((1, PCell(mp.eta)),)),
    )
    mult = RewriteRule(
        prefix + "_mult",
        lhs=PatternDiagram(
            _t(c, m.t, m.t, fname), ((0, PCell(m.mu)), (0, PCell(f)))
        ),
        rhs=PatternDiagram(
            _t(c, m.t, m.t, fname),
            ((1, PCell(f)), (0, PCell(f)), (1, PCell(mp.mu))),
        ),
    )
    b.declare_rule(unit)
    b.declare_rule(mult)
    return [unit.name, mult.name]


def distributive_law_rules(b, delta, m, mp, prefix):
    """delta : T'.T => T.T' satisfying the four compatibility equations."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(delta, ())
    c = m.cat
    if src != Word(c, (mp.t, m.t)) or dst != Word(c, (m.t, mp.t)):
        raise BoundaryMismatch(
            "distributive law must be %s . %s => %s . %s, got %s => %s"
            % (mp.t, m.t, m.t, mp.t, src.to_text(), dst.to_text())
        )
    eta1 = RewriteRule(
        prefix + "_eta1",
        lhs=PatternDiagram(_t(c, m.t), ((0, PCell(mp.eta)), (0, PCell(delta)))),
        rhs=PatternDiagram(_t(c, m.t), ((1, PCell(mp.eta)),)),
    )
    eta2 = RewriteRule(
        prefix + "_eta2",
        lhs=PatternDiagram(_t(c, mp.t), ((1, PCell(m.eta)), (0, PCell(delta)))),
        rhs=PatternDiagram(_t(c, mp.t), ((0, PCell(m.eta)),)),
    )
    mu1 = RewriteRule(
        prefix + "_mu1",
        lhs=PatternDiagram(
            _t(c, mp.t, mp.t, m.t), ((0, PCell(mp.mu)), (0, PCell(delta)))
        ),
        rhs=PatternDiagram(
            _t(c, mp.t, mp.t, m.t),
            ((1, PCell(delta)), (0, PCell(delta)), (1, PCell(mp.mu))),
        ),
    )
    mu2 = RewriteRule(
        prefix + "_mu2",
        lhs=PatternDiagram(
            _t(c, mp.t, m.t, m.t), ((1, PCell(m.mu)), (0, PCell(delta)))
        ),
        rhs=PatternDiagram(
            _t(c, mp.t, m.t, m.t),
            ((0, PCell(delta)), (1, PCell(delta)), (0, PCell(m.mu))),
        ),
    )
    for r in (eta1, eta2, mu1, mu2):
        b.declare_rule(r)
    return [eta1.name, eta2.name, mu1.name, mu2.name]


def composite_monad(sig, m, mp, delta):
    """(eta, mu) of the composite monad on T . T'."""
    tw = Word(m.cat, (m.t,))
    tpw = Word(mp.cat, (mp.t,))
    eta = vcompose(from_cell(sig, m.eta), whisker_left(tw, from_cell(sig, mp.eta)))
    lv1 = whisker_left(tw, whisker_right(from_cell(sig, delta), tpw))
    lv2 = whisker_right(from_cell(sig, m.mu), tpw + tpw)
    lv3 = whisker_left(tw, from_cell(sig, mp.mu))
    return eta, vcompose(vcompose(lv1, lv2), lv3)


# -- representations ---------------------------------------------------------


def _retarget(t, probe, newvar):
    entries = tuple(
        (VAR, newvar) if (k == VAR and n == probe) else (k, n)
        for k, n in t.entries
    )
    return Template(t.anchor, entries)


def _probe_pos(t, probe):
    for i, (k, n) in enumerate(t.entries):
        if k == VAR and n == probe:
            return i
    return None


def representation_rules(b, rep_name, prefix):
    """The generic box calculus of a representation declaration.

    payload_count 1 yields the two iso rules and the push/pop pair;
    payload_count 2 additionally specializes to the pairing/projection
    identities of binary (co)products.
    """
    snap = b.snapshot()
    rep = snap.rep(rep_name)
    n = rep.payload_count
    x = rep.probe
    y = x + "__2"
    pv = Template(rep.probe_src, ((VAR, x),))
    pv2 = Template(rep.probe_src, ((VAR, y),))
    fvars = (
        (x, (rep.probe_src, rep.probe_dst, False)),
        (y, (rep.probe_src, rep.probe_dst, False)),
    )
    rvars = tuple(
        ("r%d" % k, (rep.payloads[k][0], rep.payloads[k][1])) for k in range(n)
    )
    vvar = ("v", rep.boxed)
    cov = rep.variance == "covariant"
    if cov:
        hvar = ("h", (Template(rep.probe_src, ((VAR, x),)),
                      Template(rep.probe_src, ((VAR, y),))))
    else:
        hvar = ("h", (Template(rep.probe_src, ((VAR, y),)),
                      Template(rep.probe_src, ((VAR, x),))))
    bs, bd = rep.boxed
    rules = []

    def payload_var(k):
        return PatternDiagram(rep.payloads[k][0], ((0, PCellVar("r%d" % k)),))

    def boxed_var():
        return PatternDiagram(bs, ((0, PCellVar("v")),))

    to_box = PBox(rep_name, "to", 0, tuple(payload_var(k) for k in range(n)), pv)

    # iso A_k: unbox a boxed tuple back to its k-th component
    for k in range(n):
        es, ed = rep.payloads[k]
        inner = PatternDiagram(bs, ((0, to_box),))
        lhs = PatternDiagram(es, ((0, PBox(rep_name, "from", k, (inner,), pv)),))
        rhs = PatternDiagram(es, ((0, PCellVar("r%d" % k)),))
        suffix = "_iso_a" if n == 1 else "_proj%d" % (k + 1)
        rules.append(RewriteRule(prefix + suffix, lhs, rhs,
                                 cell_vars=rvars, functor_vars=fvars[:1]))

    # iso B: box the tuple of unboxings back to the morphism
    pays = tuple(
        PatternDiagram(
            rep.payloads[k][0],
            ((0, PBox(rep_name, "from", k, (boxed_var(),), pv)),),
        )
        for k in range(n)
    )
    lhs = PatternDiagram(bs, ((0, PBox(rep_name, "to", 0, pays, pv)),))
    rhs = PatternDiagram(bs, ((0, PCellVar("v")),))
    suffix = "_iso_b" if n == 1 else "_pair_iso"
    rules.append(RewriteRule(prefix + suffix, lhs, rhs,
                             cell_vars=(vvar,), functor_vars=fvars[:1]))

    if cov:
        ib = _probe_pos(bd, x)
        to_box2 = PBox(
            rep_name, "to", 0,
            tuple(
                PatternDiagram(
                    rep.payloads[k][0],
                    ((0, PCellVar("r%d" % k)),
                     (_probe_pos(rep.payloads[k][1], x), PCellVar("h"))),
                )
                for k in range(n)
            ),
            pv2,
        )
        lhs = PatternDiagram(bs, ((0, to_box), (ib, PCellVar("h"))))
        rhs = PatternDiagram(bs, ((0, to_box2),))
        rules.append(RewriteRule(prefix + "_push", lhs, rhs,
                                 cell_vars=rvars + (hvar,), functor_vars=fvars))
        for k in range(n):
            es, ed = rep.payloads[k]
            ik = _probe_pos(ed, x)
            lhs = PatternDiagram(
                es,
                ((0, PBox(rep_name, "from", k, (boxed_var(),), pv)),
                 (ik, PCellVar("h"))),
            )
            comp = PatternDiagram(bs, ((0, PCellVar("v")), (ib, PCellVar("h"))))
            rhs = PatternDiagram(
                es, ((0, PBox(rep_name, "from", k, (comp,), pv2)),)
            )
            suffix = "_pop" if n == 1 else "_pop%d" % (k + 1)
            rules.append(RewriteRule(prefix + suffix, lhs, rhs,
                                     cell_vars=(vvar, hvar), functor_vars=fvars))
    else:
        ib = _probe_pos(bs, x)
        bs2 = _retarget(bs, x, y)
        to_box2 = PBox(
            rep_name, "to", 0,
            tuple(
                PatternDiagram(
                    _retarget(rep.payloads[k][0], x, y),
                    ((_probe_pos(rep.payloads[k][0], x), PCellVar("h")),
                     (0, PCellVar("r%d" % k))),
                )
                for k in range(n)
            ),
            pv2,
        )
        lhs = PatternDiagram(bs2, ((ib, PCellVar("h")), (0, to_box)))
        rhs = PatternDiagram(bs2, ((0, to_box2),))
        rules.append(RewriteRule(prefix + "_push", lhs, rhs,
                                 cell_vars=rvars + (hvar,), functor_vars=fvars))
        for k in range(n):
            es, ed = rep.payloads[k]
            ik = _probe_pos(es, x)
            es2 = _retarget(es, x, y)
            comp = PatternDiagram(
                bs2, ((ib, PCellVar("h")), (0, PCellVar("v")))
            )
            lhs = PatternDiagram(
                es2,
                ((ik, PCellVar("h")),
                 (0, PBox(rep_name, "from", k, (boxed_var(),), pv))),
            )
            rhs = PatternDiagram(
                es2, ((0, PBox(rep_name, "from", k, (comp,), pv2)),)
            )
            suffix = "_pop" if n == 1 else "_pop%d" % (k + 1)
            rules.append(RewriteRule(prefix + suffix, lhs, rhs,
                                     cell_vars=(vvar, hvar), functor_vars=fvars))
    for r in rules:
        b.declare_rule(r)
    return [r.name for r in rules]


# -- limits and colimits -----------------------------------------------------


def initial_rules(b, zero, prefix):
    """bang[X] : Zero => X plus the uniqueness schema."""
    snap = b.snapshot()
    z = snap.functor(zero)
    one, c = z.src, z.dst
    bang = prefix + "_bang"
    b.declare_cell_family(
        bang, (Param("X", one, c),), _t(one, zero), _t(one, _v("X"))
    )
    uniq = RewriteRule(
        prefix + "_uniq",
        lhs=PatternDiagram(_t(one, zero), ((0, PCellVar("f")),)),
        rhs=PatternDiagram(_t(one, zero), ((0, _pcell(bang, "?X")),)),
        cell_vars=(("f", (_t(one, zero), Template(one, ((VAR, "X"),)))),),
        functor_vars=(("X", (one, c, True)),),
    )
    b.declare_rule(uniq)
    return [uniq.name], bang


def terminal_rules(b, one_ob, prefix):
    snap = b.snapshot()
    t = snap.functor(one_ob)
    one, c = t.src, t.dst
    bang = prefix + "_bang"
    b.declare_cell_family(
        bang, (Param("X", one, c),), _t(one, _v("X")), _t(one, one_ob)
    )
    uniq = RewriteRule(
        prefix + "_uniq",
        lhs=PatternDiagram(Template(one, ((VAR, "X"),)), ((0, PCellVar("f")),)),
        rhs=PatternDiagram(Template(one, ((VAR, "X"),)), ((0, _pcell(bang, "?X")),)),
        cell_vars=(("f", (Template(one, ((VAR, "X"),)), _t(one, one_ob))),),
        functor_vars=(("X", (one, c, True)),),
    )
    b.declare_rule(uniq)
    return [uniq.name], bang


def product_rules(b, p, y, z, prefix):
    """Binary product P of Y and Z as a two-payload representation."""
    snap = b.snapshot()
    fy, fz, fp = snap.functor(y), snap.functor(z), snap.functor(p)
    one, c = fy.src, fy.dst
    decl = RepDecl(
        name=prefix,
        probe="X",
        probe_src=one,
        probe_dst=c,
        payloads=(
            (Template(one, ((VAR, "X"),)), _t(one, y)),
            (Template(one, ((VAR, "X"),)), _t(one, z)),
        ),
        boxed=(Template(one, ((VAR, "X"),)), _t(one, p)),
        variance="contravariant",
    )
    b.declare_representation(decl)
    return representation_rules(b, prefix, prefix)


def coproduct_rules(b, p, x, y, prefix):
    """Binary coproduct P of X and Y (covariant two-payload rep)."""
    snap = b.snapshot()
    fx, fy = snap.functor(x), snap.functor(y)
    one, c = fx.src, fx.dst
    decl = RepDecl(
        name=prefix,
        probe="Z",
        probe_src=one,
        probe_dst=c,
        payloads=(
            (_t(one, x), Template(one, ((VAR, "Z"),))),
            (_t(one, y), Template(one, ((VAR, "Z"),))),
        ),
        boxed=(_t(one, p), Template(one, ((VAR, "Z"),))),
        variance="covariant",
    )
    b.declare_representation(decl)
    return representation_rules(b, prefix, prefix)


def pairing(sig, rep_name, f, g):
    probe = f.dom
    return box_diagram(sig, rep_name, "to", (f, g), probe)


def projection(sig, rep_name, p_word, slot):
    return box_diagram(
        sig, rep_name, "from", (identity(sig, p_word),), p_word, slot
    )


def initial_algebra_rules(b, m_t, mu_ob, in_name, prefix):
    """Structure cell in : Mu.T => Mu plus the boxed fold calculus.

    Rules: the computation law (fold is a homomorphism), reflection
    (fold of the structure map is the identity) and the cancellation law
    in . fold(T in) = fold(in), whose homomorphism side condition holds
    by reflexivity. Uniqueness beyond these instances is meta-level.
    """
    snap = b.snapshot()
    t = snap.functor(m_t)
    muf = snap.functor(mu_ob)
    one, c = muf.src, muf.dst
    if t.src != c or t.dst != c:
        raise NotEndofunctor("%s must be an endofunctor on %s" % (m_t, c))
    b.declare_cell_family(in_name, (), _t(one, mu_ob, m_t), _t(one, mu_ob))
    rep = RepDecl(
        name=prefix + "_fold",
        probe="W",
        probe_src=one,
        probe_dst=c,
        payloads=((Template(one, ((VAR, "W"), (SYM, m_t))),
                   Template(one, ((VAR, "W"),))),),
        boxed=(_t(one, mu_ob), Template(one, ((VAR, "W"),))),
        variance="covariant",
        strict=False,
    )
    b.declare_representation(rep)
    wv = (("W", (one, c, False)),)
    avar = (("a", (Template(one, ((VAR, "W"), (SYM, m_t))),
                   Template(one, ((VAR, "W"),)))),)
    a_pat = PatternDiagram(
        Template(one, ((VAR, "W"), (SYM, m_t))), ((0, PCellVar("a")),)
    )
    fold_a = PBox(prefix + "_fold", "to", 0, (a_pat,),
                  Template(one, ((VAR, "W"),)))
    comp = RewriteRule(
        prefix + "_comp",
        lhs=PatternDiagram(_t(one, mu_ob, m_t),
                           ((0, PCell(in_name)), (0, fold_a))),
        rhs=PatternDiagram(_t(one, mu_ob, m_t),
                           ((0, fold_a), (0, PCellVar("a")))),
        cell_vars=avar,
        functor_vars=wv,
    )
    in_pat = PatternDiagram(_t(one, mu_ob, m_t), ((0, PCell(in_name)),))
    fold_in = PBox(prefix + "_fold", "to", 0, (in_pat,), _t(one, mu_ob))
    refl = RewriteRule(
        prefix + "_refl",
        lhs=PatternDiagram(_t(one, mu_ob), ((0, fold_in),)),
        rhs=PatternDiagram(_t(one, mu_ob), ()),
    )
    tin_pat = PatternDiagram(_t(one, mu_ob, m_t, m_t), ((0, PCell(in_name)),))
    fold_tin = PBox(prefix + "_fold", "to", 0, (tin_pat,),
                    _t(one, mu_ob, m_t))
    cancel = RewriteRule(
        prefix + "_cancel",
        lhs=PatternDiagram(_t(one, mu_ob), ((0, fold_tin), (0, PCell(in_name)))),
        rhs=PatternDiagram(_t(one, mu_ob), ((0, fold_in),)),
    )
    for r in (comp, refl, cancel):
        b.declare_rule(r)
    return [comp.name, refl.name, cancel.name]


def terminal_coalgebra_rules(b, m_t, nu_ob, out_name, prefix):
    """Structure cell out : Nu => Nu.T plus the boxed unfold calculus."""
    snap = b.snapshot()
    t = snap.functor(m_t)
    nuf = snap.functor(nu_ob)
    one, c = nuf.src, nuf.dst
    if t.src != c or t.dst != c:
        raise NotEndofunctor("%s must be an endofunctor on %s" % (m_t, c))
    b.declare_cell_family(out_name, (), _t(one, nu_ob), _t(one, nu_ob, m_t))
    rep = RepDecl(
        name=prefix + "_unfold",
        probe="W",
        probe_src=one,
        probe_dst=c,
        payloads=((Template(one, ((VAR, "W"),)),
                   Template(one, ((VAR, "W"), (SYM, m_t)))),),
        boxed=(Template(one, ((VAR, "W"),)), _t(one, nu_ob)),
        variance="covariant",
        strict=False,
    )
    b.declare_representation(rep)
    wv = (("W", (one, c, False)),)
    fvar = (("f", (Template(one, ((VAR, "W"),)),
                   Template(one, ((VAR, "W"), (SYM, m_t))))),)
    f_pat = PatternDiagram(Template(one, ((VAR, "W"),)), ((0, PCellVar("f")),))
    unfold_f = PBox(prefix + "_unfold", "to", 0, (f_pat,),
                    Template(one, ((VAR, "W"),)))
    comp = RewriteRule(
        prefix + "_comp",
        lhs=PatternDiagram(Template(one, ((VAR, "W"),)),
                           ((0, unfold_f), (0, PCell(out_name)))),
        rhs=PatternDiagram(Template(one, ((VAR, "W"),)),
                           ((0, PCellVar("f")), (0, unfold_f))),
        cell_vars=fvar,
        functor_vars=wv,
    )
    out_pat = PatternDiagram(_t(one, nu_ob), ((0, PCell(out_name)),))
    unfold_out = PBox(prefix + "_unfold", "to", 0, (out_pat,), _t(one, nu_ob))
    refl = RewriteRule(
        prefix + "_refl",
        lhs=PatternDiagram(_t(one, nu_ob), ((0, unfold_out),)),
        rhs=PatternDiagram(_t(one, nu_ob), ()),
    )
    tout_pat = PatternDiagram(_t(one, nu_ob, m_t), ((0, PCell(out_name)),))
    unfold_tout = PBox(prefix + "_unfold", "to", 0, (tout_pat,),
                       _t(one, nu_ob, m_t))
    cancel = RewriteRule(
        prefix + "_cancel",
        lhs=PatternDiagram(_t(one, nu_ob),
                           ((0, PCell(out_name)), (0, unfold_tout))),
        rhs=PatternDiagram(_t(one, nu_ob), ((0, unfold_out),)),
    )
    for r in (comp, refl, cancel):
        b.declare_rule(r)
    return [comp.name, refl.name, cancel.name]


# -- Kan extensions ----------------------------------------------------------


def kan_extension_rules(b, j, f, side, lan, counit, prefix):
    """Left (or right) Kan extension of F along J as a boxed representation.

    Declares the extension functor and counit cell and installs the
    computation, uniqueness and push rules; reflection and fusion are
    corpus proofs.
    """
    snap = b.snapshot()
    jf = snap.functor(j)
    ff = snap.functor(f)
    if jf.src != ff.src:
        raise BoundaryMismatch("%s and %s must share their source" % (j, f))
    bcat, acat, ccat = jf.src, jf.dst, ff.dst
    b.declare_functor(lan, acat, ccat)
    hvar_t = Template(acat, ((VAR, "H"),))
    if side == "left":
        b.declare_cell_family(counit, (), _t(bcat, f), _t(bcat, j, lan))
        rep = RepDecl(
            name=prefix + "_box",
            probe="H",
            probe_src=acat,
            probe_dst=ccat,
            payloads=((_t(bcat, f), Template(bcat, ((SYM, j), (VAR, "H")))),),
            boxed=(_t(acat, lan), hvar_t),
            variance="covariant",
        )
        b.declare_representation(rep)
        sv = (("s", (_t(bcat, f), Template(bcat, ((SYM, j), (VAR, "H"))))),)
        bv = (("bt", (_t(acat, lan), hvar_t)),)
        hv = (("h", (hvar_t, Template(acat, ((VAR, "H2"),)))),)
        fvars = (("H", (acat, ccat, False)), ("H2", (acat, ccat, False)))
        s_pat = PatternDiagram(_t(bcat, f), ((0, PCellVar("s")),))
        tob = PBox(prefix + "_box", "to", 0, (s_pat,), hvar_t)
        compute = RewriteRule(
            prefix + "_compute",
            lhs=PatternDiagram(_t(bcat, f), ((0, PCell(counit)), (1, tob))),
            rhs=PatternDiagram(_t(bcat, f), ((0, PCellVar("s")),)),
            cell_vars=sv,
            functor_vars=fvars[:1],
        )
        inner = PatternDiagram(
            _t(bcat, f), ((0, PCell(counit)), (1, PCellVar("bt")))
        )
        unique = RewriteRule(
            prefix + "_unique",
            lhs=PatternDiagram(
                _t(acat, lan),
                ((0, PBox(prefix + "_box", "to", 0, (inner,), hvar_t)),),
            ),
            rhs=PatternDiagram(_t(acat, lan), ((0, PCellVar("bt")),)),
            cell_vars=bv,
            functor_vars=fvars[:1],
        )
        s_comp = PatternDiagram(
            _t(bcat, f), ((0, PCellVar("s")), (1, PCellVar("h")))
        )
        push = RewriteRule(
            prefix + "_push",
            lhs=PatternDiagram(_t(acat, lan), ((0, tob), (0, PCellVar("h")))),
            rhs=PatternDiagram(
                _t(acat, lan),
                ((0, PBox(prefix + "_box", "to", 0, (s_comp,),
                          Template(acat, ((VAR, "H2"),)))),),
            ),
            cell_vars=sv + hv,
            functor_vars=fvars,
        )
    else:
        b.declare_cell_family(counit, (), _t(bcat, j, lan), _t(bcat, f))
        rep = RepDecl(
            name=prefix + "_box",
            probe="H",
            probe_src=acat,
            probe_dst=ccat,
            payloads=((Template(bcat, ((SYM, j), (VAR, "H"))), _t(bcat, f)),),
            boxed=(hvar_t, _t(acat, lan)),
            variance="contravariant",
        )
        b.declare_representation(rep)
        sv = (("s", (Template(bcat, ((SYM, j), (VAR, "H"))), _t(bcat, f))),)
        bv = (("bt", (hvar_t, _t(acat, lan))),)
        hv = (("h", (Template(acat, ((VAR, "H2"),)), hvar_t)),)
        fvars = (("H", (acat, ccat, False)), ("H2", (acat, ccat, False)))
        s_pat = PatternDiagram(
            Template(bcat, ((SYM, j), (VAR, "H"))), ((0, PCellVar("s")),)
        )
        tob = PBox(prefix + "_box", "to", 0, (s_pat,), hvar_t)
        compute = RewriteRule(
            prefix + "_compute",
            lhs=PatternDiagram(
                Template(bcat, ((SYM, j), (VAR, "H"))),
                ((1, tob), (0, PCell(counit))),
            ),
            rhs=PatternDiagram(
                Template(bcat, ((SYM, j), (VAR, "H"))), ((0, PCellVar("s")),)
            ),
            cell_vars=sv,
            functor_vars=fvars[:1],
        )
        inner = PatternDiagram(
            Template(bcat, ((SYM, j), (VAR, "H"))),
            ((1, PCellVar("bt")), (0, PCell(counit))),
        )
        unique = RewriteRule(
            prefix + "_unique",
            lhs=PatternDiagram(
                hvar_t,
                ((0, PBox(prefix + "_box", "to", 0, (inner,), hvar_t)),),
            ),
            rhs=PatternDiagram(hvar_t, ((0, PCellVar("bt")),)),
            cell_vars=bv,
            functor_vars=fvars[:1],
        )
        s_comp = PatternDiagram(
            Template(bcat, ((SYM, j), (VAR, "H2"))),
            ((1, PCellVar("h")), (0, PCellVar("s"))),
        )
        push = RewriteRule(
            prefix + "_push",
            lhs=PatternDiagram(
                Template(acat, ((VAR, "H2"),)),
                ((0, PCellVar("h")), (0, tob)),
            ),
            rhs=PatternDiagram(
                Template(acat, ((VAR, "H2"),)),
                ((0, PBox(prefix + "_box", "to", 0, (s_comp,),
                          Template(acat, ((VAR, "H2"),)))),),
            ),
            cell_vars=sv + hv,
            functor_vars=fvars,
        )
    for r in (compute, unique, push):
        b.declare_rule(r)
    return [compute.name, unique.name, push.name]


# -- bifunctors ---------------------------------------------------------------


@dataclass
class Bifunctor:
    """Section-based encoding of a bifunctor C x D -> E."""

    name: str
    c: str
    d: str
    e: str
    lo_sections: dict = field(default_factory=dict)  # C-object -> functor
    hi_sections: dict = field(default_factory=dict)  # D-object -> functor
    lo_cells: dict = field(default_factory=dict)  # C-morphism cell -> cell
    hi_cells: dict = field(default_factory=dict)


def bifunctor(name, c, d, e):
    return Bifunctor(name, c, d, e)


def bif_section(b, bf, which, obj, fname):
    snap = b.snapshot()
    o = snap.functor(obj)
    if which == "lo":
        if o.dst != bf.c:
            raise BoundaryMismatch("%s is not an object of %s" % (obj, bf.c))
        b.declare_functor(fname, bf.d, bf.e)
        bf.lo_sections[obj] = fname
    else:
        if o.dst != bf.d:
            raise BoundaryMismatch("%s is not an object of %s" % (obj, bf.d))
        b.declare_functor(fname, bf.c, bf.e)
        bf.hi_sections[obj] = fname
    return fname


def bif_cell(b, bf, which, mor, cname):
    """Section cell of a morphism cell between registered objects."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(mor, ())
    if len(src) != 1 or len(dst) != 1:
        raise BoundaryMismatch("section source must be an object morphism")
    x, y = src.syms[0], dst.syms[0]
    table = bf.lo_sections if which == "lo" else bf.hi_sections
    if x not in table or y not in table:
        raise BoundaryMismatch(
            "objects %s, %s have no registered sections" % (x, y)
        )
    base = bf.d if which == "lo" else bf.c
    b.declare_cell_family(cname, (), _t(base, table[x]), _t(base, table[y]))
    (bf.lo_cells if which == "lo" else bf.hi_cells)[mor] = cname
    return cname


def bif_comp_rule(b, bf, which, c1, c2, ccomp, prefix):
    """Functoriality: the section of a composite is the composite."""
    snap = b.snapshot()
    base = bf.d if which == "lo" else bf.c
    table = bf.lo_cells if which == "lo" else bf.hi_cells
    s1, s2, sc = table[c1], table[c2], table[ccomp]
    w, _ = snap.instantiate_family(s1, ())
    rule = RewriteRule(
        prefix + "_comp",
        lhs=PatternDiagram(
            Template(base, tuple((SYM, s) for s in w.syms)),
            ((0, PCell(s1)), (0, PCell(s2))),
        ),
        rhs=PatternDiagram(
            Template(base, tuple((SYM, s) for s in w.syms)), ((0, PCell(sc)),)
        ),
    )
    b.declare_rule(rule)
    return [rule.name]


def bif_id_rule(b, bf, which, ident_cell, prefix):
    """Functoriality: the section of an identity cell is the identity."""
    snap = b.snapshot()
    src, dst = snap.instantiate_family(ident_cell, ())
    if src != dst:
        raise BoundaryMismatch("identity section must be an endo cell")
    table = bf.lo_cells if which == "lo" else bf.hi_cells
    section = table[ident_cell]
    ssrc, _ = snap.instantiate_family(section, ())
    dom = Template(ssrc.anchor, tuple((SYM, s) for s in ssrc.syms))
    rule = RewriteRule(
        prefix + "_id",
        lhs=PatternDiagram(dom, ((0, PCell(section)),)),
        rhs=PatternDiagram(dom, ()),
    )
    b.declare_rule(rule)
    return [rule.name]


def bif_witness(b, bf, cobj, dobj, wname, winv, prefix):
    """Witnessing identity cells between the two equal composites."""
    tc = bf.lo_sections[cobj]
    td = bf.hi_sections[dobj]
    snap = b.snapshot()
    one = snap.functor(cobj).src
    b.declare_cell_family(wname, (), _t(one, dobj, tc), _t(one, cobj, td))
    b.declare_cell_family(winv, (), _t(one, cobj, td), _t(one, dobj, tc))
    r1 = RewriteRule(
        prefix + "_iso1",
        lhs=PatternDiagram(_t(one, dobj, tc), ((0, PCell(wname)), (0, PCell(winv)))),
        rhs=PatternDiagram(_t(one, dobj, tc), ()),
    )
    r2 = RewriteRule(
        prefix + "_iso2",
        lhs=PatternDiagram(_t(one, cobj, td), ((0, PCell(winv)), (0, PCell(wname)))),
        rhs=PatternDiagram(_t(one, cobj, td), ()),
    )
    b.declare_rule(r1)
    b.declare_rule(r2)
    return [r1.name, r2.name]


def bif_relate_rule(b, bf, fmor, gmor, witnesses, prefix):
    """g beside the low section of f equals f beside the high section of g,
    mediated by the witnessing identities at both corners.
    """
    snap = b.snapshot()
    fsrc, fdst = snap.instantiate_family(fmor, ())
    gsrc, gdst = snap.instantiate_family(gmor, ())
    c1, c1p = fsrc.syms[0], fdst.syms[0]
    d1, d1p = gsrc.syms[0], gdst.syms[0]
    tf = bf.lo_cells[fmor]
    tg = bf.hi_cells[gmor]
    w_start, w_end = witnesses  # witness at (C1,D1) and at (C1',D1')
    one = fsrc.anchor
    tc1 = bf.lo_sections[c1]
    rule = RewriteRule(
        prefix + "_relate",
        lhs=PatternDiagram(
            _t(one, d1, tc1),
            ((0, PCell(gmor)), (1, PCell(tf)), (0, PCell(w_end))),
        ),
        rhs=PatternDiagram(
            _t(one, d1, tc1),
            ((0, PCell(w_start)), (0, PCell(fmor)), (1, PCell(tg))),
        ),
    )
    b.declare_rule(rule)
    return [rule.name]


def bif_binat_rule(b, bf_s, bf_t, which, mor, alpha_at_src, alpha_at_dst, prefix):
    """Explicit naturality of a bifunctor transformation in its fixed slot."""
    snap = b.snapshot()
    table_s = bf_s.lo_cells if which == "lo" else bf_s.hi_cells
    table_t = bf_t.lo_cells if which == "lo" else bf_t.hi_cells
    s_mor = table_s[mor]
    t_mor = table_t[mor]
    src, _ = snap.instantiate_family(alpha_at_src, ())
    rule = RewriteRule(
        prefix + "_binat",
        lhs=PatternDiagram(
            Template(src.anchor, tuple((SYM, s) for s in src.syms)),
            ((0, PCell(alpha_at_src)), (0, PCell(t_mor))),
        ),
        rhs=PatternDiagram(
            Template(src.anchor, tuple((SYM, s) for s in src.syms)),
            ((0, PCell(s_mor)), (0, PCell(alpha_at_dst))),
        ),
    )
    b.declare_rule(rule)
    return [rule.name]
