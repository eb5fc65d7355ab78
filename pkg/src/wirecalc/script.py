"""Name resolution, proof checking and reporting for parsed scripts.

Statements execute in order against a signature builder; proofs are
elaborated against the final snapshot and checked sequentially. Failures
carry source locations; checking is deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import theories as th
from .diagram import (
    Diagram,
    Hole,
    Level,
    box_diagram,
    equivalent,
    from_cell,
    identity,
    normalize,
    vcompose,
    whisker_left,
    whisker_right,
)
from .errors import ParseError, WirecalcError
from .parser import parse_script
from .rewrite import ProofStep, RewriteRule, Substitution, check_step, ground_pattern
from .signature import Param, SignatureBuilder, Word


@dataclass
class ResolvedProof:
    name: str
    start: Diagram
    goal: Diagram
    steps: list  # [(ProofStep, line, col)]
    line: int
    col: int


@dataclass
class ResolvedScript:
    sig: object
    proofs: list
    lets: dict
    theories: dict


@dataclass
class ProofReport:
    name: str
    ok: bool
    steps: int
    ms: float
    error: str = ""
    line: int = 0
    col: int = 0

    def summary_line(self):
        status = "ok" if self.ok else "fail"
        return "proof %s %s %d %d" % (self.name, status, self.steps, int(self.ms))


def _loc_error(exc, line, col):
    if isinstance(exc, ParseError) and exc.line is not None:
        return exc
    return ParseError(str(exc), line, col)


class Resolver:
    def __init__(self):
        self.b = SignatureBuilder()
        self.lets = {}
        self.monads = {}
        self.adjunctions = {}
        self.bifunctors = {}
        self.em_algebras = {}

    # -- words and diagrams -------------------------------------------------

    def word(self, wast, sig):
        if wast.anchor is not None:
            if not sig.has_category(wast.anchor):
                raise ParseError("unknown category %r" % wast.anchor,
                                 wast.line, wast.col)
            return Word(wast.anchor)
        syms = wast.names
        if not sig.has_functor(syms[0]):
            raise ParseError("unknown functor %r" % syms[0],
                             wast.line, wast.col)
        anchor = sig.functor(syms[0]).src
        try:
            return sig.word(anchor, syms)
        except WirecalcError as e:
            raise _loc_error(e, wast.line, wast.col)

    def dexpr(self, e, sig):
        try:
            return self._dexpr(e, sig)
        except ParseError:
            raise
        except WirecalcError as exc:
            raise _loc_error(exc, e.line, e.col)

    def _dexpr(self, e, sig):
        k = e.kind
        if k == "id":
            return identity(sig, self.word(e.args[0], sig))
        if k == "ref":
            name = e.args[0]
            if name in self.lets:
                d = self.lets[name]
                return Diagram(sig, d.dom, d.levels)
            if sig.has_family(name):
                return from_cell(sig, name)
            raise ParseError("unknown name %r" % name, e.line, e.col)
        if k == "cell":
            name, args = e.args
            if not sig.has_family(name):
                raise ParseError("unknown cell %r" % name, e.line, e.col)
            return from_cell(sig, name, args)
        if k == "v":
            out = self.dexpr(e.args[0], sig)
            for a in e.args[1:]:
                out = vcompose(out, self.dexpr(a, sig))
            return out
        if k == "h":
            from .diagram import hcompose

            return hcompose(self.dexpr(e.args[0], sig),
                            self.dexpr(e.args[1], sig))
        if k == "wl":
            return whisker_left(self.word(e.args[0], sig),
                                self.dexpr(e.args[1], sig))
        if k == "wr":
            return whisker_right(self.dexpr(e.args[0], sig),
                                 self.word(e.args[1], sig))
        if k == "box":
            rep, direction, pays, probe = e.args
            if not sig.has_rep(rep):
                raise ParseError("unknown representation %r" % rep,
                                 e.line, e.col)
            slot = 0
            if direction == "from1":
                direction, slot = "from", 0
            elif direction == "from2":
                direction, slot = "from", 1
            payloads = tuple(self.dexpr(p, sig) for p in pays)
            return box_diagram(sig, rep, direction, payloads,
                               self.word(probe, sig), slot)
        if k == "hole":
            src = self.word(e.args[0], sig)
            dst = self.word(e.args[1], sig)
            return Diagram(sig, src, (Level(0, Hole(src, dst)),))
        if k == "word":
            raise ParseError("expected a diagram, found a functor word",
                             e.line, e.col)
        raise ParseError("unsupported expression %r" % k, e.line, e.col)

    def word_value(self, e, sig):
        """Interpret a binding value as a functor word."""
        if e.kind == "word":
            return self.word(e.args[0], sig)
        if e.kind == "id":
            return self.word(e.args[0], sig)
        if e.kind == "ref" and sig.has_functor(e.args[0]):
            f = sig.functor(e.args[0])
            return Word(f.src, (e.args[0],))
        raise ParseError("expected a functor word", e.line, e.col)

    # -- statements ----------------------------------------------------------

    def run_statement(self, st):
        handler = getattr(self, "do_" + st.kind)
        try:
            handler(st)
        except ParseError:
            raise
        except WirecalcError as e:
            raise _loc_error(e, st.line, st.col)

    def do_category(self, st):
        self.b.declare_category(st.data["name"], st.data["terminal"])

    def do_functor(self, st):
        self.b.declare_functor(st.data["name"], st.data["src"], st.data["dst"])

    def do_cell(self, st):
        params = tuple(Param(n, s, d) for n, s, d in st.data["params"])
        by_name = {p.name: p for p in params}
        src = self._template(st.data["src"], by_name)
        dst = self._template(st.data["dst"], by_name)
        self.b.declare_cell_family(st.data["name"], params, src, dst)

    def _template(self, wast, params):
        from .signature import SYM, VAR, Template

        sig = self.b.snapshot()
        if wast.anchor is not None:
            return Template(wast.anchor)
        entries = []
        for n in wast.names:
            if n in params:
                entries.append((VAR, n))
            else:
                entries.append((SYM, n))
        first = wast.names[0]
        if first in params:
            anchor = params[first].src
        elif sig.has_functor(first):
            anchor = sig.functor(first).src
        else:
            raise ParseError("unknown functor %r" % first, wast.line, wast.col)
        return Template(anchor, tuple(entries))

    def do_rule(self, st):
        sig = self.b.snapshot()
        lhs = self.dexpr(st.data["lhs"], sig)
        rhs = self.dexpr(st.data["rhs"], sig)
        rule = RewriteRule(st.data["name"], ground_pattern(lhs),
                           ground_pattern(rhs))
        self.b.declare_rule(rule)

    def do_let(self, st):
        sig = self.b.snapshot()
        self.lets[st.data["name"]] = self.dexpr(st.data["body"], sig)

    def do_adjunction(self, st):
        f, g = st.data["args"]
        self.adjunctions[st.data["name"]] = th.adjunction(
            self.b, f, g, st.data["name"]
        )

    def do_monad(self, st):
        (t,) = st.data["args"]
        self.monads[st.data["name"]] = th.monad(self.b, t, st.data["name"])

    def _monad(self, name, st):
        if name not in self.monads:
            raise ParseError("unknown monad %r" % name, st.line, st.col)
        return self.monads[name]

    def do_monad_morphism(self, st):
        sigma, m1, m2 = st.data["args"]
        th.monad_morphism_rules(self.b, sigma, self._monad(m1, st),
                                self._monad(m2, st), st.data["name"])

    def do_em_algebra(self, st):
        m, x, a = st.data["args"]
        th.em_algebra_rules(self.b, self._monad(m, st), x, a, st.data["name"])
        self.em_algebras[st.data["name"]] = (x, a)

    def do_em_hom(self, st):
        m, h, x, a, y, bb = st.data["args"]
        th.em_hom_rule(self.b, self._monad(m, st), h, x, a, y, bb,
                       st.data["name"])

    def do_cmonad_morphism(self, st):
        f, cellf, m1, m2 = st.data["args"]
        th.cmonad_morphism_rules(self.b, f, cellf, self._monad(m1, st),
                                 self._monad(m2, st), st.data["name"])

    def do_cmonadstar_morphism(self, st):
        f, cellf, m1, m2 = st.data["args"]
        th.cmonadstar_morphism_rules(self.b, f, cellf, self._monad(m1, st),
                                     self._monad(m2, st), st.data["name"])

    def do_distributive_law(self, st):
        delta, m1, m2 = st.data["args"]
        th.distributive_law_rules(self.b, delta, self._monad(m1, st),
                                  self._monad(m2, st), st.data["name"])

    def do_product(self, st):
        p, y, z = st.data["args"]
        th.product_rules(self.b, p, y, z, st.data["name"])

    def do_coproduct(self, st):
        p, x, y = st.data["args"]
        th.coproduct_rules(self.b, p, x, y, st.data["name"])

    def do_initial(self, st):
        (zero,) = st.data["args"]
        th.initial_rules(self.b, zero, st.data["name"])

    def do_terminal_object(self, st):
        (one,) = st.data["args"]
        th.terminal_rules(self.b, one, st.data["name"])

    def do_initial_algebra(self, st):
        t, mu, inn = st.data["args"]
        th.initial_algebra_rules(self.b, t, mu, inn, st.data["name"])

    def do_terminal_coalgebra(self, st):
        t, nu, out = st.data["args"]
        th.terminal_coalgebra_rules(self.b, t, nu, out, st.data["name"])

    def do_kan(self, st):
        j, f, lan, c = st.data["args"]
        th.kan_extension_rules(self.b, j, f, st.data["side"], lan, c,
                               st.data["name"])

    def do_bifunctor(self, st):
        c, d, e = st.data["args"]
        self.bifunctors[st.data["name"]] = th.bifunctor(
            st.data["name"], c, d, e
        )

    def do_representation(self, st):
        from .signature import RepDecl

        pname, psrc, pdst = st.data["probe"]
        params = {pname: Param(pname, psrc, pdst)}
        payloads = tuple(
            (self._template(s, params), self._template(d, params))
            for s, d in st.data["payloads"]
        )
        boxed = (self._template(st.data["boxed"][0], params),
                 self._template(st.data["boxed"][1], params))
        decl = RepDecl(
            name=st.data["name"],
            probe=pname,
            probe_src=psrc,
            probe_dst=pdst,
            payloads=payloads,
            boxed=boxed,
            variance=st.data["variance"],
        )
        self.b.declare_representation(decl)
        th.representation_rules(self.b, st.data["name"], st.data["name"])

    def _bif(self, name, st):
        if name not in self.bifunctors:
            raise ParseError("unknown bifunctor %r" % name, st.line, st.col)
        return self.bifunctors[name]

    def do_section(self, st):
        bf, obj = st.data["args"]
        th.bif_section(self.b, self._bif(bf, st), st.data["which"], obj,
                       st.data["name"])

    def do_section_cell(self, st):
        bf, mor = st.data["args"]
        th.bif_cell(self.b, self._bif(bf, st), st.data["which"], mor,
                    st.data["name"])

    def do_bif_witness(self, st):
        bf, cobj, dobj, winv = st.data["args"]
        th.bif_witness(self.b, self._bif(bf, st), cobj, dobj,
                       st.data["name"], winv, st.data["name"])

    def do_bif_relate(self, st):
        bf, f, g, w1, w2 = st.data["args"]
        th.bif_relate_rule(self.b, self._bif(bf, st), f, g, (w1, w2),
                           st.data["name"])

    def do_bif_id(self, st):
        bf, ident = st.data["args"]
        th.bif_id_rule(self.b, self._bif(bf, st), st.data["which"], ident,
                       st.data["name"])

    def do_bif_comp(self, st):
        bf, c1, c2, comp = st.data["args"]
        th.bif_comp_rule(self.b, self._bif(bf, st), st.data["which"],
                         c1, c2, comp, st.data["name"])

    def do_bif_binat(self, st):
        bfs, bft, mor, a_src, a_dst = st.data["args"]
        th.bif_binat_rule(self.b, self._bif(bfs, st), self._bif(bft, st),
                          st.data["which"], mor, a_src, a_dst,
                          st.data["name"])

    # -- proofs ---------------------------------------------------------------

    def resolve_proof(self, p, sig):
        start = self.dexpr(p.start, sig)
        goal = self.dexpr(p.goal, sig)
        if start.boundary() != goal.boundary():
            raise ParseError(
                "proof %s: start is %s => %s but goal is %s => %s"
                % (p.name, start.dom.to_text(), start.cod.to_text(),
                   goal.dom.to_text(), goal.cod.to_text()),
                p.line, p.col)
        steps = []
        for s in p.steps:
            rule = sig.rule(s.rule)
            if rule is None:
                raise ParseError("unknown rule %r" % s.rule, s.line, s.col)
            ctx = self.dexpr(s.context, sig)
            subst = Substitution()
            for name, value in s.bindings:
                if rule.functor_var(name) is not None:
                    subst.functors[name] = self.word_value(value, sig)
                elif rule.cell_var(name) is not None:
                    subst.cells[name] = self.dexpr(value, sig)
                else:
                    raise ParseError(
                        "rule %s has no variable %r" % (s.rule, name),
                        s.line, s.col)
            steps.append((ProofStep(s.rule, s.forward, ctx, subst),
                          s.line, s.col))
        return ResolvedProof(p.name, start, goal, steps, p.line, p.col)


def resolve(script):
    """Execute declarations, then elaborate every proof."""
    r = Resolver()
    for st in script.statements:
        r.run_statement(st)
    sig = r.b.freeze()
    proofs = []
    for p in script.proofs:
        proofs.append(r.resolve_proof(p, sig))
    return ResolvedScript(sig, proofs, r.lets, {
        "monads": r.monads,
        "adjunctions": r.adjunctions,
        "bifunctors": r.bifunctors,
    })


def check_proof(sig, proof):
    """Fold check_step over the steps; compare with the goal modulo
    interchange. Errors are embedded in the report, never thrown.
    """
    t0 = time.perf_counter()
    current = proof.start
    for i, (step, line, col) in enumerate(proof.steps):
        try:
            current = check_step(sig, current, step)
        except WirecalcError as e:
            ms = (time.perf_counter() - t0) * 1000
            return ProofReport(proof.name, False, i, ms,
                               "step %d (%s): %s" % (i + 1, step.rule, e),
                               line, col)
    ms = (time.perf_counter() - t0) * 1000
    if not equivalent(current, proof.goal):
        return ProofReport(
            proof.name, False, len(proof.steps), ms,
            "final diagram does not match the goal\n  final: %s\n  goal:  %s"
            % (normalize(current).to_text(), normalize(proof.goal).to_text()),
            proof.line, proof.col)
    return ProofReport(proof.name, True, len(proof.steps), ms)


def check_script(text, path="<script>"):
    script = parse_script(text)
    rs = resolve(script)
    reports = [check_proof(rs.sig, p) for p in rs.proofs]
    return rs, reports


def render_report(path, reports, verbose=False):
    """Human-readable report plus machine-readable summary lines."""
    lines = []
    ok = sum(1 for r in reports if r.ok)
    for r in reports:
        lines.append(r.summary_line())
        if not r.ok and verbose:
            lines.append("  %s:%d:%d: %s" % (path, r.line, r.col, r.error))
    lines.append("%d/%d proofs checked in %s" % (ok, len(reports), path))
    return "\n".join(lines)
