"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import pathlib
import random
import time
import xml.dom.minidom

import pytest

import wirecalc
from wirecalc.diagram import BoxCell, equivalent, from_cell
from wirecalc.oracle import agreement, fixed_signature, interchange_trials
from wirecalc.parser import parse_script
from wirecalc.rewrite import ProofStep, check_step
from wirecalc.script import check_proof, resolve
from wirecalc.signature import SignatureBuilder, Word, tmpl
from wirecalc import theories as th

CORPUS = sorted(
    (pathlib.Path(wirecalc.__file__).parent / "corpus").glob("*.cat")
)


def report(num, ok, detail):
    print("criterion %d: %s  (%s)" % (num, "PASS" if ok else "FAIL", detail))
    assert ok, detail


@pytest.fixture(scope="module")
def oracle_sweep():
    sig = fixed_signature()
    t0 = time.perf_counter()
    n, comps, mismatches = agreement(sig, max_levels=5, word_len=3)
    elapsed = time.perf_counter() - t0
    return n, comps, mismatches, elapsed


def test_criterion_1_oracle_agreement(oracle_sweep):
    n, comps, mismatches, elapsed = oracle_sweep
    ok = not mismatches and elapsed < 60.0
    report(1, ok,
           "%d diagrams, %d components, %d mismatches, %.1fs"
           % (n, comps, len(mismatches), elapsed))


def test_criterion_2_normal_form_uniqueness(oracle_sweep):
    # a mismatch of the first kind is a component with two normal forms
    n, comps, mismatches, _ = oracle_sweep
    report(2, not mismatches,
           "every component of %d collapses to one normal form" % comps)


def test_criterion_3_interchange_law():
    failures = interchange_trials(20240817, 1000)
    report(3, not failures, "1000 seeded quadruples, %d failures" % len(failures))


def _bend_signature(n_sigma):
    b = SignatureBuilder()
    for c in ("C", "D", "Cp", "Dp"):
        b.declare_category(c)
    b.declare_functor("F", "C", "D")
    b.declare_functor("G", "D", "C")
    b.declare_functor("Fp", "Cp", "Dp")
    b.declare_functor("Gp", "Dp", "Cp")
    b.declare_functor("H1", "C", "Cp")
    b.declare_functor("H2", "Cp", "Cp")
    b.declare_functor("K1", "D", "Dp")
    b.declare_functor("K2", "Dp", "Dp")
    a1 = th.adjunction(b, "F", "G", "a1")
    a2 = th.adjunction(b, "Fp", "Gp", "a2")
    rng = random.Random(20240818)
    cells = []
    corners = ("TL", "TR", "BR", "BL")
    for i in range(n_sigma):
        h = ("H1",) + ("H2",) * rng.randrange(0, 2)
        k = ("K1",) + ("K2",) * rng.randrange(0, 2)
        corner = corners[i % 4]
        if corner == "TL":
            src, dst = h + ("Fp",), ("F",) + k
            anchor = "C"
        elif corner == "TR":
            src, dst = h, ("F",) + k + ("Gp",)
            anchor = "C"
        elif corner == "BR":
            src, dst = ("G",) + h, k + ("Gp",)
            anchor = "D"
        else:
            src, dst = ("G",) + h + ("Fp",), k
            anchor = "D"
        name = "s%d" % i
        b.declare_cell_family(name, (), tmpl(anchor, *src), tmpl(anchor, *dst))
        cells.append((name, corner))
    sig = b.freeze()
    return sig, th.rebind(a1, sig), th.rebind(a2, sig), cells


RIGHT_TARGET = {"TL": "to_upper_right", "TR": "to_lower_right",
                "BR": "to_lower_left", "BL": "to_upper_left"}
LEFT_TARGET = {"TL": "to_lower_left", "TR": "to_upper_left",
               "BR": "to_upper_right", "BL": "to_lower_right"}
UNDO = {("TL", "right"): ("to_upper_left", "left"),
        ("TL", "left"): ("to_upper_left", "right"),
        ("TR", "right"): ("to_upper_right", "left"),
        ("TR", "left"): ("to_upper_right", "right"),
        ("BR", "right"): ("to_lower_right", "left"),
        ("BR", "left"): ("to_lower_right", "right"),
        ("BL", "right"): ("to_lower_left", "left"),
        ("BL", "left"): ("to_lower_left", "right")}
CYCLE = {"TL": ("to_upper_right", "to_lower_right",
                "to_lower_left", "to_upper_left"),
         "TR": ("to_lower_right", "to_lower_left",
                "to_upper_left", "to_upper_right"),
         "BR": ("to_lower_left", "to_upper_left",
                "to_upper_right", "to_lower_right"),
         "BL": ("to_upper_left", "to_upper_right",
                "to_lower_right", "to_lower_left")}


def test_criterion_4_wire_bending_bijections():
    t0 = time.perf_counter()
    sig, a1, a2, cells = _bend_signature(200)
    rules = [a1.snake_l, a1.snake_r, a2.snake_l, a2.snake_r]
    adjs = (a1, a2)
    failures = 0
    for name, corner in cells:
        s = from_cell(sig, name)
        for direction, table in (("right", RIGHT_TARGET), ("left", LEFT_TARGET)):
            out = th.wire_bend(sig, s, table[corner], direction, adjs)
            back_corner, back_dir = UNDO[(corner, direction)]
            rt = th.wire_bend(sig, out, back_corner, back_dir, adjs)
            try:
                th.bend_cancellation_steps(sig, rt, s, rules, budget=4)
            except Exception:
                failures += 1
        quad = s
        for target in CYCLE[corner]:
            quad = th.wire_bend(sig, quad, target, "right", adjs)
        try:
            th.bend_cancellation_steps(sig, quad, s, rules, budget=4)
        except Exception:
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 30.0
    report(4, ok, "200 sigma x 4 corners, %d failures, %.1fs" % (failures, elapsed))


@pytest.fixture(scope="module")
def corpus_results():
    out = {}
    for path in CORPUS:
        rs = resolve(parse_script(path.read_text()))
        reports = [check_proof(rs.sig, p) for p in rs.proofs]
        out[path] = (rs, reports)
    return out


def test_criterion_5_paper_corpus(corpus_results):
    assert CORPUS, "corpus files missing"
    failed = []
    slow = []
    proofs = 0
    for path, (rs, reports) in corpus_results.items():
        for r in reports:
            proofs += 1
            if not r.ok:
                failed.append("%s:%s: %s" % (path.name, r.name, r.error))
            if r.ms >= 1000.0:
                slow.append("%s:%s %.0fms" % (path.name, r.name, r.ms))
    ok = not failed and not slow
    report(5, ok,
           "%d proofs in %d files%s%s"
           % (proofs, len(CORPUS),
              "; failures: " + "; ".join(failed) if failed else "",
              "; slow: " + "; ".join(slow) if slow else ""))


def _mutations(step):
    """All single mutations of one resolved step."""
    from wirecalc.diagram import Diagram, Hole, Level

    yield ProofStep(step.rule, not step.forward, step.context, step.subst)
    ctx = step.context
    for i, lv in enumerate(ctx.levels):
        if not isinstance(lv.gen, Hole):
            continue
        for delta in (-1, 1):
            levels = list(ctx.levels)
            levels[i] = Level(lv.offset + delta, lv.gen)
            try:
                mutated = Diagram(ctx.sig, ctx.dom, tuple(levels))
            except Exception:
                continue  # unbuildable context counts as a located failure
            yield ProofStep(step.rule, step.forward, mutated, step.subst)


def _same_rewrite(sig, original, mutated):
    """True when the mutated step denotes extensionally the same rewrite
    (an equivalent mutant, excluded from the kill count as usual in
    mutation testing: e.g. citing the twin unit axiom next to an
    identical unit cell)."""
    from wirecalc.rewrite import instantiate, plug

    def sides(step):
        rule = sig.rule(step.rule)
        lhs, rhs = (rule.lhs, rule.rhs) if step.forward else (rule.rhs, rule.lhs)
        li = instantiate(sig, lhs, step.subst, rule)
        ri = instantiate(sig, rhs, step.subst, rule)
        return plug(step.context, li), plug(step.context, ri)

    try:
        lo, ro = sides(original)
        lm, rm = sides(mutated)
    except Exception:
        return False
    return equivalent(lo, lm) and equivalent(ro, rm)


def test_criterion_6_mutation_robustness(corpus_results):
    silent = []
    checked = 0
    equivalent_mutants = 0
    for path, (rs, reports) in corpus_results.items():
        rules = sorted(rs.sig.rules())
        for proof in rs.proofs:
            for k, (step, line, col) in enumerate(proof.steps):
                current = proof.start
                for s, _, _ in proof.steps[:k]:
                    current = check_step(rs.sig, current, s)

                def rerun(mutated):
                    cur = current
                    try:
                        cur = check_step(rs.sig, cur, mutated)
                        for s, _, _ in proof.steps[k + 1:]:
                            cur = check_step(rs.sig, cur, s)
                    except Exception:
                        return False  # located failure
                    return equivalent(cur, proof.goal)

                mutants = [
                    ProofStep(other, step.forward, step.context, step.subst)
                    for other in rules if other != step.rule
                ]
                mutants.extend(_mutations(step))
                for mutated in mutants:
                    if rerun(mutated):
                        if _same_rewrite(rs.sig, step, mutated):
                            equivalent_mutants += 1
                            continue
                        silent.append("%s:%s step %d %s->%s"
                                      % (path.name, proof.name, k + 1,
                                         step.rule, mutated.rule))
                    checked += 1
    report(6, not silent,
           "%d mutations killed, %d equivalent mutants excluded, "
           "%d silent passes%s"
           % (checked, equivalent_mutants, len(silent),
              ": " + "; ".join(silent[:8]) if silent else ""))


def _recursive_levels(d):
    n = 0
    for lv in d.levels:
        n += 1
        if isinstance(lv.gen, BoxCell):
            for p in lv.gen.payloads:
                n += _recursive_levels(p)
    return n


def test_criterion_7_rendering(corpus_results):
    from wirecalc.render import emit_svg, emit_tikz, layout

    count = 0
    problems = []
    for path, (rs, reports) in corpus_results.items():
        diagrams = dict(rs.lets)
        for p in rs.proofs:
            diagrams["%s.start" % p.name] = p.start
            diagrams["%s.goal" % p.name] = p.goal
        for name, d in sorted(diagrams.items()):
            count += 1
            lay1, lay2 = layout(d), layout(d)
            svg1, svg2 = emit_svg(lay1), emit_svg(lay2)
            tikz1, tikz2 = emit_tikz(lay1), emit_tikz(lay2)
            if svg1 != svg2 or tikz1 != tikz2:
                problems.append("%s:%s nondeterministic" % (path.name, name))
                continue
            try:
                xml.dom.minidom.parseString(svg1.decode("utf8"))
            except Exception as e:
                problems.append("%s:%s bad xml: %s" % (path.name, name, e))
                continue
            if lay1.glyph_count() != _recursive_levels(d):
                problems.append(
                    "%s:%s glyphs %d != levels %d"
                    % (path.name, name, lay1.glyph_count(), _recursive_levels(d))
                )
    report(7, not problems,
           "%d diagrams rendered%s"
           % (count, "; " + "; ".join(problems[:8]) if problems else ""))
