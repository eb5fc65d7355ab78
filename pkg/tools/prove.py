"""Development helper: search a rewrite chain between two diagrams and
print the steps in script syntax. Not part of the shipped package; the
checker itself never searches."""

import sys
from collections import deque

sys.path.insert(0, "src")

from wirecalc.diagram import (
    Diagram,
    Hole,
    Level,
    enumerate_presentations,
    equivalent,
    normalize,
)
from wirecalc.rewrite import (
    ProofStep,
    RewriteRule,
    Substitution,
    check_step,
    find_matches,
)
from wirecalc.textform import diagram_expr, word_expr


def _insertion_steps(sig, d, rule_name, rule, budget):
    """Backward applications of a rule whose right side is an identity."""
    if rule.rhs.levels or rule.rhs.dom.vars():
        return
    from wirecalc.rewrite import _subst_template

    w = _subst_template(sig, rule.rhs.dom, {})
    for pres in sorted(enumerate_presentations(d, budget),
                       key=lambda p: p.to_text()):
        for i in range(len(pres.levels) + 1):
            word = pres.word_at(i)
            for k in range(len(word) - len(w) + 1):
                if word.syms[k:k + len(w)] != w.syms:
                    continue
                if sig.cat_at(word, k) != w.anchor:
                    continue
                ctx = Diagram(
                    sig, pres.dom,
                    pres.levels[:i] + (Level(k, Hole(w, w)),) + pres.levels[i:],
                )
                yield ProofStep(rule_name, False, ctx, Substitution())


def moves(sig, d, rules, budget, window):
    for rule_name in rules:
        rule = sig.rule(rule_name)
        for ctx, subst in find_matches(sig, d, rule_name, budget, window):
            yield ProofStep(rule_name, True, ctx, subst)
        rev = RewriteRule(rule_name, rule.rhs, rule.lhs,
                          rule.cell_vars, rule.functor_vars)
        ext = _with_rule(sig, rule_name + "~rev", rev)
        for ctx, subst in find_matches(ext, d, rule_name + "~rev",
                                       budget, window):
            yield ProofStep(rule_name, False, ctx, subst)
        yield from _insertion_steps(sig, d, rule_name, rule, budget)


def _with_rule(sig, name, rule):
    from wirecalc.rewrite import extend_signature

    ext = extend_signature(sig)
    ext._rules = dict(ext._rules)
    ext._rules[name] = rule
    return ext


def prove(sig, start, goal, rules, max_depth=5, move_budget=10, window=6):
    """Breadth-first search over rule applications; returns ProofSteps."""
    seen = {normalize(start)}
    queue = deque([(start, [])])
    while queue:
        current, steps = queue.popleft()
        if equivalent(current, goal):
            return steps
        if len(steps) >= max_depth:
            continue
        for step in moves(sig, current, rules, move_budget, window):
            try:
                nxt = check_step(sig, current, step)
            except Exception:
                continue
            key = normalize(nxt)
            if key in seen:
                continue
            seen.add(key)
            queue.append((nxt, steps + [step]))
    return None


def print_steps(sig, start, steps):
    current = start
    for step in steps:
        # re-root the context at the real signature if it came from an
        # extended scratch signature
        ctx = Diagram(sig, step.context.dom, step.context.levels)
        step = ProofStep(step.rule, step.forward, ctx, step.subst)
        parts = ["  step %s %s in %s" % (
            step.rule, "fwd" if step.forward else "bwd",
            diagram_expr(step.context))]
        binds = []
        for n, d in sorted(step.subst.cells.items()):
            binds.append("%s := %s" % (n, diagram_expr(d)))
        for n, w in sorted(step.subst.functors.items()):
            binds.append("%s := %s" % (n, word_expr(w)))
        if binds:
            parts.append(" with { %s }" % ", ".join(binds))
        print("".join(parts) + ";")
        current = check_step(sig, current, step)
    return current
