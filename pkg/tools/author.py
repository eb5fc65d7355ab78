"""Corpus authoring driver: given a script preamble and start/goal
expressions, search the rewrite chain and print ready-to-paste steps."""

import sys

sys.path.insert(0, "src")
sys.path.insert(0, "tools")

from prove import prove, print_steps

from wirecalc.parser import parse_script
from wirecalc.script import Resolver


def setup(preamble):
    r = Resolver()
    script = parse_script(preamble)
    for st in script.statements:
        r.run_statement(st)
    sig = r.b.freeze()
    return r, sig


def derive(preamble, name, start_expr, goal_expr, rules, depth=4,
           budget=10, window=6):
    r, sig = setup(preamble)

    def d(expr_text):
        script = parse_script("let __x = %s;" % expr_text)
        return r.dexpr(script.statements[0].data["body"], sig)

    start = d(start_expr)
    goal = d(goal_expr)
    print("// proof %s : %s = %s" % (name, start_expr, goal_expr))
    steps = prove(sig, start, goal, rules, max_depth=depth,
                  move_budget=budget, window=window)
    if steps is None:
        print("//   NO PROOF FOUND")
        return None
    final = print_steps(sig, start, steps)
    from wirecalc.diagram import equivalent

    assert equivalent(final, goal)
    print("//   OK (%d steps)" % len(steps))
    return steps
