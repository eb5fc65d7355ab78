import pytest

from wirecalc.diagram import (
    Diagram,
    Hole,
    Level,
    equivalent,
    from_cell,
    identity,
    vcompose,
    whisker_left,
    whisker_right,
)
from wirecalc.errors import (
    BoundaryMismatch,
    MultipleHoles,
    NoHole,
    RuleNotFound,
    StepMismatch,
    UnboundMetavariable,
)
from wirecalc.rewrite import (
    PCell,
    PatternDiagram,
    ProofStep,
    RewriteRule,
    Substitution,
    check_step,
    find_matches,
    ground_pattern,
    hole_diagram,
    instantiate,
    plug,
)
from wirecalc.signature import SignatureBuilder, Template, Word, tmpl

from conftest import adjunction_signature


def snake_rules(builder):
    """Install snakeL / snakeR over the conftest adjunction signature."""
    snake_l = RewriteRule(
        "snakeL",
        lhs=PatternDiagram(tmpl("C", "F"), ((0, PCell("eta")), (1, PCell("eps")))),
        rhs=PatternDiagram(tmpl("C", "F"), ()),
    )
    snake_r = RewriteRule(
        "snakeR",
        lhs=PatternDiagram(tmpl("D", "G"), ((1, PCell("eta")), (0, PCell("eps")))),
        rhs=PatternDiagram(tmpl("D", "G"), ()),
    )
    builder.declare_rule(snake_l)
    builder.declare_rule(snake_r)
    return builder


@pytest.fixture
def snake_sig():
    return snake_rules(adjunction_signature()).freeze()


def snake_lhs(sig):
    f = sig.word("C", ("F",))
    eta = from_cell(sig, "eta")
    eps = from_cell(sig, "eps")
    return vcompose(whisker_right(eta, f), whisker_left(f, eps))


def test_rule_validation_rejects_unbound_rhs_var():
    from wirecalc.rewrite import PCellVar

    b = adjunction_signature()
    bad = RewriteRule(
        "bad",
        lhs=PatternDiagram(tmpl("C", "F"), ()),
        rhs=PatternDiagram(tmpl("C", "F"), ((0, PCellVar("h")),)),
        cell_vars=(("h", (tmpl("C", "F"), tmpl("C", "F"))),),
    )
    with pytest.raises(UnboundMetavariable):
        b.declare_rule(bad)


def test_rule_validation_rejects_boundary_mismatch():
    b = adjunction_signature()
    bad = RewriteRule(
        "bad2",
        lhs=PatternDiagram(tmpl("C", "F"), ()),
        rhs=PatternDiagram(tmpl("C", "F", "G"), ()),
    )
    with pytest.raises(BoundaryMismatch):
        b.declare_rule(bad)


def test_instantiate_ground_snake(snake_sig):
    rule = snake_sig.rule("snakeL")
    li = instantiate(snake_sig, rule.lhs, Substitution(), rule)
    assert li == snake_lhs(snake_sig)


def test_plug_identity_and_errors(snake_sig):
    d = snake_lhs(snake_sig)
    ctx = hole_diagram(snake_sig, d.dom, d.cod)
    assert plug(ctx, d) == d
    with pytest.raises(NoHole):
        plug(d, d)
    doubled = Diagram(
        snake_sig,
        d.dom,
        (
            Level(0, Hole(d.dom, d.dom)),
            Level(0, Hole(d.dom, d.dom)),
        ),
    )
    with pytest.raises(MultipleHoles):
        plug(doubled, identity(snake_sig, d.dom))
    with pytest.raises(BoundaryMismatch):
        plug(ctx, identity(snake_sig, snake_sig.word("D", ("G",))))


def test_plug_deletes_hole_level_for_identity(snake_sig):
    w = snake_sig.word("C", ("F",))
    ctx = hole_diagram(snake_sig, w, w)
    out = plug(ctx, identity(snake_sig, w))
    assert out == identity(snake_sig, w)


def test_check_step_snake(snake_sig):
    d = snake_lhs(snake_sig)
    f = snake_sig.word("C", ("F",))
    step = ProofStep("snakeL", True, hole_diagram(snake_sig, f, f), Substitution())
    out = check_step(snake_sig, d, step)
    assert out == identity(snake_sig, f)
    assert out.boundary() == d.boundary()
    # reversibility
    back = ProofStep("snakeL", False, hole_diagram(snake_sig, f, f), Substitution())
    assert equivalent(check_step(snake_sig, out, back), d)


def test_check_step_mismatch_reports_normal_forms(snake_sig):
    f = snake_sig.word("C", ("F",))
    step = ProofStep("snakeL", True, hole_diagram(snake_sig, f, f), Substitution())
    with pytest.raises(StepMismatch) as ei:
        check_step(snake_sig, identity(snake_sig, f), step)
    assert ei.value.current_text is not None
    assert "diagram {" in ei.value.current_text


def test_check_step_unknown_rule(snake_sig):
    f = snake_sig.word("C", ("F",))
    step = ProofStep("nope", True, hole_diagram(snake_sig, f, f), Substitution())
    with pytest.raises(RuleNotFound):
        check_step(snake_sig, identity(snake_sig, f), step)


def test_check_step_in_whiskered_context(snake_sig):
    # snake redex buried inside G . [F] with an eps above
    sig = snake_sig
    f = sig.word("C", ("F",))
    inner = snake_lhs(sig)
    big = whisker_left(sig.word("D", ("G",)), inner)
    ctx = Diagram(
        sig,
        big.dom,
        (Level(1, Hole(f, f)),),
    )
    step = ProofStep("snakeL", True, ctx, Substitution())
    out = check_step(sig, big, step)
    assert out == identity(sig, big.dom)


def test_find_matches_sound_and_ordered(snake_sig):
    d = snake_lhs(snake_sig)
    matches = find_matches(snake_sig, d, "snakeL", move_budget=4, window_limit=4)
    assert matches, "expected at least one match"
    for ctx, subst in matches:
        out = check_step(snake_sig, d, ProofStep("snakeL", True, ctx, subst))
        assert out.boundary() == d.boundary()
    again = find_matches(snake_sig, d, "snakeL", move_budget=4, window_limit=4)
    assert [c.to_text() for c, _ in matches] == [c.to_text() for c, _ in again]


def test_find_matches_empty_for_identity(snake_sig):
    f = snake_sig.word("C", ("F",))
    assert find_matches(snake_sig, identity(snake_sig, f), "snakeL") == []


def test_check_step_inside_box_payload():
    # the one-hole context may sit inside a box payload; plugging and
    # rewriting recurse into the box
    from wirecalc.diagram import Diagram, Hole, Level, box_diagram
    from wirecalc.signature import SignatureBuilder, tmpl
    from wirecalc import theories as th

    b = SignatureBuilder()
    b.declare_category("One", terminal=True)
    b.declare_category("C")
    b.declare_functor("T", "C", "C")
    b.declare_functor("Mu", "One", "C")
    b.declare_functor("X", "One", "C")
    m = th.monad(b, "T", "m")
    th.initial_algebra_rules(b, "T", "Mu", "inn", "ia")
    b.declare_cell_family("a0", (), tmpl("One", "X", "T"), tmpl("One", "X"))
    sig = b.freeze()
    x = sig.word("One", ("X",))
    xt = sig.word("One", ("X", "T"))
    t = sig.word("C", ("T",))
    a0 = from_cell(sig, "a0")
    # an algebra structure containing a unit/multiplication redex
    redex = vcompose(
        vcompose(whisker_left(x, whisker_right(from_cell(sig, m.eta), t)),
                 whisker_left(x, from_cell(sig, m.mu))),
        a0,
    )
    current = box_diagram(sig, "ia_fold", "to", (redex,), x)
    # context: the same box with a hole replacing the redex pair
    payload_ctx = Diagram(
        sig, xt,
        (Level(1, Hole(t, t)), Level(0, a0.levels[0].gen)),
    )
    ctx = box_diagram(sig, "ia_fold", "to", (payload_ctx,), x)
    step = ProofStep(m.unit_l, True, ctx, Substitution())
    out = check_step(sig, current, step)
    assert out == box_diagram(sig, "ia_fold", "to", (a0,), x)


def test_instantiate_unbound_variable():
    from wirecalc.errors import UnboundVariable
    from wirecalc.rewrite import PCellVar
    from wirecalc.signature import Template, SignatureBuilder

    b = adjunction_signature()
    rule = RewriteRule(
        "var_rule",
        lhs=PatternDiagram(tmpl("C", "F"), ((0, PCellVar("h")),)),
        rhs=PatternDiagram(tmpl("C", "F"), ((0, PCellVar("h")),)),
        cell_vars=(("h", (tmpl("C", "F"), tmpl("C", "F"))),),
    )
    b.declare_rule(rule)
    sig = b.freeze()
    with pytest.raises(UnboundVariable):
        instantiate(sig, rule.lhs, Substitution(), rule)
