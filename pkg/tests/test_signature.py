import pytest

from wirecalc.errors import (
    AnchorMismatch,
    BoundaryMismatch,
    DuplicateName,
    FrozenSignature,
    MalformedTemplate,
    NotComposable,
    UnknownCategory,
)
from wirecalc.signature import (
    Param,
    RepDecl,
    SignatureBuilder,
    Template,
    Word,
    tmpl,
)


def test_declare_category_and_duplicate():
    b = SignatureBuilder()
    c = b.declare_category("C")
    assert c.name == "C" and not c.terminal
    one = b.declare_category("One", terminal=True)
    assert one.terminal
    with pytest.raises(DuplicateName):
        b.declare_category("C")


def test_declare_functor_checks_categories():
    b = SignatureBuilder()
    b.declare_category("C")
    b.declare_category("D")
    f = b.declare_functor("F", "C", "D")
    assert (f.src, f.dst) == ("C", "D")
    with pytest.raises(UnknownCategory):
        b.declare_functor("F2", "C", "E")
    with pytest.raises(DuplicateName):
        b.declare_functor("F", "C", "D")


def test_object_wires_from_terminal_category():
    b = SignatureBuilder()
    b.declare_category("One", terminal=True)
    b.declare_category("C")
    x = b.declare_functor("X", "One", "C")
    assert x.src == "One"


def test_cell_family_boundary_check():
    b = SignatureBuilder()
    b.declare_category("One", terminal=True)
    b.declare_category("C")
    b.declare_category("D")
    b.declare_functor("X", "One", "C")
    b.declare_functor("Y", "One", "D")
    # endpoints disagree: X ends in C, Y ends in D
    with pytest.raises(BoundaryMismatch):
        b.declare_cell_family("h", (), tmpl("One", "X"), tmpl("One", "Y"))


def test_parametric_family_and_instantiation():
    b = SignatureBuilder()
    b.declare_category("One", terminal=True)
    b.declare_category("C")
    b.declare_functor("Zero", "One", "C")
    b.declare_functor("X0", "One", "C")
    b.declare_cell_family(
        "bang",
        (Param("X", "One", "C"),),
        tmpl("One", "Zero"),
        tmpl("One", ("?", "X")),
    )
    sig = b.freeze()
    src, dst = sig.instantiate_family("bang", ("X0",))
    assert src == Word("One", ("Zero",))
    assert dst == Word("One", ("X0",))


def test_validate_word():
    b = SignatureBuilder()
    b.declare_category("C")
    b.declare_category("D")
    b.declare_functor("F", "C", "D")
    b.declare_functor("G", "D", "C")
    sig = b.freeze()
    w = sig.word("C", ("F", "G"))
    assert sig.word_dst(w) == "C"
    assert sig.word("C", ()) == Word("C", ())
    with pytest.raises(AnchorMismatch):
        sig.word("C", ("G",))
    with pytest.raises(NotComposable):
        sig.word("C", ("F", "F"))


def test_freeze_idempotent_and_blocks_mutation():
    b = SignatureBuilder()
    b.declare_category("C")
    s1 = b.freeze()
    s2 = b.freeze()
    assert s1 is s2
    with pytest.raises(FrozenSignature):
        b.declare_category("D")


def test_representation_probe_count_checked():
    b = SignatureBuilder()
    b.declare_category("One", terminal=True)
    b.declare_category("C")
    b.declare_category("Set")
    b.declare_functor("S", "One", "C")
    b.declare_functor("Star", "One", "Set")
    b.declare_functor("Gf", "C", "Set")
    good = RepDecl(
        name="rep",
        probe="X",
        probe_src="One",
        probe_dst="C",
        payloads=((tmpl("One", "Star"), tmpl("One", ("?", "X"), "Gf")),),
        boxed=(tmpl("One", "S"), tmpl("One", ("?", "X"))),
        variance="covariant",
    )
    b.declare_representation(good)
    bad = RepDecl(
        name="rep2",
        probe="X",
        probe_src="One",
        probe_dst="C",
        payloads=((tmpl("One", ("?", "X")), tmpl("One", ("?", "X"), "Gf")),),
        boxed=(tmpl("One", "S"), tmpl("One", ("?", "X"))),
        variance="covariant",
    )
    with pytest.raises(MalformedTemplate):
        b.declare_representation(bad)
