import pytest

from wirecalc.signature import Param, SignatureBuilder, tmpl


def adjunction_signature():
    """C, D with F -| G plus a spare endofunctor cell for padding."""
    b = SignatureBuilder()
    b.declare_category("C")
    b.declare_category("D")
    b.declare_functor("F", "C", "D")
    b.declare_functor("G", "D", "C")
    b.declare_cell_family("eta", (), tmpl("C"), tmpl("C", "F", "G"))
    b.declare_cell_family("eps", (), tmpl("D", "G", "F"), tmpl("D"))
    return b


@pytest.fixture
def adj_sig():
    return adjunction_signature().freeze()


def interchange_signature():
    """The fixed oracle signature: 3 categories, 6 functors, 6 cells.

    Includes one zero-input cell (unit) and one two-input cell (mult);
    every cell has at least one output so swap moves stay symmetric.
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
    b.declare_cell_family("mult", (), tmpl("A", "T", "T"), tmpl("A", "T"))
    b.declare_cell_family("rho", (), tmpl("C", "H"), tmpl("C", "H"))
    return b


@pytest.fixture
def oracle_sig():
    return interchange_signature().freeze()
