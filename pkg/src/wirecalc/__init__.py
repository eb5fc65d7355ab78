"""wirecalc: a proof engine for calculational category theory in
string-diagram form.

Diagrams are terms over a declared signature; equality is decided modulo
the interchange law; rule-based proof scripts are verified step by step.
"""

from .signature import (
    Category,
    CellFamily,
    FunctorSym,
    Param,
    RepDecl,
    Signature,
    SignatureBuilder,
    Template,
    Word,
)
from .diagram import (
    BoxCell,
    Diagram,
    GenRef,
    Hole,
    Level,
    box_diagram,
    enumerate_presentations,
    equivalent,
    from_cell,
    hcompose,
    identity,
    levels_commute,
    make_box,
    normalize,
    swap_adjacent,
    vcompose,
    whisker_left,
    whisker_right,
)
from .rewrite import (
    PatternDiagram,
    ProofStep,
    RewriteRule,
    Substitution,
    check_step,
    find_matches,
    hole_diagram,
    instantiate,
    plug,
)

__version__ = "0.1.0"
