"""Exception hierarchy for the proof engine.

Every error raised by the kernel derives from WirecalcError so front ends
can catch one type. Errors carry plain-text messages; source locations are
attached by the script layer, not here.
"""


class WirecalcError(Exception):
    pass


class DuplicateName(WirecalcError):
    pass


class FrozenSignature(WirecalcError):
    pass


class UnknownCategory(WirecalcError):
    pass


class UnknownFunctor(WirecalcError):
    pass


class UnknownFamily(WirecalcError):
    pass


class UnknownName(WirecalcError):
    pass


class NotComposable(WirecalcError):
    pass


class AnchorMismatch(WirecalcError):
    pass


class BoundaryMismatch(WirecalcError):
    pass


class UnboundMetavariable(WirecalcError):
    pass


class UnboundVariable(WirecalcError):
    pass


class MalformedTemplate(WirecalcError):
    pass


class DanglingReference(WirecalcError):
    pass


class IndexOutOfRange(WirecalcError):
    pass


class NotIndependent(WirecalcError):
    pass


class NoHole(WirecalcError):
    pass


class MultipleHoles(WirecalcError):
    pass


class RuleNotFound(WirecalcError):
    pass


class StepMismatch(WirecalcError):
    """Raised when a proof step's left side does not match the current diagram.

    Carries both normal forms in canonical text syntax for diagnostics.
    """

    def __init__(self, message, current_text=None, expected_text=None):
        super().__init__(message)
        self.current_text = current_text
        self.expected_text = expected_text

    def __str__(self):
        base = super().__str__()
        if self.current_text is not None and self.expected_text is not None:
            return "%s\n  current:  %s\n  expected: %s" % (
                base,
                self.current_text,
                self.expected_text,
            )
        return base


class EndpointMismatch(WirecalcError):
    pass


class NotEndofunctor(WirecalcError):
    pass


class ParseError(WirecalcError):
    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        if self.line is not None:
            return "%d:%d: %s" % (self.line, self.col, super().__str__())
        return super().__str__()
