"""Exception hierarchy for the simulator.

Every error carries an optional ``step`` index, filled in by the closed-loop
harness when the failure happens inside a run.
"""


class QuadSimError(Exception):
    step = None

    def __str__(self):
        msg = super().__str__()
        if self.step is not None:
            return f"step {self.step}: {msg}"
        return msg


class InvalidParameter(QuadSimError, ValueError):
    """A parameter or gain record violates its invariants."""


class NonFiniteInput(QuadSimError, ValueError):
    pass


class NonFiniteResult(QuadSimError, ArithmeticError):
    pass


class NonFiniteState(QuadSimError, ArithmeticError):
    pass


class NonFiniteCommand(QuadSimError, ArithmeticError):
    pass


class SingularAllocation(QuadSimError, ValueError):
    pass


class InfeasibleCommand(QuadSimError, ValueError):
    pass


class SingularInnovation(QuadSimError, ArithmeticError):
    pass


class DegenerateDenominator(QuadSimError, ArithmeticError):
    pass


class AttitudeSingular(QuadSimError, ArithmeticError):
    pass


class OutOfRange(QuadSimError, ValueError):
    pass


class DivergedRun(QuadSimError, RuntimeError):
    pass


class EmptyWindow(QuadSimError, ValueError):
    pass


class SchemaMismatch(QuadSimError, ValueError):
    pass
