"""Exception hierarchy shared by the core modules"""


class TwoAssocError(Exception):
    """Base class for all errors raised by twoassoc"""


class ShapeError(TwoAssocError):
    """Invalid shape, descriptor or out-of-range index"""


class CompositionError(TwoAssocError):
    """A 1-morphism composition is undefined in the ambient category"""


class FiberMismatchError(TwoAssocError):
    """Evaluation grids do not agree on a glued slot"""

    def __init__(self, slot, left, right):
        self.slot = slot
        self.left = left
        self.right = right
        super().__init__(f"fiber condition violated at {slot}: {left!r} != {right!r}")


class LabelingError(TwoAssocError):
    """A coppice admits no consistent labeling"""


class SchemaError(TwoAssocError):
    """Interchange file does not follow the schema"""


class ConvergenceError(TwoAssocError):
    """A zero-shape operation has valuation below the curvature bound"""


class GeneratorError(TwoAssocError):
    """Generator family parameters violate their precondition"""


class MutationError(TwoAssocError):
    """No edge endpoint can be removed"""
