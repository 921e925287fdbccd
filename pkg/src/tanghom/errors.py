"""Exception hierarchy shared by every module."""


class TangleError(Exception):
    """Base class for all errors raised by tanghom."""


class StrandMismatch(TangleError):
    def __init__(self, position, expected=None, found=None):
        self.position = position
        self.expected = expected
        self.found = found
        msg = f"strand count mismatch at generator {position}"
        if expected is not None:
            msg += f": previous layer ends with {expected} points, generator expects {found}"
        super().__init__(msg)


class OrientationConflict(TangleError):
    def __init__(self, position, detail=""):
        self.position = position
        super().__init__(f"orientation conflict at generator {position}" + (f": {detail}" if detail else ""))


class GeneratorRangeError(TangleError):
    def __init__(self, position, detail):
        self.position = position
        super().__init__(f"generator {position}: {detail}")


class NotACrossing(TangleError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"generator {position} is not a crossing")


class PatternMismatch(TangleError):
    pass


class DifferentialNotSquareZero(TangleError):
    pass


class NotAChainMap(TangleError):
    pass


class TorsionInTensor(TangleError):
    pass


class MapDoesNotDescend(TangleError):
    pass


class NotElementarilyRelated(TangleError):
    def __init__(self, message, move_index=None):
        self.move_index = move_index
        if move_index is not None:
            message = f"move {move_index}: {message}"
        super().__init__(message)


class TooManyCrossings(TangleError):
    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} crossings exceeds the guard of {limit}")


class GluingMismatch(TangleError):
    """The gluing map does not identify a tensor product with the composite."""
