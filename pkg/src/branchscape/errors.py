"""Exception types shared across the package."""


class BranchscapeError(Exception):
    """Base class for all library errors."""


class DegenerateHull(BranchscapeError):
    """Fewer than 3 points, or all points collinear: no 2D convex hull."""


class CollinearInput(BranchscapeError):
    """Three (near-)collinear points where a proper triangle is required."""


class TooLarge(BranchscapeError):
    """Input exceeds a guard bound for a brute-force or dense computation."""


class NoDeathSimplex(BranchscapeError):
    """Operation requires a finite pair with an attached death simplex."""


class InfinitePair(BranchscapeError):
    """Landscapes are only defined for diagrams with finite pairs."""


class SeparationTooSmall(BranchscapeError):
    """Distinct landscape corners collide within the recovery probe radius."""


class ParameterMismatch(BranchscapeError):
    """Generalized landscapes with different baselines cannot be combined."""


class ParseError(BranchscapeError):
    """Malformed input file. Carries a line number or byte offset."""

    def __init__(self, message, line=None, offset=None):
        loc = ""
        if line is not None:
            loc = f" (line {line})"
        elif offset is not None:
            loc = f" (byte {offset})"
        super().__init__(message + loc)
        self.line = line
        self.offset = offset


class EmptyCloud(BranchscapeError):
    """Input contained no points / no foreground pixels."""


class InvalidSpec(BranchscapeError):
    """Fixture specification is malformed or has non-positive parameters."""
