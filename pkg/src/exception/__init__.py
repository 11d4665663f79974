
import sys
import logging


def error_message_detail(error: Exception, error_detail: sys) -> str:
    """
    Extracts detailed error information including file name, line number, and the error message.

    :param error: The exception that occurred.
    :param error_detail: The sys module to access traceback details.
    :return: A formatted error message string.
    """
    _, _, exc_tb = error_detail.exc_info()

    # raised outside an except block: no traceback to point at
    if exc_tb is None:
        error_message = f"Error occurred: {str(error)}"
    else:
        while exc_tb.tb_next is not None:
            exc_tb = exc_tb.tb_next
        file_name = exc_tb.tb_frame.f_code.co_filename
        line_number = exc_tb.tb_lineno
        error_message = f"Error occurred in python script: [{file_name}] at line number [{line_number}]: {str(error)}"

    logging.error(error_message)

    return error_message


class ReebStripException(Exception):
    """
    Wrapping exception raised at pipeline and persistence boundaries.
    """
    def __init__(self, error_message, error_detail: sys = sys):
        """
        :param error_message: The original exception or a message describing the error.
        :param error_detail: The sys module to access traceback details.
        """
        super().__init__(error_message)
        self.error_message = error_message_detail(error_message, error_detail)

    def __str__(self) -> str:
        return self.error_message


class ReebStripError(ValueError):
    """Base class of the typed numerical errors; the command line maps these to exit code 1."""


class ExprSyntaxError(ReebStripError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


class ExprDomainError(ReebStripError):
    def __init__(self, message: str, node: str, x=None):
        where = "" if x is None else f" at x={x}"
        super().__init__(f"{message} in '{node}'{where}")
        self.node = node
        self.x = x


class ParameterRangeError(ReebStripError):
    def __init__(self, name: str, param: str, detail: str):
        super().__init__(f"{name}: parameter '{param}' {detail}")
        self.name = name
        self.param = param


class SeparationError(ReebStripError):
    def __init__(self, witness: float, gap: float):
        super().__init__(f"c2 - c1 = {gap:.6g} <= 0 at s = {witness:.12g}")
        self.witness = witness
        self.gap = gap


class AccumulationError(ReebStripError):
    """Raised instead of returning a critical set that cannot be resolved: possible accumulation."""

    def __init__(self, message: str, loci=()):
        super().__init__(f"possible accumulation: {message}")
        self.loci = tuple(loci)


class DegenerateLevelError(ReebStripError):
    def __init__(self, level: float, detail: str):
        super().__init__(f"degenerate level t = {level:.12g}: {detail}; perturb the level")
        self.level = level


class InconsistencyError(ReebStripError):
    def __init__(self, height: float, detail: str):
        super().__init__(f"component count changes at non-critical height {height:.12g}: {detail}")
        self.height = height


class DegenerateEventError(ReebStripError):
    def __init__(self, height: float, items):
        super().__init__(f"critical values of different items within the event gap share a contour at height "
                         f"{height:.12g}: {list(items)}; lower event_gap")
        self.height = height
        self.items = tuple(items)


class HypothesisViolation(ReebStripError):
    pass


class MonotonicityError(HypothesisViolation):
    def __init__(self, witness: float, slope: float):
        super().__init__(f"u2 is not strictly increasing: u2'({witness:.12g}) = {slope:.6g}")
        self.witness = witness
        self.slope = slope


class OffZeroSetError(ReebStripError):
    def __init__(self, residual: float):
        super().__init__(f"point is off the zero set: |F| = {residual:.3g}")
        self.residual = residual


class ImplicitSolveError(ReebStripError):
    def __init__(self, point, dfdx1: float):
        super().__init__(f"cannot solve F = 0 for x1 near {list(point)}: |dF/dx1| = {abs(dfdx1):.3g}")
        self.point = tuple(point)
