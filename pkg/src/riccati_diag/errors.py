"""Exception hierarchy shared by every module of the package."""


class RiccatiDiagError(Exception):
    """Base class for all errors raised by riccati_diag."""


class NotSquare(RiccatiDiagError):
    pass


class NotHermitian(RiccatiDiagError):
    def __init__(self, defect: float, tol: float):
        super().__init__(f"matrix is not Hermitian: defect {defect:.3e} > tolerance {tol:.3e}")
        self.defect = defect
        self.tol = tol


class NonFinite(RiccatiDiagError):
    pass


class BadSplitIndex(RiccatiDiagError):
    pass


class ShapeMismatch(RiccatiDiagError):
    pass


class NotUnitary(RiccatiDiagError):
    pass


class NoSpectralGap(RiccatiDiagError):
    """max eig(H-) >= min eig(H+): the integral representation diverges."""


class SingularV(RiccatiDiagError):
    pass


class SingularShift(RiccatiDiagError):
    pass


class SingularLinearization(RiccatiDiagError):
    pass


class SingularOperator(RiccatiDiagError):
    pass


class NoConvergence(RiccatiDiagError):
    """An iterative solver gave up.

    ``best`` holds the best iterate found (whatever object the solver
    works with) and ``residual`` its residual norm.
    """

    def __init__(self, message: str, best=None, residual: float = float("inf"), partial=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.partial = partial


class ZeroVector(RiccatiDiagError):
    pass


class DegenerateAllZero(RiccatiDiagError):
    pass


class FullyDegenerate(RiccatiDiagError):
    pass


class NoValidPair(RiccatiDiagError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = best_residual


class ResidualTooLarge(RiccatiDiagError):
    pass


class TooLarge(RiccatiDiagError):
    pass
