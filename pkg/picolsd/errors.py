class PicolsdError(Exception):
    pass


class LinalgError(PicolsdError):
    pass


class InvalidMatrix(LinalgError):
    pass


class NotPsd(LinalgError):
    pass


class DimMismatch(LinalgError):
    pass


class SingularSystem(LinalgError):
    pass


class StateError(PicolsdError):
    pass


class InvalidState(StateError):
    pass


class InvalidParam(StateError):
    pass


class RankMismatch(StateError):
    pass


class SolverError(PicolsdError):
    def __init__(self, *args, solution=None):
        super().__init__(*args)
        self.solution = solution


class MaxIterError(SolverError):
    pass


class NumericalFailure(SolverError):
    pass


class InfeasibleStart(SolverError):
    pass


class CannotCenter(SolverError):
    pass


class DecompositionError(PicolsdError):
    pass


class UnsupportedRank(DecompositionError):
    def __init__(self, rank):
        super().__init__("unsupported rank {}".format(rank))
        self.rank = rank


class ProductGamma(DecompositionError):
    pass


class EntangledGamma(DecompositionError):
    pass


class SeparableInput(DecompositionError):
    pass


class VerificationError(PicolsdError):
    pass


class WrongCase(VerificationError):
    pass


class StateFileError(PicolsdError):
    pass
