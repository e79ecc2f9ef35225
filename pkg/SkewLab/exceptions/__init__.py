class RejectedInputException(ValueError):
    pass


class UnsupportedDimensionException(RejectedInputException):
    pass


class EmptySimulationException(RejectedInputException):
    pass


class SolverConvergenceException(Exception):
    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed

    def __str__(self):
        message = super().__str__()
        if self.seed is None:
            return message
        return "{} (seed {})".format(message, self.seed)
