class QuickFVError(Exception):
    exit_code = 1


class ConfigurationError(QuickFVError, ValueError):
    """Invalid scheme, problem or experiment setup."""

    exit_code = 2


class NumericalError(QuickFVError, ArithmeticError):
    """A solve or march produced non-finite values or failed to converge."""

    exit_code = 1


class SingularPivotError(NumericalError):
    def __init__(self, index: int):
        super().__init__(f"zero pivot in tridiagonal elimination at row {index}")
        self.index = index
